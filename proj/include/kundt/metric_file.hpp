#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kundt/chart.hpp"
#include "kundt/geometry.hpp"
#include "kundt/hierarchy.hpp"
#include "kundt/liealg.hpp"

namespace kundt {

// Parsed sectioned text document. A document describes either a metric on
// a chart (with optional vector fields and coordinate roles) or a Lie
// algebra with an invariant inner product and a distinguished element.
//
// Format: section headers in brackets, one declaration per line, '#' starts
// a comment. Sections:
//   [chart]    coords: u, v, x1
//              constraint: x1 > 0          (or: x1 in (-1, 1))
//              base: u=0, v=0, x1=1
//   [metric]   g(u,v) = 1                  (unspecified entries default to 0)
//   [field V]  components: 0, 1, 0         (or one "coord = expr" per line)
//   [roles]    u=u, v=v, transverse=x1, x2
//   [algebra]  basis: T, X, Y, Z
//              bracket(X,Y) = Z
//              ip(T,Z) = 1
//              V = Z
struct MetricFile {
  std::optional<Chart> chart;
  // Full symmetric matrix over the chart; present iff a [metric] section was.
  std::optional<ExprMatrix> metric;
  std::vector<std::pair<std::string, VectorField>> fields;
  std::optional<CoordinateRoles> roles;

  std::optional<LieAlgebra> algebra;
  std::optional<RatMat> ip;
  std::optional<RatVec> algebra_v;

  const VectorField* find_field(const std::string& name) const;
};

// Throws SyntaxError with a byte offset into `text` on malformed input.
MetricFile parse_metric_file(const std::string& text);

// Emits a document that parses back to the same content.
std::string serialize_metric_file(const MetricFile& doc);

// Builds the metric from the chart and metric sections. Throws BadParameter
// when either section is missing.
Metric build_metric(const MetricFile& doc, const ZeroTestOptions& opt = {});

}  // namespace kundt
