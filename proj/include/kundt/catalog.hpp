#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kundt/congruence.hpp"
#include "kundt/geometry.hpp"
#include "kundt/hierarchy.hpp"
#include "kundt/liealg.hpp"

namespace kundt {

// Outcomes recorded with each entry; run_all reproduces them live.
struct Expectations {
  std::optional<bool> kundt;
  std::optional<bool> locally_kundt;
  std::optional<bool> twist_free;
  std::optional<bool> leaf_flat;
  std::optional<SpaceClass> space_class;
  std::optional<bool> algebraic_kundt;
};

// One constructed fixture: a chart-based metric with its designated field
// (roles present when the presentation is adapted), or a Lie-algebra model
// with an invariant metric and algebra vector.
struct BuiltEntry {
  std::string name;
  std::string description;
  std::map<std::string, std::string> params;  // resolved values, printable

  std::optional<Metric> metric;
  std::optional<VectorField> field;
  std::optional<CoordinateRoles> roles;

  std::optional<LieAlgebra> algebra;
  std::optional<RatMat> ip;
  std::optional<RatVec> algebra_v;

  Expectations expect;
};

struct CatalogInfo {
  std::string name;
  std::string description;
  std::map<std::string, std::string> defaults;  // parameter schema with default values
};

const std::vector<CatalogInfo>& catalog_roster();

// Deterministic construction. Unknown names throw UnknownEntry; unknown
// parameter keys or malformed values throw BadParameter.
BuiltEntry get(const std::string& name, const std::map<std::string, std::string>& params = {},
               std::uint64_t seed = 0);

struct RunRow {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunSummary {
  std::vector<RunRow> rows;  // roster order
  bool all_pass = false;
};

// Builds every entry with default parameters, re-runs analyze / classify /
// analyze_algebraic, and compares against the recorded expectations.
// Entries run concurrently; row order is the roster order.
RunSummary run_all(std::uint64_t seed = 0);

}  // namespace kundt
