#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kundt/congruence.hpp"
#include "kundt/hierarchy.hpp"
#include "kundt/liealg.hpp"

namespace kundt {

// Everything one tool invocation reports. Serialization is deterministic
// for a fixed (input, seed) pair apart from the timing block, which is kept
// under the single key "timings_ms" so consumers can strip it.
struct ReportDocument {
  std::string tool;
  std::string version;
  std::uint64_t input_digest = 0;
  std::uint64_t seed = 0;
  std::string field_name;
  std::optional<CongruenceReport> congruence;
  std::optional<Classification> classification;
  std::optional<AlgebraicReport> algebraic;
  // Basis names provide readable output for the algebraic lane.
  std::vector<std::string> algebra_basis;
  std::vector<std::pair<std::string, double>> timings_ms;

  ReportDocument();
};

nlohmann::ordered_json report_json(const ReportDocument& doc);
std::string report_text(const ReportDocument& doc);

}  // namespace kundt
