#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "kundt/expr.hpp"

namespace kundt {

// Per-symbol sampling ranges for the numeric zero test. Symbols without an
// explicit range sample uniformly from [-2, 2].
struct DomainBox {
  std::map<std::string, std::pair<double, double>> ranges;

  std::pair<double, double> range(const std::string& name) const {
    auto it = ranges.find(name);
    if (it != ranges.end()) return it->second;
    return {-2.0, 2.0};
  }
};

struct ZeroTestOptions {
  std::uint64_t seed = 0;
  DomainBox box;
};

// Decide whether an expression vanishes identically on its domain.
//
// Rational expressions are decided exactly: the expression is canonicalized
// to a single polynomial fraction and the numerator is compared to the zero
// polynomial. Expressions containing exp/log/sin/cos/sqrt are tested at 64
// deterministic sample points drawn from the box; the expression counts as
// zero when every sample satisfies |value| <= 1e-9 * (1 + max |subterm|).
// Points where evaluation hits a pole or domain violation are redrawn, with
// a bounded retry budget; SamplingExhausted is thrown when the budget runs
// out. A short numeric prefilter runs first on both paths, so most nonzero
// inputs never reach the exact machinery. By a Schwartz-Zippel style
// argument a nonzero analytic function vanishes on a measure-zero set, so
// accepting only sub-threshold samples makes a false "zero" verdict require
// all 64 independent draws to land near that set.
bool is_zero(const Expr& e, const ZeroTestOptions& opt = {});

}  // namespace kundt
