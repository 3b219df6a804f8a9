#include "kundt/zerotest.hpp"

#include <cmath>
#include <set>
#include <vector>

#include "kundt/errors.hpp"
#include "kundt/numeric.hpp"
#include "kundt/poly.hpp"

namespace kundt {

namespace {

constexpr int kSampleCount = 64;
constexpr int kPrefilterCount = 8;
constexpr int kRetryBudget = kSampleCount * 8;
constexpr double kRelThreshold = 1e-9;

EvalPoint draw_point(const std::vector<std::string>& vars, const DomainBox& box, SplitMix64& rng) {
  EvalPoint pt;
  for (const auto& v : vars) {
    auto [lo, hi] = box.range(v);
    pt[v] = rng.uniform(lo, hi);
  }
  return pt;
}

// Returns false as soon as a sample clearly exceeds the threshold. Throws
// SamplingExhausted when `count` valid samples cannot be collected.
bool sample_clears(const Expr& e, const std::vector<std::string>& vars, const DomainBox& box,
                   SplitMix64& rng, int count, int& budget) {
  int got = 0;
  while (got < count) {
    if (budget <= 0)
      throw SamplingExhausted("could not collect " + std::to_string(count) +
                              " valid sample points inside the domain box");
    --budget;
    EvalPoint pt = draw_point(vars, box, rng);
    EvalDetail d;
    try {
      d = eval_detail(e, pt);
    } catch (const EvalError&) {
      continue;  // pole or domain violation; redraw
    }
    if (std::fabs(d.value) > kRelThreshold * (1.0 + d.max_abs)) return false;
    ++got;
  }
  return true;
}

}  // namespace

bool is_zero(const Expr& e, const ZeroTestOptions& opt) {
  Expr s = simplify(e);
  if (s.kind() == NodeKind::Number) return s.is_zero_literal();

  std::set<std::string> syms;
  collect_symbols(s, syms);
  std::vector<std::string> vars(syms.begin(), syms.end());

  // Separate sampling stream per expression so structurally different
  // inputs are probed at different points, deterministically in the seed.
  SplitMix64 rng(opt.seed ^ fnv1a(print(s)));
  int budget = kRetryBudget;

  if (!sample_clears(s, vars, opt.box, rng, kPrefilterCount, budget)) return false;

  if (is_rational_expr(s)) {
    PolyContext ctx{vars};
    Fraction f = to_fraction(s, ctx);
    return f.num.is_zero();
  }

  return sample_clears(s, vars, opt.box, rng, kSampleCount, budget);
}

}  // namespace kundt
