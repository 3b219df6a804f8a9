#pragma once

#include <map>
#include <string>
#include <vector>

#include "kundt/expr.hpp"
#include "kundt/numeric.hpp"

namespace kundt {

// Sparse multivariate polynomials with exact rational coefficients, used to
// decide vanishing of rational expressions exactly.

struct PolyContext {
  std::vector<std::string> vars;

  int index(const std::string& name) const {
    for (size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) return static_cast<int>(i);
    return -1;
  }
};

// Exponent vector, one entry per context variable.
using Mono = std::vector<int>;

struct Poly {
  size_t nvars = 0;
  std::map<Mono, Rational> terms;

  static Poly zero(size_t nvars);
  static Poly constant(size_t nvars, Rational c);
  static Poly variable(size_t nvars, size_t index);

  bool is_zero() const { return terms.empty(); }
};

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_pow(const Poly& a, long n);  // n >= 0

bool poly_equal(const Poly& a, const Poly& b);

// num/den with den never the zero polynomial. Kept lightly normalized:
// the denominator's content is 1 and its leading coefficient is positive.
struct Fraction {
  Poly num, den;
};

Fraction fraction_add(const Fraction& a, const Fraction& b);
Fraction fraction_mul(const Fraction& a, const Fraction& b);

// Convert a rational expression (no exp/log/sin/cos/sqrt nodes) to a
// canonical fraction. Throws DomainError when a denominator is identically
// zero. The caller must ensure is_rational_expr holds.
Fraction to_fraction(const Expr& e, const PolyContext& ctx);

}  // namespace kundt
