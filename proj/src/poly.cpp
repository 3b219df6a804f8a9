#include "kundt/poly.hpp"

#include "kundt/errors.hpp"

namespace kundt {

Poly Poly::zero(size_t nvars) {
  Poly p;
  p.nvars = nvars;
  return p;
}

Poly Poly::constant(size_t nvars, Rational c) {
  Poly p;
  p.nvars = nvars;
  if (sgn(c) != 0) p.terms.emplace(Mono(nvars, 0), std::move(c));
  return p;
}

Poly Poly::variable(size_t nvars, size_t index) {
  Poly p;
  p.nvars = nvars;
  Mono m(nvars, 0);
  m[index] = 1;
  p.terms.emplace(std::move(m), Rational(1));
  return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [m, c] : b.terms) {
    auto it = r.terms.find(m);
    if (it == r.terms.end()) {
      r.terms.emplace(m, c);
    } else {
      it->second += c;
      if (sgn(it->second) == 0) r.terms.erase(it);
    }
  }
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [m, c] : b.terms) {
    auto it = r.terms.find(m);
    if (it == r.terms.end()) {
      r.terms.emplace(m, -c);
    } else {
      it->second -= c;
      if (sgn(it->second) == 0) r.terms.erase(it);
    }
  }
  return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r = Poly::zero(a.nvars);
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      Mono m(a.nvars);
      for (size_t i = 0; i < a.nvars; ++i) m[i] = ma[i] + mb[i];
      Rational c = ca * cb;
      auto it = r.terms.find(m);
      if (it == r.terms.end()) {
        r.terms.emplace(std::move(m), std::move(c));
      } else {
        it->second += c;
        if (sgn(it->second) == 0) r.terms.erase(it);
      }
    }
  }
  return r;
}

Poly poly_pow(const Poly& a, long n) {
  Poly r = Poly::constant(a.nvars, Rational(1));
  Poly base = a;
  long m = n;
  while (m > 0) {
    if (m & 1) r = poly_mul(r, base);
    m >>= 1;
    if (m > 0) base = poly_mul(base, base);
  }
  return r;
}

bool poly_equal(const Poly& a, const Poly& b) {
  if (a.terms.size() != b.terms.size()) return false;
  auto ia = a.terms.begin();
  auto ib = b.terms.begin();
  for (; ia != a.terms.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second != ib->second) return false;
  }
  return true;
}

namespace {

// Divide both sides by the denominator content and fix its sign, so that
// repeated arithmetic keeps coefficients small without a polynomial gcd.
void normalize(Fraction& f) {
  if (f.num.is_zero()) {
    f.den = Poly::constant(f.den.nvars, Rational(1));
    return;
  }
  mpz_class num_gcd = 0, den_lcm = 1;
  for (const auto& [m, c] : f.den.terms) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    num_gcd = g;
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    den_lcm = l;
  }
  Rational content(num_gcd, den_lcm);
  content.canonicalize();
  if (sgn(f.den.terms.begin()->second) < 0) content = -content;
  if (content == 1) return;
  Rational inv = Rational(1) / content;
  for (auto& [m, c] : f.num.terms) c *= inv;
  for (auto& [m, c] : f.den.terms) c *= inv;
}

Fraction make_fraction(Poly num, Poly den) {
  Fraction f{std::move(num), std::move(den)};
  normalize(f);
  return f;
}

}  // namespace

Fraction fraction_add(const Fraction& a, const Fraction& b) {
  if (poly_equal(a.den, b.den)) {
    return make_fraction(poly_add(a.num, b.num), a.den);
  }
  return make_fraction(poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
                       poly_mul(a.den, b.den));
}

Fraction fraction_mul(const Fraction& a, const Fraction& b) {
  return make_fraction(poly_mul(a.num, b.num), poly_mul(a.den, b.den));
}

Fraction to_fraction(const Expr& e, const PolyContext& ctx) {
  size_t n = ctx.vars.size();
  switch (e.kind()) {
    case NodeKind::Number:
      return {Poly::constant(n, e.number_value()), Poly::constant(n, Rational(1))};
    case NodeKind::Symbol: {
      int i = ctx.index(e.symbol_name());
      if (i < 0) throw DomainError("symbol '" + e.symbol_name() + "' not in polynomial context");
      return {Poly::variable(n, static_cast<size_t>(i)), Poly::constant(n, Rational(1))};
    }
    case NodeKind::Add: {
      Fraction acc{Poly::zero(n), Poly::constant(n, Rational(1))};
      for (const auto& k : e.operands()) acc = fraction_add(acc, to_fraction(k, ctx));
      return acc;
    }
    case NodeKind::Mul: {
      Fraction acc{Poly::constant(n, Rational(1)), Poly::constant(n, Rational(1))};
      for (const auto& k : e.operands()) acc = fraction_mul(acc, to_fraction(k, ctx));
      return acc;
    }
    case NodeKind::Div: {
      Fraction a = to_fraction(e.operands()[0], ctx);
      Fraction b = to_fraction(e.operands()[1], ctx);
      if (b.num.is_zero()) throw DomainError("division by an identically zero denominator");
      return make_fraction(poly_mul(a.num, b.den), poly_mul(a.den, b.num));
    }
    case NodeKind::Pow: {
      Fraction f = to_fraction(e.operands()[0], ctx);
      long m = e.exponent();
      if (m >= 0) return make_fraction(poly_pow(f.num, m), poly_pow(f.den, m));
      if (f.num.is_zero()) throw DomainError("zero raised to a negative power");
      return make_fraction(poly_pow(f.den, -m), poly_pow(f.num, -m));
    }
    default:
      throw DomainError("expression is not a rational function");
  }
}

}  // namespace kundt
