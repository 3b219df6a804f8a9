#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "kundt/errors.hpp"
#include "kundt/expr.hpp"
#include "kundt/numeric.hpp"
#include "kundt/zerotest.hpp"

using namespace kundt;

namespace {

SymbolTable uvw_table() {
  SymbolTable t;
  t.coordinates = {"u", "v", "w"};
  return t;
}

// Expressions that exercise every node kind and stay finite on [-1.5, 1.5].
const std::vector<const char*>& sample_expressions() {
  static const std::vector<const char*> list = {
      "u^3 + 2*u*v",
      "sin(u)*cos(v)",
      "exp(u/2)*v",
      "log(2 + u^2)",
      "sqrt(4 + u^2)",
      "1/(2 + sin(u))",
      "u*v*w + w^2",
      "exp(sin(u)) + cos(w)^2",
      "(u + v)/(3 + w)",
      "sin(u*v)",
      "cos(u)^3 - sin(v)",
      "u^4/(1 + v^2)",
      "exp(-u^2)",
      "-u + 3*v - w/2",
      "u^-2 + 1",  // needs u bounded away from 0; handled below
      "(1 - u/4)^3",
      "log(exp(u))",
      "sqrt(2)*u + sqrt(3)",
      "u*exp(v)*sin(w)",
      "1/2*u^2 - 1/3*v^3",
  };
  return list;
}

}  // namespace

TEST_CASE("parser handles precedence, division chains and unary minus") {
  SymbolTable t = uvw_table();
  EvalPoint pt = {{"u", 8.0}, {"v", 2.0}, {"w", -1.0}};
  CHECK(eval(parse("u/2/2", t), pt) == doctest::Approx(2.0));
  CHECK(eval(parse("1/2*u", t), pt) == doctest::Approx(4.0));
  CHECK(eval(parse("-u^2", t), pt) == doctest::Approx(-64.0));
  CHECK(eval(parse("2*u - v - w", t), pt) == doctest::Approx(15.0));
  CHECK(eval(parse("u^-2", t), pt) == doctest::Approx(1.0 / 64.0));
  CHECK(eval(parse("2 - -3", t), pt) == doctest::Approx(5.0));
  CHECK(eval(parse("exp(log(u))", t), pt) == doctest::Approx(8.0));
}

TEST_CASE("syntax errors carry a position and an expectation") {
  SymbolTable t = uvw_table();
  CHECK_THROWS_AS(parse("u +", t), SyntaxError);
  CHECK_THROWS_AS(parse("(u", t), SyntaxError);
  CHECK_THROWS_AS(parse("u $ v", t), SyntaxError);
  CHECK_THROWS_AS(parse("", t), SyntaxError);
  CHECK_THROWS_AS(parse("sin()", t), SyntaxError);
  try {
    parse("u + $", t);
    CHECK(false);
  } catch (const SyntaxError& e) {
    CHECK(e.position == 4);
    CHECK(!e.expected.empty());
  }
  // Undeclared names are rejected, not silently created.
  try {
    parse("u + q", t);
    CHECK(false);
  } catch (const SyntaxError& e) {
    CHECK(e.position == 4);
  }
}

TEST_CASE("print emits text the parser accepts with the same meaning") {
  SymbolTable t = uvw_table();
  SplitMix64 rng(101);
  for (const char* text : sample_expressions()) {
    Expr e = parse(text, t);
    Expr back = parse(print(e), t);
    Expr s1 = simplify(e);
    Expr s2 = simplify(back);
    // Structural equality after simplification, plus a numeric spot check.
    CHECK(s1.same(s2));
    EvalPoint pt = {{"u", rng.uniform(0.5, 1.5)},
                    {"v", rng.uniform(-1.5, 1.5)},
                    {"w", rng.uniform(-1.5, 1.5)}};
    CHECK(eval(e, pt) == doctest::Approx(eval(back, pt)).epsilon(1e-12));
  }
}

TEST_CASE("simplify is idempotent") {
  SymbolTable t = uvw_table();
  for (const char* text : sample_expressions()) {
    Expr once = simplify(parse(text, t));
    Expr twice = simplify(once);
    CHECK(once.same(twice));
  }
}

TEST_CASE("differentiate agrees with finite differences") {
  SymbolTable t = uvw_table();
  SplitMix64 rng(7);
  const double h = 1e-5;
  int cases = 0;
  for (const char* text : sample_expressions()) {
    Expr e = parse(text, t);
    for (const std::string coord : {"u", "v", "w"}) {
      Expr de = differentiate(e, coord);
      for (int rep = 0; rep < 4; ++rep) {
        EvalPoint pt = {{"u", rng.uniform(0.4, 1.5)},
                        {"v", rng.uniform(-1.5, 1.5)},
                        {"w", rng.uniform(-1.4, 1.4)}};
        EvalPoint hi = pt, lo = pt;
        hi[coord] += h;
        lo[coord] -= h;
        double fd = (eval(e, hi) - eval(e, lo)) / (2 * h);
        double sym = eval(de, pt);
        CHECK(std::fabs(sym - fd) <= 1e-5 * (1.0 + std::fabs(sym)));
        ++cases;
      }
    }
  }
  CHECK(cases >= 200);
}

TEST_CASE("differentiation rules on each node kind") {
  SymbolTable t = uvw_table();
  auto deriv_is = [&](const char* expr, const char* coord, const char* expected) {
    Expr d = differentiate(parse(expr, t), coord);
    Expr diff = simplify(d - parse(expected, t));
    return is_zero(diff, {});
  };
  CHECK(deriv_is("u^3", "u", "3*u^2"));
  CHECK(deriv_is("u*v", "u", "v"));
  CHECK(deriv_is("u/v", "u", "1/v"));
  CHECK(deriv_is("exp(2*u)", "u", "2*exp(2*u)"));
  CHECK(deriv_is("log(u)", "u", "1/u"));
  CHECK(deriv_is("sin(u)", "u", "cos(u)"));
  CHECK(deriv_is("cos(u)", "u", "-sin(u)"));
  CHECK(deriv_is("sqrt(u)", "u", "1/(2*sqrt(u))"));
  CHECK(deriv_is("v", "u", "0"));
}

TEST_CASE("the zero test accepts identities and rejects non-identities") {
  SymbolTable t = uvw_table();
  ZeroTestOptions opt;
  CHECK(is_zero(parse("sin(u)^2 + cos(u)^2 - 1", t), opt));
  CHECK(is_zero(parse("(u + v)^2 - u^2 - 2*u*v - v^2", t), opt));
  CHECK(is_zero(parse("exp(u)*exp(-u) - 1", t), opt));
  CHECK(is_zero(parse("(u^2 - v^2) - (u - v)*(u + v)", t), opt));
  CHECK(is_zero(parse("log(exp(u)) - u", t), opt));
  CHECK_FALSE(is_zero(parse("u - v", t), opt));
  CHECK_FALSE(is_zero(parse("u/1000000000000000", t), opt));
  CHECK_FALSE(is_zero(parse("sin(u) - u", t), opt));
  CHECK_FALSE(is_zero(parse("exp(u) - 1 - u", t), opt));
}

TEST_CASE("zero test respects the domain box") {
  SymbolTable t = uvw_table();
  // 1/u has a pole at 0; a positive box avoids it.
  ZeroTestOptions opt;
  opt.box.ranges["u"] = {0.1, 2.0};
  CHECK_FALSE(is_zero(parse("1/u", t), opt));
  CHECK(is_zero(parse("sqrt(u)^2 - u", t), opt));
}

TEST_CASE("rational arithmetic is exact") {
  SymbolTable t = uvw_table();
  Expr e = simplify(parse("1/3 + 1/6", t));
  REQUIRE(e.is_number());
  CHECK(e.number_value() == Rational(1, 2));
  Expr big = simplify(parse("1000000000000/3 * 3", t));
  REQUIRE(big.is_number());
  CHECK(big.number_value() == Rational(1000000000000L));
  Expr pow = simplify(parse("(2/3)^3", t));
  REQUIRE(pow.is_number());
  CHECK(pow.number_value() == Rational(8, 27));
}

TEST_CASE("substitute replaces symbols and composes with simplify") {
  SymbolTable t = uvw_table();
  Expr e = parse("u^2 + u", t);
  Expr sub = substitute(e, {{"u", parse("v + 1", t)}});
  Expr expect = parse("v^2 + 3*v + 2", t);
  CHECK(is_zero(simplify(sub - expect), {}));
  // Substituting an unmentioned symbol is the identity.
  Expr same = substitute(e, {{"w", parse("5", t)}});
  CHECK(is_zero(simplify(same - e), {}));
}

TEST_CASE("collect_symbols reports exactly the symbols used") {
  SymbolTable t = uvw_table();
  std::set<std::string> seen;
  collect_symbols(parse("u*sin(w) + 2", t), seen);
  CHECK(seen == std::set<std::string>{"u", "w"});
}

TEST_CASE("eval reports domain problems") {
  SymbolTable t = uvw_table();
  CHECK_THROWS_AS(eval(parse("1/u", t), EvalPoint{{"u", 0.0}}), EvalError);
  CHECK_THROWS_AS(eval(parse("log(u)", t), EvalPoint{{"u", -1.0}}), EvalError);
  CHECK_THROWS_AS(eval(parse("sqrt(u)", t), EvalPoint{{"u", -4.0}}), EvalError);
}
