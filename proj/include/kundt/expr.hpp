#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "kundt/numeric.hpp"

namespace kundt {

// Immutable symbolic expressions over exact rationals. Supported shapes:
// rational constants, named symbols, n-ary sums and products, quotients,
// integer powers, and exp/log/sin/cos/sqrt applied to a subexpression.
enum class NodeKind {
  Number,
  Symbol,
  Add,
  Mul,
  Div,
  Pow,
  Exp,
  Log,
  Sin,
  Cos,
  Sqrt,
};

class Expr;
struct Node;

using EvalPoint = std::map<std::string, double>;

class Expr {
 public:
  // Defaults to the constant 0.
  Expr();

  static Expr number(Rational r);
  static Expr integer(long n);
  static Expr symbol(std::string name);
  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr div(Expr num, Expr den);
  static Expr pow(Expr base, long exponent);
  static Expr exp_of(Expr arg);
  static Expr log_of(Expr arg);
  static Expr sin_of(Expr arg);
  static Expr cos_of(Expr arg);
  static Expr sqrt_of(Expr arg);

  NodeKind kind() const;
  const Rational& number_value() const;   // Number only
  const std::string& symbol_name() const; // Symbol only
  const std::vector<Expr>& operands() const;
  long exponent() const;                  // Pow only

  bool is_number() const { return kind() == NodeKind::Number; }
  bool is_zero_literal() const;
  bool is_one_literal() const;

  // Structural equality (same tree after construction-time normalization).
  bool same(const Expr& other) const;

  // Total order used for canonical term/factor sorting. Returns <0, 0, >0.
  static int compare(const Expr& a, const Expr& b);

  const Node* raw() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend struct Node;
};

// Symbols the parser will accept. Anything else raises SyntaxError.
struct SymbolTable {
  std::set<std::string> coordinates;
  std::set<std::string> parameters;

  bool declared(const std::string& name) const {
    return coordinates.count(name) > 0 || parameters.count(name) > 0;
  }
};

// Parse expression text. Grammar: sums of products of signed factors with
// integer powers, parenthesized subexpressions, and the five named
// functions. Throws SyntaxError with a byte position on bad input or on an
// undeclared symbol.
Expr parse(const std::string& text, const SymbolTable& symbols);

// Render to text that reparses to an equivalent expression.
std::string print(const Expr& e);

// Partial derivative with respect to one symbol. Result is simplified.
Expr differentiate(const Expr& e, const std::string& symbol);

// Normalization pipeline: flatten nested sums/products, fold constants,
// collect like terms and like powers, cancel shared factors across a
// quotient, drop trivial powers. Runs to a fixed point, so it is
// idempotent: simplify(simplify(e)) is structurally simplify(e).
Expr simplify(const Expr& e);

// Numeric evaluation. Throws EvalError on division by zero, log/sqrt domain
// violations, or non-finite intermediate values.
double eval(const Expr& e, const EvalPoint& point);

// Evaluation that also reports the largest |value| over all subterms,
// which the sampling zero test uses to scale its threshold.
struct EvalDetail {
  double value;
  double max_abs;
};
EvalDetail eval_detail(const Expr& e, const EvalPoint& point);

// Replace symbols by expressions (simultaneous substitution).
Expr substitute(const Expr& e, const std::map<std::string, Expr>& subs);

void collect_symbols(const Expr& e, std::set<std::string>& out);

// True when no log/sqrt/exp/sin/cos node appears, i.e. the expression is a
// rational function of its symbols.
bool is_rational_expr(const Expr& e);

// Convenience arithmetic. These build unsimplified trees.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

}  // namespace kundt
