#include "kundt/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <utility>

#include "kundt/errors.hpp"

namespace kundt {

struct Node {
  NodeKind kind;
  Rational value;    // Number
  std::string name;  // Symbol
  long exponent = 0; // Pow
  std::vector<Expr> kids;

  static Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }
};

Expr::Expr() { *this = number(Rational(0)); }

Expr Expr::number(Rational r) {
  Node n;
  n.kind = NodeKind::Number;
  n.value = std::move(r);
  n.value.canonicalize();
  return Node::make(std::move(n));
}

Expr Expr::integer(long v) { return number(Rational(static_cast<long>(v))); }

Expr Expr::symbol(std::string name) {
  Node n;
  n.kind = NodeKind::Symbol;
  n.name = std::move(name);
  return Node::make(std::move(n));
}

Expr Expr::add(std::vector<Expr> terms) {
  if (terms.empty()) return integer(0);
  if (terms.size() == 1) return terms[0];
  Node n;
  n.kind = NodeKind::Add;
  n.kids = std::move(terms);
  return Node::make(std::move(n));
}

Expr Expr::mul(std::vector<Expr> factors) {
  if (factors.empty()) return integer(1);
  if (factors.size() == 1) return factors[0];
  Node n;
  n.kind = NodeKind::Mul;
  n.kids = std::move(factors);
  return Node::make(std::move(n));
}

Expr Expr::div(Expr num, Expr den) {
  Node n;
  n.kind = NodeKind::Div;
  n.kids = {std::move(num), std::move(den)};
  return Node::make(std::move(n));
}

Expr Expr::pow(Expr base, long exponent) {
  Node n;
  n.kind = NodeKind::Pow;
  n.exponent = exponent;
  n.kids = {std::move(base)};
  return Node::make(std::move(n));
}

static Expr make_unary(NodeKind k, Expr arg) {
  Node n;
  n.kind = k;
  n.kids = {std::move(arg)};
  return Node::make(std::move(n));
}

Expr Expr::exp_of(Expr a) { return make_unary(NodeKind::Exp, std::move(a)); }
Expr Expr::log_of(Expr a) { return make_unary(NodeKind::Log, std::move(a)); }
Expr Expr::sin_of(Expr a) { return make_unary(NodeKind::Sin, std::move(a)); }
Expr Expr::cos_of(Expr a) { return make_unary(NodeKind::Cos, std::move(a)); }
Expr Expr::sqrt_of(Expr a) { return make_unary(NodeKind::Sqrt, std::move(a)); }

NodeKind Expr::kind() const { return node_->kind; }
const Rational& Expr::number_value() const { return node_->value; }
const std::string& Expr::symbol_name() const { return node_->name; }
const std::vector<Expr>& Expr::operands() const { return node_->kids; }
long Expr::exponent() const { return node_->exponent; }

bool Expr::is_zero_literal() const {
  return kind() == NodeKind::Number && sgn(node_->value) == 0;
}

bool Expr::is_one_literal() const {
  return kind() == NodeKind::Number && node_->value == 1;
}

static int kind_rank(NodeKind k) {
  switch (k) {
    case NodeKind::Number: return 0;
    case NodeKind::Symbol: return 1;
    case NodeKind::Pow: return 2;
    case NodeKind::Mul: return 3;
    case NodeKind::Add: return 4;
    case NodeKind::Div: return 5;
    case NodeKind::Exp: return 6;
    case NodeKind::Log: return 7;
    case NodeKind::Sin: return 8;
    case NodeKind::Cos: return 9;
    case NodeKind::Sqrt: return 10;
  }
  return 11;
}

int Expr::compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  int ra = kind_rank(a.kind());
  int rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case NodeKind::Number: {
      int c = cmp(a.number_value(), b.number_value());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case NodeKind::Symbol: {
      int c = a.symbol_name().compare(b.symbol_name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case NodeKind::Pow: {
      int c = compare(a.operands()[0], b.operands()[0]);
      if (c != 0) return c;
      if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
      return 0;
    }
    default: {
      const auto& ka = a.operands();
      const auto& kb = b.operands();
      size_t n = std::min(ka.size(), kb.size());
      for (size_t i = 0; i < n; ++i) {
        int c = compare(ka[i], kb[i]);
        if (c != 0) return c;
      }
      if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
      return 0;
    }
  }
}

bool Expr::same(const Expr& other) const { return compare(*this, other) == 0; }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return Expr::compare(a, b) < 0; }
};

Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }
Expr operator-(const Expr& a) { return Expr::mul({Expr::integer(-1), a}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::add({a, -b}); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  size_t pos;
  Rational value;     // Number
  bool is_integer = false;
  std::string text;   // Ident
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_ = Token{Tok::End, pos_, Rational(0), false, ""};
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    size_t start = pos_;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t end = pos_;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      bool has_dot = false;
      if (end < text_.size() && text_[end] == '.') {
        has_dot = true;
        ++end;
        size_t frac_start = end;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
        if (end == frac_start) throw SyntaxError(end, "digits after decimal point");
      }
      std::string digits = text_.substr(start, end - start);
      Rational v;
      if (has_dot) {
        size_t dot = digits.find('.');
        std::string intpart = digits.substr(0, dot);
        std::string frac = digits.substr(dot + 1);
        mpz_class num(intpart + frac);
        mpz_class den(1);
        for (size_t i = 0; i < frac.size(); ++i) den *= 10;
        v = Rational(num, den);
        v.canonicalize();
      } else {
        v = Rational(mpz_class(digits));
      }
      current_ = Token{Tok::Number, start, v, !has_dot, ""};
      pos_ = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      current_ = Token{Tok::Ident, start, Rational(0), false, text_.substr(start, end - start)};
      pos_ = end;
      return;
    }
    ++pos_;
    switch (c) {
      case '+': current_ = Token{Tok::Plus, start, Rational(0), false, ""}; return;
      case '-': current_ = Token{Tok::Minus, start, Rational(0), false, ""}; return;
      case '*': current_ = Token{Tok::Star, start, Rational(0), false, ""}; return;
      case '/': current_ = Token{Tok::Slash, start, Rational(0), false, ""}; return;
      case '^': current_ = Token{Tok::Caret, start, Rational(0), false, ""}; return;
      case '(': current_ = Token{Tok::LParen, start, Rational(0), false, ""}; return;
      case ')': current_ = Token{Tok::RParen, start, Rational(0), false, ""}; return;
      default: throw SyntaxError(start, "a number, symbol, operator, or parenthesis");
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
  Token current_;
};

class Parser {
 public:
  Parser(const std::string& text, const SymbolTable& symbols) : lex_(text), symbols_(symbols) {}

  Expr run() {
    Expr e = parse_sum();
    if (lex_.peek().kind != Tok::End) throw SyntaxError(lex_.peek().pos, "end of input");
    return e;
  }

 private:
  Expr parse_sum() {
    Expr e = parse_term();
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      bool minus = lex_.take().kind == Tok::Minus;
      Expr rhs = parse_term();
      e = minus ? e - rhs : e + rhs;
    }
    return e;
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
      bool divide = lex_.take().kind == Tok::Slash;
      Expr rhs = parse_factor();
      e = divide ? Expr::div(e, rhs) : e * rhs;
    }
    return e;
  }

  Expr parse_factor() {
    bool negate = false;
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      negate = true;
    }
    Expr b = parse_base();
    if (lex_.peek().kind == Tok::Caret) {
      lex_.take();
      long n = parse_integer_exponent();
      b = Expr::pow(b, n);
    }
    return negate ? -b : b;
  }

  long parse_integer_exponent() {
    bool neg = false;
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      neg = true;
    }
    if (lex_.peek().kind != Tok::Number || !lex_.peek().is_integer)
      throw SyntaxError(lex_.peek().pos, "an integer exponent");
    Token t = lex_.take();
    if (!t.value.get_num().fits_slong_p())
      throw SyntaxError(t.pos, "an exponent of reasonable size");
    long n = t.value.get_num().get_si();
    return neg ? -n : n;
  }

  Expr parse_base() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Number: {
        Token num = lex_.take();
        return Expr::number(num.value);
      }
      case Tok::LParen: {
        lex_.take();
        Expr e = parse_sum();
        if (lex_.peek().kind != Tok::RParen) throw SyntaxError(lex_.peek().pos, "')'");
        lex_.take();
        return e;
      }
      case Tok::Ident: {
        Token id = lex_.take();
        if (id.text == "exp" || id.text == "log" || id.text == "sin" || id.text == "cos" ||
            id.text == "sqrt") {
          if (lex_.peek().kind != Tok::LParen)
            throw SyntaxError(lex_.peek().pos, "'(' after function name '" + id.text + "'");
          lex_.take();
          Expr arg = parse_sum();
          if (lex_.peek().kind != Tok::RParen) throw SyntaxError(lex_.peek().pos, "')'");
          lex_.take();
          if (id.text == "exp") return Expr::exp_of(arg);
          if (id.text == "log") return Expr::log_of(arg);
          if (id.text == "sin") return Expr::sin_of(arg);
          if (id.text == "cos") return Expr::cos_of(arg);
          return Expr::sqrt_of(arg);
        }
        if (!symbols_.declared(id.text))
          throw SyntaxError(id.pos, "a declared symbol (got '" + id.text + "')");
        return Expr::symbol(id.text);
      }
      default:
        throw SyntaxError(t.pos, "a number, symbol, function, or '('");
    }
  }

  Lexer lex_;
  const SymbolTable& symbols_;
};

}  // namespace

Expr parse(const std::string& text, const SymbolTable& symbols) {
  Parser p(text, symbols);
  return p.run();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Precedence levels: sum = 1, product/quotient = 2, power operand = 3,
// atoms = 4. A subexpression is parenthesized when its own level is below
// the level its context demands.
int print_level(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Add: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Pow: return 3;
    case NodeKind::Number:
      return sgn(e.number_value()) < 0 || e.number_value().get_den() != 1 ? 2 : 4;
    default: return 4;
  }
}

void print_impl(const Expr& e, int context, std::string& out);

void print_wrapped(const Expr& e, int context, std::string& out) {
  if (print_level(e) < context) {
    out += '(';
    print_impl(e, 0, out);
    out += ')';
  } else {
    print_impl(e, context, out);
  }
}

// True when the term would print with a leading minus sign.
bool leading_minus(const Expr& e) {
  if (e.kind() == NodeKind::Number) return sgn(e.number_value()) < 0;
  if (e.kind() == NodeKind::Mul && !e.operands().empty()) return leading_minus(e.operands()[0]);
  if (e.kind() == NodeKind::Div) return leading_minus(e.operands()[0]);
  return false;
}

Expr negate_for_print(const Expr& e) {
  if (e.kind() == NodeKind::Number) return Expr::number(-e.number_value());
  if (e.kind() == NodeKind::Mul) {
    auto kids = e.operands();
    kids[0] = negate_for_print(kids[0]);
    if (kids[0].is_one_literal() && kids.size() > 1)
      kids.erase(kids.begin());
    return Expr::mul(std::move(kids));
  }
  if (e.kind() == NodeKind::Div) {
    return Expr::div(negate_for_print(e.operands()[0]), e.operands()[1]);
  }
  return -e;
}

void print_impl(const Expr& e, int context, std::string& out) {
  switch (e.kind()) {
    case NodeKind::Number: {
      out += e.number_value().get_str();
      return;
    }
    case NodeKind::Symbol:
      out += e.symbol_name();
      return;
    case NodeKind::Add: {
      const auto& kids = e.operands();
      for (size_t i = 0; i < kids.size(); ++i) {
        if (i == 0) {
          print_wrapped(kids[i], 1, out);
        } else if (leading_minus(kids[i])) {
          out += " - ";
          print_wrapped(negate_for_print(kids[i]), 2, out);
        } else {
          out += " + ";
          print_wrapped(kids[i], 1, out);
        }
      }
      return;
    }
    case NodeKind::Mul: {
      const auto& kids = e.operands();
      for (size_t i = 0; i < kids.size(); ++i) {
        if (i > 0) out += '*';
        // Later factors may not start with a bare minus sign.
        if (i > 0 && leading_minus(kids[i])) {
          out += '(';
          print_impl(kids[i], 0, out);
          out += ')';
        } else {
          print_wrapped(kids[i], 2, out);
        }
      }
      return;
    }
    case NodeKind::Div: {
      print_wrapped(e.operands()[0], 2, out);
      out += '/';
      print_wrapped(e.operands()[1], 3, out);
      return;
    }
    case NodeKind::Pow: {
      print_wrapped(e.operands()[0], 4, out);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    }
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Sqrt: {
      const char* name = e.kind() == NodeKind::Exp   ? "exp"
                         : e.kind() == NodeKind::Log ? "log"
                         : e.kind() == NodeKind::Sin ? "sin"
                         : e.kind() == NodeKind::Cos ? "cos"
                                                     : "sqrt";
      out += name;
      out += '(';
      print_impl(e.operands()[0], 0, out);
      out += ')';
      return;
    }
  }
  (void)context;
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_impl(e, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

Expr one_pass(const Expr& e);

// Split a product term into (rational coefficient, remaining core). The core
// of a pure number is the literal 1.
std::pair<Rational, Expr> coeff_core(const Expr& t) {
  if (t.kind() == NodeKind::Number) return {t.number_value(), Expr::integer(1)};
  if (t.kind() == NodeKind::Mul) {
    const auto& kids = t.operands();
    if (!kids.empty() && kids[0].kind() == NodeKind::Number) {
      std::vector<Expr> rest(kids.begin() + 1, kids.end());
      return {kids[0].number_value(), Expr::mul(std::move(rest))};
    }
  }
  return {Rational(1), t};
}

Expr scale_term(const Rational& c, const Expr& core) {
  if (core.is_one_literal()) return Expr::number(c);
  if (c == 1) return core;
  std::vector<Expr> kids;
  kids.push_back(Expr::number(c));
  if (core.kind() == NodeKind::Mul) {
    for (const auto& k : core.operands()) kids.push_back(k);
  } else {
    kids.push_back(core);
  }
  return Expr::mul(std::move(kids));
}

Expr pass_add(const std::vector<Expr>& kids_in) {
  std::vector<Expr> flat;
  for (const auto& k : kids_in) {
    Expr p = one_pass(k);
    if (p.kind() == NodeKind::Add) {
      for (const auto& kk : p.operands()) flat.push_back(kk);
    } else {
      flat.push_back(p);
    }
  }
  std::map<Expr, Rational, ExprLess> groups;
  for (const auto& t : flat) {
    auto [c, core] = coeff_core(t);
    groups[core] += c;
  }
  std::vector<Expr> terms;
  for (const auto& [core, c] : groups) {
    if (sgn(c) == 0) continue;
    terms.push_back(scale_term(c, core));
  }
  return Expr::add(std::move(terms));
}

// Split a factor into (base, integer exponent).
std::pair<Expr, long> base_exponent(const Expr& f) {
  if (f.kind() == NodeKind::Pow) return {f.operands()[0], f.exponent()};
  return {f, 1};
}

Expr rebuild_power(const Expr& base, long n) {
  if (n == 1) return base;
  return Expr::pow(base, n);
}

struct FactorSplit {
  Rational coeff{1};
  std::map<Expr, long, ExprLess> powers;
  bool zero = false;
};

FactorSplit split_factors(const Expr& x) {
  FactorSplit s;
  std::vector<Expr> kids;
  if (x.kind() == NodeKind::Mul) {
    kids = x.operands();
  } else {
    kids = {x};
  }
  for (const auto& f : kids) {
    if (f.kind() == NodeKind::Number) {
      if (sgn(f.number_value()) == 0) {
        s.zero = true;
        return s;
      }
      s.coeff *= f.number_value();
      continue;
    }
    auto [b, n] = base_exponent(f);
    s.powers[b] += n;
  }
  return s;
}

Expr rebuild_factors(const Rational& coeff, const std::map<Expr, long, ExprLess>& powers) {
  if (sgn(coeff) == 0) return Expr::integer(0);
  // Merge exp factors into a single exponential.
  std::vector<Expr> exp_args;
  std::vector<Expr> factors;
  for (const auto& [b, n] : powers) {
    if (n == 0) continue;
    if (b.kind() == NodeKind::Exp) {
      exp_args.push_back(Expr::mul({Expr::integer(n), b.operands()[0]}));
      continue;
    }
    factors.push_back(rebuild_power(b, n));
  }
  if (!exp_args.empty()) factors.push_back(Expr::exp_of(Expr::add(std::move(exp_args))));
  std::sort(factors.begin(), factors.end(),
            [](const Expr& a, const Expr& b) { return Expr::compare(a, b) < 0; });
  std::vector<Expr> kids;
  if (coeff != 1 || factors.empty()) kids.push_back(Expr::number(coeff));
  for (auto& f : factors) kids.push_back(std::move(f));
  return Expr::mul(std::move(kids));
}

Expr pass_mul(const std::vector<Expr>& kids_in) {
  std::vector<Expr> flat;
  bool has_div = false;
  for (const auto& k : kids_in) {
    Expr p = one_pass(k);
    if (p.kind() == NodeKind::Mul) {
      for (const auto& kk : p.operands()) {
        flat.push_back(kk);
        if (kk.kind() == NodeKind::Div) has_div = true;
      }
    } else {
      if (p.kind() == NodeKind::Div) has_div = true;
      flat.push_back(p);
    }
  }
  if (has_div) {
    // Lift quotients so the product becomes a single quotient; the outer
    // fixed-point loop re-normalizes both sides.
    std::vector<Expr> nums, dens;
    for (const auto& f : flat) {
      if (f.kind() == NodeKind::Div) {
        nums.push_back(f.operands()[0]);
        dens.push_back(f.operands()[1]);
      } else {
        nums.push_back(f);
      }
    }
    return Expr::div(Expr::mul(std::move(nums)), Expr::mul(std::move(dens)));
  }
  FactorSplit s = split_factors(Expr::mul(std::move(flat)));
  if (s.zero) return Expr::integer(0);
  return rebuild_factors(s.coeff, s.powers);
}

Expr pass_div(const Expr& num_in, const Expr& den_in) {
  Expr a = one_pass(num_in);
  Expr b = one_pass(den_in);
  if (b.is_zero_literal()) return Expr::div(a, b);  // invalid; left intact
  if (a.is_zero_literal()) return Expr::integer(0);
  if (b.kind() == NodeKind::Number) {
    return one_pass(Expr::mul({Expr::number(Rational(1) / b.number_value()), a}));
  }
  // Flatten nested quotients on either side.
  if (a.kind() == NodeKind::Div || b.kind() == NodeKind::Div) {
    Expr an = a, ad = Expr::integer(1), bn = b, bd = Expr::integer(1);
    if (a.kind() == NodeKind::Div) {
      an = a.operands()[0];
      ad = a.operands()[1];
    }
    if (b.kind() == NodeKind::Div) {
      bn = b.operands()[0];
      bd = b.operands()[1];
    }
    return Expr::div(Expr::mul({an, bd}), Expr::mul({ad, bn}));
  }
  FactorSplit num = split_factors(a);
  FactorSplit den = split_factors(b);
  if (num.zero) return Expr::integer(0);
  if (den.zero) return Expr::div(a, b);
  // Cancel shared structural factors and merge exponentials across the bar.
  std::optional<Expr> num_exp_arg, den_exp_arg;
  auto take_exp = [](std::map<Expr, long, ExprLess>& powers) -> std::optional<Expr> {
    std::vector<Expr> args;
    for (auto it = powers.begin(); it != powers.end();) {
      if (it->first.kind() == NodeKind::Exp && it->second != 0) {
        args.push_back(Expr::mul({Expr::integer(it->second), it->first.operands()[0]}));
        it = powers.erase(it);
      } else {
        ++it;
      }
    }
    if (args.empty()) return std::nullopt;
    return Expr::add(std::move(args));
  };
  num_exp_arg = take_exp(num.powers);
  den_exp_arg = take_exp(den.powers);
  for (auto& [base, n] : den.powers) {
    auto it = num.powers.find(base);
    if (it == num.powers.end()) continue;
    long m = std::min(it->second, n);
    if (m > 0) {
      it->second -= m;
      n -= m;
    }
  }
  if (num_exp_arg || den_exp_arg) {
    Expr arg = Expr::integer(0);
    if (num_exp_arg) arg = arg + *num_exp_arg;
    if (den_exp_arg) arg = arg - *den_exp_arg;
    num.powers[Expr::exp_of(arg)] += 1;
  }
  Rational c = num.coeff / den.coeff;
  Expr new_num = rebuild_factors(c, num.powers);
  std::map<Expr, long, ExprLess> den_left;
  for (const auto& [base, n] : den.powers)
    if (n != 0) den_left[base] = n;
  if (den_left.empty()) return one_pass(new_num);
  Expr new_den = rebuild_factors(Rational(1), den_left);
  return Expr::div(new_num, new_den);
}

bool rational_sqrt(const Rational& r, Rational& out) {
  if (sgn(r) < 0) return false;
  mpz_class num = r.get_num(), den = r.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    out = Rational(sn, sd);
    out.canonicalize();
    return true;
  }
  return false;
}

Rational rational_pow(const Rational& base, long n) {
  Rational r(1);
  Rational b = base;
  long m = n < 0 ? -n : n;
  for (long i = 0; i < m; ++i) r *= b;
  if (n < 0) r = Rational(1) / r;
  return r;
}

Expr pass_pow(const Expr& base_in, long n) {
  Expr b = one_pass(base_in);
  if (n == 0) return Expr::integer(1);
  if (n == 1) return b;
  if (b.kind() == NodeKind::Number) {
    if (sgn(b.number_value()) == 0) {
      if (n > 0) return Expr::integer(0);
      return Expr::pow(b, n);  // 0 to a negative power; left intact
    }
    return Expr::number(rational_pow(b.number_value(), n));
  }
  if (n < 0) return Expr::div(Expr::integer(1), Expr::pow(b, -n));
  if (b.kind() == NodeKind::Pow) return one_pass(Expr::pow(b.operands()[0], n * b.exponent()));
  if (b.kind() == NodeKind::Exp)
    return Expr::exp_of(one_pass(Expr::mul({Expr::integer(n), b.operands()[0]})));
  if (b.kind() == NodeKind::Sqrt && n % 2 == 0)
    return one_pass(Expr::pow(b.operands()[0], n / 2));
  if (b.kind() == NodeKind::Mul) {
    std::vector<Expr> kids;
    for (const auto& f : b.operands()) kids.push_back(Expr::pow(f, n));
    return one_pass(Expr::mul(std::move(kids)));
  }
  if (b.kind() == NodeKind::Div) {
    return one_pass(Expr::div(Expr::pow(b.operands()[0], n), Expr::pow(b.operands()[1], n)));
  }
  return Expr::pow(b, n);
}

Expr one_pass(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Number:
    case NodeKind::Symbol:
      return e;
    case NodeKind::Add:
      return pass_add(e.operands());
    case NodeKind::Mul:
      return pass_mul(e.operands());
    case NodeKind::Div:
      return pass_div(e.operands()[0], e.operands()[1]);
    case NodeKind::Pow:
      return pass_pow(e.operands()[0], e.exponent());
    case NodeKind::Exp: {
      Expr a = one_pass(e.operands()[0]);
      if (a.is_zero_literal()) return Expr::integer(1);
      if (a.kind() == NodeKind::Log) return a.operands()[0];
      return Expr::exp_of(a);
    }
    case NodeKind::Log: {
      Expr a = one_pass(e.operands()[0]);
      if (a.is_one_literal()) return Expr::integer(0);
      if (a.kind() == NodeKind::Exp) return a.operands()[0];
      return Expr::log_of(a);
    }
    case NodeKind::Sin: {
      Expr a = one_pass(e.operands()[0]);
      if (a.is_zero_literal()) return Expr::integer(0);
      return Expr::sin_of(a);
    }
    case NodeKind::Cos: {
      Expr a = one_pass(e.operands()[0]);
      if (a.is_zero_literal()) return Expr::integer(1);
      return Expr::cos_of(a);
    }
    case NodeKind::Sqrt: {
      Expr a = one_pass(e.operands()[0]);
      if (a.kind() == NodeKind::Number) {
        Rational r;
        if (rational_sqrt(a.number_value(), r)) return Expr::number(r);
      }
      return Expr::sqrt_of(a);
    }
  }
  return e;
}

}  // namespace

Expr simplify(const Expr& e) {
  Expr cur = e;
  for (int i = 0; i < 64; ++i) {
    Expr next = one_pass(cur);
    if (next.same(cur)) return cur;
    cur = next;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr diff_raw(const Expr& e, const std::string& s) {
  switch (e.kind()) {
    case NodeKind::Number:
      return Expr::integer(0);
    case NodeKind::Symbol:
      return e.symbol_name() == s ? Expr::integer(1) : Expr::integer(0);
    case NodeKind::Add: {
      std::vector<Expr> kids;
      for (const auto& k : e.operands()) kids.push_back(diff_raw(k, s));
      return Expr::add(std::move(kids));
    }
    case NodeKind::Mul: {
      const auto& kids = e.operands();
      std::vector<Expr> terms;
      for (size_t i = 0; i < kids.size(); ++i) {
        std::vector<Expr> factors;
        factors.push_back(diff_raw(kids[i], s));
        for (size_t j = 0; j < kids.size(); ++j)
          if (j != i) factors.push_back(kids[j]);
        terms.push_back(Expr::mul(std::move(factors)));
      }
      return Expr::add(std::move(terms));
    }
    case NodeKind::Div: {
      const Expr& a = e.operands()[0];
      const Expr& b = e.operands()[1];
      Expr da = diff_raw(a, s);
      Expr db = diff_raw(b, s);
      return Expr::div(da * b - a * db, Expr::pow(b, 2));
    }
    case NodeKind::Pow: {
      const Expr& b = e.operands()[0];
      long n = e.exponent();
      return Expr::mul({Expr::integer(n), Expr::pow(b, n - 1), diff_raw(b, s)});
    }
    case NodeKind::Exp:
      return e * diff_raw(e.operands()[0], s);
    case NodeKind::Log:
      return Expr::div(diff_raw(e.operands()[0], s), e.operands()[0]);
    case NodeKind::Sin:
      return Expr::cos_of(e.operands()[0]) * diff_raw(e.operands()[0], s);
    case NodeKind::Cos:
      return -(Expr::sin_of(e.operands()[0]) * diff_raw(e.operands()[0], s));
    case NodeKind::Sqrt:
      return Expr::div(diff_raw(e.operands()[0], s), Expr::integer(2) * e);
  }
  return Expr::integer(0);
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& symbol) {
  return simplify(diff_raw(e, symbol));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_impl(const Expr& e, const EvalPoint& pt, double& max_abs) {
  auto record = [&max_abs](double v) {
    if (!std::isfinite(v)) throw EvalError("non-finite value in evaluation");
    double a = std::fabs(v);
    if (a > max_abs) max_abs = a;
    return v;
  };
  switch (e.kind()) {
    case NodeKind::Number:
      return record(to_double(e.number_value()));
    case NodeKind::Symbol: {
      auto it = pt.find(e.symbol_name());
      if (it == pt.end()) throw EvalError("unbound symbol '" + e.symbol_name() + "'");
      return record(it->second);
    }
    case NodeKind::Add: {
      double s = 0;
      for (const auto& k : e.operands()) s += eval_impl(k, pt, max_abs);
      return record(s);
    }
    case NodeKind::Mul: {
      double p = 1;
      for (const auto& k : e.operands()) p *= eval_impl(k, pt, max_abs);
      return record(p);
    }
    case NodeKind::Div: {
      double a = eval_impl(e.operands()[0], pt, max_abs);
      double b = eval_impl(e.operands()[1], pt, max_abs);
      if (b == 0) throw EvalError("division by zero");
      return record(a / b);
    }
    case NodeKind::Pow: {
      double b = eval_impl(e.operands()[0], pt, max_abs);
      long n = e.exponent();
      if (b == 0 && n < 0) throw EvalError("zero raised to a negative power");
      return record(std::pow(b, static_cast<double>(n)));
    }
    case NodeKind::Exp:
      return record(std::exp(eval_impl(e.operands()[0], pt, max_abs)));
    case NodeKind::Log: {
      double a = eval_impl(e.operands()[0], pt, max_abs);
      if (a <= 0) throw EvalError("log of a non-positive value");
      return record(std::log(a));
    }
    case NodeKind::Sin:
      return record(std::sin(eval_impl(e.operands()[0], pt, max_abs)));
    case NodeKind::Cos:
      return record(std::cos(eval_impl(e.operands()[0], pt, max_abs)));
    case NodeKind::Sqrt: {
      double a = eval_impl(e.operands()[0], pt, max_abs);
      if (a < 0) throw EvalError("sqrt of a negative value");
      return record(std::sqrt(a));
    }
  }
  throw EvalError("unreachable node kind");
}

}  // namespace

EvalDetail eval_detail(const Expr& e, const EvalPoint& point) {
  double max_abs = 0;
  double v = eval_impl(e, point, max_abs);
  return EvalDetail{v, max_abs};
}

double eval(const Expr& e, const EvalPoint& point) { return eval_detail(e, point).value; }

// ---------------------------------------------------------------------------
// Substitution and queries

Expr substitute(const Expr& e, const std::map<std::string, Expr>& subs) {
  switch (e.kind()) {
    case NodeKind::Number:
      return e;
    case NodeKind::Symbol: {
      auto it = subs.find(e.symbol_name());
      return it == subs.end() ? e : it->second;
    }
    default: {
      std::vector<Expr> kids;
      kids.reserve(e.operands().size());
      for (const auto& k : e.operands()) kids.push_back(substitute(k, subs));
      switch (e.kind()) {
        case NodeKind::Add: return Expr::add(std::move(kids));
        case NodeKind::Mul: return Expr::mul(std::move(kids));
        case NodeKind::Div: return Expr::div(kids[0], kids[1]);
        case NodeKind::Pow: return Expr::pow(kids[0], e.exponent());
        case NodeKind::Exp: return Expr::exp_of(kids[0]);
        case NodeKind::Log: return Expr::log_of(kids[0]);
        case NodeKind::Sin: return Expr::sin_of(kids[0]);
        case NodeKind::Cos: return Expr::cos_of(kids[0]);
        case NodeKind::Sqrt: return Expr::sqrt_of(kids[0]);
        default: return e;
      }
    }
  }
}

void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == NodeKind::Symbol) {
    out.insert(e.symbol_name());
    return;
  }
  for (const auto& k : e.operands()) collect_symbols(k, out);
}

bool is_rational_expr(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Sqrt:
      return false;
    default:
      break;
  }
  for (const auto& k : e.operands())
    if (!is_rational_expr(k)) return false;
  return true;
}

}  // namespace kundt
