#include "kundt/catalog.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kundt/errors.hpp"

namespace kundt {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

Expr parse_over(const std::string& text, const std::set<std::string>& coords,
                const std::string& what) {
  SymbolTable table;
  table.coordinates = coords;
  try {
    return parse(text, table);
  } catch (const SyntaxError& e) {
    throw BadParameter(what + ": " + e.what());
  }
}

Rational parse_rational_param(const std::string& text, const std::string& what) {
  Expr e = simplify(parse_over(text, {}, what));
  if (!e.is_number()) throw BadParameter(what + " must be a rational constant");
  return e.number_value();
}

long parse_int_param(const std::string& text, const std::string& what, long lo,
                     long hi) {
  Rational r = parse_rational_param(text, what);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p())
    throw BadParameter(what + " must be an integer");
  long v = r.get_num().get_si();
  if (v < lo || v > hi)
    throw BadParameter(what + " must be between " + std::to_string(lo) +
                       " and " + std::to_string(hi));
  return v;
}

std::vector<Expr> parse_expr_list(const std::string& text,
                                  const std::set<std::string>& coords,
                                  const std::string& what) {
  std::vector<Expr> out;
  for (const std::string& piece : split(text, ','))
    out.push_back(parse_over(piece, coords, what));
  return out;
}

ExprMatrix parse_expr_matrix(const std::string& text,
                             const std::set<std::string>& coords,
                             const std::string& what) {
  ExprMatrix rows;
  for (const std::string& row_text : split(text, ';'))
    rows.push_back(parse_expr_list(row_text, coords, what));
  for (const auto& row : rows)
    if (row.size() != rows.size())
      throw BadParameter(what + " must be a square matrix");
  return rows;
}

RatMat parse_rat_matrix(const std::string& text, const std::string& what) {
  RatMat rows;
  for (const std::string& row_text : split(text, ';')) {
    std::vector<Rational> row;
    for (const std::string& piece : split(row_text, ','))
      row.push_back(parse_rational_param(piece, what));
    rows.push_back(row);
  }
  for (const auto& row : rows)
    if (row.size() != rows.size())
      throw BadParameter(what + " must be a square matrix");
  return rows;
}

std::vector<std::string> transverse_names(std::size_t n, const std::string& stem) {
  std::vector<std::string> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(stem + std::to_string(i + 1));
  return xs;
}

Chart chart_uvx(const std::vector<std::string>& xs,
                const std::map<std::string, Constraint>& constraints = {},
                const std::map<std::string, double>& base_overrides = {}) {
  std::vector<std::string> coords = {"u", "v"};
  coords.insert(coords.end(), xs.begin(), xs.end());
  EvalPoint base;
  for (const std::string& c : coords) {
    auto it = base_overrides.find(c);
    base[c] = it != base_overrides.end() ? it->second : 0.0;
  }
  return Chart(coords, constraints, base);
}

VectorField coordinate_field(std::size_t dim, std::size_t index) {
  VectorField f;
  f.comps.assign(dim, Expr::integer(0));
  f.comps[index] = Expr::integer(1);
  return f;
}

std::set<std::string> coord_set(const std::vector<std::string>& names) {
  return std::set<std::string>(names.begin(), names.end());
}

const std::string& param_or(const std::map<std::string, std::string>& params,
                            const std::map<std::string, std::string>& defaults,
                            const std::string& key) {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  return defaults.at(key);
}

void reject_unknown_params(const std::string& name,
                           const std::map<std::string, std::string>& params,
                           const std::map<std::string, std::string>& defaults) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (!defaults.count(key))
      throw BadParameter("entry " + name + " does not take a parameter named " +
                         key);
  }
}

// Quadratic profile sum_{ij} S_ij x_i x_j from a symmetric coefficient matrix.
Expr quadratic_profile(const ExprMatrix& S, const std::vector<std::string>& xs) {
  Expr H = Expr::integer(0);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      H = H + S[i][j] * Expr::symbol(xs[i]) * Expr::symbol(xs[j]);
  return simplify(H);
}

struct EntrySpec {
  std::string description;
  std::map<std::string, std::string> defaults;
  BuiltEntry (*build)(const std::map<std::string, std::string>&, std::uint64_t);
};

BuiltEntry build_minkowski(const std::map<std::string, std::string>& params,
                           std::uint64_t seed) {
  long dim = parse_int_param(param_or(params, {{"dim", "4"}}, "dim"), "dim", 2, 6);
  std::vector<std::string> xs = transverse_names(dim - 2, "x");
  Chart chart = chart_uvx(xs);
  CoordinateRoles roles{"u", "v", xs};
  std::vector<Expr> W(xs.size(), Expr::integer(0));
  Metric g = assemble_adapted_metric(chart, roles, Expr::integer(0), W,
                                     expr_matrix_identity(xs.size()),
                                     ZeroTestOptions{seed, {}});
  BuiltEntry e;
  e.metric = g;
  e.field = coordinate_field(dim, 1);
  e.roles = roles;
  e.params = {{"dim", std::to_string(dim)}};
  e.expect.kundt = true;
  e.expect.locally_kundt = true;
  e.expect.twist_free = true;
  e.expect.leaf_flat = true;
  e.expect.space_class = SpaceClass::PlaneWave;
  return e;
}

BuiltEntry build_pp_wave(const std::map<std::string, std::string>& params,
                         std::uint64_t seed) {
  std::map<std::string, std::string> defaults = {{"H", "x1^3"}};
  std::vector<std::string> xs = {"x1", "x2"};
  std::set<std::string> symbols = coord_set(xs);
  symbols.insert("u");
  Expr H = parse_over(param_or(params, defaults, "H"), symbols, "H");
  Chart chart = chart_uvx(xs);
  CoordinateRoles roles{"u", "v", xs};
  std::vector<Expr> W(xs.size(), Expr::integer(0));
  Metric g = assemble_adapted_metric(chart, roles, H, W,
                                     expr_matrix_identity(xs.size()),
                                     ZeroTestOptions{seed, {}});
  BuiltEntry e;
  e.metric = g;
  e.field = coordinate_field(4, 1);
  e.roles = roles;
  e.params = {{"H", print(H)}};
  e.expect.kundt = true;
  e.expect.locally_kundt = true;
  e.expect.twist_free = true;
  e.expect.leaf_flat = true;
  e.expect.space_class = SpaceClass::PpWave;
  return e;
}

BuiltEntry build_plane_wave(const std::map<std::string, std::string>& params,
                            std::uint64_t seed) {
  std::map<std::string, std::string> defaults = {{"S", "u,0;0,0"}};
  ExprMatrix S = parse_expr_matrix(param_or(params, defaults, "S"), {"u"}, "S");
  std::size_t n = S.size();
  if (n < 1 || n > 4) throw BadParameter("S must be 1x1 up to 4x4");
  std::vector<std::string> xs = transverse_names(n, "x");
  Chart chart = chart_uvx(xs);
  CoordinateRoles roles{"u", "v", xs};
  ZeroTestOptions opt{seed, {}};
  ZeroTestOptions merged = opt;
  merged.box = chart.default_box();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!is_zero(simplify(S[i][j] - S[j][i]), merged))
        throw BadParameter("S must be symmetric");
  Expr H = quadratic_profile(S, xs);
  std::vector<Expr> W(n, Expr::integer(0));
  Metric g =
      assemble_adapted_metric(chart, roles, H, W, expr_matrix_identity(n), opt);
  // A u-independent nondegenerate profile narrows the class.
  bool constant = true;
  for (const auto& row : S)
    for (const Expr& s : row)
      if (!is_zero(differentiate(s, "u"), merged)) constant = false;
  bool nondegenerate = !is_zero(simplify(matrix_determinant(S)), merged);
  BuiltEntry e;
  e.metric = g;
  e.field = coordinate_field(n + 2, 1);
  e.roles = roles;
  std::string s_text;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s_text += ";";
    for (std::size_t j = 0; j < n; ++j) {
      if (j) s_text += ",";
      s_text += print(S[i][j]);
    }
  }
  e.params = {{"S", s_text}};
  e.expect.kundt = true;
  e.expect.locally_kundt = true;
  e.expect.twist_free = true;
  e.expect.leaf_flat = true;
  e.expect.space_class = (constant && nondegenerate) ? SpaceClass::CahenWallach
                                                     : SpaceClass::PlaneWave;
  return e;
}

BuiltEntry build_cahen_wallach(const std::map<std::string, std::string>& params,
                               std::uint64_t seed) {
  std::map<std::string, std::string> defaults = {{"S", "1,0;0,1"}};
  RatMat S = parse_rat_matrix(param_or(params, defaults, "S"), "S");
  std::size_t n = S.size();
  if (n < 1 || n > 4) throw BadParameter("S must be 1x1 up to 4x4");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (S[i][j] != S[j][i]) throw BadParameter("S must be symmetric");
  ExprMatrix Se(n, std::vector<Expr>(n, Expr::integer(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) Se[i][j] = Expr::number(S[i][j]);
  Expr det = simplify(matrix_determinant(Se));
  if (det.is_number() && det.number_value() == 0)
    throw BadParameter("S must be nondegenerate");
  std::vector<std::string> xs = transverse_names(n, "x");
  Chart chart = chart_uvx(xs);
  CoordinateRoles roles{"u", "v", xs};
  Expr H = quadratic_profile(Se, xs);
  std::vector<Expr> W(n, Expr::integer(0));
  Metric g = assemble_adapted_metric(chart, roles, H, W,
                                     expr_matrix_identity(n),
                                     ZeroTestOptions{seed, {}});
  BuiltEntry e;
  e.metric = g;
  e.field = coordinate_field(n + 2, 1);
  e.roles = roles;
  std::string s_text;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s_text += ";";
    for (std::size_t j = 0; j < n; ++j) {
      if (j) s_text += ",";
      s_text += print(Se[i][j]);
    }
  }
  e.params = {{"S", s_text}};
  e.expect.kundt = true;
  e.expect.locally_kundt = true;
  e.expect.twist_free = true;
  e.expect.leaf_flat = true;
  e.expect.space_class = SpaceClass::CahenWallach;
  return e;
}

// Common body for the two conformally presented entries: the metric is
// (2 du dv + H du^2 + sum dx_i^2) / xn^2 on the half-space xn > 0.
BuiltEntry build_scaled_half_space(const std::vector<std::string>& xs,
                                   const Expr& H, std::uint64_t seed) {
  std::size_t n = xs.size();
  const std::string& last = xs.back();
  Chart chart = chart_uvx(xs, {{last, Constraint::positive()}}, {{last, 1.0}});
  std::size_t dim = n + 2;
  Expr scale = Expr::symbol(last) * Expr::symbol(last);
  ExprMatrix g = expr_matrix_zero(dim);
  g[0][0] = simplify(Expr::div(H, scale));
  g[0][1] = g[1][0] = simplify(Expr::div(Expr::integer(1), scale));
  for (std::size_t a = 0; a < n; ++a)
    g[2 + a][2 + a] = simplify(Expr::div(Expr::integer(1), scale));
  BuiltEntry e;
  e.metric = Metric(chart, g, ZeroTestOptions{seed, {}});
  e.field = coordinate_field(dim, 1);
  e.roles = CoordinateRoles{"u", "v", xs};
  e.expect.kundt = true;
  e.expect.locally_kundt = true;
  e.expect.twist_free = true;
  e.expect.leaf_flat = false;
  e.expect.space_class = SpaceClass::Siklos;
  return e;
}

BuiltEntry build_siklos(const std::map<std::string, std::string>& params,
                        std::uint64_t seed) {
  std::map<std::string, std::string> defaults = {{"H", "x1"}};
  std::vector<std::string> xs = {"x1", "x2"};
  std::set<std::string> symbols = coord_set(xs);
  symbols.insert("u");
  Expr H = parse_over(param_or(params, defaults, "H"), symbols, "H");
  BuiltEntry e = build_scaled_half_space(xs, H, seed);
  e.params = {{"H", print(H)}};
  return e;
}

BuiltEntry build_ads_poincare(const std::map<std::string, std::string>& params,
                              std::uint64_t seed) {
  long dim = parse_int_param(param_or(params, {{"dim", "4"}}, "dim"), "dim", 3, 6);
  std::vector<std::string> xs = transverse_names(dim - 2, "y");
  BuiltEntry e = build_scaled_half_space(xs, Expr::integer(0), seed);
  e.params = {{"dim", std::to_string(dim)}};
  return e;
}

BuiltEntry build_kundt_generic(const std::map<std::string, std::string>& params,
                               std::uint64_t seed) {
  std::map<std::string, std::string> defaults = {
      {"H", "v^2+x1"}, {"W", "v*x1,0"}, {"h", "1,0;0,1"}};
  std::vector<std::string> w_texts = split(param_or(params, defaults, "W"), ',');
  std::size_t n = w_texts.size();
  if (n < 1 || n > 4) throw BadParameter("W must list 1 to 4 components");
  std::vector<std::string> xs = transverse_names(n, "x");
  std::set<std::string> full = coord_set(xs);
  full.insert("u");
  full.insert("v");
  std::set<std::string> no_v = coord_set(xs);
  no_v.insert("u");
  Expr H = parse_over(param_or(params, defaults, "H"), full, "H");
  std::vector<Expr> W;
  for (const std::string& piece : w_texts) W.push_back(parse_over(piece, full, "W"));
  // h may depend on u and x but not v; parsing without v enforces that.
  ExprMatrix h = parse_expr_matrix(param_or(params, defaults, "h"), no_v, "h");
  if (h.size() != n) throw BadParameter("h must be " + std::to_string(n) + "x" +
                                        std::to_string(n));
  Chart chart = chart_uvx(xs);
  CoordinateRoles roles{"u", "v", xs};
  Metric g = assemble_adapted_metric(chart, roles, H, W, h,
                                     ZeroTestOptions{seed, {}});
  BuiltEntry e;
  e.metric = g;
  e.field = coordinate_field(n + 2, 1);
  e.roles = roles;
  e.params = {{"H", print(H)}, {"W", param_or(params, defaults, "W")},
              {"h", param_or(params, defaults, "h")}};
  e.expect.kundt = true;
  e.expect.locally_kundt = true;
  e.expect.twist_free = true;
  e.expect.space_class = SpaceClass::KundtForm;
  return e;
}

BuiltEntry build_suspension_local(const std::map<std::string, std::string>& params,
                                  std::uint64_t seed) {
  Rational lam = parse_rational_param(
      param_or(params, {{"lambda", "2"}}, "lambda"), "lambda");
  if (lam <= 0) throw BadParameter("lambda must be positive");
  Chart chart({"x", "y", "t"}, {}, {{"x", 0.0}, {"y", 0.0}, {"t", 0.0}});
  // V = lambda^t d/dx, the suspended direction; Z pairs with it, E spans
  // the flow coordinate.
  Expr lam_t = Expr::exp_of(Expr::symbol("t") * Expr::log_of(Expr::number(lam)));
  VectorField V;
  V.comps = {simplify(lam_t), Expr::integer(0), Expr::integer(0)};
  VectorField Z = coordinate_field(3, 1);
  std::vector<VectorField> E = {coordinate_field(3, 2)};
  ExprMatrix h_frame = expr_matrix_zero(2);
  h_frame[1][1] = Expr::integer(1);
  Metric g = build_kundt_metric(chart, V, E, Z, h_frame,
                                ZeroTestOptions{seed, {}});
  BuiltEntry e;
  e.metric = g;
  e.field = V;
  e.params = {{"lambda", print(Expr::number(lam))}};
  e.expect.kundt = true;
  e.expect.locally_kundt = true;
  e.expect.twist_free = true;
  return e;
}

BuiltEntry build_conformal(const std::map<std::string, std::string>& params,
                           std::uint64_t seed);

BuiltEntry build_twisting_minkowski(const std::map<std::string, std::string>&,
                                    std::uint64_t seed) {
  Chart chart({"t", "x", "y", "z"}, {},
              {{"t", 0.0}, {"x", 0.0}, {"y", 0.0}, {"z", 0.0}});
  ExprMatrix g = expr_matrix_zero(4);
  g[0][0] = Expr::integer(-1);
  for (std::size_t i = 1; i < 4; ++i) g[i][i] = Expr::integer(1);
  VectorField V;
  V.comps = {Expr::integer(1), Expr::cos_of(Expr::symbol("z")),
             Expr::sin_of(Expr::symbol("z")), Expr::integer(0)};
  BuiltEntry e;
  e.metric = Metric(chart, g, ZeroTestOptions{seed, {}});
  e.field = V;
  e.expect.kundt = false;
  e.expect.locally_kundt = false;
  e.expect.twist_free = false;
  return e;
}

RatMat rat_matrix(std::initializer_list<std::initializer_list<long>> rows) {
  RatMat m;
  for (const auto& row : rows) {
    std::vector<Rational> r;
    for (long v : row) r.push_back(Rational(v));
    m.push_back(r);
  }
  return m;
}

BuiltEntry build_heis3(const std::map<std::string, std::string>&, std::uint64_t) {
  LieAlgebra L = LieAlgebra::from_sparse({"X", "Y", "Z"},
                                         {{"X", "Y", {{"Z", Rational(1)}}}});
  BuiltEntry e;
  e.algebra = L;
  e.ip = rat_matrix({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}});
  e.algebra_v = {Rational(0), Rational(0), Rational(1)};
  e.expect.algebraic_kundt = true;
  return e;
}

BuiltEntry build_oscillator(const std::map<std::string, std::string>&,
                            std::uint64_t) {
  LieAlgebra L = LieAlgebra::from_sparse(
      {"T", "X", "Y", "Z"},
      {{"T", "X", {{"Y", Rational(1)}}},
       {"T", "Y", {{"X", Rational(-1)}}},
       {"X", "Y", {{"Z", Rational(1)}}}});
  BuiltEntry e;
  e.algebra = L;
  e.ip = rat_matrix({{0, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}, {1, 0, 0, 0}});
  e.algebra_v = {Rational(0), Rational(0), Rational(0), Rational(1)};
  e.expect.algebraic_kundt = true;
  return e;
}

BuiltEntry build_r_ltimes_heis(const std::map<std::string, std::string>& params,
                               std::uint64_t) {
  std::map<std::string, std::string> defaults = {{"A", "1,0,0;0,0,0;0,0,1"}};
  RatMat A = parse_rat_matrix(param_or(params, defaults, "A"), "A");
  if (A.size() != 3) throw BadParameter("A must be 3x3");
  LieAlgebra heis = LieAlgebra::from_sparse({"X", "Y", "Z"},
                                            {{"X", "Y", {{"Z", Rational(1)}}}});
  LieAlgebra L = extend_by_derivation(heis, A, "T");
  BuiltEntry e;
  e.algebra = L;
  e.ip = rat_matrix({{0, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}, {1, 0, 0, 0}});
  e.algebra_v = {Rational(0), Rational(0), Rational(0), Rational(1)};
  e.params = {{"A", param_or(params, defaults, "A")}};
  e.expect.algebraic_kundt = true;
  return e;
}

BuiltEntry build_sl2_det(const std::map<std::string, std::string>&,
                         std::uint64_t) {
  LieAlgebra L = LieAlgebra::from_sparse(
      {"H", "E", "F"},
      {{"H", "E", {{"E", Rational(2)}}},
       {"H", "F", {{"F", Rational(-2)}}},
       {"E", "F", {{"H", Rational(1)}}}});
  BuiltEntry e;
  e.algebra = L;
  RatMat m(3, std::vector<Rational>(3, Rational(0)));
  m[0][0] = Rational(1);
  m[1][2] = m[2][1] = Rational(1, 2);
  e.ip = m;
  e.algebra_v = {Rational(0), Rational(0), Rational(1)};
  e.expect.algebraic_kundt = true;
  return e;
}

const std::map<std::string, EntrySpec>& entry_specs();

BuiltEntry build_entry(const std::string& name,
                       const std::map<std::string, std::string>& params,
                       std::uint64_t seed) {
  const auto& specs = entry_specs();
  auto it = specs.find(name);
  if (it == specs.end()) throw UnknownEntry("no catalog entry named " + name);
  reject_unknown_params(name, params, it->second.defaults);
  BuiltEntry e = it->second.build(params, seed);
  e.name = name;
  e.description = it->second.description;
  return e;
}

BuiltEntry build_conformal(const std::map<std::string, std::string>& params,
                           std::uint64_t seed) {
  std::map<std::string, std::string> defaults = {{"base", "pp_wave"},
                                                 {"sigma", "u"}};
  std::string base_name = param_or(params, defaults, "base");
  if (base_name == "conformal")
    throw BadParameter("base must name a different entry");
  BuiltEntry base = build_entry(base_name, {}, seed);
  if (!base.metric)
    throw BadParameter("base must name an entry that carries a metric");
  const Chart& chart = base.metric->chart();
  std::set<std::string> symbols(chart.coords().begin(), chart.coords().end());
  // The factor must not depend on the v coordinate or the Kundt property
  // is not preserved; parsing without it enforces that for role-carrying
  // bases.
  if (base.roles) symbols.erase(base.roles->v);
  Expr sigma = parse_over(param_or(params, defaults, "sigma"), symbols, "sigma");
  Metric g = conformal_rescale(*base.metric, sigma, nullptr,
                               base.roles ? &*base.roles : nullptr);
  ZeroTestOptions merged = g.zero_options();
  merged.box = chart.default_box();
  bool trivial = is_zero(sigma, merged);
  BuiltEntry e;
  e.metric = g;
  e.field = base.field;
  e.roles = base.roles;
  e.params = {{"base", base_name}, {"sigma", print(sigma)}};
  e.expect.kundt = base.expect.kundt;
  e.expect.locally_kundt = base.expect.locally_kundt;
  e.expect.twist_free = base.expect.twist_free;
  if (base.roles) {
    e.expect.space_class =
        trivial ? base.expect.space_class
                : std::optional<SpaceClass>(SpaceClass::NotAdapted);
    if (trivial) e.expect.leaf_flat = base.expect.leaf_flat;
  }
  return e;
}

const std::map<std::string, EntrySpec>& entry_specs() {
  static const std::map<std::string, EntrySpec> specs = {
      {"minkowski",
       {"flat space in lightlike coordinates", {{"dim", "4"}}, build_minkowski}},
      {"pp_wave",
       {"brinkmann metric with flat transverse block", {{"H", "x1^3"}},
        build_pp_wave}},
      {"plane_wave",
       {"quadratic profile from a symmetric matrix S(u)", {{"S", "u,0;0,0"}},
        build_plane_wave}},
      {"cahen_wallach",
       {"constant nondegenerate quadratic profile", {{"S", "1,0;0,1"}},
        build_cahen_wallach}},
      {"siklos",
       {"profile over the scaled half-space presentation", {{"H", "x1"}},
        build_siklos}},
      {"ads_poincare",
       {"anti-de sitter space in half-space coordinates", {{"dim", "4"}},
        build_ads_poincare}},
      {"kundt_generic",
       {"adapted form with v-dependent profile and cross terms",
        {{"H", "v^2+x1"}, {"W", "v*x1,0"}, {"h", "1,0;0,1"}},
        build_kundt_generic}},
      {"suspension_local",
       {"frame-built metric for a scaled suspension", {{"lambda", "2"}},
        build_suspension_local}},
      {"conformal",
       {"conformal rescaling of another catalog metric",
        {{"base", "pp_wave"}, {"sigma", "u"}}, build_conformal}},
      {"twisting_minkowski",
       {"lightlike field on flat space with twist", {}, build_twisting_minkowski}},
      {"heis3",
       {"heisenberg algebra with a lightlike central direction", {},
        build_heis3}},
      {"oscillator",
       {"oscillator algebra with its standard lorentzian form", {},
        build_oscillator}},
      {"r_ltimes_heis",
       {"heisenberg algebra extended by a derivation",
        {{"A", "1,0,0;0,0,0;0,0,1"}}, build_r_ltimes_heis}},
      {"sl2_det",
       {"sl(2,R) with the bi-invariant determinant form", {}, build_sl2_det}}};
  return specs;
}

const std::vector<std::string>& roster_order() {
  static const std::vector<std::string> order = {
      "minkowski",      "pp_wave",   "plane_wave",    "cahen_wallach",
      "siklos",         "ads_poincare", "kundt_generic", "suspension_local",
      "conformal",      "twisting_minkowski", "heis3", "oscillator",
      "r_ltimes_heis",  "sl2_det"};
  return order;
}

void compare_flag(std::vector<std::string>& fails, const char* label,
                  const std::optional<bool>& expected, bool actual) {
  if (!expected) return;
  if (*expected != actual)
    fails.push_back(std::string(label) + ": expected " +
                    (*expected ? "true" : "false") + ", got " +
                    (actual ? "true" : "false"));
}

RunRow check_entry(const BuiltEntry& e, std::uint64_t seed) {
  std::vector<std::string> fails;
  std::string summary;
  if (e.metric && e.field) {
    CongruenceReport rep = analyze(*e.metric, *e.field);
    compare_flag(fails, "kundt", e.expect.kundt, rep.kundt);
    compare_flag(fails, "locally_kundt", e.expect.locally_kundt,
                 rep.locally_kundt);
    compare_flag(fails, "twist_free", e.expect.twist_free, rep.twist_free);
    summary = std::string("kundt=") + (rep.kundt ? "true" : "false");
    if (e.roles) {
      Classification cls = classify_metric(*e.metric, *e.roles);
      if (e.expect.space_class && *e.expect.space_class != cls.most_specific)
        fails.push_back(std::string("class: expected ") +
                        space_class_name(*e.expect.space_class) + ", got " +
                        space_class_name(cls.most_specific));
      if (e.expect.leaf_flat && cls.leaf_flat &&
          *e.expect.leaf_flat != *cls.leaf_flat)
        fails.push_back(std::string("leaf_flat: expected ") +
                        (*e.expect.leaf_flat ? "true" : "false") + ", got " +
                        (*cls.leaf_flat ? "true" : "false"));
      if (e.expect.leaf_flat && !cls.leaf_flat)
        fails.push_back("leaf_flat: expected a value, got none");
      summary += std::string(", class=") + space_class_name(cls.most_specific);
    }
  }
  if (e.algebra && e.ip && e.algebra_v) {
    AlgebraicReport rep = analyze_algebraic(*e.algebra, *e.ip, *e.algebra_v);
    compare_flag(fails, "algebraic_kundt", e.expect.algebraic_kundt,
                 rep.algebraic_kundt);
    bool sampled = sample_group_check(*e.algebra, *e.ip, *e.algebra_v, 25, seed);
    if (!sampled) fails.push_back("group samples: conjugated field failed");
    summary = std::string("algebraic_kundt=") +
              (rep.algebraic_kundt ? "true" : "false");
  }
  RunRow row;
  row.name = e.name;
  row.pass = fails.empty();
  if (row.pass) {
    row.detail = summary;
  } else {
    for (std::size_t i = 0; i < fails.size(); ++i) {
      if (i) row.detail += "; ";
      row.detail += fails[i];
    }
  }
  return row;
}

}  // namespace

const std::vector<CatalogInfo>& catalog_roster() {
  static const std::vector<CatalogInfo> roster = [] {
    std::vector<CatalogInfo> out;
    for (const std::string& name : roster_order()) {
      const EntrySpec& spec = entry_specs().at(name);
      out.push_back(CatalogInfo{name, spec.description, spec.defaults});
    }
    return out;
  }();
  return roster;
}

BuiltEntry get(const std::string& name,
               const std::map<std::string, std::string>& params,
               std::uint64_t seed) {
  return build_entry(name, params, seed);
}

RunSummary run_all(std::uint64_t seed) {
  const auto& order = roster_order();
  RunSummary summary;
  summary.rows.resize(order.size());
  // Entries are independent; rows land at fixed indices so the aggregate
  // is deterministic regardless of scheduling.
  int count = static_cast<int>(order.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    RunRow row;
    row.name = order[i];
    try {
      BuiltEntry e = build_entry(order[i], {}, seed);
      row = check_entry(e, seed);
    } catch (const std::exception& ex) {
      row.pass = false;
      row.detail = std::string("exception: ") + ex.what();
    }
    summary.rows[static_cast<std::size_t>(i)] = row;
  }
  summary.all_pass = true;
  for (const RunRow& row : summary.rows)
    if (!row.pass) summary.all_pass = false;
  return summary;
}

}  // namespace kundt
