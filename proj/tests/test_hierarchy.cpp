#include <string>
#include <vector>

#include "doctest.h"
#include "kundt/catalog.hpp"
#include "kundt/congruence.hpp"
#include "kundt/errors.hpp"
#include "kundt/hierarchy.hpp"
#include "kundt/numeric.hpp"

using namespace kundt;

namespace {

ZeroTestOptions chart_options(const Metric& g) {
  ZeroTestOptions opt = g.zero_options();
  opt.box = g.chart().default_box();
  return opt;
}

CoordinateRoles uvx_roles(std::size_t n) {
  CoordinateRoles roles;
  roles.u = "u";
  roles.v = "v";
  for (std::size_t i = 0; i < n; ++i)
    roles.transverse.push_back("x" + std::to_string(i + 1));
  return roles;
}

Chart uvx_chart(std::size_t n, std::map<std::string, Constraint> constraints = {},
                std::map<std::string, double> base_overrides = {}) {
  std::vector<std::string> coords = {"u", "v"};
  for (std::size_t i = 0; i < n; ++i)
    coords.push_back("x" + std::to_string(i + 1));
  EvalPoint base;
  for (const std::string& c : coords) base[c] = 0.0;
  for (const auto& [name, value] : base_overrides) base[name] = value;
  return Chart(coords, std::move(constraints), base);
}

// 2 du dv + H du^2 + sum W_i du dx_i + h_ij dx_i dx_j on the plain chart.
Metric adapted(std::size_t n, const char* H_text,
               const std::vector<const char*>& W_text = {},
               const std::vector<std::vector<const char*>>& h_text = {}) {
  Chart chart = uvx_chart(n);
  SymbolTable table = chart.symbol_table();
  ExprMatrix g = expr_matrix_zero(n + 2);
  g[0][0] = parse(H_text, table);
  g[0][1] = g[1][0] = Expr::integer(1);
  for (std::size_t a = 0; a < n; ++a) {
    Expr w = W_text.empty() ? Expr::integer(0) : parse(W_text[a], table);
    g[0][2 + a] = g[2 + a][0] = simplify(Expr::div(w, Expr::integer(2)));
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      g[2 + a][2 + b] = h_text.empty() ? (a == b ? Expr::integer(1) : Expr::integer(0))
                                       : parse(h_text[a][b], table);
  return Metric(chart, g);
}

bool notes_mention(const std::vector<std::string>& notes, const std::string& needle) {
  for (const auto& n : notes)
    if (n.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("detection reads off the profile of the flat metric") {
  BuiltEntry entry = get("minkowski");
  AdaptedKundtForm f = detect_kundt_form(*entry.metric, *entry.roles);
  ZeroTestOptions opt = chart_options(*entry.metric);
  CHECK(is_zero(f.H, opt));
  REQUIRE(f.W.size() == 2);
  for (const Expr& w : f.W) CHECK(is_zero(w, opt));
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      Expr want = a == b ? Expr::integer(1) : Expr::integer(0);
      CHECK(is_zero(simplify(f.h[a][b] - want), opt));
    }
}

TEST_CASE("detection and assembly are mutually inverse") {
  for (std::string name : {"pp_wave", "plane_wave", "kundt_generic"}) {
    CAPTURE(name);
    BuiltEntry entry = get(name);
    Metric g = *entry.metric;
    ZeroTestOptions opt = chart_options(g);
    AdaptedKundtForm f = detect_kundt_form(g, *entry.roles);
    Metric back = assemble_adapted_metric(f.chart, f.roles, f.H, f.W, f.h);
    REQUIRE(back.dim() == g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i)
      for (std::size_t j = 0; j < g.dim(); ++j)
        CHECK(is_zero(simplify(back.components()[i][j] - g.components()[i][j]), opt));
  }
}

TEST_CASE("detection lists every violated structural condition") {
  Chart chart = uvx_chart(1);
  SymbolTable table = chart.symbol_table();
  CoordinateRoles roles = uvx_roles(1);

  // g(v,v) nonzero.
  {
    ExprMatrix m = expr_matrix_zero(3);
    m[0][1] = m[1][0] = Expr::integer(1);
    m[1][1] = parse("v", table);
    m[2][2] = Expr::integer(1);
    Metric g(chart, m);
    bool threw = false;
    try {
      detect_kundt_form(g, roles);
    } catch (const NotAdapted& e) {
      threw = true;
      CHECK(notes_mention(e.failures, "g(v,v)"));
    }
    CHECK(threw);
  }

  // g(u,v) not normalized.
  {
    ExprMatrix m = expr_matrix_zero(3);
    m[0][1] = m[1][0] = Expr::integer(2);
    m[2][2] = Expr::integer(1);
    Metric g(chart, m);
    bool threw = false;
    try {
      detect_kundt_form(g, roles);
    } catch (const NotAdapted& e) {
      threw = true;
      CHECK(notes_mention(e.failures, "g(u,v) is not 1"));
    }
    CHECK(threw);
  }

  // Transverse block depending on v, plus a nonzero g(v,x) pairing: both
  // conditions must be reported, not just the first one found.
  {
    ExprMatrix m = expr_matrix_zero(3);
    m[0][1] = m[1][0] = Expr::integer(1);
    m[1][2] = m[2][1] = parse("u", table);
    m[2][2] = parse("1 + v^2", table);
    Metric g(chart, m);
    bool threw = false;
    try {
      detect_kundt_form(g, roles);
    } catch (const NotAdapted& e) {
      threw = true;
      CHECK(e.failures.size() >= 2);
      CHECK(notes_mention(e.failures, "depends on v"));
      CHECK(notes_mention(e.failures, "g(v,x1)"));
    }
    CHECK(threw);
  }
}

TEST_CASE("classification respects the inclusion chain") {
  struct Row {
    const char* name;
    SpaceClass want;
  };
  const std::vector<Row> rows = {
      {"minkowski", SpaceClass::PlaneWave},
      {"pp_wave", SpaceClass::PpWave},
      {"plane_wave", SpaceClass::PlaneWave},
      {"cahen_wallach", SpaceClass::CahenWallach},
      {"kundt_generic", SpaceClass::KundtForm},
      {"siklos", SpaceClass::Siklos},
      {"ads_poincare", SpaceClass::Siklos},
  };
  for (const Row& row : rows) {
    CAPTURE(row.name);
    BuiltEntry entry = get(row.name);
    Classification c = classify_metric(*entry.metric, *entry.roles);
    CHECK(c.most_specific == row.want);
    // Monotonicity: each flag implies the one before it.
    CHECK((!c.weakly_brinkmann || c.kundt_form));
    CHECK((!c.brinkmann || c.weakly_brinkmann));
    CHECK((!c.pp_wave || c.brinkmann));
    CHECK((!c.plane_wave || c.pp_wave));
    CHECK((!c.cahen_wallach || c.plane_wave));
    CHECK((!c.siklos || c.kundt_form));
  }
}

TEST_CASE("parallel lightlike field forces the connection to drop v-rows") {
  // Brinkmann means d_v is parallel: nabla_X d_v = 0, i.e. every
  // Christoffel symbol with a lower v index vanishes.
  for (std::string name : {"pp_wave", "plane_wave", "cahen_wallach"}) {
    CAPTURE(name);
    BuiltEntry entry = get(name);
    Metric g = *entry.metric;
    ZeroTestOptions opt = chart_options(g);
    Classification c = classify_metric(g, *entry.roles);
    REQUIRE(c.brinkmann);
    Christoffel gamma = christoffel(g);
    const std::size_t v_index = 1;  // catalog charts order (u, v, x...)
    for (std::size_t k = 0; k < g.dim(); ++k)
      for (std::size_t i = 0; i < g.dim(); ++i)
        CHECK(is_zero(gamma.Gamma[k][i][v_index], opt));
  }
}

TEST_CASE("v-linear wave profile is weakly brinkmann but not brinkmann") {
  Metric g = adapted(1, "v * x1");
  Classification c = classify_metric(g, uvx_roles(1));
  CHECK(c.kundt_form);
  CHECK(c.weakly_brinkmann);
  CHECK_FALSE(c.brinkmann);
  CHECK(c.most_specific == SpaceClass::WeaklyBrinkmann);
  // And a v-dependent W with v-free H gives a bare Kundt form.
  Metric g2 = adapted(1, "x1^2", {"v"});
  Classification c2 = classify_metric(g2, uvx_roles(1));
  CHECK(c2.kundt_form);
  CHECK_FALSE(c2.weakly_brinkmann);
  CHECK(c2.most_specific == SpaceClass::KundtForm);
}

TEST_CASE("wave profile with surviving transverse coupling is brinkmann only") {
  Metric g = adapted(2, "x1^3", {"x2", "0"});
  Classification c = classify_metric(g, uvx_roles(2));
  CHECK(c.brinkmann);
  CHECK_FALSE(c.pp_wave);
  CHECK(c.most_specific == SpaceClass::Brinkmann);
}

TEST_CASE("plane wave profile matrix reproduces the quadratic form") {
  BuiltEntry entry = get("plane_wave", {{"S", "u, 0; 0, -1"}});
  Metric g = *entry.metric;
  ZeroTestOptions opt = chart_options(g);
  Classification c = classify_metric(g, *entry.roles);
  REQUIRE(c.plane_wave);
  CHECK_FALSE(c.cahen_wallach);  // S varies with u
  REQUIRE(c.plane_wave_profile.has_value());
  const ExprMatrix& S = *c.plane_wave_profile;
  REQUIRE(S.size() == 2);
  SymbolTable table = g.chart().symbol_table();
  Expr H = detect_kundt_form(g, *entry.roles).H;
  Expr quad = Expr::integer(0);
  std::vector<Expr> xs = {parse("x1", table), parse("x2", table)};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) quad = quad + S[i][j] * xs[i] * xs[j];
  CHECK(is_zero(simplify(H - quad), opt));
  CHECK(is_zero(simplify(S[0][0] - parse("u", table)), opt));
  CHECK(is_zero(simplify(S[1][1] + Expr::integer(1)), opt));
  CHECK(is_zero(S[0][1], opt));
}

TEST_CASE("constant nondegenerate profile upgrades to the homogeneous model") {
  BuiltEntry entry = get("plane_wave", {{"S", "1, 1/2; 1/2, -3"}});
  Classification c = classify_metric(*entry.metric, *entry.roles);
  CHECK(c.cahen_wallach);
  CHECK(c.most_specific == SpaceClass::CahenWallach);
  // Constant but singular S stays a plane wave.
  BuiltEntry degenerate = get("plane_wave", {{"S", "1, 0; 0, 0"}});
  Classification c2 = classify_metric(*degenerate.metric, *degenerate.roles);
  CHECK(c2.plane_wave);
  CHECK_FALSE(c2.cahen_wallach);
  CHECK(c2.most_specific == SpaceClass::PlaneWave);
}

TEST_CASE("two-dimensional adapted metric has no homogeneous upgrade") {
  // 2 du dv alone: every transverse condition is vacuous, but the
  // homogeneous model needs at least one transverse direction.
  Chart chart({"u", "v"}, {}, {{"u", 0.0}, {"v", 0.0}});
  ExprMatrix m = expr_matrix_zero(2);
  m[0][1] = m[1][0] = Expr::integer(1);
  Metric g(chart, m);
  CoordinateRoles roles;
  roles.u = "u";
  roles.v = "v";
  Classification c = classify_metric(g, roles);
  CHECK(c.plane_wave);
  CHECK_FALSE(c.cahen_wallach);
  CHECK(c.most_specific == SpaceClass::PlaneWave);
}

TEST_CASE("siklos detection needs the positivity constraint") {
  BuiltEntry entry = get("siklos");
  SiklosDetection det = detect_siklos(*entry.metric, *entry.roles);
  CHECK(det.siklos);
  REQUIRE(det.H.has_value());
  ZeroTestOptions opt = chart_options(*entry.metric);
  SymbolTable table = entry.metric->chart().symbol_table();
  CHECK(is_zero(simplify(*det.H - parse("x1", table)), opt));

  // Flat space on an unconstrained chart: the dividing coordinate has no
  // sign, so the detection must refuse.
  BuiltEntry mink = get("minkowski");
  SiklosDetection none = detect_siklos(*mink.metric, *mink.roles);
  CHECK_FALSE(none.siklos);
  CHECK_FALSE(none.notes.empty());

  // The constant-curvature model is the zero-profile case.
  BuiltEntry ads = get("ads_poincare");
  SiklosDetection zero = detect_siklos(*ads.metric, *ads.roles);
  CHECK(zero.siklos);
  REQUIRE(zero.H.has_value());
  CHECK(is_zero(*zero.H, chart_options(*ads.metric)));
}

TEST_CASE("leaf curvature separates flat and curved leaves") {
  BuiltEntry pp = get("pp_wave");
  LeafCurvatureResult flat = leaf_curvature(*pp.metric, *pp.roles);
  CHECK(flat.flat);
  REQUIRE(flat.leaf_coords.size() == 3);
  CHECK(flat.leaf_coords[0] == "v");

  BuiltEntry sik = get("siklos");
  LeafCurvatureResult curved = leaf_curvature(*sik.metric, *sik.roles);
  CHECK_FALSE(curved.flat);

  Classification cpp = classify_metric(*pp.metric, *pp.roles);
  REQUIRE(cpp.leaf_flat.has_value());
  CHECK(*cpp.leaf_flat);
  Classification csik = classify_metric(*sik.metric, *sik.roles);
  REQUIRE(csik.leaf_flat.has_value());
  CHECK_FALSE(*csik.leaf_flat);
}

TEST_CASE("leaf curvature refuses leaky foliations") {
  // g(v,x1) = u/2 makes nabla_{d_v} d_{x1} pick up a d_u component.
  Chart chart = uvx_chart(1);
  SymbolTable table = chart.symbol_table();
  ExprMatrix m = expr_matrix_zero(3);
  m[0][1] = m[1][0] = Expr::integer(1);
  m[1][2] = m[2][1] = simplify(Expr::div(parse("u", table), Expr::integer(2)));
  m[2][2] = Expr::integer(1);
  Metric g(chart, m);
  CHECK_THROWS_AS(leaf_curvature(g, uvx_roles(1)), NotTotallyGeodesic);
}

TEST_CASE("conformal rescaling by the inverse square recovers the wave profile") {
  // Start from a pp-wave living on x2 > 0 and divide by x2^2: the result
  // is exactly what the Siklos branch is built to undo.
  Chart chart = uvx_chart(2, {{"x2", Constraint::positive()}}, {{"x2", 1.0}});
  SymbolTable table = chart.symbol_table();
  ExprMatrix m = expr_matrix_zero(4);
  m[0][0] = parse("x1^3 + u^2", table);
  m[0][1] = m[1][0] = Expr::integer(1);
  m[2][2] = m[3][3] = Expr::integer(1);
  Metric g(chart, m);
  CoordinateRoles roles = uvx_roles(2);

  Metric scaled = conformal_rescale(g, parse("-2 * log(x2)", table));
  SiklosDetection det = detect_siklos(scaled, roles);
  CHECK(det.siklos);
  REQUIRE(det.H.has_value());
  ZeroTestOptions opt = chart_options(g);
  CHECK(is_zero(simplify(*det.H - m[0][0]), opt));
  Classification c = classify_metric(scaled, roles);
  CHECK(c.most_specific == SpaceClass::Siklos);
}

TEST_CASE("conformal rescaling edge cases") {
  BuiltEntry entry = get("pp_wave");
  const Metric& g = *entry.metric;
  SymbolTable table = g.chart().symbol_table();
  ZeroTestOptions opt = chart_options(g);

  // sigma = 0 is the identity.
  Metric same = conformal_rescale(g, Expr::integer(0));
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = 0; j < g.dim(); ++j)
      CHECK(is_zero(simplify(same.components()[i][j] - g.components()[i][j]), opt));

  // v-dependent factors are legal but warned about.
  std::vector<std::string> warnings;
  conformal_rescale(g, parse("v", table), &warnings, &*entry.roles);
  CHECK_FALSE(warnings.empty());
  warnings.clear();
  conformal_rescale(g, parse("u + x1", table), &warnings, &*entry.roles);
  CHECK(warnings.empty());
}

TEST_CASE("frame assembly reproduces the flat model exactly") {
  Chart chart = uvx_chart(1);
  VectorField V, E1, Z;
  V.comps = {Expr::integer(0), Expr::integer(1), Expr::integer(0)};
  E1.comps = {Expr::integer(0), Expr::integer(0), Expr::integer(1)};
  Z.comps = {Expr::integer(1), Expr::integer(0), Expr::integer(0)};
  ExprMatrix h_frame = expr_matrix_zero(2);
  h_frame[1][1] = Expr::integer(1);
  Metric g = build_kundt_metric(chart, V, {E1}, Z, h_frame);
  ZeroTestOptions opt = chart_options(g);
  ExprMatrix want = expr_matrix_zero(3);
  want[0][1] = want[1][0] = Expr::integer(1);
  want[2][2] = Expr::integer(1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(is_zero(simplify(g.components()[i][j] - want[i][j]), opt));
  CongruenceReport rep = analyze(g, V);
  CHECK(rep.locally_kundt);
}

TEST_CASE("frame assembly rejects broken frames") {
  Chart chart = uvx_chart(1);
  VectorField V, E1, Z;
  V.comps = {Expr::integer(0), Expr::integer(1), Expr::integer(0)};
  E1.comps = {Expr::integer(0), Expr::integer(0), Expr::integer(1)};
  Z.comps = {Expr::integer(1), Expr::integer(0), Expr::integer(0)};

  // Nonzero pairing against the radical direction.
  ExprMatrix bad_radical = expr_matrix_zero(2);
  bad_radical[0][0] = Expr::integer(1);
  bad_radical[1][1] = Expr::integer(1);
  CHECK_THROWS_AS(build_kundt_metric(chart, V, {E1}, Z, bad_radical),
                  FrameDegenerate);

  // Linearly dependent frame: E1 parallel to V.
  ExprMatrix h_frame = expr_matrix_zero(2);
  h_frame[1][1] = Expr::integer(1);
  CHECK_THROWS_AS(build_kundt_metric(chart, V, {V}, Z, h_frame), FrameDegenerate);

  // E block not positive definite at the base point.
  ExprMatrix negative = expr_matrix_zero(2);
  negative[1][1] = Expr::integer(-1);
  CHECK_THROWS_AS(build_kundt_metric(chart, V, {E1}, Z, negative),
                  FrameDegenerate);
}

TEST_CASE("frame assembly verifies the flow condition it promises") {
  // A v-dependent screen pairing breaks the leaf-invariance the
  // construction guarantees, so assembly must refuse rather than return.
  Chart chart = uvx_chart(1);
  SymbolTable table = chart.symbol_table();
  VectorField V, E1, Z;
  V.comps = {Expr::integer(0), Expr::integer(1), Expr::integer(0)};
  E1.comps = {Expr::integer(0), Expr::integer(0), Expr::integer(1)};
  Z.comps = {Expr::integer(1), Expr::integer(0), Expr::integer(0)};
  ExprMatrix h_frame = expr_matrix_zero(2);
  h_frame[1][1] = parse("1 + v^2", table);
  CHECK_THROWS_AS(build_kundt_metric(chart, V, {E1}, Z, h_frame),
                  PostVerificationFailed);
}

TEST_CASE("unrecognized metrics classify as not adapted with reasons") {
  Chart chart = uvx_chart(1);
  SymbolTable table = chart.symbol_table();
  ExprMatrix m = expr_matrix_zero(3);
  m[0][1] = m[1][0] = Expr::integer(1);
  m[1][1] = parse("v", table);
  m[2][2] = Expr::integer(1);
  Metric g(chart, m);
  Classification c = classify_metric(g, uvx_roles(1));
  CHECK(c.most_specific == SpaceClass::NotAdapted);
  CHECK_FALSE(c.kundt_form);
  CHECK(notes_mention(c.notes, "g(v,v)"));
}

TEST_CASE("classification of a detected form matches the metric entry point") {
  BuiltEntry entry = get("kundt_generic");
  Metric g = *entry.metric;
  AdaptedKundtForm f = detect_kundt_form(g, *entry.roles);
  Classification via_form = classify(f, chart_options(g));
  Classification via_metric = classify_metric(g, *entry.roles);
  CHECK(via_form.most_specific == via_metric.most_specific);
  CHECK(via_form.kundt_form == via_metric.kundt_form);
  CHECK(via_form.weakly_brinkmann == via_metric.weakly_brinkmann);
  CHECK(via_form.brinkmann == via_metric.brinkmann);
}
