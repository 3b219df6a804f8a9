#include "kundt/hierarchy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <set>

#include "kundt/errors.hpp"

namespace kundt {

namespace {

struct RoleIndices {
  int u = -1;
  int v = -1;
  std::vector<int> x;  // transverse, in roles order
};

RoleIndices role_indices(const Chart& chart, const CoordinateRoles& roles) {
  RoleIndices idx;
  std::set<std::string> seen;
  auto lookup = [&](const std::string& name) {
    int i = chart.index_of(name);
    if (i < 0) throw BadParameter("role coordinate '" + name + "' is not a chart coordinate");
    if (!seen.insert(name).second)
      throw BadParameter("coordinate '" + name + "' assigned twice in roles");
    return i;
  };
  idx.u = lookup(roles.u);
  idx.v = lookup(roles.v);
  for (const auto& t : roles.transverse) idx.x.push_back(lookup(t));
  if (seen.size() != chart.dim()) throw BadParameter("roles must cover every chart coordinate");
  return idx;
}

Expr half_of(const Expr& e) { return simplify(Expr::div(e, Expr::integer(2))); }

ZeroTestOptions merged_options(const Chart& chart, const ZeroTestOptions& opt) {
  ZeroTestOptions zo = opt;
  DomainBox box = chart.default_box();
  for (const auto& kv : opt.box.ranges) box.ranges[kv.first] = kv.second;
  zo.box = box;
  return zo;
}

std::map<std::string, Expr> transverse_origin(const CoordinateRoles& roles) {
  std::map<std::string, Expr> at0;
  for (const auto& t : roles.transverse) at0[t] = Expr::integer(0);
  return at0;
}

}  // namespace

const char* space_class_name(SpaceClass c) {
  switch (c) {
    case SpaceClass::NotAdapted: return "NotAdapted";
    case SpaceClass::KundtForm: return "KundtForm";
    case SpaceClass::WeaklyBrinkmann: return "WeaklyBrinkmann";
    case SpaceClass::Brinkmann: return "Brinkmann";
    case SpaceClass::PpWave: return "PpWave";
    case SpaceClass::PlaneWave: return "PlaneWave";
    case SpaceClass::CahenWallach: return "CahenWallach";
    case SpaceClass::Siklos: return "Siklos";
  }
  return "NotAdapted";
}

AdaptedKundtForm detect_kundt_form(const Metric& g, const CoordinateRoles& roles) {
  const RoleIndices idx = role_indices(g.chart(), roles);
  const ZeroTestOptions opt = g.zero_options();
  const ExprMatrix& comp = g.components();
  const size_t n = idx.x.size();

  std::vector<std::string> failures;
  auto check_zero = [&](const Expr& e, const std::string& what) {
    if (!is_zero(e, opt)) failures.push_back(what);
  };
  check_zero(comp[idx.v][idx.v], "g(" + roles.v + "," + roles.v + ") does not vanish");
  for (size_t a = 0; a < n; ++a)
    check_zero(comp[idx.v][idx.x[a]],
               "g(" + roles.v + "," + roles.transverse[a] + ") does not vanish");
  check_zero(simplify(comp[idx.u][idx.v] - Expr::integer(1)),
             "g(" + roles.u + "," + roles.v + ") is not 1");
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a; b < n; ++b)
      check_zero(differentiate(comp[idx.x[a]][idx.x[b]], roles.v),
                 "g(" + roles.transverse[a] + "," + roles.transverse[b] + ") depends on " +
                     roles.v);
  if (!failures.empty()) throw NotAdapted(failures);

  AdaptedKundtForm f{g.chart(), roles, simplify(comp[idx.u][idx.u]), {}, {}};
  for (size_t a = 0; a < n; ++a)
    f.W.push_back(simplify(Expr::integer(2) * comp[idx.u][idx.x[a]]));
  f.h.assign(n, std::vector<Expr>(n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) f.h[a][b] = comp[idx.x[a]][idx.x[b]];
  return f;
}

Classification classify(const AdaptedKundtForm& f, const ZeroTestOptions& opt) {
  const ZeroTestOptions zo = merged_options(f.chart, opt);
  const size_t n = f.roles.transverse.size();

  Classification c;
  c.form = f;
  c.kundt_form = true;
  c.most_specific = SpaceClass::KundtForm;

  bool wb = true;
  for (const auto& w : f.W)
    if (!is_zero(differentiate(w, f.roles.v), zo)) {
      wb = false;
      break;
    }
  c.weakly_brinkmann = wb;
  if (wb) c.most_specific = SpaceClass::WeaklyBrinkmann;

  const bool br = wb && is_zero(differentiate(f.H, f.roles.v), zo);
  c.brinkmann = br;
  if (br) c.most_specific = SpaceClass::Brinkmann;

  bool pp = br;
  if (pp)
    for (const auto& w : f.W)
      if (!is_zero(w, zo)) {
        pp = false;
        break;
      }
  for (size_t a = 0; pp && a < n; ++a)
    for (size_t b = a; pp && b < n; ++b) {
      const Expr delta = Expr::integer(a == b ? 1 : 0);
      if (!is_zero(simplify(f.h[a][b] - delta), zo)) pp = false;
    }
  c.pp_wave = pp;
  if (pp) c.most_specific = SpaceClass::PpWave;

  bool pw = pp;
  if (pw) {
    std::vector<Expr> first(n);
    for (size_t a = 0; a < n; ++a) first[a] = differentiate(f.H, f.roles.transverse[a]);
    for (size_t a = 0; pw && a < n; ++a)
      for (size_t b = a; pw && b < n; ++b) {
        const Expr second = differentiate(first[a], f.roles.transverse[b]);
        for (size_t k = b; pw && k < n; ++k)
          if (!is_zero(differentiate(second, f.roles.transverse[k]), zo)) pw = false;
      }
    if (pw) {
      const auto at0 = transverse_origin(f.roles);
      bool affine_free = is_zero(substitute(f.H, at0), zo);
      for (size_t a = 0; affine_free && a < n; ++a)
        if (!is_zero(substitute(first[a], at0), zo)) affine_free = false;
      if (!affine_free) {
        pw = false;
        c.notes.push_back(
            "profile is quadratic with an affine part; "
            "affine part removable by coordinate change (not performed)");
      }
    }
  }
  c.plane_wave = pw;
  if (pw) {
    c.most_specific = SpaceClass::PlaneWave;
    const auto at0 = transverse_origin(f.roles);
    ExprMatrix S(n, std::vector<Expr>(n));
    for (size_t a = 0; a < n; ++a)
      for (size_t b = a; b < n; ++b) {
        const Expr dd = differentiate(differentiate(f.H, f.roles.transverse[a]),
                                      f.roles.transverse[b]);
        S[a][b] = S[b][a] = simplify(substitute(half_of(dd), at0));
      }
    c.plane_wave_profile = S;

    bool cw = n >= 1;
    for (size_t a = 0; cw && a < n; ++a)
      for (size_t b = a; cw && b < n; ++b)
        if (!is_zero(differentiate(S[a][b], f.roles.u), zo)) cw = false;
    if (cw && is_zero(matrix_determinant(S), zo)) cw = false;
    c.cahen_wallach = cw;
    if (cw) c.most_specific = SpaceClass::CahenWallach;
  }

  const Metric m = assemble_adapted_metric(f.chart, f.roles, f.H, f.W, f.h, opt);
  c.leaf_flat = leaf_curvature(m, f.roles).flat;
  return c;
}

SiklosDetection detect_siklos(const Metric& g, const CoordinateRoles& roles) {
  role_indices(g.chart(), roles);
  SiklosDetection out;
  if (roles.transverse.empty()) {
    out.notes.push_back("no transverse coordinate to rescale by");
    return out;
  }
  const std::string& xn = roles.transverse.back();
  const auto& cons = g.chart().constraints();
  const auto it = cons.find(xn);
  if (it == cons.end() || it->second.kind != Constraint::Kind::Positive) {
    out.notes.push_back("last transverse coordinate " + xn + " lacks a positivity constraint");
    return out;
  }

  const Expr factor = Expr::pow(Expr::symbol(xn), 2);
  ExprMatrix resc = g.components();
  for (auto& row : resc)
    for (auto& e : row) e = simplify(factor * e);
  const ZeroTestOptions opt = g.zero_options();
  const Metric rescaled(g.chart(), resc, opt);
  try {
    AdaptedKundtForm f = detect_kundt_form(rescaled, roles);
    const Classification c = classify(f, opt);
    if (c.pp_wave) {
      out.siklos = true;
      out.H = f.H;
      out.rescaled_form = std::move(f);
    } else {
      out.notes.push_back("rescaled metric is adapted but not a pp-wave (most specific: " +
                          std::string(space_class_name(c.most_specific)) + ")");
    }
  } catch (const NotAdapted& e) {
    out.notes.push_back("rescaled metric fails adapted detection: " + std::string(e.what()));
  }
  return out;
}

Classification classify_metric(const Metric& g, const CoordinateRoles& roles) {
  std::vector<std::string> direct_failures;
  try {
    const AdaptedKundtForm f = detect_kundt_form(g, roles);
    return classify(f, g.zero_options());
  } catch (const NotAdapted& e) {
    direct_failures = e.failures;
  }

  Classification c;
  for (const auto& msg : direct_failures) c.notes.push_back("adapted form: " + msg);
  const SiklosDetection s = detect_siklos(g, roles);
  if (s.siklos) {
    c.siklos = true;
    c.kundt_form = true;
    c.most_specific = SpaceClass::Siklos;
    c.siklos_form = s.rescaled_form;
    c.siklos_profile = s.H;
    c.notes.push_back("kundt class membership via the conformal presentation (" +
                      roles.transverse.back() + ")^2 g");
    c.leaf_flat = leaf_curvature(g, roles).flat;
  } else {
    for (const auto& msg : s.notes) c.notes.push_back("siklos: " + msg);
  }
  return c;
}

LeafCurvatureResult leaf_curvature(const Metric& g, const CoordinateRoles& roles) {
  const RoleIndices idx = role_indices(g.chart(), roles);
  const ZeroTestOptions opt = g.zero_options();

  LeafCurvatureResult res;
  res.leaf_coords.push_back(roles.v);
  for (const auto& t : roles.transverse) res.leaf_coords.push_back(t);
  std::vector<int> li;
  li.push_back(idx.v);
  for (int i : idx.x) li.push_back(i);
  const size_t m = li.size();

  const Christoffel ch = christoffel(g);
  for (size_t a = 0; a < m; ++a)
    for (size_t b = a; b < m; ++b)
      if (!is_zero(ch.Gamma[idx.u][li[a]][li[b]], opt))
        throw NotTotallyGeodesic("restricted connection leaks along d_" + roles.u +
                                 " in the (" + res.leaf_coords[a] + "," + res.leaf_coords[b] +
                                 ") direction");

  Christoffel restricted;
  restricted.Gamma.assign(m, ExprMatrix(m, std::vector<Expr>(m)));
  for (size_t k = 0; k < m; ++k)
    for (size_t a = 0; a < m; ++a)
      for (size_t b = 0; b < m; ++b) restricted.Gamma[k][a][b] = ch.Gamma[li[k]][li[a]][li[b]];

  res.curvature = riemann(restricted, res.leaf_coords);
  res.flat = true;
  for (const auto& block : res.curvature)
    for (const auto& mat : block)
      for (const auto& row : mat)
        for (const auto& e : row)
          if (!is_zero(e, opt)) {
            res.flat = false;
            return res;
          }
  return res;
}

LeafCurvatureResult leaf_curvature(const AdaptedKundtForm& f, const Metric& g) {
  return leaf_curvature(g, f.roles);
}

Metric conformal_rescale(const Metric& g, const Expr& sigma, std::vector<std::string>* warnings,
                         const CoordinateRoles* roles) {
  std::set<std::string> syms;
  collect_symbols(sigma, syms);
  for (const auto& s : syms)
    if (g.chart().index_of(s) < 0)
      throw BadParameter("conformal factor uses unknown symbol '" + s + "'");

  if (warnings) {
    std::string vname;
    if (roles)
      vname = roles->v;
    else if (g.chart().index_of("v") >= 0)
      vname = "v";
    if (!vname.empty() && !is_zero(differentiate(sigma, vname), g.zero_options()))
      warnings->push_back("conformal factor depends on " + vname +
                          "; the rescaled metric can leave the kundt class");
  }

  const Expr factor = Expr::exp_of(sigma);
  ExprMatrix out = g.components();
  for (auto& row : out)
    for (auto& e : row) e = simplify(factor * e);
  return Metric(g.chart(), out, g.zero_options());
}

Metric build_kundt_metric(const Chart& chart, const VectorField& V,
                          const std::vector<VectorField>& E, const VectorField& Z,
                          const ExprMatrix& h_frame, const ZeroTestOptions& opt) {
  const size_t d = chart.dim();
  const size_t n = d - 2;
  if (E.size() != n)
    throw BadParameter("expected " + std::to_string(n) + " screen fields for dimension " +
                       std::to_string(d));
  auto check_field = [&](const VectorField& X, const char* which) {
    if (X.comps.size() != d)
      throw BadParameter(std::string(which) + " must have one component per chart coordinate");
  };
  check_field(V, "V");
  check_field(Z, "Z");
  for (const auto& e : E) check_field(e, "each screen field");
  if (h_frame.size() != n + 1)
    throw BadParameter("h must be (d-1)x(d-1) over the frame (V, E)");
  for (const auto& row : h_frame)
    if (row.size() != n + 1) throw BadParameter("h must be (d-1)x(d-1) over the frame (V, E)");

  const ZeroTestOptions zo = merged_options(chart, opt);
  for (size_t j = 0; j <= n; ++j)
    if (!is_zero(h_frame[0][j], zo) || !is_zero(h_frame[j][0], zo))
      throw FrameDegenerate("h(V, .) must vanish: the radical must contain the lightlike field");
  if (n > 0) {
    Eigen::MatrixXd hb(n, n);
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b)
        hb(static_cast<int>(a), static_cast<int>(b)) =
            eval(h_frame[a + 1][b + 1], chart.base_point());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (hb + hb.transpose()));
    if (es.eigenvalues().minCoeff() <= 1e-10)
      throw FrameDegenerate(
          "h must be positive definite on the screen span at the base point "
          "(radical larger than the lightlike line)");
  }

  ExprMatrix F(d, std::vector<Expr>(d));
  for (size_t i = 0; i < d; ++i) {
    F[i][0] = V.comps[i];
    for (size_t a = 0; a < n; ++a) F[i][1 + a] = E[a].comps[i];
    F[i][d - 1] = Z.comps[i];
  }
  Eigen::MatrixXd Fb(static_cast<int>(d), static_cast<int>(d));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      Fb(static_cast<int>(i), static_cast<int>(j)) = eval(F[i][j], chart.base_point());
  if (std::abs(Fb.determinant()) <= 1e-10)
    throw FrameDegenerate("frame fields are linearly dependent at the base point");

  ExprMatrix Finv;
  try {
    Finv = invert_matrix(F, zo);
  } catch (const DegenerateMetric&) {
    throw FrameDegenerate("frame matrix is singular");
  }

  ExprMatrix G = expr_matrix_zero(d);
  for (size_t a = 0; a <= n; ++a)
    for (size_t b = 0; b <= n; ++b) G[a][b] = h_frame[a][b];
  G[0][d - 1] = G[d - 1][0] = Expr::integer(1);

  ExprMatrix g(d, std::vector<Expr>(d));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = i; j < d; ++j) {
      std::vector<Expr> terms;
      for (size_t a = 0; a < d; ++a)
        for (size_t b = 0; b < d; ++b) {
          if (G[a][b].is_zero_literal()) continue;
          terms.push_back(Finv[a][i] * G[a][b] * Finv[b][j]);
        }
      g[i][j] = g[j][i] = simplify(Expr::add(std::move(terms)));
    }

  const Metric m(chart, g, opt);
  const CongruenceReport rep = analyze(m, V);
  if (!rep.locally_kundt)
    throw PostVerificationFailed(
        "assembled metric is not locally kundt; the flow condition on the frame data fails");
  return m;
}

Metric assemble_adapted_metric(const Chart& chart, const CoordinateRoles& roles, const Expr& H,
                               const std::vector<Expr>& W, const ExprMatrix& h,
                               const ZeroTestOptions& opt) {
  const RoleIndices idx = role_indices(chart, roles);
  const size_t n = idx.x.size();
  if (W.size() != n) throw BadParameter("W must have one entry per transverse coordinate");
  if (h.size() != n) throw BadParameter("h must be n x n over the transverse coordinates");
  for (const auto& row : h)
    if (row.size() != n) throw BadParameter("h must be n x n over the transverse coordinates");

  ExprMatrix g = expr_matrix_zero(chart.dim());
  g[idx.u][idx.u] = simplify(H);
  g[idx.u][idx.v] = g[idx.v][idx.u] = Expr::integer(1);
  for (size_t a = 0; a < n; ++a) g[idx.u][idx.x[a]] = g[idx.x[a]][idx.u] = half_of(W[a]);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) g[idx.x[a]][idx.x[b]] = simplify(h[a][b]);
  return Metric(chart, g, opt);
}

}  // namespace kundt
