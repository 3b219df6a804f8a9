#include "kundt/congruence.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "kundt/errors.hpp"

namespace kundt {

namespace {

VectorField basis_field(size_t d, size_t i) {
  VectorField f;
  f.comps.assign(d, Expr::integer(0));
  f.comps[i] = Expr::integer(1);
  return f;
}

VectorField combine(const VectorField& a, const Expr& c, const VectorField& b) {
  VectorField out;
  out.comps.resize(a.comps.size());
  for (size_t i = 0; i < a.comps.size(); ++i) out.comps[i] = simplify(a.comps[i] + c * b.comps[i]);
  return out;
}

double eval_at_base(const Metric& g, const Expr& e) { return eval(e, g.chart().base_point()); }

GeodesicCheck geodesic_impl(const Metric& g, const VectorField& V, const Christoffel& ch) {
  ZeroTestOptions opt = g.zero_options();
  VectorField acc = covariant_derivative(ch, g.chart().coords(), V, V);

  GeodesicCheck out;
  out.kappa = Expr::integer(0);
  bool all_zero = true;
  for (const auto& c : acc.comps)
    if (!is_zero(c, opt)) {
      all_zero = false;
      break;
    }
  if (all_zero) {
    out.geodesic = true;
    out.pregeodesic = true;
    return out;
  }

  // Try nabla_V V = kappa V: divide along the strongest component of V at
  // the base point, then check the residual.
  size_t r = 0;
  double best = -1;
  for (size_t i = 0; i < V.comps.size(); ++i) {
    double a = std::fabs(eval(V.comps[i], g.chart().base_point()));
    if (a > best) {
      best = a;
      r = i;
    }
  }
  if (best < 1e-12) return out;
  Expr kappa = simplify(Expr::div(acc.comps[r], V.comps[r]));
  for (size_t i = 0; i < V.comps.size(); ++i) {
    if (!is_zero(acc.comps[i] - kappa * V.comps[i], opt)) return out;
  }
  out.pregeodesic = true;
  out.kappa = kappa;
  return out;
}

OpticalData optical_impl(const NullCongruence& c, const Christoffel& ch) {
  const Metric& g = c.metric;
  ZeroTestOptions opt = g.zero_options();
  size_t n = c.screen.size();

  OpticalData out;
  out.B = expr_matrix_zero(n);
  out.gram = expr_matrix_zero(n);
  out.twist = expr_matrix_zero(n);
  out.shear = expr_matrix_zero(n);
  out.expansion = Expr::integer(0);

  out.advisory_not_geodesic = !geodesic_impl(g, c.V, ch).geodesic;

  if (n == 0) {
    out.twist_zero = true;
    out.shear_zero = true;
    out.expansion_zero = true;
    return out;
  }

  std::vector<VectorField> DV(n);
  for (size_t a = 0; a < n; ++a)
    DV[a] = covariant_derivative(ch, g.chart().coords(), c.screen[a], c.V);

  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      out.B[a][b] = metric_pairing(g.components(), DV[a], c.screen[b]);
      out.gram[a][b] = metric_pairing(g.components(), c.screen[a], c.screen[b]);
    }
  }

  ExprMatrix gram_inv = invert_matrix(out.gram, opt);
  std::vector<Expr> trace_terms;
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) trace_terms.push_back(gram_inv[a][b] * out.B[a][b]);
  out.expansion = simplify(Expr::add(std::move(trace_terms)));

  Expr half = Expr::number(Rational(1, 2));
  Expr theta_over_n = simplify(Expr::div(out.expansion, Expr::integer(static_cast<long>(n))));
  out.twist_zero = true;
  out.shear_zero = true;
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      out.twist[a][b] = simplify(half * (out.B[a][b] - out.B[b][a]));
      out.shear[a][b] =
          simplify(half * (out.B[a][b] + out.B[b][a]) - theta_over_n * out.gram[a][b]);
      if (!is_zero(out.twist[a][b], opt)) out.twist_zero = false;
      if (!is_zero(out.shear[a][b], opt)) out.shear_zero = false;
    }
  }
  out.expansion_zero = is_zero(out.expansion, opt);
  return out;
}

Item4Result item4_impl(const NullCongruence& c, const Christoffel& ch) {
  const Metric& g = c.metric;
  ZeroTestOptions opt = g.zero_options();

  Item4Result out;
  out.holds = true;

  auto check_direction = [&](const std::string& label, const VectorField& W, bool counts) {
    VectorField DV = covariant_derivative(ch, g.chart().coords(), W, c.V);
    Expr a = simplify(metric_pairing(g.components(), DV, c.U));
    out.alpha.emplace_back(label, a);
    if (!counts || !out.holds) return;
    for (size_t i = 0; i < g.dim(); ++i) {
      if (!is_zero(DV.comps[i] - a * c.V.comps[i], opt)) {
        out.holds = false;
        return;
      }
    }
  };

  check_direction("V", c.V, true);
  for (size_t a = 0; a < c.screen.size(); ++a)
    check_direction("E" + std::to_string(a + 1), c.screen[a], true);
  // U is transverse to V-perp; alpha(U) is reported for diagnostics only.
  check_direction("U", c.U, false);
  return out;
}

}  // namespace

NullCongruence build_congruence(const Metric& g, const VectorField& V) {
  require_same_chart(g, V);
  size_t d = g.dim();
  ZeroTestOptions opt = g.zero_options();

  if (!is_zero(metric_pairing(g.components(), V, V), opt))
    throw NotLightlike("g(V,V) does not vanish identically");

  double vmax = 0;
  for (const auto& c : V.comps) vmax = std::max(vmax, std::fabs(eval_at_base(g, c)));
  if (vmax < 1e-12) throw NotLightlike("field vanishes at the base point");

  // Covector omega_j = g(V, d_j).
  std::vector<Expr> omega(d);
  for (size_t j = 0; j < d; ++j) {
    std::vector<Expr> terms;
    for (size_t i = 0; i < d; ++i) terms.push_back(g.components()[i][j] * V.comps[i]);
    omega[j] = simplify(Expr::add(std::move(terms)));
  }

  // Pivot coordinate: largest |omega_p| at the base point.
  size_t p = 0;
  double best = -1;
  for (size_t j = 0; j < d; ++j) {
    double a = std::fabs(eval_at_base(g, omega[j]));
    if (a > best) {
      best = a;
      p = j;
    }
  }
  if (best < 1e-10)
    throw DegenerateAtBasePoint("the covector g(V,.) vanishes at the base point");

  // K_j = d_j - (omega_j/omega_p) d_p spans ker(omega) = V-perp for j != p.
  std::vector<VectorField> K(d);
  for (size_t j = 0; j < d; ++j) {
    if (j == p) continue;
    K[j] = basis_field(d, j);
    K[j].comps[p] = simplify(-Expr::div(omega[j], omega[p]));
  }

  // Direction q != p where V itself is visible at base, used to remove the
  // V-component from the remaining kernel fields.
  size_t q = d;
  double qbest = 1e-10;
  for (size_t j = 0; j < d; ++j) {
    if (j == p) continue;
    double a = std::fabs(eval_at_base(g, V.comps[j]));
    if (a > qbest) {
      qbest = a;
      q = j;
    }
  }
  if (q == d)
    throw DegenerateAtBasePoint("the field is parallel to the pivot direction at the base point");

  // U0 = d_p / omega_p pairs to 1 with V.
  VectorField U0;
  U0.comps.assign(d, Expr::integer(0));
  U0.comps[p] = simplify(Expr::div(Expr::integer(1), omega[p]));

  // Screen seeds: remove the V-direction from K_j, then make them
  // orthogonal to U0; finally null-correct U0.
  std::vector<VectorField> screen;
  for (size_t j = 0; j < d; ++j) {
    if (j == p || j == q) continue;
    VectorField S = combine(K[j], simplify(-Expr::div(V.comps[j], V.comps[q])), K[q]);
    Expr su = metric_pairing(g.components(), S, U0);
    VectorField T = combine(S, simplify(-su), V);
    screen.push_back(T);
  }
  Expr uu = metric_pairing(g.components(), U0, U0);
  VectorField U = combine(U0, simplify(Expr::number(Rational(-1, 2)) * uu), V);

  // Gram matrix must be positive definite at the base point.
  if (!screen.empty()) {
    size_t n = screen.size();
    Eigen::MatrixXd gram(n, n);
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b)
        gram(a, b) = eval_at_base(g, metric_pairing(g.components(), screen[a], screen[b]));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    for (int k = 0; k < static_cast<int>(n); ++k)
      if (solver.eigenvalues()(k) < 1e-10)
        throw FrameDegenerate("screen Gram matrix is not positive definite at the base point");
  }

  return NullCongruence{g, V, U, std::move(screen)};
}

GeodesicCheck is_geodesic_field(const Metric& g, const VectorField& V) {
  require_same_chart(g, V);
  return geodesic_impl(g, V, christoffel(g));
}

bool is_twist_free(const NullCongruence& c) {
  const Metric& g = c.metric;
  ZeroTestOptions opt = g.zero_options();
  std::vector<const VectorField*> frame;
  frame.push_back(&c.V);
  for (const auto& s : c.screen) frame.push_back(&s);
  for (size_t a = 0; a < frame.size(); ++a) {
    for (size_t b = a + 1; b < frame.size(); ++b) {
      VectorField br = lie_bracket(g.chart().coords(), *frame[a], *frame[b]);
      if (!is_zero(metric_pairing(g.components(), br, c.V), opt)) return false;
    }
  }
  return true;
}

OpticalData optical_scalars(const NullCongruence& c) {
  return optical_impl(c, christoffel(c.metric));
}

bool tg_item2(const NullCongruence& c) {
  if (!is_twist_free(c))
    throw RequiresIntegrability("V-perp is not integrable; no foliation to test");
  const Metric& g = c.metric;
  ZeroTestOptions opt = g.zero_options();
  ExprMatrix L = lie_derivative_metric(g.chart().coords(), g.components(), c.V);

  std::vector<const VectorField*> frame;
  frame.push_back(&c.V);
  for (const auto& s : c.screen) frame.push_back(&s);

  for (size_t a = 0; a < frame.size(); ++a) {
    for (size_t b = a; b < frame.size(); ++b) {
      std::vector<Expr> terms;
      for (size_t i = 0; i < g.dim(); ++i)
        for (size_t j = 0; j < g.dim(); ++j)
          terms.push_back(L[i][j] * frame[a]->comps[i] * frame[b]->comps[j]);
      if (!is_zero(Expr::add(std::move(terms)), opt)) return false;
    }
  }
  return true;
}

Item4Result tg_item4(const NullCongruence& c) { return item4_impl(c, christoffel(c.metric)); }

CongruenceReport analyze(const Metric& g, const VectorField& V) {
  require_same_chart(g, V);
  ZeroTestOptions opt = g.zero_options();
  CongruenceReport rep;

  rep.lightlike = is_zero(metric_pairing(g.components(), V, V), opt);
  if (!rep.lightlike) {
    rep.notes.push_back("field is not lightlike; no congruence analysis performed");
    return rep;
  }

  Christoffel ch = christoffel(g);
  GeodesicCheck gc = geodesic_impl(g, V, ch);
  rep.geodesic = gc.geodesic;
  rep.pregeodesic = gc.pregeodesic;
  if (gc.pregeodesic) rep.kappa = print(gc.kappa);

  NullCongruence c = build_congruence(g, V);
  rep.nonvanishing_at_base = true;
  rep.notes.push_back("field verified nonzero at the base point only");

  rep.twist_free = is_twist_free(c);

  OpticalData od = optical_impl(c, ch);
  rep.shear_free = od.shear_zero;
  rep.divergence_free = od.expansion_zero;
  if (od.advisory_not_geodesic)
    rep.notes.push_back("optical scalars computed for a non-geodesic field (advisory)");
  // The Frobenius test also covers brackets with V itself, which the screen
  // twist block cannot see; the two agree whenever V is pre-geodesic.
  if (rep.twist_free != od.twist_zero)
    rep.notes.push_back("integrability test and optical twist disagree (non-pre-geodesic field)");

  if (rep.twist_free) {
    rep.tg_item2 = tg_item2(c);
  } else {
    rep.notes.push_back("V-perp not integrable; leaf conditions undefined");
  }

  Item4Result i4 = item4_impl(c, ch);
  rep.tg_item4 = i4.holds;
  for (const auto& [label, a] : i4.alpha) rep.alpha.emplace_back(label, print(a));

  if (rep.twist_free && rep.tg_item2.has_value() && *rep.tg_item2 != rep.tg_item4)
    throw PostVerificationFailed("equivalent leaf conditions disagree on a twist-free congruence");

  rep.locally_kundt = rep.twist_free && rep.tg_item4;
  rep.kundt = rep.lightlike && rep.geodesic && rep.locally_kundt;
  return rep;
}

}  // namespace kundt
