#include "kundt/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "kundt/errors.hpp"

namespace kundt {

ExprMatrix expr_matrix_zero(size_t n) {
  return ExprMatrix(n, std::vector<Expr>(n, Expr::integer(0)));
}

ExprMatrix expr_matrix_identity(size_t n) {
  ExprMatrix m = expr_matrix_zero(n);
  for (size_t i = 0; i < n; ++i) m[i][i] = Expr::integer(1);
  return m;
}

namespace {

ExprMatrix minor_of(const ExprMatrix& m, size_t row, size_t col) {
  size_t n = m.size();
  ExprMatrix out;
  out.reserve(n - 1);
  for (size_t i = 0; i < n; ++i) {
    if (i == row) continue;
    std::vector<Expr> r;
    r.reserve(n - 1);
    for (size_t j = 0; j < n; ++j) {
      if (j == col) continue;
      r.push_back(m[i][j]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Expr matrix_determinant(const ExprMatrix& m) {
  size_t n = m.size();
  if (n == 0) return Expr::integer(1);
  if (n == 1) return m[0][0];
  std::vector<Expr> terms;
  for (size_t j = 0; j < n; ++j) {
    Expr cof = matrix_determinant(minor_of(m, 0, j));
    Expr term = m[0][j] * cof;
    terms.push_back(j % 2 == 0 ? term : -term);
  }
  return simplify(Expr::add(std::move(terms)));
}

ExprMatrix invert_matrix(const ExprMatrix& m, const ZeroTestOptions& opt) {
  size_t n = m.size();
  Expr det = matrix_determinant(m);
  if (is_zero(det, opt)) throw DegenerateMetric("matrix determinant is identically zero");
  ExprMatrix inv = expr_matrix_zero(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      Expr cof = matrix_determinant(minor_of(m, j, i));
      if ((i + j) % 2 == 1) cof = -cof;
      inv[i][j] = simplify(Expr::div(cof, det));
    }
  }
  return inv;
}

std::vector<std::vector<double>> eval_matrix(const ExprMatrix& m, const EvalPoint& pt) {
  std::vector<std::vector<double>> out(m.size(), std::vector<double>(m.size(), 0.0));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j) out[i][j] = eval(m[i][j], pt);
  return out;
}

Metric::Metric(Chart chart, ExprMatrix components, const ZeroTestOptions& opt)
    : chart_(std::move(chart)), g_(std::move(components)), seed_(opt.seed) {
  size_t d = chart_.dim();
  if (g_.size() != d) throw BadParameter("metric matrix size does not match chart dimension");
  for (const auto& row : g_)
    if (row.size() != d) throw BadParameter("metric matrix is not square");

  for (auto& row : g_)
    for (auto& e : row) e = simplify(e);

  box_ = chart_.default_box();
  for (const auto& [name, range] : opt.box.ranges) box_.ranges[name] = range;
  ZeroTestOptions zopt = zero_options();

  for (size_t i = 0; i < d; ++i)
    for (size_t j = i + 1; j < d; ++j)
      if (!is_zero(g_[i][j] - g_[j][i], zopt))
        throw BadParameter("metric entries are not symmetric at (" + chart_.coord(i) + "," +
                           chart_.coord(j) + ")");

  det_ = matrix_determinant(g_);
  if (is_zero(det_, zopt)) throw SingularMetric("metric determinant vanishes identically");

  // Signature at the base point.
  auto base_vals = eval_matrix(g_, chart_.base_point());
  Eigen::MatrixXd gb(d, d);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) gb(i, j) = base_vals[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gb);
  int neg = 0, pos = 0;
  for (int k = 0; k < static_cast<int>(d); ++k) {
    double ev = solver.eigenvalues()(k);
    if (std::fabs(ev) < 1e-10)
      throw SingularMetric("metric is degenerate at the base point");
    (ev < 0 ? neg : pos) += 1;
  }
  if (neg != 1)
    throw NotLorentzian("signature at base point is (-" + std::to_string(neg) + ",+" +
                        std::to_string(pos) + "), expected (-1,+" + std::to_string(d - 1) + ")");

  ginv_ = expr_matrix_zero(d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) {
      Expr cof = matrix_determinant(minor_of(g_, j, i));
      if ((i + j) % 2 == 1) cof = -cof;
      ginv_[i][j] = simplify(Expr::div(cof, det_));
    }
  }
}

ZeroTestOptions Metric::zero_options() const {
  ZeroTestOptions opt;
  opt.seed = seed_;
  opt.box = box_;
  return opt;
}

Christoffel christoffel(const ExprMatrix& g, const ExprMatrix& ginv,
                        const std::vector<std::string>& coords) {
  size_t d = coords.size();
  // dg[k][i][j] = d_k g_{ij}
  std::vector<ExprMatrix> dg(d, expr_matrix_zero(d));
  for (size_t k = 0; k < d; ++k)
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) dg[k][i][j] = differentiate(g[i][j], coords[k]);

  Christoffel ch;
  ch.Gamma.assign(d, expr_matrix_zero(d));
  Expr half = Expr::number(Rational(1, 2));
  for (size_t k = 0; k < d; ++k) {
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = i; j < d; ++j) {
        std::vector<Expr> terms;
        for (size_t l = 0; l < d; ++l) {
          Expr inner = dg[i][j][l] + dg[j][i][l] - dg[l][i][j];
          terms.push_back(ginv[k][l] * inner);
        }
        Expr val = simplify(half * Expr::add(std::move(terms)));
        ch.Gamma[k][i][j] = val;
        ch.Gamma[k][j][i] = val;
      }
    }
  }
  return ch;
}

Christoffel christoffel(const Metric& g) {
  return christoffel(g.components(), g.inverse(), g.chart().coords());
}

Tensor4 riemann(const Christoffel& ch, const std::vector<std::string>& coords) {
  size_t d = coords.size();
  Tensor4 R(d, std::vector<ExprMatrix>(d, expr_matrix_zero(d)));
  for (size_t l = 0; l < d; ++l) {
    for (size_t k = 0; k < d; ++k) {
      for (size_t i = 0; i < d; ++i) {
        for (size_t j = i + 1; j < d; ++j) {
          std::vector<Expr> terms;
          terms.push_back(differentiate(ch.Gamma[l][j][k], coords[i]));
          terms.push_back(-differentiate(ch.Gamma[l][i][k], coords[j]));
          for (size_t m = 0; m < d; ++m) {
            terms.push_back(ch.Gamma[l][i][m] * ch.Gamma[m][j][k]);
            terms.push_back(-(ch.Gamma[l][j][m] * ch.Gamma[m][i][k]));
          }
          Expr val = simplify(Expr::add(std::move(terms)));
          R[l][k][i][j] = val;
          R[l][k][j][i] = simplify(-val);
        }
      }
    }
  }
  return R;
}

Tensor4 lower_riemann(const ExprMatrix& g, const Tensor4& R) {
  size_t d = g.size();
  Tensor4 low(d, std::vector<ExprMatrix>(d, expr_matrix_zero(d)));
  for (size_t a = 0; a < d; ++a)
    for (size_t k = 0; k < d; ++k)
      for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
          std::vector<Expr> terms;
          for (size_t l = 0; l < d; ++l) terms.push_back(g[a][l] * R[l][k][i][j]);
          low[a][k][i][j] = simplify(Expr::add(std::move(terms)));
        }
  return low;
}

VectorField covariant_derivative(const Christoffel& ch, const std::vector<std::string>& coords,
                                 const VectorField& X, const VectorField& Y) {
  size_t d = coords.size();
  VectorField out;
  out.comps.resize(d);
  for (size_t k = 0; k < d; ++k) {
    std::vector<Expr> terms;
    for (size_t i = 0; i < d; ++i) {
      terms.push_back(X.comps[i] * differentiate(Y.comps[k], coords[i]));
      for (size_t j = 0; j < d; ++j)
        terms.push_back(ch.Gamma[k][i][j] * X.comps[i] * Y.comps[j]);
    }
    out.comps[k] = simplify(Expr::add(std::move(terms)));
  }
  return out;
}

VectorField lie_bracket(const std::vector<std::string>& coords, const VectorField& X,
                        const VectorField& Y) {
  size_t d = coords.size();
  VectorField out;
  out.comps.resize(d);
  for (size_t k = 0; k < d; ++k) {
    std::vector<Expr> terms;
    for (size_t i = 0; i < d; ++i) {
      terms.push_back(X.comps[i] * differentiate(Y.comps[k], coords[i]));
      terms.push_back(-(Y.comps[i] * differentiate(X.comps[k], coords[i])));
    }
    out.comps[k] = simplify(Expr::add(std::move(terms)));
  }
  return out;
}

ExprMatrix lie_derivative_metric(const std::vector<std::string>& coords, const ExprMatrix& g,
                                 const VectorField& X) {
  size_t d = coords.size();
  ExprMatrix out = expr_matrix_zero(d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = i; j < d; ++j) {
      std::vector<Expr> terms;
      for (size_t k = 0; k < d; ++k) {
        terms.push_back(X.comps[k] * differentiate(g[i][j], coords[k]));
        terms.push_back(g[k][j] * differentiate(X.comps[k], coords[i]));
        terms.push_back(g[i][k] * differentiate(X.comps[k], coords[j]));
      }
      Expr val = simplify(Expr::add(std::move(terms)));
      out[i][j] = val;
      out[j][i] = val;
    }
  }
  return out;
}

bool is_killing(const Metric& g, const VectorField& X) {
  require_same_chart(g, X);
  ExprMatrix L = lie_derivative_metric(g.chart().coords(), g.components(), X);
  ZeroTestOptions opt = g.zero_options();
  for (size_t i = 0; i < g.dim(); ++i)
    for (size_t j = i; j < g.dim(); ++j)
      if (!is_zero(L[i][j], opt)) return false;
  return true;
}

Expr metric_pairing(const ExprMatrix& g, const VectorField& X, const VectorField& Y) {
  std::vector<Expr> terms;
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) terms.push_back(g[i][j] * X.comps[i] * Y.comps[j]);
  return simplify(Expr::add(std::move(terms)));
}

void require_same_chart(const Metric& g, const VectorField& X) {
  if (X.comps.size() != g.dim())
    throw ChartMismatch("vector field has " + std::to_string(X.comps.size()) +
                        " components on a chart of dimension " + std::to_string(g.dim()));
}

namespace {

struct NumericGeometry {
  const Metric& g;
  std::vector<std::string> coords;
  const std::vector<ExprMatrix>& Gamma;

  EvalPoint point(const std::vector<double>& x) const {
    EvalPoint pt;
    for (size_t i = 0; i < coords.size(); ++i) pt[coords[i]] = x[i];
    return pt;
  }

  // dv^k = -Gamma^k_ij v^i v^j
  std::vector<double> acceleration(const std::vector<double>& x,
                                   const std::vector<double>& v) const {
    size_t d = coords.size();
    EvalPoint pt = point(x);
    std::vector<double> a(d, 0.0);
    for (size_t k = 0; k < d; ++k) {
      double s = 0;
      for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) s += eval(Gamma[k][i][j], pt) * v[i] * v[j];
      a[k] = -s;
    }
    return a;
  }

  double norm(const std::vector<double>& x, const std::vector<double>& v) const {
    size_t d = coords.size();
    EvalPoint pt = point(x);
    double s = 0;
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) s += eval(g.components()[i][j], pt) * v[i] * v[j];
    return s;
  }
};

}  // namespace

GeodesicResult integrate_geodesic(const Metric& g, const EvalPoint& start,
                                  const std::vector<double>& velocity, double t_end, int steps) {
  size_t d = g.dim();
  if (velocity.size() != d) throw BadParameter("initial velocity has wrong dimension");
  if (steps < 16) throw BadParameter("integrator needs at least 16 steps");
  if (!g.chart().contains(start)) throw BadParameter("start point violates chart constraints");

  Christoffel ch = christoffel(g);
  NumericGeometry num{g, g.chart().coords(), ch.Gamma};

  std::vector<double> x(d), v = velocity;
  for (size_t i = 0; i < d; ++i) x[i] = start.at(g.chart().coord(i));

  GeodesicResult out;
  double h = t_end / steps;
  double norm0 = num.norm(x, v);
  out.times.push_back(0);
  out.positions.push_back(x);
  out.velocities.push_back(v);

  auto axpy = [d](const std::vector<double>& a, double s, const std::vector<double>& b) {
    std::vector<double> r(d);
    for (size_t i = 0; i < d; ++i) r[i] = a[i] + s * b[i];
    return r;
  };

  for (int step = 0; step < steps; ++step) {
    auto k1x = v;
    auto k1v = num.acceleration(x, v);
    auto k2x = axpy(v, h / 2, k1v);
    auto k2v = num.acceleration(axpy(x, h / 2, k1x), axpy(v, h / 2, k1v));
    auto k3x = axpy(v, h / 2, k2v);
    auto k3v = num.acceleration(axpy(x, h / 2, k2x), axpy(v, h / 2, k2v));
    auto k4x = axpy(v, h, k3v);
    auto k4v = num.acceleration(axpy(x, h, k3x), axpy(v, h, k3v));
    for (size_t i = 0; i < d; ++i) {
      x[i] += h / 6 * (k1x[i] + 2 * k2x[i] + 2 * k3x[i] + k4x[i]);
      v[i] += h / 6 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
    }
    out.times.push_back(h * (step + 1));
    out.positions.push_back(x);
    out.velocities.push_back(v);
    double drift = std::fabs(num.norm(x, v) - norm0);
    if (drift > out.max_norm_drift) out.max_norm_drift = drift;
  }
  return out;
}

FlowResult integrate_flow(const Chart& chart, const VectorField& X, const EvalPoint& start,
                          double t_end, int steps) {
  size_t d = chart.dim();
  if (X.comps.size() != d) throw ChartMismatch("field dimension mismatch in flow integration");
  if (steps < 16) throw BadParameter("integrator needs at least 16 steps");

  auto rhs = [&](const std::vector<double>& x) {
    EvalPoint pt;
    for (size_t i = 0; i < d; ++i) pt[chart.coord(i)] = x[i];
    std::vector<double> r(d);
    for (size_t i = 0; i < d; ++i) r[i] = eval(X.comps[i], pt);
    return r;
  };

  std::vector<double> x(d);
  for (size_t i = 0; i < d; ++i) x[i] = start.at(chart.coord(i));

  FlowResult out;
  double h = t_end / steps;
  out.times.push_back(0);
  out.positions.push_back(x);

  auto axpy = [d](const std::vector<double>& a, double s, const std::vector<double>& b) {
    std::vector<double> r(d);
    for (size_t i = 0; i < d; ++i) r[i] = a[i] + s * b[i];
    return r;
  };

  for (int step = 0; step < steps; ++step) {
    auto k1 = rhs(x);
    auto k2 = rhs(axpy(x, h / 2, k1));
    auto k3 = rhs(axpy(x, h / 2, k2));
    auto k4 = rhs(axpy(x, h, k3));
    for (size_t i = 0; i < d; ++i) x[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    out.times.push_back(h * (step + 1));
    out.positions.push_back(x);
  }
  return out;
}

}  // namespace kundt
