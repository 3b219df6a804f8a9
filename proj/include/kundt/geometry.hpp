#pragma once

#include <vector>

#include "kundt/chart.hpp"
#include "kundt/expr.hpp"
#include "kundt/zerotest.hpp"

namespace kundt {

using ExprMatrix = std::vector<std::vector<Expr>>;

struct VectorField {
  std::vector<Expr> comps;
};

ExprMatrix expr_matrix_zero(size_t n);
ExprMatrix expr_matrix_identity(size_t n);

// Determinant by cofactor expansion; intended for dimension <= 6.
Expr matrix_determinant(const ExprMatrix& m);

// Adjugate over determinant. Throws DegenerateMetric when the determinant
// is identically zero.
ExprMatrix invert_matrix(const ExprMatrix& m, const ZeroTestOptions& opt);

std::vector<std::vector<double>> eval_matrix(const ExprMatrix& m, const EvalPoint& pt);

// A pseudo-Riemannian metric on a chart: symmetric Expr entries with a
// nowhere-vanishing determinant and Lorentzian signature (-,+,...,+) at the
// base point. The inverse (adjugate over determinant) is computed once.
class Metric {
 public:
  Metric(Chart chart, ExprMatrix components, const ZeroTestOptions& opt = {});

  const Chart& chart() const { return chart_; }
  size_t dim() const { return chart_.dim(); }
  const ExprMatrix& components() const { return g_; }
  const ExprMatrix& inverse() const { return ginv_; }
  const Expr& determinant() const { return det_; }

  // Zero-test options bound to this metric's chart box.
  ZeroTestOptions zero_options() const;
  std::uint64_t seed() const { return seed_; }

 private:
  Chart chart_;
  ExprMatrix g_;
  ExprMatrix ginv_;
  Expr det_;
  std::uint64_t seed_;
  DomainBox box_;
};

// Christoffel symbols of the Levi-Civita connection. Gamma[k][i][j] is the
// coefficient of the k-th coordinate field in the derivative of the j-th
// along the i-th; symmetric in (i, j).
struct Christoffel {
  std::vector<ExprMatrix> Gamma;
};

Christoffel christoffel(const ExprMatrix& g, const ExprMatrix& ginv,
                        const std::vector<std::string>& coords);
Christoffel christoffel(const Metric& g);

// Curvature tensor R[l][k][i][j]: the l-th component of R(d_i, d_j) d_k.
using Tensor4 = std::vector<std::vector<ExprMatrix>>;
Tensor4 riemann(const Christoffel& ch, const std::vector<std::string>& coords);

// Fully lowered curvature R_{a k i j} = g_{a l} R^l_{k i j}.
Tensor4 lower_riemann(const ExprMatrix& g, const Tensor4& R);

// (nabla_X Y)^k = X^i d_i Y^k + Gamma^k_{ij} X^i Y^j.
VectorField covariant_derivative(const Christoffel& ch, const std::vector<std::string>& coords,
                                 const VectorField& X, const VectorField& Y);

VectorField lie_bracket(const std::vector<std::string>& coords, const VectorField& X,
                        const VectorField& Y);

// (L_X g)_{ij} = X^k d_k g_{ij} + g_{kj} d_i X^k + g_{ik} d_j X^k.
ExprMatrix lie_derivative_metric(const std::vector<std::string>& coords, const ExprMatrix& g,
                                 const VectorField& X);

bool is_killing(const Metric& g, const VectorField& X);

Expr metric_pairing(const ExprMatrix& g, const VectorField& X, const VectorField& Y);

// Checks the component count of a field against the chart dimension.
void require_same_chart(const Metric& g, const VectorField& X);

struct GeodesicResult {
  std::vector<double> times;
  std::vector<std::vector<double>> positions;
  std::vector<std::vector<double>> velocities;
  // max |g(v,v)(t) - g(v,v)(0)| over all steps.
  double max_norm_drift = 0;
};

// Classical fourth-order Runge-Kutta on (position, velocity) with the
// geodesic right-hand side. Throws EvalError if the curve leaves the region
// where the metric evaluates.
GeodesicResult integrate_geodesic(const Metric& g, const EvalPoint& start,
                                  const std::vector<double>& velocity, double t_end, int steps);

struct FlowResult {
  std::vector<double> times;
  std::vector<std::vector<double>> positions;
};

// Integral curve of a vector field from a start point, same integrator.
FlowResult integrate_flow(const Chart& chart, const VectorField& X, const EvalPoint& start,
                          double t_end, int steps);

}  // namespace kundt
