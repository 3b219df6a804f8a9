#pragma once

// Independent numeric oracles for the symbolic geometry pipeline. These
// compute connection coefficients and curvature by finite differences on
// evaluated metric components, sharing nothing with the symbolic routines
// beyond pointwise expression evaluation.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "kundt/geometry.hpp"
#include "kundt/numeric.hpp"

namespace oracles {

using Mat = std::vector<std::vector<double>>;
using Ten3 = std::vector<Mat>;

inline Mat metric_at(const kundt::Metric& g, const kundt::EvalPoint& pt) {
  std::size_t d = g.dim();
  Mat m(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m[i][j] = kundt::eval(g.components()[i][j], pt);
  return m;
}

// Gauss-Jordan with partial pivoting; independent of the symbolic inverse.
inline Mat invert(Mat m) {
  std::size_t d = m.size();
  Mat inv(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    if (std::fabs(m[pivot][col]) < 1e-14)
      throw std::runtime_error("oracle: singular matrix");
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    double scale = m[col][col];
    for (std::size_t j = 0; j < d; ++j) {
      m[col][j] /= scale;
      inv[col][j] /= scale;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      double f = m[r][col];
      for (std::size_t j = 0; j < d; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// Central difference of every metric component along one coordinate.
inline Mat metric_partial(const kundt::Metric& g, const kundt::EvalPoint& pt,
                          const std::string& coord, double h) {
  kundt::EvalPoint hi = pt, lo = pt;
  hi[coord] += h;
  lo[coord] -= h;
  Mat a = metric_at(g, hi);
  Mat b = metric_at(g, lo);
  std::size_t d = g.dim();
  Mat out(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i][j] = (a[i][j] - b[i][j]) / (2 * h);
  return out;
}

// Gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij) from finite
// differences of the metric and a numeric inverse.
inline Ten3 christoffel_fd(const kundt::Metric& g, const kundt::EvalPoint& pt,
                           double h = 1e-5) {
  std::size_t d = g.dim();
  Mat ginv = invert(metric_at(g, pt));
  std::vector<Mat> dg;
  for (std::size_t c = 0; c < d; ++c)
    dg.push_back(metric_partial(g, pt, g.chart().coord(c), h));
  Ten3 gamma(d, Mat(d, std::vector<double>(d, 0.0)));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double sum = 0.0;
        for (std::size_t l = 0; l < d; ++l)
          sum += ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        gamma[k][i][j] = 0.5 * sum;
      }
  return gamma;
}

// R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_ie Gamma^e_jk
//         - Gamma^l_je Gamma^e_ik, with the derivative terms from nested
// finite differences of christoffel_fd.
inline std::vector<Ten3> riemann_fd(const kundt::Metric& g,
                                    const kundt::EvalPoint& pt,
                                    double h = 1e-4) {
  std::size_t d = g.dim();
  Ten3 gamma = christoffel_fd(g, pt, h);
  std::vector<Ten3> dgamma;
  for (std::size_t c = 0; c < d; ++c) {
    kundt::EvalPoint hi = pt, lo = pt;
    hi[g.chart().coord(c)] += h;
    lo[g.chart().coord(c)] -= h;
    Ten3 a = christoffel_fd(g, hi, h);
    Ten3 b = christoffel_fd(g, lo, h);
    Ten3 der(d, Mat(d, std::vector<double>(d, 0.0)));
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          der[l][i][j] = (a[l][i][j] - b[l][i][j]) / (2 * h);
    dgamma.push_back(der);
  }
  std::vector<Ten3> R(d, Ten3(d, Mat(d, std::vector<double>(d, 0.0))));
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          double val = dgamma[i][l][j][k] - dgamma[j][l][i][k];
          for (std::size_t e = 0; e < d; ++e)
            val += gamma[l][i][e] * gamma[e][j][k] -
                   gamma[l][j][e] * gamma[e][i][k];
          R[l][k][i][j] = val;
        }
  return R;
}

// Deterministic sample point inside the chart's box, shrunk a little so
// finite-difference stencils stay inside constrained domains.
inline kundt::EvalPoint sample_point(const kundt::Chart& chart,
                                     kundt::SplitMix64& rng,
                                     double margin = 0.05) {
  kundt::EvalPoint pt;
  for (const std::string& c : chart.coords()) {
    auto [lo, hi] = chart.default_box().range(c);
    double pad = margin * (hi - lo);
    pt[c] = rng.uniform(lo + pad, hi - pad);
  }
  return pt;
}

}  // namespace oracles
