#include "kundt/liealg.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <set>

#include "kundt/errors.hpp"

namespace kundt {

namespace {

RatVec zero_vec(size_t d) { return RatVec(d, Rational(0)); }

bool is_zero_vec(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& r) { return r == 0; });
}

RatVec vec_add(const RatVec& a, const RatVec& b) {
  RatVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RatVec vec_scale(const Rational& s, const RatVec& v) {
  RatVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

RatVec mat_apply(const RatMat& A, const RatVec& x) {
  const size_t d = x.size();
  RatVec out = zero_vec(A.size());
  for (size_t k = 0; k < A.size(); ++k)
    for (size_t i = 0; i < d; ++i) out[k] += A[k][i] * x[i];
  return out;
}

// True when z lies on the line R v (v nonzero).
bool is_multiple_of(const RatVec& z, const RatVec& v) {
  size_t r = v.size();
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) {
      r = i;
      break;
    }
  if (r == v.size()) return is_zero_vec(z);
  const Rational lambda = z[r] / v[r];
  for (size_t i = 0; i < z.size(); ++i)
    if (z[i] != lambda * v[i]) return false;
  return true;
}

void check_metric_shape(const RatMat& m, size_t dim) {
  if (m.size() != dim) throw BadParameter("metric matrix size does not match the algebra");
  for (const auto& row : m)
    if (row.size() != dim) throw BadParameter("metric matrix is not square");
  for (size_t i = 0; i < dim; ++i)
    for (size_t j = i + 1; j < dim; ++j)
      if (m[i][j] != m[j][i]) throw BadParameter("metric matrix is not symmetric");
}

// Shared preparation for the algebraic reports: validated metric, the
// functional w -> <w, V> as the coordinate vector mV, and a basis of its
// kernel V-perp.
struct PerpData {
  RatVec phi;                      // phi_l = <e_l, V>
  size_t pivot = 0;                // index with phi[pivot] != 0
  std::vector<RatVec> perp_basis;  // d-1 vectors spanning V-perp
};

PerpData perp_data(const LieAlgebra& L, const RatMat& m, const RatVec& V) {
  const size_t d = L.dim();
  validate_invariant_metric(m, d);
  if (V.size() != d) throw BadParameter("V has the wrong number of coordinates");
  if (is_zero_vec(V)) throw NotLightlike("V is the zero vector");
  if (ip_apply(m, V, V) != 0) throw NotLightlike("<V,V> is not zero");

  PerpData p;
  p.phi = mat_apply(m, V);
  p.pivot = d;
  for (size_t l = 0; l < d; ++l)
    if (p.phi[l] != 0) {
      p.pivot = l;
      break;
    }
  // m nondegenerate and V nonzero force mV != 0.
  for (size_t j = 0; j < d; ++j) {
    if (j == p.pivot) continue;
    RatVec b = zero_vec(d);
    b[j] = 1;
    b[p.pivot] = -p.phi[j] / p.phi[p.pivot];
    p.perp_basis.push_back(std::move(b));
  }
  return p;
}

}  // namespace

LieAlgebra::LieAlgebra(std::vector<std::string> basis, std::vector<std::vector<RatVec>> table)
    : basis_(std::move(basis)), c_(std::move(table)) {
  const size_t d = basis_.size();
  if (d == 0) throw BadParameter("algebra needs at least one basis element");
  std::set<std::string> names(basis_.begin(), basis_.end());
  if (names.size() != d) throw BadParameter("duplicate basis name");
  if (c_.size() != d) throw BadParameter("bracket table size does not match the basis");
  for (const auto& row : c_) {
    if (row.size() != d) throw BadParameter("bracket table is not square");
    for (const auto& v : row)
      if (v.size() != d) throw BadParameter("bracket value has the wrong number of coordinates");
  }
  for (size_t i = 0; i < d; ++i)
    for (size_t j = i; j < d; ++j)
      for (size_t k = 0; k < d; ++k)
        if (c_[i][j][k] != -c_[j][i][k])
          throw BadParameter("structure constants are not antisymmetric");
}

LieAlgebra LieAlgebra::from_sparse(std::vector<std::string> basis,
                                   const std::vector<BracketSpec>& specs) {
  const size_t d = basis.size();
  auto idx = [&](const std::string& n) {
    for (size_t i = 0; i < d; ++i)
      if (basis[i] == n) return i;
    throw BadParameter("bracket references unknown basis element '" + n + "'");
  };
  std::vector<std::vector<RatVec>> table(d, std::vector<RatVec>(d, zero_vec(d)));
  for (const auto& s : specs) {
    const size_t i = idx(s.a);
    const size_t j = idx(s.b);
    RatVec rhs = zero_vec(d);
    for (const auto& kv : s.rhs) rhs[idx(kv.first)] = kv.second;
    table[i][j] = rhs;
    table[j][i] = vec_scale(Rational(-1), rhs);
  }
  return LieAlgebra(std::move(basis), std::move(table));
}

int LieAlgebra::index_of(const std::string& name) const {
  for (size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i] == name) return static_cast<int>(i);
  return -1;
}

RatVec LieAlgebra::bracket(const RatVec& x, const RatVec& y) const {
  const size_t d = dim();
  if (x.size() != d || y.size() != d)
    throw BadParameter("bracket arguments have the wrong number of coordinates");
  RatVec out = zero_vec(d);
  for (size_t i = 0; i < d; ++i) {
    if (x[i] == 0) continue;
    for (size_t j = 0; j < d; ++j) {
      if (y[j] == 0) continue;
      const Rational s = x[i] * y[j];
      for (size_t k = 0; k < d; ++k) out[k] += s * c_[i][j][k];
    }
  }
  return out;
}

bool check_jacobi(const LieAlgebra& L) {
  const size_t d = L.dim();
  for (size_t i = 0; i < d; ++i)
    for (size_t j = i + 1; j < d; ++j)
      for (size_t k = j + 1; k < d; ++k) {
        RatVec s = L.bracket(L.bracket_basis(i, j), [&] {
          RatVec e = zero_vec(d);
          e[k] = 1;
          return e;
        }());
        {
          RatVec e = zero_vec(d);
          e[i] = 1;
          s = vec_add(s, L.bracket(L.bracket_basis(j, k), e));
        }
        {
          RatVec e = zero_vec(d);
          e[j] = 1;
          s = vec_add(s, L.bracket(L.bracket_basis(k, i), e));
        }
        if (!is_zero_vec(s)) return false;
      }
  return true;
}

bool is_derivation(const LieAlgebra& L, const RatMat& A) {
  const size_t d = L.dim();
  if (A.size() != d) throw BadParameter("derivation matrix size does not match the algebra");
  for (const auto& row : A)
    if (row.size() != d) throw BadParameter("derivation matrix is not square");
  for (size_t i = 0; i < d; ++i)
    for (size_t j = i + 1; j < d; ++j) {
      const RatVec lhs = mat_apply(A, L.bracket_basis(i, j));
      RatVec ei = zero_vec(d), ej = zero_vec(d);
      ei[i] = 1;
      ej[j] = 1;
      const RatVec rhs = vec_add(L.bracket(mat_apply(A, ei), ej), L.bracket(ei, mat_apply(A, ej)));
      for (size_t k = 0; k < d; ++k)
        if (lhs[k] != rhs[k]) return false;
    }
  return true;
}

LieAlgebra extend_by_derivation(const LieAlgebra& L, const RatMat& A, const std::string& name) {
  if (!is_derivation(L, A))
    throw BadParameter("the matrix is not a derivation of the algebra");
  const size_t d = L.dim();
  std::vector<std::string> basis;
  basis.push_back(name);
  for (const auto& b : L.basis()) basis.push_back(b);

  const size_t n = d + 1;
  std::vector<std::vector<RatVec>> table(n, std::vector<RatVec>(n, zero_vec(n)));
  for (size_t j = 0; j < d; ++j) {
    RatVec ej = zero_vec(d);
    ej[j] = 1;
    const RatVec img = mat_apply(A, ej);
    for (size_t k = 0; k < d; ++k) {
      table[0][j + 1][k + 1] = img[k];
      table[j + 1][0][k + 1] = -img[k];
    }
  }
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      for (size_t k = 0; k < d; ++k) table[i + 1][j + 1][k + 1] = L.bracket_basis(i, j)[k];
  return LieAlgebra(std::move(basis), std::move(table));
}

Rational ip_apply(const RatMat& m, const RatVec& x, const RatVec& y) {
  Rational out(0);
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (size_t j = 0; j < y.size(); ++j) out += x[i] * m[i][j] * y[j];
  }
  return out;
}

RatMat rat_inverse(const RatMat& m) {
  const size_t d = m.size();
  RatMat a = m;
  RatMat inv(d, zero_vec(d));
  for (size_t i = 0; i < d; ++i) inv[i][i] = 1;
  for (size_t col = 0; col < d; ++col) {
    size_t piv = col;
    while (piv < d && a[piv][col] == 0) ++piv;
    if (piv == d) throw DegenerateMetric("matrix is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational p = a[col][col];
    for (size_t j = 0; j < d; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (size_t r = 0; r < d; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (size_t j = 0; j < d; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

std::pair<int, int> rational_signature(RatMat m) {
  const size_t d = m.size();
  int neg = 0, pos = 0;
  for (size_t k = 0; k < d; ++k) {
    if (m[k][k] == 0) {
      size_t piv = d;
      for (size_t j = k + 1; j < d; ++j)
        if (m[j][j] != 0) {
          piv = j;
          break;
        }
      if (piv < d) {
        // congruence by the (k,piv) transposition
        std::swap(m[k], m[piv]);
        for (auto& row : m) std::swap(row[k], row[piv]);
      } else {
        size_t off = d;
        for (size_t j = k + 1; j < d; ++j)
          if (m[k][j] != 0) {
            off = j;
            break;
          }
        if (off == d) throw DegenerateMetric("the form is degenerate");
        // add row/col `off` into k: diagonal becomes 2 m[k][off]
        for (size_t j = 0; j < d; ++j) m[k][j] += m[off][j];
        for (size_t i = 0; i < d; ++i) m[i][k] += m[i][off];
      }
    }
    const Rational p = m[k][k];
    if (p > 0)
      ++pos;
    else
      ++neg;
    for (size_t j = k + 1; j < d; ++j) {
      if (m[k][j] == 0) continue;
      const Rational f = m[k][j] / p;
      for (size_t col = 0; col < d; ++col) m[j][col] -= f * m[k][col];
      for (size_t row = 0; row < d; ++row) m[row][j] -= f * m[row][k];
    }
  }
  return {neg, pos};
}

void validate_invariant_metric(const RatMat& m, size_t dim) {
  check_metric_shape(m, dim);
  const auto sig = rational_signature(m);
  if (sig.first != 1)
    throw NotLorentzian("signature is (" + std::to_string(sig.first) + "," +
                        std::to_string(sig.second) + "), expected (1," +
                        std::to_string(dim - 1) + ")");
}

Rational koszul_killing(const LieAlgebra& L, const RatMat& m, const RatVec& u, const RatVec& v,
                        const RatVec& w) {
  auto kb = [&](const RatVec& a, const RatVec& b) {
    return vec_scale(Rational(-1), L.bracket(a, b));
  };
  const Rational twice =
      ip_apply(m, kb(u, v), w) + ip_apply(m, kb(v, w), u) - ip_apply(m, kb(w, u), v);
  return twice / 2;
}

RatVec nabla_killing(const LieAlgebra& L, const RatMat& m, const RatVec& u, const RatVec& v) {
  const size_t d = L.dim();
  RatVec rhs(d);
  for (size_t l = 0; l < d; ++l) {
    RatVec el = zero_vec(d);
    el[l] = 1;
    rhs[l] = koszul_killing(L, m, u, v, el);
  }
  return mat_apply(rat_inverse(m), rhs);
}

RatVec levi_civita_invariant(const LieAlgebra& L, const RatMat& m, const RatVec& x,
                             const RatVec& y) {
  const size_t d = L.dim();
  check_metric_shape(m, d);
  RatVec rhs(d);
  for (size_t l = 0; l < d; ++l) {
    RatVec el = zero_vec(d);
    el[l] = 1;
    rhs[l] = (ip_apply(m, L.bracket(x, y), el) - ip_apply(m, L.bracket(y, el), x) +
              ip_apply(m, L.bracket(el, x), y)) /
             2;
  }
  return mat_apply(rat_inverse(m), rhs);
}

AlgebraicReport analyze_algebraic(const LieAlgebra& L, const RatMat& m, const RatVec& V) {
  const size_t d = L.dim();
  const PerpData p = perp_data(L, m, V);

  AlgebraicReport rep;
  rep.lightlike = true;
  rep.perp_basis = p.perp_basis;

  rep.perp_subalgebra = true;
  for (size_t a = 0; a < p.perp_basis.size() && rep.perp_subalgebra; ++a)
    for (size_t b = a + 1; b < p.perp_basis.size(); ++b) {
      const RatVec z = L.bracket(p.perp_basis[a], p.perp_basis[b]);
      Rational val(0);
      for (size_t l = 0; l < d; ++l) val += z[l] * p.phi[l];
      if (val != 0) {
        rep.perp_subalgebra = false;
        break;
      }
    }

  rep.normality = true;
  for (const auto& b : p.perp_basis)
    if (!is_multiple_of(L.bracket(V, b), V)) {
      rep.normality = false;
      break;
    }

  rep.nabla_v_zero = true;
  for (size_t i = 0; i < d && rep.nabla_v_zero; ++i)
    for (size_t k = 0; k < d; ++k) {
      RatVec ei = zero_vec(d), ek = zero_vec(d);
      ei[i] = 1;
      ek[k] = 1;
      if (koszul_killing(L, m, ei, V, ek) != 0) {
        rep.nabla_v_zero = false;
        break;
      }
    }

  rep.algebraic_kundt = rep.lightlike && rep.perp_subalgebra && rep.normality;
  if (rep.nabla_v_zero)
    rep.notes.push_back("killing-field derivative of V vanishes at the identity "
                        "(identity-certified, not a global parallelism proof)");
  return rep;
}

bool sample_group_check(const LieAlgebra& L, const RatMat& m, const RatVec& V, int samples,
                        std::uint64_t seed) {
  const size_t d = L.dim();
  const PerpData p = perp_data(L, m, V);
  const int n = static_cast<int>(d);

  Eigen::MatrixXd mn(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mn(i, j) = to_double(m[i][j]);
  Eigen::VectorXd Vn(n);
  for (int i = 0; i < n; ++i) Vn(i) = to_double(V[i]);
  std::vector<Eigen::VectorXd> perp;
  for (const auto& b : p.perp_basis) {
    Eigen::VectorXd bn(n);
    for (int i = 0; i < n; ++i) bn(i) = to_double(b[i]);
    perp.push_back(bn);
  }
  // cijk[i](k, j) = k-th coordinate of [e_i, e_j]
  std::vector<Eigen::MatrixXd> ad_basis;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd a(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) a(k, j) = to_double(L.bracket_basis(i, j)[k]);
    ad_basis.push_back(a);
  }
  auto bracket_num = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) out += x(i) * (ad_basis[i] * y);
    return out;
  };

  SplitMix64 rng(seed);
  const double tol = 1e-9;
  for (int s = 0; s < samples; ++s) {
    Eigen::MatrixXd ad = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) ad += rng.uniform(-1.0, 1.0) * ad_basis[i];
    const Eigen::MatrixXd ad_inv_exp = (-ad).exp();

    const Eigen::VectorXd Vt = ad_inv_exp * Vn;
    if (std::abs(Vt.dot(mn * Vt)) > tol) return false;

    const double denom = Vt.dot(Vt);
    for (const auto& b : perp) {
      const Eigen::VectorXd wt = ad_inv_exp * b;
      const Eigen::VectorXd z = bracket_num(Vt, wt);
      const Eigen::VectorXd resid = z - (z.dot(Vt) / denom) * Vt;
      if (resid.lpNorm<Eigen::Infinity>() > tol) return false;
    }
  }
  return true;
}

}  // namespace kundt
