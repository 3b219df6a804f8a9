#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kundt/numeric.hpp"

namespace kundt {

using RatVec = std::vector<Rational>;
using RatMat = std::vector<std::vector<Rational>>;

// Finite-dimensional real Lie algebra given by exact structure constants
// over a named basis. The constructor enforces antisymmetry; the Jacobi
// identity is checked separately so that corrupted tables can be fed to
// check_jacobi on purpose.
class LieAlgebra {
 public:
  // table[i][j] holds the coordinates of [e_i, e_j].
  LieAlgebra(std::vector<std::string> basis, std::vector<std::vector<RatVec>> table);

  struct BracketSpec {
    std::string a;
    std::string b;
    std::map<std::string, Rational> rhs;
  };
  // Brackets not listed (and not forced by antisymmetry) default to zero.
  static LieAlgebra from_sparse(std::vector<std::string> basis,
                                const std::vector<BracketSpec>& specs);

  size_t dim() const { return basis_.size(); }
  const std::vector<std::string>& basis() const { return basis_; }
  int index_of(const std::string& name) const;

  const RatVec& bracket_basis(size_t i, size_t j) const { return c_[i][j]; }
  RatVec bracket(const RatVec& x, const RatVec& y) const;

 private:
  std::vector<std::string> basis_;
  std::vector<std::vector<RatVec>> c_;
};

// Exact verification of the Jacobi identity.
bool check_jacobi(const LieAlgebra& L);

// A[k][i] is the e_k coefficient of A(e_i). Exact verification of
// A[x,y] = [Ax,y] + [x,Ay] on basis pairs.
bool is_derivation(const LieAlgebra& L, const RatMat& A);

// Semidirect extension R ltimes L: new basis element `name` comes first and
// brackets as [name, x] = A x. Throws BadParameter unless A is a derivation
// (which is exactly what makes the extension a Lie algebra).
LieAlgebra extend_by_derivation(const LieAlgebra& L, const RatMat& A, const std::string& name);

Rational ip_apply(const RatMat& m, const RatVec& x, const RatVec& y);

// Exact Gauss-Jordan inverse. Throws DegenerateMetric.
RatMat rat_inverse(const RatMat& m);

// (negative, positive) inertia counts by exact congruence diagonalization.
// Throws DegenerateMetric when the form is degenerate.
std::pair<int, int> rational_signature(RatMat m);

// Symmetric, nondegenerate, Lorentzian (-,+,...,+); throws BadParameter,
// DegenerateMetric, or NotLorentzian.
void validate_invariant_metric(const RatMat& m, size_t dim);

// g(nabla_U V, W) at the identity for the right-invariant (Killing) fields
// with identity values u, v, w. The identity-level bracket of two such
// fields is the negative of the algebra bracket; with kb = -[.,.] the
// Koszul formula reads 2 g(nabla_U V, W) = g(kb(u,v),w) + g(kb(v,w),u)
// - g(kb(w,u),v). The sign convention is fixed here once.
Rational koszul_killing(const LieAlgebra& L, const RatMat& m, const RatVec& u, const RatVec& v,
                        const RatVec& w);

// The vector nabla_U V at the identity for Killing fields, solved from
// koszul_killing pairings against the basis.
RatVec nabla_killing(const LieAlgebra& L, const RatMat& m, const RatVec& u, const RatVec& v);

// Levi-Civita connection of the left-invariant metric:
// 2<nabla_x y, z> = <[x,y],z> - <[y,z],x> + <[z,x],y>.
RatVec levi_civita_invariant(const LieAlgebra& L, const RatMat& m, const RatVec& x,
                             const RatVec& y);

struct AlgebraicReport {
  bool lightlike = false;
  bool perp_subalgebra = false;   // [V-perp, V-perp] stays in V-perp
  bool normality = false;         // [V, V-perp] lands in R V
  bool nabla_v_zero = false;      // Killing-field nabla V = 0, identity-certified only
  bool algebraic_kundt = false;   // lightlike && perp_subalgebra && normality
  std::vector<RatVec> perp_basis;
  std::vector<std::string> notes;
};

// Requires <V,V> = 0 (throws NotLightlike for nonzero norm or zero V) and a
// Lorentzian m (validate_invariant_metric). perp_subalgebra certifies that
// the left-invariant distribution V-perp is integrable; normality is the
// hypothesis that the V direction is normal inside it.
AlgebraicReport analyze_algebraic(const LieAlgebra& L, const RatMat& m, const RatVec& V);

// Monte-Carlo extension of the identity-level checks to group points: for
// `samples` random algebra elements a, Ad = exp(ad_a) and the lightlike and
// normality conditions are re-evaluated through Ad^{-1} within 1e-9.
bool sample_group_check(const LieAlgebra& L, const RatMat& m, const RatVec& V, int samples,
                        std::uint64_t seed);

}  // namespace kundt
