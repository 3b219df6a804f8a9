#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kundt/geometry.hpp"

namespace kundt {

// A lightlike field V together with a transversal null field U (g(V,U)=1,
// g(U,U)=0, g(U,E_a)=0) and a screen frame E_1..E_{d-2} spanning a
// complement of V inside V-perp.
struct NullCongruence {
  Metric metric;
  VectorField V;
  VectorField U;
  std::vector<VectorField> screen;
};

// B_ab = g(nabla_{E_a} V, E_b) split into expansion, shear, and twist with
// respect to the screen Gram matrix, plus the scaling 1-form alpha on the
// frame (alpha(W) = g(nabla_W V, U)).
struct OpticalData {
  ExprMatrix B;
  ExprMatrix gram;
  ExprMatrix twist;
  ExprMatrix shear;
  Expr expansion;
  bool twist_zero = false;
  bool shear_zero = false;
  bool expansion_zero = false;
  // Results are only frame-independent for geodesic V; set when V is not.
  bool advisory_not_geodesic = false;
};

struct GeodesicCheck {
  bool geodesic = false;
  // nabla_V V = kappa * V for some scalar; geodesic means kappa = 0.
  bool pregeodesic = false;
  Expr kappa;
};

struct Item4Result {
  bool holds = false;
  // Frame label ("V", "E1", ..., "U") -> alpha coefficient.
  std::vector<std::pair<std::string, Expr>> alpha;
};

struct CongruenceReport {
  bool lightlike = false;
  bool nonvanishing_at_base = false;
  bool geodesic = false;
  bool pregeodesic = false;
  std::string kappa;
  bool twist_free = false;
  bool shear_free = false;
  bool divergence_free = false;
  std::optional<bool> tg_item2;  // unset when V-perp is not integrable
  bool tg_item4 = false;
  std::vector<std::pair<std::string, std::string>> alpha;
  bool locally_kundt = false;
  bool kundt = false;
  std::vector<std::string> notes;
};

// Build U and the screen frame by symbolic elimination on the covector
// g(V, .), with pivots chosen by magnitude at the base point.
NullCongruence build_congruence(const Metric& g, const VectorField& V);

GeodesicCheck is_geodesic_field(const Metric& g, const VectorField& V);

// Frobenius test: g([W1,W2], V) vanishes for all pairs from {V, E_a}.
bool is_twist_free(const NullCongruence& c);

OpticalData optical_scalars(const NullCongruence& c);

// Lemma item: the flow of V preserves the metric induced on the leaves,
// i.e. (L_V g)(W1,W2) vanishes for all pairs from {V, E_a}. Throws
// RequiresIntegrability when the congruence is not twist-free.
bool tg_item2(const NullCongruence& c);

// Lemma item: nabla_W V is proportional to V for every W in {V, E_a};
// the proportionality 1-form alpha is reported on V, E_a, and U.
Item4Result tg_item4(const NullCongruence& c);

// Full pipeline. Report rules: locally_kundt = twist_free && tg_item4;
// kundt = lightlike && geodesic && locally_kundt.
CongruenceReport analyze(const Metric& g, const VectorField& V);

}  // namespace kundt
