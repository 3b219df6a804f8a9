#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kundt/congruence.hpp"
#include "kundt/geometry.hpp"

namespace kundt {

// Distinguished coordinate names: one u, one v, the rest transverse. The
// transverse order is the roles order, not the chart order; the last
// transverse coordinate is the one a Siklos presentation divides by.
struct CoordinateRoles {
  std::string u;
  std::string v;
  std::vector<std::string> transverse;
};

// The adapted presentation g = 2 du dv + H du^2 + sum W_i du dx^i
// + sum h_ij dx^i dx^j with v-independent transverse block h.
// Convention: the du dx^i coefficient of the quadratic form is W_i,
// so the tensor component is g(d_u, d_{x_i}) = W_i / 2.
struct AdaptedKundtForm {
  Chart chart;
  CoordinateRoles roles;
  Expr H;
  std::vector<Expr> W;
  ExprMatrix h;
};

enum class SpaceClass {
  NotAdapted,
  KundtForm,
  WeaklyBrinkmann,
  Brinkmann,
  PpWave,
  PlaneWave,
  CahenWallach,
  Siklos,
};

const char* space_class_name(SpaceClass c);

struct SiklosDetection {
  bool siklos = false;
  std::optional<AdaptedKundtForm> rescaled_form;  // adapted form of (x_n)^2 g
  std::optional<Expr> H;                          // its profile
  std::vector<std::string> notes;                 // why detection failed
};

struct Classification {
  bool kundt_form = false;
  bool weakly_brinkmann = false;
  bool brinkmann = false;
  bool pp_wave = false;
  bool plane_wave = false;
  bool cahen_wallach = false;
  bool siklos = false;
  SpaceClass most_specific = SpaceClass::NotAdapted;
  std::optional<AdaptedKundtForm> form;           // direct adapted detection
  std::optional<ExprMatrix> plane_wave_profile;   // S(u) with H = x^T S x
  std::optional<AdaptedKundtForm> siklos_form;    // adapted form of (x_n)^2 g
  std::optional<Expr> siklos_profile;             // its H
  std::optional<bool> leaf_flat;
  std::vector<std::string> notes;
};

// Read off (H, W, h) or throw NotAdapted listing every failing condition:
// g(v,v), g(v,x_i) and d/dv h_ij must pass is_zero and g(u,v) must equal 1.
AdaptedKundtForm detect_kundt_form(const Metric& g, const CoordinateRoles& roles);

// Hierarchy predicates on an adapted form. Each predicate refines the
// previous one, so the report respects the inclusion diagram by
// construction. The leaf-flatness flag comes from leaf_curvature on the
// metric the form reassembles to.
Classification classify(const AdaptedKundtForm& f, const ZeroTestOptions& opt = {});

// True iff (x_n)^2 g passes detect_kundt_form and the result classifies at
// least as a pp-wave, where x_n is the last transverse coordinate. Requires
// the chart to constrain x_n > 0; failure reasons land in notes.
SiklosDetection detect_siklos(const Metric& g, const CoordinateRoles& roles);

// detect_kundt_form + classify, falling back to the Siklos branch. Never
// throws NotAdapted: an unrecognized metric reports the NotAdapted class
// with the failing conditions in notes.
Classification classify_metric(const Metric& g, const CoordinateRoles& roles);

struct LeafCurvatureResult {
  std::vector<std::string> leaf_coords;  // (v, x^1..x^n)
  Tensor4 curvature;                     // induced-connection curvature over leaf indices
  bool flat = false;
};

// Ambient connection restricted to the leaf-tangent coordinate fields
// {d_v, d_{x_i}} with u frozen as a parameter, then the curvature of that
// induced connection. Throws NotTotallyGeodesic when the restriction leaks
// a d_u component (checked via is_zero on each d_u coefficient).
LeafCurvatureResult leaf_curvature(const Metric& g, const CoordinateRoles& roles);
LeafCurvatureResult leaf_curvature(const AdaptedKundtForm& f, const Metric& g);

// Entrywise e^sigma g. When the v coordinate is identifiable (roles given,
// or a coordinate literally named "v") and sigma depends on it, a warning
// is appended: such a rescaling can leave the Kundt class.
Metric conformal_rescale(const Metric& g, const Expr& sigma,
                         std::vector<std::string>* warnings = nullptr,
                         const CoordinateRoles* roles = nullptr);

// Assemble the metric determined by frame data: the full frame is
// (V, E_1..E_{d-2}, Z) and h_frame is the (d-1)x(d-1) matrix of inner
// products on span(V, E), so its first row and column must vanish (radical
// R*V) while the E block is positive definite at the base point. The
// remaining pairings are fixed: g(E_a, Z) = 0, g(V, Z) = 1, g(Z, Z) = 0.
// Post-verified: analyze(g, V) must report locally_kundt, otherwise
// PostVerificationFailed (the caller's flow condition did not hold).
Metric build_kundt_metric(const Chart& chart, const VectorField& V,
                          const std::vector<VectorField>& E, const VectorField& Z,
                          const ExprMatrix& h_frame, const ZeroTestOptions& opt = {});

// Direct assembly of the adapted form from (H, W, h).
Metric assemble_adapted_metric(const Chart& chart, const CoordinateRoles& roles, const Expr& H,
                               const std::vector<Expr>& W, const ExprMatrix& h,
                               const ZeroTestOptions& opt = {});

}  // namespace kundt
