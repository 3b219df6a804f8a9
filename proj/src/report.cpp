#include "kundt/report.hpp"

#include <iomanip>
#include <sstream>

#include "kundt/numeric.hpp"
#include "kundt/version.hpp"

namespace kundt {

namespace {

using nlohmann::ordered_json;

std::string digest_string(std::uint64_t digest) {
  std::ostringstream os;
  os << "fnv1a:" << std::hex << std::setw(16) << std::setfill('0') << digest;
  return os.str();
}

std::string rat_string(const Rational& r) { return r.get_str(); }

ordered_json congruence_json(const CongruenceReport& r) {
  ordered_json j;
  j["lightlike"] = r.lightlike;
  j["nonvanishing_at_base"] = r.nonvanishing_at_base;
  j["geodesic"] = r.geodesic;
  j["pregeodesic"] = r.pregeodesic;
  j["kappa"] = r.kappa;
  j["twist_free"] = r.twist_free;
  j["shear_free"] = r.shear_free;
  j["divergence_free"] = r.divergence_free;
  if (r.tg_item2)
    j["leaf_metric_invariant"] = *r.tg_item2;
  else
    j["leaf_metric_invariant"] = nullptr;
  j["flow_preserves_line_field"] = r.tg_item4;
  ordered_json alpha = ordered_json::object();
  for (const auto& [label, expr] : r.alpha) alpha[label] = expr;
  j["alpha"] = alpha;
  j["locally_kundt"] = r.locally_kundt;
  j["kundt"] = r.kundt;
  j["notes"] = r.notes;
  return j;
}

ordered_json classification_json(const Classification& c) {
  ordered_json j;
  ordered_json preds;
  preds["kundt_form"] = c.kundt_form;
  preds["weakly_brinkmann"] = c.weakly_brinkmann;
  preds["brinkmann"] = c.brinkmann;
  preds["pp_wave"] = c.pp_wave;
  preds["plane_wave"] = c.plane_wave;
  preds["cahen_wallach"] = c.cahen_wallach;
  preds["siklos"] = c.siklos;
  j["predicates"] = preds;
  j["most_specific"] = space_class_name(c.most_specific);
  if (c.form) {
    j["profile_H"] = print(c.form->H);
  }
  if (c.plane_wave_profile) {
    ordered_json s = ordered_json::array();
    for (const auto& row : *c.plane_wave_profile) {
      ordered_json r = ordered_json::array();
      for (const Expr& e : row) r.push_back(print(e));
      s.push_back(r);
    }
    j["profile_S"] = s;
  }
  if (c.siklos_profile) j["siklos_H"] = print(*c.siklos_profile);
  if (c.leaf_flat)
    j["leaf_flat"] = *c.leaf_flat;
  else
    j["leaf_flat"] = nullptr;
  j["notes"] = c.notes;
  return j;
}

ordered_json algebraic_json(const AlgebraicReport& r,
                            const std::vector<std::string>& basis) {
  ordered_json j;
  j["lightlike"] = r.lightlike;
  j["perp_subalgebra"] = r.perp_subalgebra;
  j["normality"] = r.normality;
  j["nabla_v_zero"] = r.nabla_v_zero;
  j["algebraic_kundt"] = r.algebraic_kundt;
  ordered_json perp = ordered_json::array();
  for (const RatVec& vec : r.perp_basis) {
    if (!basis.empty() && basis.size() == vec.size()) {
      Expr combo = Expr::integer(0);
      for (std::size_t i = 0; i < vec.size(); ++i)
        if (vec[i] != 0)
          combo = combo + Expr::number(vec[i]) * Expr::symbol(basis[i]);
      perp.push_back(print(simplify(combo)));
    } else {
      ordered_json row = ordered_json::array();
      for (const Rational& c : vec) row.push_back(rat_string(c));
      perp.push_back(row);
    }
  }
  j["perp_basis"] = perp;
  j["notes"] = r.notes;
  return j;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

ReportDocument::ReportDocument() : tool(kToolName), version(kToolVersion) {}

ordered_json report_json(const ReportDocument& doc) {
  ordered_json j;
  j["tool"] = doc.tool;
  j["version"] = doc.version;
  j["input_digest"] = digest_string(doc.input_digest);
  j["seed"] = doc.seed;
  if (!doc.field_name.empty()) j["field"] = doc.field_name;
  if (doc.congruence) j["congruence"] = congruence_json(*doc.congruence);
  if (doc.classification)
    j["classification"] = classification_json(*doc.classification);
  if (doc.algebraic)
    j["algebraic"] = algebraic_json(*doc.algebraic, doc.algebra_basis);
  ordered_json timings = ordered_json::object();
  for (const auto& [label, ms] : doc.timings_ms) timings[label] = ms;
  j["timings_ms"] = timings;
  return j;
}

std::string report_text(const ReportDocument& doc) {
  std::ostringstream os;
  os << doc.tool << " " << doc.version << "\n";
  os << "input digest: " << digest_string(doc.input_digest) << "\n";
  os << "seed: " << doc.seed << "\n";
  if (!doc.field_name.empty()) os << "field: " << doc.field_name << "\n";
  if (doc.congruence) {
    const CongruenceReport& r = *doc.congruence;
    os << "congruence:\n";
    os << "  lightlike: " << yes_no(r.lightlike) << "\n";
    os << "  nonvanishing at base: " << yes_no(r.nonvanishing_at_base) << "\n";
    os << "  geodesic: " << yes_no(r.geodesic)
       << "  (pregeodesic: " << yes_no(r.pregeodesic) << ", kappa = " << r.kappa
       << ")\n";
    os << "  twist free: " << yes_no(r.twist_free) << "\n";
    os << "  shear free: " << yes_no(r.shear_free) << "\n";
    os << "  divergence free: " << yes_no(r.divergence_free) << "\n";
    os << "  leaf metric invariant under the flow: "
       << (r.tg_item2 ? yes_no(*r.tg_item2) : "not defined (not integrable)")
       << "\n";
    os << "  flow preserves the line field: " << yes_no(r.tg_item4) << "\n";
    for (const auto& [label, expr] : r.alpha)
      os << "    alpha(" << label << ") = " << expr << "\n";
    os << "  locally kundt: " << yes_no(r.locally_kundt) << "\n";
    os << "  kundt: " << yes_no(r.kundt) << "\n";
    for (const std::string& note : r.notes) os << "  note: " << note << "\n";
  }
  if (doc.classification) {
    const Classification& c = *doc.classification;
    os << "classification:\n";
    os << "  most specific: " << space_class_name(c.most_specific) << "\n";
    os << "  kundt form: " << yes_no(c.kundt_form) << "\n";
    os << "  weakly brinkmann: " << yes_no(c.weakly_brinkmann) << "\n";
    os << "  brinkmann: " << yes_no(c.brinkmann) << "\n";
    os << "  pp wave: " << yes_no(c.pp_wave) << "\n";
    os << "  plane wave: " << yes_no(c.plane_wave) << "\n";
    os << "  cahen wallach: " << yes_no(c.cahen_wallach) << "\n";
    os << "  siklos: " << yes_no(c.siklos) << "\n";
    if (c.form) os << "  H = " << print(c.form->H) << "\n";
    if (c.plane_wave_profile) {
      os << "  S = [";
      for (std::size_t i = 0; i < c.plane_wave_profile->size(); ++i) {
        os << (i ? ", [" : "[");
        const auto& row = (*c.plane_wave_profile)[i];
        for (std::size_t j = 0; j < row.size(); ++j)
          os << (j ? ", " : "") << print(row[j]);
        os << "]";
      }
      os << "]\n";
    }
    if (c.siklos_profile)
      os << "  siklos H = " << print(*c.siklos_profile) << "\n";
    if (c.leaf_flat)
      os << "  leaf curvature: " << (*c.leaf_flat ? "flat" : "nonvanishing")
         << "\n";
    for (const std::string& note : c.notes) os << "  note: " << note << "\n";
  }
  if (doc.algebraic) {
    const AlgebraicReport& r = *doc.algebraic;
    os << "algebraic:\n";
    os << "  lightlike: " << yes_no(r.lightlike) << "\n";
    os << "  perp subalgebra: " << yes_no(r.perp_subalgebra) << "\n";
    os << "  normality: " << yes_no(r.normality) << "\n";
    os << "  covariant derivative of V vanishes: " << yes_no(r.nabla_v_zero)
       << "\n";
    os << "  algebraic kundt: " << yes_no(r.algebraic_kundt) << "\n";
    for (const std::string& note : r.notes) os << "  note: " << note << "\n";
  }
  if (!doc.timings_ms.empty()) {
    os << "timings:";
    for (std::size_t i = 0; i < doc.timings_ms.size(); ++i)
      os << (i ? ", " : " ") << doc.timings_ms[i].first << " " << std::fixed
         << std::setprecision(2) << doc.timings_ms[i].second << " ms";
    os << "\n";
  }
  return os.str();
}

}  // namespace kundt
