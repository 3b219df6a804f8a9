#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "kundt/catalog.hpp"
#include "kundt/errors.hpp"
#include "kundt/hierarchy.hpp"

using namespace kundt;

TEST_CASE("roster is fixed and fully described") {
  const std::vector<CatalogInfo>& roster = catalog_roster();
  REQUIRE(roster.size() == 14);
  const std::vector<std::string> expected = {
      "minkowski",      "pp_wave",        "plane_wave",
      "cahen_wallach",  "siklos",         "ads_poincare",
      "kundt_generic",  "suspension_local", "conformal",
      "twisting_minkowski", "heis3",      "oscillator",
      "r_ltimes_heis",  "sl2_det"};
  std::set<std::string> seen;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    CHECK(roster[i].name == expected[i]);
    CHECK_FALSE(roster[i].description.empty());
    seen.insert(roster[i].name);
  }
  CHECK(seen.size() == 14);
}

TEST_CASE("every entry builds and matches its own expectations") {
  RunSummary summary = run_all(0);
  REQUIRE(summary.rows.size() == 14);
  for (const RunRow& row : summary.rows) {
    CAPTURE(row.name);
    CAPTURE(row.detail);
    CHECK(row.pass);
  }
  CHECK(summary.all_pass);
}

TEST_CASE("unknown names and parameters are rejected") {
  CHECK_THROWS_AS(get("nosuch"), UnknownEntry);
  CHECK_THROWS_AS(get("minkowski", {{"dim", "4"}, {"frobnicate", "1"}}),
                  BadParameter);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(get("minkowski", {{"dim", "99"}}), BadParameter);
  CHECK_THROWS_AS(get("minkowski", {{"dim", "1"}}), BadParameter);
  CHECK_THROWS_AS(get("minkowski", {{"dim", "banana"}}), BadParameter);
  // Profile matrices must be square and symmetric.
  CHECK_THROWS_AS(get("plane_wave", {{"S", "1, 2; 3, 4"}}), BadParameter);
  CHECK_THROWS_AS(get("plane_wave", {{"S", "1, 2, 3; 4, 5, 6"}}), BadParameter);
  // The homogeneous model needs exact nondegeneracy.
  CHECK_THROWS_AS(get("cahen_wallach", {{"S", "1, 0; 0, 0"}}), BadParameter);
  // Suspension rate must be a positive rational.
  CHECK_THROWS_AS(get("suspension_local", {{"lambda", "0"}}), BadParameter);
  CHECK_THROWS_AS(get("suspension_local", {{"lambda", "-2"}}), BadParameter);
  // Derivation parameter must actually be a derivation.
  CHECK_THROWS_AS(get("r_ltimes_heis", {{"A", "1,0,0;0,1,0;0,0,1"}}),
                  BadParameter);
  // Expressions go through the real parser; failures are reported as bad
  // parameters naming the offending key and position.
  CHECK_THROWS_AS(get("pp_wave", {{"H", "x1 +"}}), BadParameter);
  CHECK_THROWS_WITH_AS(get("pp_wave", {{"H", "v"}}),
                       "H: syntax error at position 0: expected a declared "
                       "symbol (got 'v')",
                       BadParameter);
}

TEST_CASE("dimension parameter controls the chart") {
  BuiltEntry three = get("minkowski", {{"dim", "3"}});
  REQUIRE(three.metric.has_value());
  CHECK(three.metric->dim() == 3);
  CHECK(three.roles->transverse.size() == 1);
  BuiltEntry six = get("minkowski", {{"dim", "6"}});
  CHECK(six.metric->dim() == 6);
  BuiltEntry ads = get("ads_poincare", {{"dim", "5"}});
  CHECK(ads.metric->dim() == 5);
}

TEST_CASE("profile overrides flow through to classification") {
  BuiltEntry cw = get("plane_wave", {{"S", "1, 0; 0, 1"}});
  Classification c = classify_metric(*cw.metric, *cw.roles);
  CHECK(c.most_specific == SpaceClass::CahenWallach);
  CHECK(cw.expect.space_class == SpaceClass::CahenWallach);

  BuiltEntry pw = get("plane_wave", {{"S", "u, 0; 0, 1"}});
  CHECK(pw.expect.space_class == SpaceClass::PlaneWave);

  BuiltEntry pp = get("pp_wave", {{"H", "exp(x1) * sin(u)"}});
  Classification c2 = classify_metric(*pp.metric, *pp.roles);
  CHECK(c2.most_specific == SpaceClass::PpWave);
}

TEST_CASE("conformal entry tracks its base") {
  BuiltEntry plain = get("conformal", {{"sigma", "0"}});
  Classification c = classify_metric(*plain.metric, *plain.roles);
  CHECK(c.most_specific == plain.expect.space_class);
  CHECK(c.most_specific != SpaceClass::NotAdapted);

  BuiltEntry scaled = get("conformal", {{"sigma", "u + x1"}});
  CHECK(scaled.expect.space_class == SpaceClass::NotAdapted);
  CHECK(scaled.expect.kundt == true);
  CongruenceReport rep = analyze(*scaled.metric, *scaled.field);
  CHECK(rep.kundt);
}

TEST_CASE("entries carry printable resolved parameters") {
  BuiltEntry e = get("kundt_generic");
  CHECK_FALSE(e.params.empty());
  BuiltEntry f = get("suspension_local", {{"lambda", "3/2"}});
  CHECK(f.params.at("lambda") == "3/2");
}

TEST_CASE("seed changes sampling but not structure") {
  BuiltEntry a = get("pp_wave", {}, 1);
  BuiltEntry b = get("pp_wave", {}, 2);
  REQUIRE(a.metric.has_value());
  REQUIRE(b.metric.has_value());
  CHECK(a.metric->dim() == b.metric->dim());
  RunSummary s1 = run_all(1);
  CHECK(s1.all_pass);
}
