#include <catch2/catch_amalgamated.hpp>

#include "../test_support.hpp"
#include "mersched/oracle.hpp"

using namespace mersched;

namespace {

OracleResult oracle_for(const std::string& fixture, const std::string& variant = "") {
  Scenario sc = testsup::load_fixture(fixture);
  if (!variant.empty()) sc.study.variant = case_from_string(variant);
  return brute_force_optimal(sc);
}

}  // namespace

TEST_CASE("exhaustive optima for the corpus") {
  struct Row {
    const char* fixture;
    double optimum;
  };
  const Row rows[] = {
      {"t1_island_relay.json", 157.9},
      {"t2_relay_capacity.json", 202.4},
      {"t3_fuel_run.json", 89.7},
      {"t4_loop_choice.json", 80.0},
      {"t5_stuck_closed.json", 90.0},
  };
  for (const Row& r : rows) {
    DYNAMIC_SECTION(r.fixture) {
      OracleResult res = oracle_for(r.fixture);
      REQUIRE(res.feasible);
      CHECK_THAT(res.objective, Catch::Matchers::WithinAbs(r.optimum, 1e-9));
      CHECK(res.candidates > 0);
      CHECK(res.lps > 0);
    }
  }
}

TEST_CASE("frozen variants lose exactly the value of mobility") {
  OracleResult none = oracle_for("t1_island_relay.json", "case1");
  REQUIRE(none.feasible);
  CHECK_THAT(none.objective, Catch::Matchers::WithinAbs(75.0, 1e-9));

  OracleResult stationary = oracle_for("t1_island_relay.json", "case2");
  REQUIRE(stationary.feasible);
  CHECK_THAT(stationary.objective, Catch::Matchers::WithinAbs(75.0, 1e-9));

  OracleResult no_tanker = oracle_for("t3_fuel_run.json", "case4");
  REQUIRE(no_tanker.feasible);
  CHECK_THAT(no_tanker.objective, Catch::Matchers::WithinAbs(60.0, 1e-9));
}

TEST_CASE("the bundled variant cannot beat the joint one") {
  OracleResult bundled = oracle_for("t2_relay_capacity.json", "case3");
  OracleResult joint = oracle_for("t2_relay_capacity.json");
  REQUIRE(bundled.feasible);
  REQUIRE(joint.feasible);
  CHECK(bundled.objective <= joint.objective + 1e-9);
  CHECK_THAT(bundled.objective, Catch::Matchers::WithinAbs(202.4, 1e-9));
}

TEST_CASE("the reference optimizer refuses oversized instances") {
  Scenario sc = testsup::load_fixture("ieee33.json");
  CHECK_THROWS_AS(brute_force_optimal(sc), std::runtime_error);
}
