#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <utility>

#include "../corruption_battery.hpp"
#include "../test_support.hpp"
#include "mersched/validate.hpp"

using namespace mersched;

namespace {

const testsup::Solved& solved_for(const std::string& fixture, const std::string& variant) {
  static std::map<std::pair<std::string, std::string>, testsup::Solved> cache;
  auto key = std::make_pair(fixture, variant);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, testsup::solve_fixture(fixture, variant)).first;
  return it->second;
}

}  // namespace

TEST_CASE("solver schedules for the whole corpus validate cleanly") {
  for (const char* name :
       {"t1_island_relay.json", "t2_relay_capacity.json", "t3_fuel_run.json",
        "t4_loop_choice.json", "t5_stuck_closed.json"}) {
    DYNAMIC_SECTION(name) {
      const testsup::Solved& sol = solved_for(name, "");
      ValidationReport rep = check_schedule(sol.model.sc, sol.schedule, 1e-6);
      for (const Violation& v : rep.violations)
        UNSCOPED_INFO(v.family << " " << v.where << ": " << v.detail);
      REQUIRE(rep.ok());
      CHECK_THAT(rep.objective,
                 Catch::Matchers::WithinAbs(sol.result.objective, 1e-6));
    }
  }
}

TEST_CASE("restored-energy series is rebuilt from the pickup flags") {
  const testsup::Solved& sol = solved_for("t1_island_relay.json", "");
  ValidationReport rep = check_schedule(sol.model.sc, sol.schedule, 1e-6);
  REQUIRE(rep.restored_kwh_per_span.size() == 3);
  CHECK_THAT(rep.restored_kwh_per_span[0], Catch::Matchers::WithinAbs(25.0, 1e-9));
  CHECK_THAT(rep.restored_kwh_per_span[1], Catch::Matchers::WithinAbs(51.0, 1e-9));
  CHECK_THAT(rep.restored_kwh_per_span[2], Catch::Matchers::WithinAbs(51.0, 1e-9));
  CHECK_THAT(rep.restored_weighted_kwh_per_span[0],
             Catch::Matchers::WithinAbs(25.0, 1e-9));
  CHECK_THAT(rep.restored_weighted_kwh_per_span[1],
             Catch::Matchers::WithinAbs(66.5, 1e-9));
  CHECK_THAT(rep.restored_weighted_kwh_per_span[2],
             Catch::Matchers::WithinAbs(66.5, 1e-9));
  CHECK_THAT(rep.restored_weighted_kwh, Catch::Matchers::WithinAbs(158.0, 1e-9));
  CHECK_THAT(rep.travel_penalty, Catch::Matchers::WithinAbs(0.1, 1e-9));
  CHECK_THAT(rep.fuel_penalty, Catch::Matchers::WithinAbs(0.0, 1e-9));
}

TEST_CASE("an idle schedule is feasible and restores nothing") {
  Scenario sc = testsup::load_fixture("t4_loop_choice.json");
  const int D = sc.time.spans;
  Schedule s;
  s.case_label = "case5";
  s.spans = D;
  s.grid.closed.assign(D, std::vector<int>(sc.branches_count(), 0));
  s.grid.pickup.assign(D, std::vector<int>(sc.nodes_count(), 0));
  s.grid.energized.assign(D, std::vector<int>(sc.nodes_count(), 0));
  s.grid.v_squared.assign(D, std::vector<double>(sc.nodes_count(), 1.0));
  s.grid.branch_p_kw.assign(D, std::vector<double>(sc.branches_count(), 0.0));
  s.grid.branch_q_kvar.assign(D, std::vector<double>(sc.branches_count(), 0.0));
  for (int t = 0; t < D; ++t) s.grid.energized[t][sc.substation] = 1;

  ValidationReport rep = check_schedule(sc, s, 1e-6);
  for (const Violation& v : rep.violations)
    UNSCOPED_INFO(v.family << " " << v.where << ": " << v.detail);
  REQUIRE(rep.ok());
  CHECK_THAT(rep.objective, Catch::Matchers::WithinAbs(0.0, 1e-12));
  CHECK_THAT(rep.restored_weighted_kwh, Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("a report with findings prints every family label") {
  const testsup::Solved& sol = solved_for("t1_island_relay.json", "");
  Schedule bad = sol.schedule;
  bad.modules[0].soc[0] = 0.2;
  ValidationReport rep = check_schedule(sol.model.sc, bad, 1e-6);
  REQUIRE_FALSE(rep.ok());
  const std::string text = rep.to_text();
  CHECK(text.find("violation") != std::string::npos);
  CHECK(text.find("[5e]") != std::string::npos);
}

TEST_CASE("every corruption in the battery is caught under its own family") {
  const auto& battery = battery::corruption_battery();
  REQUIRE(battery.size() >= 20);
  for (const battery::Corruption& c : battery) {
    DYNAMIC_SECTION(c.name) {
      const testsup::Solved& sol = solved_for(c.fixture, c.variant);
      Schedule damaged = sol.schedule;
      c.apply(sol.model.sc, damaged);
      ValidationReport rep = check_schedule(sol.model.sc, damaged, 1e-6);
      CHECK_FALSE(rep.ok());
      const auto fams = rep.families();
      INFO("expected family " << c.family);
      for (const Violation& v : rep.violations)
        UNSCOPED_INFO("got " << v.family << " " << v.where << ": " << v.detail);
      CHECK(fams.count(c.family) == 1);
    }
  }
}

TEST_CASE("schedules cross-validated against sibling variants") {
  // A stationary-variant schedule is feasible under the joint variant too:
  // freezing travel only removes options.
  const testsup::Solved& c2 = solved_for("t1_island_relay.json", "case2");
  Schedule relabeled = c2.schedule;
  relabeled.case_label = "case5";
  ValidationReport rep = check_schedule(c2.model.sc, relabeled, 1e-6);
  for (const Violation& v : rep.violations)
    UNSCOPED_INFO(v.family << " " << v.where << ": " << v.detail);
  CHECK(rep.ok());

  // The converse direction must be flagged: the joint optimum moves the
  // carrier, which the frozen variant forbids.
  const testsup::Solved& c5 = solved_for("t1_island_relay.json", "");
  Schedule frozen = c5.schedule;
  frozen.case_label = "case1";
  ValidationReport rep2 = check_schedule(c5.model.sc, frozen, 1e-6);
  REQUIRE_FALSE(rep2.ok());
  CHECK(rep2.families().count("case-freeze") == 1);
}
