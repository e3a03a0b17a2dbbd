#include <catch2/catch_amalgamated.hpp>

#include "../test_support.hpp"

using namespace mersched;

TEST_CASE("solved assignment turns into a structured schedule") {
  testsup::Solved s = testsup::solve_fixture("t1_island_relay.json", CaseId::joint);
  REQUIRE(s.result.status == SolveStatus::optimal);
  const Schedule& sch = s.schedule;

  CHECK(sch.case_label == "case5");
  CHECK(sch.spans == 3);
  CHECK(sch.objective == Catch::Approx(157.9).margin(1e-6));

  REQUIRE(sch.carriers.size() == 1);
  REQUIRE(sch.modules.size() == 1);
  CHECK(sch.carriers[0].position.size() == 4);
  CHECK(sch.carriers[0].position[0] == "n2");
  CHECK(sch.modules[0].site[0] == "n2");
  // carrier delivers the module to n4 and both stay there
  CHECK(sch.carriers[0].position[1] == "");  // en route
  CHECK(sch.carriers[0].heading[1] == "n4");
  CHECK(sch.carriers[0].position[2] == "n4");
  CHECK(sch.modules[0].site[2] == "n4");
  CHECK(sch.modules[0].carrier[1] == "carr1");

  CHECK(sch.modules[0].soc.size() == 4);
  CHECK(sch.modules[0].soc[0] == Catch::Approx(0.9));
  CHECK(sch.modules[0].p_discharge_kw.size() == 3);
  // parked spans discharge the full island load of 52 kW
  CHECK(sch.modules[0].p_discharge_kw[1] == Catch::Approx(52.0).margin(1e-4));

  REQUIRE(sch.grid.pickup.size() == 3);
  CHECK(sch.grid.pickup[0].size() == 4);
  // n1 restored from the first span, n3/n4 once the module lands
  int u1 = s.model.sc.node_index.at("n1");
  int u3 = s.model.sc.node_index.at("n3");
  CHECK(sch.grid.pickup[0][u1] == 1);
  CHECK(sch.grid.pickup[0][u3] == 0);
  CHECK(sch.grid.pickup[1][u3] == 1);
}

TEST_CASE("schedule serialization round trips byte for byte") {
  testsup::Solved s = testsup::solve_fixture("t4_loop_choice.json", CaseId::joint);
  REQUIRE(s.result.has_incumbent());
  std::string one = serialize_schedule(s.schedule);
  Schedule back = parse_schedule_text(one);
  std::string two = serialize_schedule(back);
  CHECK(one == two);
  CHECK(back.spans == s.schedule.spans);
  CHECK(back.objective == s.schedule.objective);
  CHECK(back.grid.closed == s.schedule.grid.closed);
  CHECK(back.grid.pickup == s.schedule.grid.pickup);
  CHECK(back.grid.v_squared == s.schedule.grid.v_squared);
}

TEST_CASE("extraction rejects a dimension mismatch") {
  testsup::Solved s = testsup::solve_fixture("t4_loop_choice.json", CaseId::joint);
  std::vector<double> x = assignment_for(s.model.ir, s.result);
  x.pop_back();
  CHECK_THROWS_AS(extract_schedule(s.model, x), std::runtime_error);
}

TEST_CASE("near-integral values are snapped, fractional ones rejected") {
  CHECK(mersched::detail::as_binary(1.0 - 1e-7, "v") == 1);
  CHECK(mersched::detail::as_binary(1e-7, "v") == 0);
  CHECK_THROWS_AS(mersched::detail::as_binary(0.4, "v"), std::runtime_error);
}

TEST_CASE("generator and tanker series land in the schedule") {
  testsup::Solved s = testsup::solve_fixture("t3_fuel_run.json", CaseId::joint);
  REQUIRE(s.result.status == SolveStatus::optimal);
  const Schedule& sch = s.schedule;
  REQUIRE(sch.generators.size() == 1);
  REQUIRE(sch.tankers.size() == 1);
  REQUIRE(sch.sites.size() == 2);

  const GeneratorSchedule& g = sch.generators[0];
  CHECK(g.position[0] == "n2");
  CHECK(g.sof[0] == Catch::Approx(0.4));
  // serving 30 kW costs 5.5 L per span
  CHECK(g.burn_l[0] == Catch::Approx(5.5).margin(1e-5));
  CHECK(g.p_kw[0] == Catch::Approx(30).margin(1e-4));

  const TankerSchedule& f = sch.tankers[0];
  CHECK(f.position[0] == "dep1");
  CHECK(f.position[3] == "n2");
  CHECK(f.exchange[2] == 1);
  // the tanker leaves fuel behind in the third span
  CHECK(f.transfer_l[2] > 4.4);
}
