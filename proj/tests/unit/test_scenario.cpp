#include <catch2/catch_amalgamated.hpp>

#include "../test_support.hpp"
#include "mersched/scenario.hpp"

using namespace mersched;

namespace {

// Smallest scenario document that passes validation, used as a base for
// error-path probes.
Json base_doc() {
  Json j;
  j["version"] = 1;
  j["time"] = {{"span_count", 2}, {"span_length_h", 0.5}};
  j["network"] = {
      {"base_power_kw", 100},
      {"base_voltage_kv", 12.66},
      {"substation", "a"},
      {"v_min_pu", 0.95},
      {"v_max_pu", 1.05},
      {"nodes",
       Json::array({Json{{"id", "a"}, {"weight", 1}},
                    Json{{"id", "b"}, {"p_load_kw", 10}, {"q_load_kvar", 2}, {"weight", 2}}})},
      {"branches", Json::array({Json{{"from", "a"},
                                     {"to", "b"},
                                     {"r_pu", 0.01},
                                     {"x_pu", 0.01},
                                     {"capacity_kva", 100}}})}};
  j["access"] = {{"storage_nodes", Json::array()},
                 {"generator_nodes", Json::array()},
                 {"depots", Json::array()}};
  j["faults"] = Json::array();
  j["fleet"] = {{"carriers", Json::array()},
                {"modules", Json::array()},
                {"generators", Json::array()},
                {"tankers", Json::array()}};
  j["travel"] = {{"storage", Json::array()}, {"fuel", Json::array()}};
  j["study"] = {{"phi_travel", 0.1}, {"phi_fuel", 0.1}, {"case", "case5"}};
  return j;
}

}  // namespace

TEST_CASE("fixture corpus parses with expected shape") {
  Scenario t1 = testsup::load_fixture("t1_island_relay.json");
  CHECK(t1.time.spans == 3);
  CHECK(t1.time.span_hours == 0.5);
  CHECK(t1.nodes_count() == 4);
  CHECK(t1.branches_count() == 3);
  CHECK(t1.access.storage_nodes == std::vector<std::string>{"n2", "n4"});
  CHECK(t1.study.variant == CaseId::joint);
  CHECK(t1.study.substation_energized);

  Scenario big = testsup::load_fixture("ieee33.json");
  CHECK(big.nodes_count() == 33);
  CHECK(big.branches_count() == 37);
  CHECK(big.time.spans == 12);
  CHECK(big.access.storage_nodes.size() == 4);
  CHECK(big.access.generator_sites.size() == 3);
  CHECK(big.access.depots.size() == 1);
  CHECK(big.fleet.modules.size() == 4);
  CHECK(big.fleet.carriers.size() == 2);
  CHECK(big.fleet.generators.size() == 1);
  CHECK(big.fleet.tankers.size() == 1);
}

TEST_CASE("impedances given in ohms are converted to per unit") {
  Scenario big = testsup::load_fixture("ieee33.json");
  // Z_base = 12.66^2 * 1000 / 1000 kW = 160.2756 ohm.
  const Branch& b12 = big.network.branches.front();
  CHECK(b12.from == "n1");
  CHECK(b12.r_pu == Catch::Approx(0.0922 / 160.2756).epsilon(1e-9));
  CHECK(b12.x_pu == Catch::Approx(0.0470 / 160.2756).epsilon(1e-9));
}

TEST_CASE("travel lookup is symmetric with self trips free") {
  Scenario t1 = testsup::load_fixture("t1_island_relay.json");
  CHECK(t1.travel.spans_for("carr1", "storage", "n2", "n4") == 1);
  CHECK(t1.travel.spans_for("carr1", "storage", "n4", "n2") == 1);
  CHECK(t1.travel.spans_for("carr1", "storage", "n2", "n2") == 0);
}

TEST_CASE("fault stages resolve by span") {
  Scenario t5 = testsup::load_fixture("t5_stuck_closed.json");
  FaultSets f1 = t5.fault_sets_at(1);
  FaultSets f3 = t5.fault_sets_at(3);
  CHECK(f1.closed_nodes.size() == 1);
  CHECK(f3.closed_nodes.empty());
  CHECK(f1.open_branches.size() == 1);
  CHECK(f3.open_branches.size() == 1);
}

TEST_CASE("case2 targets and case3 bundles get defaults") {
  Scenario t2 = testsup::load_fixture("t2_relay_capacity.json");
  CHECK(t2.study.case2_module_node == "n2");
  REQUIRE(t2.study.case3_bundles.size() == 1);
  const Bundle& b = t2.study.case3_bundles.front();
  CHECK(b.carrier == "carr1");
  // carr1 has capacity 2: mod1 (1.2) fits, mod2 (1.0) no longer does.
  CHECK(b.modules == std::vector<std::string>{"mod1"});
}

TEST_CASE("validation rejects malformed scenarios") {
  auto expect_reject = [](Json j, const std::string& hint) {
    INFO(hint);
    CHECK_THROWS_AS(parse_scenario(j), ScenarioError);
  };

  Json dup = base_doc();
  dup["network"]["nodes"].push_back(Json{{"id", "a"}, {"weight", 1}});
  expect_reject(dup, "duplicate node id");

  Json volt = base_doc();
  volt["network"]["v_min_pu"] = 1.01;
  expect_reject(volt, "voltage window excludes nominal");

  Json disc = base_doc();
  disc["network"]["nodes"].push_back(Json{{"id", "c"}, {"weight", 1}});
  expect_reject(disc, "disconnected node");

  Json conflict = base_doc();
  conflict["faults"] = Json::array({Json{{"spans", Json::array({1, 2})},
                                         {"open_nodes", Json::array({"b"})},
                                         {"closed_nodes", Json::array({"b"})},
                                         {"open_branches", Json::array()},
                                         {"closed_branches", Json::array()}}});
  expect_reject(conflict, "node both stuck open and stuck closed");

  Json grow = base_doc();
  grow["faults"] = Json::array(
      {Json{{"spans", Json::array({1, 1})},
            {"open_nodes", Json::array()},
            {"closed_nodes", Json::array()},
            {"open_branches", Json::array()},
            {"closed_branches", Json::array()}},
       Json{{"spans", Json::array({2, 2})},
            {"open_nodes", Json::array({"b"})},
            {"closed_nodes", Json::array()},
            {"open_branches", Json::array()},
            {"closed_branches", Json::array()}}});
  expect_reject(grow, "fault sets may only shrink over time");

  Json heavy = base_doc();
  heavy["access"]["storage_nodes"] = Json::array({"a", "b"});
  heavy["travel"]["storage"] =
      Json::array({Json{{"from", "a"}, {"to", "b"}, {"spans", 1}}});
  heavy["fleet"]["carriers"] =
      Json::array({Json{{"id", "c1"}, {"capacity", 1}, {"start", "a"}}});
  heavy["fleet"]["modules"] = Json::array(
      {Json{{"id", "m1"}, {"weight", 3}, {"p_charge_max_kw", 10},
            {"p_discharge_max_kw", 10}, {"s_rated_kva", 12}, {"energy_kwh", 50},
            {"eff_charge", 0.95}, {"eff_discharge", 0.95}, {"soc_initial", 0.5},
            {"soc_min", 0.1}, {"soc_max", 0.9}, {"start", "a"}}});
  expect_reject(heavy, "module heavier than every carrier");

  Json sparse = base_doc();
  sparse["access"]["storage_nodes"] = Json::array({"a", "b"});
  sparse["fleet"]["carriers"] =
      Json::array({Json{{"id", "c1"}, {"capacity", 1}, {"start", "a"}}});
  expect_reject(sparse, "missing travel time for a storage pair");

  Json curve = base_doc();
  curve["access"]["generator_nodes"] =
      Json::array({Json{{"id", "b"}, {"fuel_capacity_l", 100}, {"initial_sof", 0}}});
  curve["fleet"]["generators"] = Json::array(
      {Json{{"id", "g1"}, {"p_max_kw", 40}, {"q_max_kvar", 10}, {"s_rated_kva", 45},
            {"fuel_capacity_l", 20}, {"initial_sof", 0.5}, {"burn_max_l", 5},
            {"fuel_rate_points",
             Json::array({Json{{"load_kw", 20}, {"rate_l_per_h", 8}}})},
            {"start", "b"}}});
  expect_reject(curve, "fuel curve stops short of rated power");
}

TEST_CASE("fault branch references must exist") {
  Json j = base_doc();
  j["faults"] = Json::array({Json{{"spans", Json::array({1, 1})},
                                  {"open_nodes", Json::array()},
                                  {"closed_nodes", Json::array()},
                                  {"open_branches", Json::array({Json::array({"a", "zz"})})},
                                  {"closed_branches", Json::array()}}});
  CHECK_THROWS_AS(parse_scenario(j), ScenarioError);
}

TEST_CASE("stuck closed branches may not form a cycle") {
  Json j = base_doc();
  j["network"]["nodes"].push_back(Json{{"id", "c"}, {"weight", 1}});
  j["network"]["branches"].push_back(
      Json{{"from", "b"}, {"to", "c"}, {"r_pu", 0.01}, {"x_pu", 0.01}, {"capacity_kva", 100}});
  j["network"]["branches"].push_back(
      Json{{"from", "c"}, {"to", "a"}, {"r_pu", 0.01}, {"x_pu", 0.01}, {"capacity_kva", 100}});
  j["faults"] = Json::array(
      {Json{{"spans", Json::array({1, 2})},
            {"open_nodes", Json::array()},
            {"closed_nodes", Json::array()},
            {"open_branches", Json::array()},
            {"closed_branches",
             Json::array({Json::array({"a", "b"}), Json::array({"b", "c"}),
                          Json::array({"c", "a"})})}}});
  CHECK_THROWS_AS(parse_scenario(j), ScenarioError);
}
