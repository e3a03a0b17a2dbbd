#include <catch2/catch_amalgamated.hpp>

#include "../test_support.hpp"
#include "mersched/assemble.hpp"
#include "mersched/solver.hpp"

using namespace mersched;

namespace {

// Fed substation, a stuck-closed feeder to a stuck-closed load far beyond
// the branch rating. Every switch plan violates either the fault pins or
// the flow limit, so the model as a whole has no feasible point.
const char* kImpossible = R"json({
 "version": 1,
 "time": {"span_count": 2, "span_length_h": 0.5},
 "network": {
  "base_power_kw": 100,
  "base_voltage_kv": 12.66,
  "substation": "n1",
  "v_min_pu": 0.95,
  "v_max_pu": 1.05,
  "nodes": [
   {"id": "n1", "weight": 1},
   {"id": "n2", "p_load_kw": 500, "q_load_kvar": 100, "weight": 2}
  ],
  "branches": [
   {"from": "n1", "to": "n2", "r_pu": 0.005, "x_pu": 0.005, "capacity_kva": 300}
  ]
 },
 "access": {"storage_nodes": [], "generator_nodes": [], "depots": []},
 "faults": [
  {"spans": [1, 2], "open_nodes": [], "closed_nodes": ["n2"],
   "open_branches": [], "closed_branches": [["n1", "n2"]]}
 ],
 "fleet": {"carriers": [], "modules": [], "generators": [], "tankers": []},
 "travel": {"storage": [], "fuel": []},
 "study": {
  "phi_travel": 0.1, "phi_fuel": 0.1, "case": "case5", "gap": 1e-06,
  "disk_segments": 8, "substation_energized": true
 }
})json";

}  // namespace

TEST_CASE("the bridge solves a reconfiguration-only model to optimality") {
  testsup::Solved sol = testsup::solve_fixture("t4_loop_choice.json");
  CHECK(sol.result.status == SolveStatus::optimal);
  CHECK(sol.result.has_incumbent());
  CHECK_THAT(sol.result.objective, Catch::Matchers::WithinAbs(80.0, 1e-6));
  CHECK_THAT(sol.result.bound, Catch::Matchers::WithinAbs(80.0, 1e-4));
  CHECK(sol.result.gap < 1e-4);
  CHECK(sol.result.values.size() == sol.model.ir.vars.size());
}

TEST_CASE("the bridge solves the joint routing model") {
  testsup::Solved sol = testsup::solve_fixture("t1_island_relay.json");
  CHECK(sol.result.status == SolveStatus::optimal);
  CHECK_THAT(sol.result.objective, Catch::Matchers::WithinAbs(157.9, 1e-6));
}

TEST_CASE("repeat solves reproduce the incumbent exactly") {
  Scenario sc = testsup::load_fixture("t3_fuel_run.json");
  Model m = assemble(sc);
  SolveOptions so;
  so.gap = 1e-6;
  so.backend = testsup::backend_path();
  SolveResult a = solve(m.ir, so);
  SolveResult b = solve(m.ir, so);
  REQUIRE(a.status == SolveStatus::optimal);
  REQUIRE(b.status == SolveStatus::optimal);
  CHECK(a.objective == b.objective);
  CHECK(a.values == b.values);
}

TEST_CASE("an impossible scenario is reported infeasible") {
  Scenario sc = parse_scenario_text(kImpossible);
  Model m = assemble(sc);
  SolveOptions so;
  so.backend = testsup::backend_path();
  SolveResult r = solve(m.ir, so);
  CHECK(r.status == SolveStatus::infeasible);
  CHECK_FALSE(r.has_incumbent());
}

TEST_CASE("a missing backend surfaces as an error result") {
  Scenario sc = testsup::load_fixture("t4_loop_choice.json");
  Model m = assemble(sc);
  SolveOptions so;
  so.backend = "/nonexistent/backend.py";
  SolveResult r = solve(m.ir, so);
  CHECK(r.status == SolveStatus::error);
  CHECK_FALSE(r.has_incumbent());
  CHECK_FALSE(r.message.empty());
}

TEST_CASE("variable assignments line up with the model ordering") {
  testsup::Solved sol = testsup::solve_fixture("t4_loop_choice.json");
  std::vector<double> x = assignment_for(sol.model.ir, sol.result);
  REQUIRE(x.size() == sol.model.ir.vars.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const VarDef& v = sol.model.ir.vars[i];
    CHECK(x[i] >= v.lb - 1e-6);
    CHECK(x[i] <= v.ub + 1e-6);
  }
}
