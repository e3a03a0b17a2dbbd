#pragma once

// Systematic single-field schedule corruptions. Each entry names the
// constraint family the damaged field belongs to; check_schedule must
// report at least one violation carrying that family. Secondary families
// may surface too (a broken SOC chain also moves power balances), so the
// assertion is membership, not equality.

#include <functional>
#include <string>
#include <vector>

#include "mersched/scenario.hpp"
#include "mersched/schedule.hpp"

namespace battery {

struct Corruption {
  std::string name;
  std::string fixture;  // fixture file the schedule is solved from
  std::string variant;  // case label to solve under; "" keeps the default
  std::string family;   // family that must appear in the report
  std::function<void(const mersched::Scenario&, mersched::Schedule&)> apply;
};

namespace detail {

inline int branch_of(const mersched::Scenario& sc, const std::string& a,
                     const std::string& b) {
  return sc.branch_index.at({a, b});
}

inline int node_of(const mersched::Scenario& sc, const std::string& id) {
  return sc.node_index.at(id);
}

// First span (1-based) where some module rides the given carrier.
inline int riding_span(const mersched::Schedule& s, const std::string& carrier,
                       std::string* who = nullptr) {
  for (std::size_t t = 1; t < s.modules.front().carrier.size(); ++t)
    for (const auto& ms : s.modules)
      if (ms.carrier[t] == carrier) {
        if (who) *who = ms.id;
        return static_cast<int>(t);
      }
  return -1;
}

}  // namespace detail

inline const std::vector<Corruption>& corruption_battery() {
  using mersched::Scenario;
  using mersched::Schedule;
  namespace bd = battery::detail;
  static const std::vector<Corruption> list = {
      {"carrier parked and moving at once", "t1_island_relay.json", "", "1a",
       [](const Scenario&, Schedule& s) { s.carriers[0].position[1] = "n2"; }},

      {"carrier starts at the wrong site", "t1_island_relay.json", "", "1g",
       [](const Scenario&, Schedule& s) { s.carriers[0].position[0] = "n4"; }},

      {"carrier teleports between parked spans", "t1_island_relay.json", "", "1b-upper",
       [](const Scenario&, Schedule& s) { s.carriers[0].position[3] = "n2"; }},

      {"carrier lands away from its heading", "t1_island_relay.json", "", "1b-lower",
       [](const Scenario&, Schedule& s) { s.carriers[0].position[2] = "n2"; }},

      {"tanker trip shorter than the travel time", "t3_fuel_run.json", "", "1e-lower",
       [](const Scenario&, Schedule& s) { s.tankers[0].heading[2] = "dep1"; }},

      {"module parked and riding at once", "t1_island_relay.json", "", "2a",
       [](const Scenario&, Schedule& s) { s.modules[0].carrier[2] = "carr1"; }},

      {"second module overloads the carrier", "t2_relay_capacity.json", "", "2b",
       [](const Scenario&, Schedule& s) {
         std::string rider;
         const int t = bd::riding_span(s, "carr1", &rider);
         for (auto& ms : s.modules)
           if (ms.id != rider) {
             ms.carrier[t] = "carr1";
             return;
           }
       }},

      {"module starts at the wrong site", "t1_island_relay.json", "", "2c",
       [](const Scenario&, Schedule& s) { s.modules[0].site[0] = "n4"; }},

      {"module rides a parked carrier", "t1_island_relay.json", "", "3a",
       [](const Scenario&, Schedule& s) { s.modules[0].carrier[3] = "carr1"; }},

      {"module picked up away from the departure", "t2_relay_capacity.json", "", "3b",
       [](const Scenario&, Schedule& s) { s.modules[0].site[0] = ""; }},

      {"module kept aboard past the arrival", "t1_island_relay.json", "", "4b",
       [](const Scenario&, Schedule& s) { s.modules[0].site[2] = "n2"; }},

      {"module appears at a site without a drop", "t1_island_relay.json", "", "4c",
       [](const Scenario&, Schedule& s) { s.modules[0].site[3] = "n2"; }},

      {"module charges and discharges at once", "t1_island_relay.json", "", "5a",
       [](const Scenario&, Schedule& s) { s.modules[0].p_charge_kw[2] = 10; }},

      {"module reactive power over its rating", "t1_island_relay.json", "", "5b",
       [](const Scenario& sc, Schedule& s) {
         s.modules[0].q_kvar[1] = 1.5 * sc.fleet.modules[0].s_rated_kva;
       }},

      {"module outside the apparent-power disk", "t1_island_relay.json", "", "5c",
       [](const Scenario& sc, Schedule& s) {
         s.modules[0].q_kvar[1] = sc.fleet.modules[0].s_rated_kva;
       }},

      {"module state of charge off its recursion", "t1_island_relay.json", "", "5d",
       [](const Scenario&, Schedule& s) { s.modules[0].soc[2] -= 0.05; }},

      {"module initial state of charge wrong", "t1_island_relay.json", "", "5e",
       [](const Scenario&, Schedule& s) { s.modules[0].soc[0] = 0.5; }},

      {"module state of charge out of range", "t1_island_relay.json", "", "5f",
       [](const Scenario&, Schedule& s) { s.modules[0].soc[3] = 0.95; }},

      {"generator real power over its rating", "t3_fuel_run.json", "", "6a",
       [](const Scenario& sc, Schedule& s) {
         s.generators[0].p_kw[1] = 1.2 * sc.fleet.generators[0].p_max_kw;
       }},

      {"generator outside its rated disk", "t3_fuel_run.json", "", "6b",
       [](const Scenario& sc, Schedule& s) {
         s.generators[0].p_kw[0] = sc.fleet.generators[0].p_max_kw;
       }},

      {"generator burn volume out of range", "t3_fuel_run.json", "", "7a",
       [](const Scenario& sc, Schedule& s) {
         s.generators[0].burn_l[1] = 1.5 * sc.fleet.generators[0].burn_max_l;
       }},

      {"generator burn off the fuel curve", "t3_fuel_run.json", "", "7d",
       [](const Scenario&, Schedule& s) { s.generators[0].burn_l[0] = 6.9; }},

      {"generator tank level off its recursion", "t3_fuel_run.json", "", "7g",
       [](const Scenario&, Schedule& s) { s.generators[0].sof[2] -= 0.02; }},

      {"tanker level off its recursion", "t3_fuel_run.json", "", "7h",
       [](const Scenario&, Schedule& s) { s.tankers[0].sof[2] -= 0.2; }},

      {"site stock off its recursion", "t3_fuel_run.json", "", "7i",
       [](const Scenario&, Schedule& s) {
         for (auto& site : s.sites)
           if (site.id == "n2") site.sof[1] += 0.1;
       }},

      {"generator exchange flag not binary", "t3_fuel_run.json", "", "7j",
       [](const Scenario&, Schedule& s) { s.generators[0].exchange[1] = 2; }},

      {"generator tank exchange beyond capacity", "t3_fuel_run.json", "", "7k",
       [](const Scenario& sc, Schedule& s) {
         s.generators[0].refill_l[2] = 2.0 * sc.fleet.generators[0].tank_l;
       }},

      {"tanker pumps while traveling", "t3_fuel_run.json", "", "7l",
       [](const Scenario&, Schedule& s) { s.tankers[0].exchange[0] = 1; }},

      {"tanker transfer beyond the pump rating", "t3_fuel_run.json", "", "7m",
       [](const Scenario& sc, Schedule& s) {
         s.tankers[0].transfer_l[2] = 1.5 * sc.fleet.tankers[0].rate_out_l_per_h *
                                      sc.time.span_hours;
       }},

      {"tanker initial level wrong", "t3_fuel_run.json", "", "7n",
       [](const Scenario&, Schedule& s) { s.tankers[0].sof[0] = 0.5; }},

      {"tanker level out of range", "t3_fuel_run.json", "", "7o",
       [](const Scenario&, Schedule& s) { s.tankers[0].sof[3] = 1.3; }},

      {"switch state not binary", "t4_loop_choice.json", "", "8g",
       [](const Scenario&, Schedule& s) { s.grid.closed[0][0] = 2; }},

      {"closed switches form a loop", "t4_loop_choice.json", "", "8g",
       [](const Scenario&, Schedule& s) {
         for (auto& c : s.grid.closed[0])
           if (c == 0) {
             c = 1;
             return;
           }
       }},

      {"substation exports real power", "t4_loop_choice.json", "", "9a",
       [](const Scenario& sc, Schedule& s) {
         s.grid.branch_p_kw[0][bd::branch_of(sc, "n1", "n2")] = -50;
       }},

      {"substation exports reactive power", "t4_loop_choice.json", "", "9b",
       [](const Scenario& sc, Schedule& s) {
         s.grid.branch_q_kvar[0][bd::branch_of(sc, "n1", "n2")] = -40;
       }},

      {"real nodal balance broken", "t4_loop_choice.json", "", "9c",
       [](const Scenario& sc, Schedule& s) {
         s.grid.branch_p_kw[0][bd::branch_of(sc, "n2", "n3")] += 30;
       }},

      {"reactive nodal balance broken", "t4_loop_choice.json", "", "9d",
       [](const Scenario& sc, Schedule& s) {
         s.grid.branch_q_kvar[0][bd::branch_of(sc, "n2", "n3")] += 25;
       }},

      {"pickup flag not binary", "t4_loop_choice.json", "", "9e",
       [](const Scenario& sc, Schedule& s) {
         s.grid.pickup[0][bd::node_of(sc, "n2")] = 2;
       }},

      {"restored load shed again", "t1_island_relay.json", "", "9e",
       [](const Scenario& sc, Schedule& s) {
         s.grid.pickup[2][bd::node_of(sc, "n3")] = 0;
       }},

      {"voltage drop off across a branch", "t4_loop_choice.json", "", "9f",
       [](const Scenario& sc, Schedule& s) {
         s.grid.v_squared[0][bd::node_of(sc, "n3")] += 0.004;
       }},

      {"substation voltage off nominal", "t1_island_relay.json", "", "9g",
       [](const Scenario& sc, Schedule& s) {
         s.grid.v_squared[0][bd::node_of(sc, "n1")] = 0.98;
       }},

      {"squared voltage outside its window", "t4_loop_choice.json", "", "9g",
       [](const Scenario& sc, Schedule& s) {
         s.grid.v_squared[0][bd::node_of(sc, "n2")] = 1.21;
       }},

      {"flow beyond the branch rating", "t4_loop_choice.json", "", "9h",
       [](const Scenario& sc, Schedule& s) {
         s.grid.branch_p_kw[0][bd::branch_of(sc, "n1", "n2")] = 400;
       }},

      {"flow on an open branch", "t1_island_relay.json", "", "9h",
       [](const Scenario& sc, Schedule& s) {
         s.grid.branch_p_kw[0][bd::branch_of(sc, "n1", "n2")] = 50;
       }},

      {"faulted branch closed", "t1_island_relay.json", "", "9i",
       [](const Scenario& sc, Schedule& s) {
         s.grid.closed[0][bd::branch_of(sc, "n1", "n2")] = 1;
       }},

      {"stuck-closed branch opened", "t1_island_relay.json", "", "9i",
       [](const Scenario& sc, Schedule& s) {
         s.grid.closed[0][bd::branch_of(sc, "n3", "n4")] = 0;
       }},

      {"stuck-closed load shed while energized", "t5_stuck_closed.json", "", "9i",
       [](const Scenario& sc, Schedule& s) {
         s.grid.pickup[0][bd::node_of(sc, "n3")] = 0;
       }},

      {"fed substation not energized", "t1_island_relay.json", "", "9j",
       [](const Scenario& sc, Schedule& s) {
         s.grid.energized[0][bd::node_of(sc, "n1")] = 0;
       }},

      {"node energized without any source", "t1_island_relay.json", "", "9m",
       [](const Scenario& sc, Schedule& s) {
         s.grid.energized[0][bd::node_of(sc, "n4")] = 1;
       }},

      {"node dark beside a parked source", "t1_island_relay.json", "", "9m",
       [](const Scenario& sc, Schedule& s) {
         s.grid.energized[2][bd::node_of(sc, "n4")] = 0;
       }},

      {"carrier travels under the frozen variant", "t1_island_relay.json", "case1",
       "case-freeze",
       [](const Scenario&, Schedule& s) { s.carriers[0].heading[1] = "n4"; }},
  };
  return list;
}

}  // namespace battery
