#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "../test_support.hpp"

using namespace mersched;

namespace {

std::map<int, double> term_map(const LinRow& r) {
  std::map<int, double> out;
  for (const LinTerm& t : r.expr.terms) out[t.var] = t.coef;
  return out;
}

// First row of the family whose terms contain `var` with coefficient `coef`.
const LinRow& find_row(const ModelIR& ir, const std::string& family, int var,
                       double coef) {
  for (const LinRow& r : ir.rows) {
    if (r.family != family) continue;
    for (const LinTerm& t : r.expr.terms)
      if (t.var == var && t.coef == coef) return r;
  }
  throw std::runtime_error("no row in family " + family + " touching the variable");
}

}  // namespace

TEST_CASE("each span has exactly one ownership row per vehicle") {
  Scenario sc = testsup::load_fixture("t1_island_relay.json");
  Model m = assemble(sc);
  auto fam = m.ir.rows_by_family();
  // one carrier, spans 0..3
  CHECK(fam["1a"] == 4);
  CHECK(fam["2a"] == 4);

  const RoutingBlock& rb = m.carriers[0];
  const LinRow& own = find_row(m.ir, "1a", rb.x[0][0], 1.0);
  auto t = term_map(own);
  REQUIRE(t.size() == 4);
  CHECK(t.at(rb.x[0][0]) == 1.0);
  CHECK(t.at(rb.x[1][0]) == 1.0);
  CHECK(t.at(rb.v[0][0]) == 1.0);
  CHECK(t.at(rb.v[1][0]) == 1.0);
  CHECK(own.sense == Sense::eq);
  CHECK(own.rhs == 1.0);
}

TEST_CASE("parking transitions carry the fractional coupling coefficients") {
  Scenario sc = testsup::load_fixture("t1_island_relay.json");
  Model m = assemble(sc);
  const RoutingBlock& rb = m.carriers[0];

  const LinRow& up = find_row(m.ir, "1b-upper", rb.x[0][1], 1.0);
  auto ut = term_map(up);
  CHECK(up.sense == Sense::le);
  CHECK(up.rhs == 0.7);
  CHECK(ut.at(rb.x[0][0]) == -1.0);
  CHECK(ut.at(rb.v[0][0]) == -0.5);
  CHECK(ut.at(rb.v[0][1]) == 0.5);
  CHECK(ut.at(rb.v[1][0]) == 0.5);
  CHECK(ut.at(rb.v[1][1]) == -0.5);

  const LinRow& lo = find_row(m.ir, "1b-lower", rb.x[0][1], 1.0);
  auto lt = term_map(lo);
  CHECK(lo.sense == Sense::ge);
  CHECK(lo.rhs == -0.8);
  CHECK(lt.at(rb.x[0][0]) == -1.0);
  CHECK(lt.at(rb.v[0][0]) == Catch::Approx(-1.6));
  CHECK(lt.at(rb.v[0][1]) == Catch::Approx(1.6));
  CHECK(lt.at(rb.v[1][0]) == Catch::Approx(-0.4));
  CHECK(lt.at(rb.v[1][1]) == Catch::Approx(0.4));
}

TEST_CASE("arrivals wait out the travel time") {
  Scenario sc = testsup::load_fixture("t1_island_relay.json");
  Model m = assemble(sc);
  const RoutingBlock& rb = m.carriers[0];
  REQUIRE(rb.travel[0][1] == 1);

  const LinRow& arr = find_row(m.ir, "1c", rb.S[1], 1.0);
  auto t = term_map(arr);
  CHECK(arr.sense == Sense::ge);
  CHECK(arr.rhs == -1.0);          // -M_i with M_i = sum of travel times = 1
  CHECK(t.at(rb.v[1][1]) == -1.0); // T(0,1) * v at the destination
  CHECK(t.at(rb.x[0][0]) == -1.0);
}

TEST_CASE("initial state rows pin the fleet where it starts") {
  Scenario sc = testsup::load_fixture("t1_island_relay.json");
  Model m = assemble(sc);
  const RoutingBlock& rb = m.carriers[0];

  const LinRow& at_start = find_row(m.ir, "1g", rb.x[0][0], 1.0);
  CHECK(at_start.sense == Sense::eq);
  CHECK(at_start.rhs == 1.0);  // carr1 starts at n2
  CHECK(find_row(m.ir, "1g", rb.S[0], 1.0).rhs == 0.0);
  CHECK(find_row(m.ir, "1g", rb.R[0], 1.0).rhs == 0.0);
  CHECK(find_row(m.ir, "1g", rb.w[0], 1.0).rhs == 0.0);

  CHECK(find_row(m.ir, "2c", m.sv.zeta[0][0][0], 1.0).rhs == 1.0);  // mod1 at n2
  CHECK(find_row(m.ir, "5e", m.mv.soc[0][0], 1.0).rhs == 0.9);
}

TEST_CASE("carrier load limit weighs the riders") {
  Scenario sc = testsup::load_fixture("t2_relay_capacity.json");
  Model m = assemble(sc);
  const LinRow& cap = find_row(m.ir, "2b", m.sv.gamma[0][0][1], 1.2);
  auto t = term_map(cap);
  REQUIRE(t.size() == 2);
  CHECK(t.at(m.sv.gamma[1][0][1]) == 1.0);
  CHECK(cap.sense == Sense::le);
  CHECK(cap.rhs == 2.0);
}

TEST_CASE("state of charge steps by efficiency-scaled energy fractions") {
  Scenario sc = testsup::load_fixture("ieee33.json");
  Model m = assemble(sc);
  // dt*base/E = 0.5*1000/1000, charging at rated 0.5 pu moves soc by 0.2375.
  const LinRow& soc = find_row(m.ir, "5d", m.mv.soc[0][1], 1.0);
  auto t = term_map(soc);
  CHECK(soc.sense == Sense::eq);
  CHECK(soc.rhs == 0.0);
  CHECK(t.at(m.mv.soc[0][0]) == -1.0);
  const double cf = 0.5 * 1000 / 1000;
  for (std::size_t i = 0; i < m.sc.access.storage_nodes.size(); ++i) {
    CHECK(t.at(m.mv.p_c[0][i][0]) == Catch::Approx(-0.95 * cf));
    CHECK(t.at(m.mv.p_d[0][i][0]) == Catch::Approx(cf / 0.95));
  }
  CHECK(0.95 * cf * 0.5 == Catch::Approx(0.2375));
}

TEST_CASE("fuel curve segments interpolate the published points") {
  Scenario sc = testsup::load_fixture("ieee33.json");
  const Generator& g = sc.fleet.generators[0];
  auto segs = fuel_segments(g, 1000, 0.5);
  REQUIRE(segs.size() == 4);
  CHECK(segs[0].p_lo == 0.0);
  CHECK(segs[0].p_hi == Catch::Approx(0.2));
  CHECK(segs[1].p_lo == Catch::Approx(0.2));
  CHECK(segs[1].p_hi == Catch::Approx(0.4));

  auto liters_per_span = [&](double p_pu) {
    for (const auto& s : segs)
      if (p_pu >= s.p_lo - 1e-12 && p_pu <= s.p_hi + 1e-12)
        return s.slope * p_pu + s.intercept;
    throw std::runtime_error("load above rated power");
  };
  // 400 kW burns 109.8 L/h, 800 kW burns 200.6 L/h.
  CHECK(liters_per_span(0.4) == Catch::Approx(54.9));
  CHECK(liters_per_span(0.8) == Catch::Approx(100.3));
  CHECK(liters_per_span(0.2) == Catch::Approx(32.2));
}

TEST_CASE("logistics families appear exactly when their fleet class does") {
  Model t1 = assemble(testsup::load_fixture("t1_island_relay.json"));
  auto f1 = t1.ir.rows_by_family();
  for (const char* fam : {"1a", "1b-upper", "1c", "1d", "1e-lower", "1f-hold",
                          "2a", "2b", "2c", "3a", "3b", "3c", "4a", "4b", "4c",
                          "5a", "5b", "5c", "5d", "5e", "5f"})
    CHECK(f1.count(fam) == 1);
  for (const char* fam : {"6a", "6b", "7a", "7d", "7g", "7m"})
    CHECK(f1.count(fam) == 0);

  Model t3 = assemble(testsup::load_fixture("t3_fuel_run.json"));
  auto f3 = t3.ir.rows_by_family();
  for (const char* fam : {"6a", "6b", "7a", "7b", "7d", "7e", "7f", "7g", "7h",
                          "7i", "7j", "7k", "7l", "7m", "7n", "7o"})
    CHECK(f3.count(fam) == 1);
  for (const char* fam : {"2a", "5d"}) CHECK(f3.count(fam) == 0);
}

TEST_CASE("study variants pin the matching decisions") {
  Scenario sc = testsup::load_fixture("t1_island_relay.json");

  sc.study.variant = CaseId::none_resources;
  Model c1 = assemble(sc);
  for (const auto& per_site : c1.carriers[0].v)
    for (int id : per_site) CHECK(c1.ir.vars[id].ub == 0.0);
  for (const auto& site : c1.mv.p_d[0])
    for (int id : site) CHECK(c1.ir.vars[id].ub == 0.0);

  sc.study.variant = CaseId::stationary;
  Model c2 = assemble(sc);
  CHECK(c2.module_start[0] == "n2");
  for (const auto& per_site : c2.carriers[0].v)
    for (int id : per_site) CHECK(c2.ir.vars[id].ub == 0.0);
  // stationary still discharges
  bool can_discharge = false;
  for (const auto& site : c2.mv.p_d[0])
    for (int id : site) can_discharge = can_discharge || c2.ir.vars[id].ub > 0;
  CHECK(can_discharge);

  Scenario t3 = testsup::load_fixture("t3_fuel_run.json");
  t3.study.variant = CaseId::no_tanker;
  Model c4 = assemble(t3);
  for (const auto& per_site : c4.tanks[0].v)
    for (int id : per_site) CHECK(c4.ir.vars[id].ub == 0.0);
  for (const auto& site : c4.fv.tank_xch[0])
    for (int id : site) CHECK(c4.ir.vars[id].ub == 0.0);

  sc.study.variant = CaseId::bundled;
  Model c3 = assemble(sc);
  CHECK(c3.ir.rows_by_family().count("case3") == 1);
}
