#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "scenario.hpp"
#include "schedule.hpp"

namespace mersched {

// Independent plan checker. Works purely on the schedule and the scenario:
// no model matrices, no variable names. Auxiliary quantities the model
// carries as variables (arrival markers, travel budgets, tank-coverage
// splits, energized-arc indicators) are re-derived here from first
// principles, and disks are checked as true quadratics rather than polygon
// cuts. Each finding carries the constraint-family label it falls under so
// reports line up with the model's row families.

struct Violation {
  std::string family;
  std::string where;
  double amount = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double restored_weighted_kwh = 0;
  double travel_penalty = 0;
  double fuel_penalty = 0;
  std::vector<double> restored_kwh_per_span;           // unweighted, kWh
  std::vector<double> restored_weighted_kwh_per_span;  // objective units

  bool ok() const { return violations.empty(); }

  std::set<std::string> families() const {
    std::set<std::string> f;
    for (const Violation& v : violations) f.insert(v.family);
    return f;
  }

  std::string to_text() const {
    std::ostringstream os;
    if (violations.empty()) {
      os << "schedule is feasible\n";
    } else {
      os << violations.size() << " violation(s)\n";
      for (const Violation& v : violations)
        os << "  [" << v.family << "] " << v.where << ": " << v.detail
           << " (amount " << v.amount << ")\n";
    }
    os << "recomputed objective: " << objective << "\n";
    os << "restored weighted energy: " << restored_weighted_kwh << " kWh-eq, travel "
       << travel_penalty << ", exchanges " << fuel_penalty << "\n";
    return os.str();
  }
};

namespace validate_detail {

struct Ctx {
  const Scenario& sc;
  const Schedule& s;
  double tol;
  ValidationReport* rep;

  void flag(const std::string& family, const std::string& where, double amount,
            const std::string& detail) const {
    rep->violations.push_back({family, where, amount, detail});
  }
  // Scale-aware comparison: solver noise grows with the row's magnitudes.
  bool off(double residual, double scale) const {
    return std::abs(residual) > tol * std::max(1.0, std::abs(scale));
  }
};

inline std::string span_tag(const std::string& id, int t) {
  return id + "@t" + std::to_string(t);
}

// Maximal runs of a constant non-empty heading; each is one trip.
struct Trip {
  int depart;  // first traveling span
  int last;    // last traveling span
  std::string target;
};

inline std::vector<Trip> trips_of(const std::vector<std::string>& heading) {
  std::vector<Trip> out;
  const int n = static_cast<int>(heading.size());
  int t = 0;
  while (t < n) {
    if (heading[t].empty()) {
      ++t;
      continue;
    }
    int b = t;
    while (b + 1 < n && heading[b + 1] == heading[t]) ++b;
    out.push_back({t, b, heading[t]});
    t = b + 1;
  }
  return out;
}

inline void check_routing(const Ctx& cx, const std::string& id, const std::string& cls,
                          const std::vector<std::string>& sites,
                          const std::string& start,
                          const std::vector<std::string>& position,
                          const std::vector<std::string>& heading) {
  const int D = cx.s.spans;
  std::set<std::string> site_set(sites.begin(), sites.end());
  if (static_cast<int>(position.size()) != D + 1 ||
      static_cast<int>(heading.size()) != D + 1)
    throw std::runtime_error("routing series for " + id + " has the wrong length");
  for (int t = 0; t <= D; ++t) {
    const bool parked = !position[t].empty();
    const bool moving = !heading[t].empty();
    if (parked && !site_set.count(position[t]))
      throw std::runtime_error(id + " parked at unknown site " + position[t]);
    if (moving && !site_set.count(heading[t]))
      throw std::runtime_error(id + " heading to unknown site " + heading[t]);
    if (parked == moving)
      cx.flag("1a", span_tag(id, t), 1,
              parked ? "parked and traveling at once" : "neither parked nor traveling");
  }
  if (position[0] != start)
    cx.flag("1g", span_tag(id, 0), 1,
            "starts at '" + position[0] + "', expected '" + start + "'");
  if (!heading[0].empty())
    cx.flag("1g", span_tag(id, 0), 1, "traveling in the initial state");

  for (int t = 0; t < D; ++t) {
    const bool p0 = !position[t].empty(), p1 = !position[t + 1].empty();
    const bool m0 = !heading[t].empty(), m1 = !heading[t + 1].empty();
    if (p0 && p1 && position[t] != position[t + 1])
      cx.flag("1b-upper", span_tag(id, t + 1), 1,
              "teleports " + position[t] + " -> " + position[t + 1]);
    if (m0 && m1 && heading[t] != heading[t + 1])
      cx.flag("1b-upper", span_tag(id, t + 1), 1,
              "retargets mid-trip " + heading[t] + " -> " + heading[t + 1]);
    if (m0 && p1 && position[t + 1] != heading[t])
      cx.flag("1b-lower", span_tag(id, t + 1), 1,
              "arrives at " + position[t + 1] + " while heading to " + heading[t]);
  }

  for (const Trip& tr : trips_of(heading)) {
    if (tr.depart == 0) continue;  // already flagged under 1g
    const std::string from = position[tr.depart - 1];
    if (from.empty()) continue;  // covered by the transition checks
    const int needed = cx.sc.travel.spans_for(id, cls, from, tr.target);
    const int got = tr.last - tr.depart + 1;
    const bool completed = tr.last < D;
    if (completed && got < needed)
      cx.flag("1e-lower", span_tag(id, tr.depart), needed - got,
              "trip " + from + " -> " + tr.target + " takes " + std::to_string(got) +
                  " spans, needs " + std::to_string(needed));
  }
}

}  // namespace validate_detail

inline ValidationReport check_schedule(const Scenario& sc, const Schedule& s,
                                       double tol = 1e-5) {
  using namespace validate_detail;
  ValidationReport rep;
  Ctx cx{sc, s, tol, &rep};
  const int D = sc.time.spans;
  const double dt = sc.time.span_hours;
  const double base = sc.network.base_power_kw;
  const CaseId variant = case_from_string(s.case_label);

  if (s.spans != D) throw std::runtime_error("schedule span count mismatch");

  // ---- fleet lookup by id, demanding an exact match with the scenario ----
  auto index_by_id = [](const auto& list, const std::string& what) {
    std::map<std::string, int> m;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!m.emplace(list[i].id, static_cast<int>(i)).second)
        throw std::runtime_error("duplicate " + what + " id " + list[i].id);
    }
    return m;
  };
  auto carrier_at = index_by_id(s.carriers, "carrier");
  auto module_at = index_by_id(s.modules, "module");
  auto gen_at = index_by_id(s.generators, "generator");
  auto tank_at = index_by_id(s.tankers, "tanker");
  auto site_at = index_by_id(s.sites, "site");
  if (s.carriers.size() != sc.fleet.carriers.size() ||
      s.modules.size() != sc.fleet.modules.size() ||
      s.generators.size() != sc.fleet.generators.size() ||
      s.tankers.size() != sc.fleet.tankers.size())
    throw std::runtime_error("schedule fleet does not match the scenario");
  for (const Carrier& c : sc.fleet.carriers)
    if (!carrier_at.count(c.id)) throw std::runtime_error("missing carrier " + c.id);
  for (const Module& k : sc.fleet.modules)
    if (!module_at.count(k.id)) throw std::runtime_error("missing module " + k.id);
  for (const Generator& g : sc.fleet.generators)
    if (!gen_at.count(g.id)) throw std::runtime_error("missing generator " + g.id);
  for (const Tanker& t : sc.fleet.tankers)
    if (!tank_at.count(t.id)) throw std::runtime_error("missing tanker " + t.id);
  const auto fsites = sc.fuel_sites();
  for (const std::string& f : fsites)
    if (!site_at.count(f)) throw std::runtime_error("missing fuel site " + f);

  const bool freeze_all = variant == CaseId::none_resources ||
                          variant == CaseId::stationary;

  // ---- routing ----
  const auto storage = sc.storage_sites();
  for (const Carrier& c : sc.fleet.carriers) {
    const MerSchedule& ms = s.carriers[carrier_at.at(c.id)];
    check_routing(cx, c.id, "storage", storage, c.start, ms.position, ms.heading);
    if (freeze_all)
      for (int t = 0; t <= D; ++t)
        if (!ms.heading[t].empty())
          cx.flag("case-freeze", span_tag(c.id, t), 1, "carrier travel is disabled");
  }
  for (std::size_t g = 0; g < sc.fleet.generators.size(); ++g) {
    const Generator& gen = sc.fleet.generators[g];
    const GeneratorSchedule& gs = s.generators[gen_at.at(gen.id)];
    const std::string start =
        variant == CaseId::stationary ? sc.study.case2_generator_node : gen.start;
    check_routing(cx, gen.id, "fuel", fsites, start, gs.position, gs.heading);
    if (freeze_all)
      for (int t = 0; t <= D; ++t)
        if (!gs.heading[t].empty())
          cx.flag("case-freeze", span_tag(gen.id, t), 1, "generator travel is disabled");
  }
  for (const Tanker& tk : sc.fleet.tankers) {
    const TankerSchedule& ts = s.tankers[tank_at.at(tk.id)];
    check_routing(cx, tk.id, "fuel", fsites, tk.start, ts.position, ts.heading);
    if (freeze_all || variant == CaseId::no_tanker)
      for (int t = 0; t <= D; ++t)
        if (!ts.heading[t].empty())
          cx.flag("case-freeze", span_tag(tk.id, t), 1, "tanker travel is disabled");
  }

  // ---- module placement and coupling ----
  std::set<std::string> storage_set(storage.begin(), storage.end());
  for (std::size_t k = 0; k < sc.fleet.modules.size(); ++k) {
    const Module& md = sc.fleet.modules[k];
    const ModuleSchedule& ms = s.modules[module_at.at(md.id)];
    if (static_cast<int>(ms.site.size()) != D + 1 ||
        static_cast<int>(ms.carrier.size()) != D + 1)
      throw std::runtime_error("module series for " + md.id + " has the wrong length");
    const std::string start =
        variant == CaseId::stationary ? sc.study.case2_module_node : md.start;
    for (int t = 0; t <= D; ++t) {
      const bool parked = !ms.site[t].empty();
      const bool riding = !ms.carrier[t].empty();
      if (parked && !storage_set.count(ms.site[t]))
        throw std::runtime_error(md.id + " parked at unknown site " + ms.site[t]);
      if (riding && !carrier_at.count(ms.carrier[t]))
        throw std::runtime_error(md.id + " rides unknown carrier " + ms.carrier[t]);
      if (parked == riding)
        cx.flag("2a", span_tag(md.id, t), 1,
                parked ? "parked and riding at once" : "neither parked nor riding");
      if (riding && freeze_all)
        cx.flag("case-freeze", span_tag(md.id, t), 1, "carriage is disabled");
    }
    if (ms.site[0] != start)
      cx.flag("2c", span_tag(md.id, 0), 1,
              "starts at '" + ms.site[0] + "', expected '" + start + "'");

    for (int t = 1; t <= D; ++t) {
      const std::string& ride = ms.carrier[t];
      const std::string& prev_ride = ms.carrier[t - 1];
      if (!ride.empty()) {
        const MerSchedule& cs = s.carriers[carrier_at.at(ride)];
        if (!cs.position[t].empty())
          cx.flag("3a", span_tag(md.id, t), 1,
                  "rides " + ride + " while the carrier is parked");
        if (prev_ride != ride) {
          if (!prev_ride.empty())
            cx.flag("3b", span_tag(md.id, t), 1,
                    "changes carrier " + prev_ride + " -> " + ride + " directly");
          else if (ms.site[t - 1].empty() || cs.position[t - 1] != ms.site[t - 1] ||
                   cs.heading[t].empty())
            cx.flag("3b", span_tag(md.id, t), 1,
                    "picked up by " + ride + " away from its departure");
        }
      }
      // Carriage is frozen while the carrier runs between nodes.
      if (!prev_ride.empty() && prev_ride != ride) {
        const MerSchedule& cs = s.carriers[carrier_at.at(prev_ride)];
        const bool was_moving = !cs.heading[t - 1].empty();
        const bool still_moving = !cs.heading[t].empty();
        if (was_moving && still_moving)
          cx.flag("3c", span_tag(md.id, t), 1,
                  "leaves " + prev_ride + " mid-travel");
      }
      // A fresh parking spot must be an arrival drop.
      if (!ms.site[t].empty() && ms.site[t] != ms.site[t - 1]) {
        bool dropped = false;
        if (!prev_ride.empty()) {
          const MerSchedule& cs = s.carriers[carrier_at.at(prev_ride)];
          dropped = cs.heading[t - 1] == ms.site[t] && cs.position[t] == ms.site[t];
        }
        if (!dropped)
          cx.flag("4c", span_tag(md.id, t), 1,
                  "appears at " + ms.site[t] + " without an arrival drop");
      }
    }
  }
  // Arrivals shed their whole load.
  for (const MerSchedule& cs : s.carriers)
    for (int t = 1; t <= D; ++t) {
      if (cs.heading[t - 1].empty() || cs.position[t] != cs.heading[t - 1]) continue;
      for (const ModuleSchedule& ms : s.modules)
        if (ms.carrier[t - 1] == cs.id && ms.site[t] != cs.position[t])
          cx.flag("4b", span_tag(ms.id, t), 1,
                  "not dropped at " + cs.position[t] + " on arrival");
    }
  // Lift capacity.
  for (const Carrier& c : sc.fleet.carriers)
    for (int t = 1; t <= D; ++t) {
      double w = 0;
      for (std::size_t k = 0; k < sc.fleet.modules.size(); ++k)
        if (s.modules[module_at.at(sc.fleet.modules[k].id)].carrier[t] == c.id)
          w += sc.fleet.modules[k].weight;
      if (w > c.capacity + tol * std::max(1.0, c.capacity))
        cx.flag("2b", span_tag(c.id, t), w - c.capacity,
                "carries " + std::to_string(w) + " over capacity " +
                    std::to_string(c.capacity));
    }

  // ---- module electrical operation ----
  for (std::size_t k = 0; k < sc.fleet.modules.size(); ++k) {
    const Module& md = sc.fleet.modules[k];
    const ModuleSchedule& ms = s.modules[module_at.at(md.id)];
    if (static_cast<int>(ms.p_charge_kw.size()) != D ||
        static_cast<int>(ms.p_discharge_kw.size()) != D ||
        static_cast<int>(ms.q_kvar.size()) != D ||
        static_cast<int>(ms.soc.size()) != D + 1)
      throw std::runtime_error("module power series for " + md.id +
                               " has the wrong length");
    for (int t = 1; t <= D; ++t) {
      const int tt = t - 1;
      const double pc = ms.p_charge_kw[tt], pd = ms.p_discharge_kw[tt],
                   q = ms.q_kvar[tt];
      const bool parked = !ms.site[t].empty();
      const double pscale = std::max(md.p_charge_max_kw, md.p_discharge_max_kw);
      if (!parked) {
        if (cx.off(pc, pscale) || cx.off(pd, pscale))
          cx.flag("5a", span_tag(md.id, t), std::max(pc, pd),
                  "exchanges real power while riding");
        if (cx.off(q, md.s_rated_kva))
          cx.flag("5b", span_tag(md.id, t), std::abs(q),
                  "exchanges reactive power while riding");
      }
      if (variant == CaseId::none_resources &&
          (cx.off(pc, pscale) || cx.off(pd, pscale) || cx.off(q, md.s_rated_kva)))
        cx.flag("case-freeze", span_tag(md.id, t), std::max({pc, pd, std::abs(q)}),
                "module operation is disabled");
      if (pc < -tol * pscale || pc > md.p_charge_max_kw + tol * pscale)
        cx.flag("5b", span_tag(md.id, t), pc, "charge power outside its rating");
      if (pd < -tol * pscale || pd > md.p_discharge_max_kw + tol * pscale)
        cx.flag("5b", span_tag(md.id, t), pd, "discharge power outside its rating");
      if (std::abs(q) > md.s_rated_kva + tol * md.s_rated_kva)
        cx.flag("5b", span_tag(md.id, t), q, "reactive power outside its rating");
      if (pc > tol * std::max(1.0, pscale) && pd > tol * std::max(1.0, pscale))
        cx.flag("5a", span_tag(md.id, t), std::min(pc, pd),
                "charges and discharges at once");
      const double r = std::hypot(pd - pc, q);
      if (r > md.s_rated_kva * (1 + tol) + tol)
        cx.flag("5c", span_tag(md.id, t), r - md.s_rated_kva,
                "apparent power beyond the rated disk");
      const double step = (md.eff_charge * pc - pd / md.eff_discharge) * dt /
                          md.energy_kwh;
      if (cx.off(ms.soc[t] - ms.soc[t - 1] - step, 1.0))
        cx.flag("5d", span_tag(md.id, t), ms.soc[t] - ms.soc[t - 1] - step,
                "state of charge breaks its recursion");
      if (ms.soc[t] < md.soc_min - tol || ms.soc[t] > md.soc_max + tol)
        cx.flag("5f", span_tag(md.id, t), ms.soc[t], "state of charge out of range");
    }
    if (cx.off(ms.soc[0] - md.soc_initial, 1.0))
      cx.flag("5e", span_tag(md.id, 0), ms.soc[0] - md.soc_initial,
              "initial state of charge is wrong");
  }

  // ---- generators: power, burn, tank ----
  std::set<std::string> gen_nodes;
  for (const FuelSite& f : sc.access.generator_sites) gen_nodes.insert(f.id);
  for (std::size_t g = 0; g < sc.fleet.generators.size(); ++g) {
    const Generator& gen = sc.fleet.generators[g];
    const GeneratorSchedule& gs = s.generators[gen_at.at(gen.id)];
    if (static_cast<int>(gs.p_kw.size()) != D || static_cast<int>(gs.q_kvar.size()) != D ||
        static_cast<int>(gs.burn_l.size()) != D ||
        static_cast<int>(gs.refill_l.size()) != D ||
        static_cast<int>(gs.exchange.size()) != D ||
        static_cast<int>(gs.sof.size()) != D + 1)
      throw std::runtime_error("generator series for " + gen.id +
                               " has the wrong length");
    // Consumption curve interpolated straight from the published points,
    // with the idle anchor at the origin.
    auto burn_rate_l_per_h = [&gen](double p) {
      double p0 = 0, r0 = 0;
      for (const FuelPoint& fp : gen.fuel_curve) {
        if (p <= fp.load_kw + 1e-9)
          return r0 + (p - p0) / (fp.load_kw - p0) * (fp.rate_l_per_h - r0);
        p0 = fp.load_kw;
        r0 = fp.rate_l_per_h;
      }
      return r0;
    };
    for (int t = 1; t <= D; ++t) {
      const int tt = t - 1;
      const double p = gs.p_kw[tt], q = gs.q_kvar[tt];
      const bool at_gen_node = !gs.position[t].empty() && gen_nodes.count(gs.position[t]);
      if (!at_gen_node && (cx.off(p, gen.p_max_kw) || cx.off(q, gen.q_max_kvar)))
        cx.flag("6a", span_tag(gen.id, t), std::max(std::abs(p), std::abs(q)),
                "produces power away from a generator node");
      if (variant == CaseId::none_resources &&
          (cx.off(p, gen.p_max_kw) || cx.off(q, gen.q_max_kvar)))
        cx.flag("case-freeze", span_tag(gen.id, t), std::abs(p) + std::abs(q),
                "generator operation is disabled");
      if (p < -tol * gen.p_max_kw || p > gen.p_max_kw * (1 + tol))
        cx.flag("6a", span_tag(gen.id, t), p, "real power outside its rating");
      if (std::abs(q) > gen.q_max_kvar * (1 + tol) + tol)
        cx.flag("6a", span_tag(gen.id, t), q, "reactive power outside its rating");
      if (std::hypot(p, q) > gen.s_rated_kva * (1 + tol) + tol)
        cx.flag("6b", span_tag(gen.id, t), std::hypot(p, q) - gen.s_rated_kva,
                "apparent power beyond the rated disk");

      const double burn = gs.burn_l[tt];
      const bool parked = !gs.position[t].empty();
      if (burn < -tol * gen.burn_max_l ||
          burn > gen.burn_max_l * (1 + tol) + tol)
        cx.flag("7a", span_tag(gen.id, t), burn, "burn volume outside its range");
      if (!parked && cx.off(burn, gen.burn_max_l))
        cx.flag("7a", span_tag(gen.id, t), burn, "burns fuel while traveling");
      if (parked && !gen_nodes.count(gs.position[t]) && cx.off(burn, gen.burn_max_l))
        cx.flag("7b", span_tag(gen.id, t), burn, "burns fuel at a depot");

      // Burn must sit on the consumption curve for the delivered power.
      const double expect_burn = burn_rate_l_per_h(std::max(0.0, p)) * dt;
      if (cx.off(burn - expect_burn, gen.burn_max_l))
        cx.flag("7d", span_tag(gen.id, t), burn - expect_burn,
                "burn volume is off the fuel curve");

      const int l = gs.exchange[tt];
      if (l != 0 && l != 1)
        cx.flag("7j", span_tag(gen.id, t), l, "exchange flag is not 0/1");
      if (l == 1 && !parked)
        cx.flag("7j", span_tag(gen.id, t), 1, "exchanges fuel while traveling");
      const double refill = gs.refill_l[tt];
      if (l == 0 && cx.off(refill, gen.tank_l))
        cx.flag("7k", span_tag(gen.id, t), refill, "tank exchange without its flag");
      if (std::abs(refill) > gen.tank_l * (1 + tol))
        cx.flag("7k", span_tag(gen.id, t), refill, "tank exchange beyond capacity");
      if (parked && !gen_nodes.count(gs.position[t]) && cx.off(refill, gen.tank_l))
        cx.flag("7k", span_tag(gen.id, t), refill, "tank exchange at a depot");
      if (variant == CaseId::none_resources && (l != 0 || cx.off(refill, gen.tank_l)))
        cx.flag("case-freeze", span_tag(gen.id, t), std::abs(refill) + l,
                "fuel exchange is disabled");

      // Tank recursion with the stock-fed share re-derived exactly.
      const double deficit = burn - gs.sof[t - 1] * gen.tank_l;
      const double bsite = std::max(0.0, deficit);
      const double lhs = gen.tank_l * (gs.sof[t] - gs.sof[t - 1]);
      if (cx.off(lhs - (bsite - burn + refill), gen.tank_l))
        cx.flag("7g", span_tag(gen.id, t), lhs - (bsite - burn + refill),
                "tank level breaks its recursion");
      if (gs.sof[t] < -tol || gs.sof[t] > 1 + tol)
        cx.flag("7o", span_tag(gen.id, t), gs.sof[t], "tank level out of range");
    }
    if (cx.off(gs.sof[0] - gen.initial_sof, 1.0))
      cx.flag("7n", span_tag(gen.id, 0), gs.sof[0] - gen.initial_sof,
              "initial tank level is wrong");
  }

  // ---- tankers ----
  for (std::size_t h = 0; h < sc.fleet.tankers.size(); ++h) {
    const Tanker& tk = sc.fleet.tankers[h];
    const TankerSchedule& ts = s.tankers[tank_at.at(tk.id)];
    if (static_cast<int>(ts.transfer_l.size()) != D ||
        static_cast<int>(ts.exchange.size()) != D ||
        static_cast<int>(ts.sof.size()) != D + 1)
      throw std::runtime_error("tanker series for " + tk.id + " has the wrong length");
    for (int t = 1; t <= D; ++t) {
      const int tt = t - 1;
      const double tr = ts.transfer_l[tt];
      const int l = ts.exchange[tt];
      const bool parked = !ts.position[t].empty();
      const double in_cap = tk.rate_in_l_per_h * dt, out_cap = tk.rate_out_l_per_h * dt;
      if (l != 0 && l != 1)
        cx.flag("7l", span_tag(tk.id, t), l, "exchange flag is not 0/1");
      if (l == 1 && !parked)
        cx.flag("7l", span_tag(tk.id, t), 1, "exchanges fuel while traveling");
      if (l == 0 && cx.off(tr, std::max(in_cap, out_cap)))
        cx.flag("7m", span_tag(tk.id, t), tr, "transfer without its flag");
      if (tr < -in_cap * (1 + tol) - tol || tr > out_cap * (1 + tol) + tol)
        cx.flag("7m", span_tag(tk.id, t), tr, "transfer beyond the pump rating");
      if ((variant == CaseId::none_resources || variant == CaseId::no_tanker) &&
          (l != 0 || cx.off(tr, std::max(in_cap, out_cap))))
        cx.flag("case-freeze", span_tag(tk.id, t), std::abs(tr) + l,
                "tanker exchange is disabled");
      const double lhs = tk.tank_l * (ts.sof[t] - ts.sof[t - 1]);
      if (cx.off(lhs + tr, tk.tank_l))
        cx.flag("7h", span_tag(tk.id, t), lhs + tr, "tank level breaks its recursion");
      if (ts.sof[t] < -tol || ts.sof[t] > 1 + tol)
        cx.flag("7o", span_tag(tk.id, t), ts.sof[t], "tank level out of range");
    }
    if (cx.off(ts.sof[0] - tk.initial_sof, 1.0))
      cx.flag("7n", span_tag(tk.id, 0), ts.sof[0] - tk.initial_sof,
              "initial tank level is wrong");
  }

  // ---- site fuel stocks ----
  for (std::size_t sI = 0; sI < fsites.size(); ++sI) {
    const std::string& fid = fsites[sI];
    const SiteSchedule& st = s.sites[site_at.at(fid)];
    if (static_cast<int>(st.sof.size()) != D + 1)
      throw std::runtime_error("site series for " + fid + " has the wrong length");
    const double cap = sI < sc.access.generator_sites.size()
                           ? sc.access.generator_sites[sI].capacity_l
                           : sc.access.depots[sI - sc.access.generator_sites.size()].capacity_l;
    const double init = sI < sc.access.generator_sites.size()
                            ? sc.access.generator_sites[sI].initial_sof
                            : sc.access.depots[sI - sc.access.generator_sites.size()].initial_sof;
    for (int t = 1; t <= D; ++t) {
      const int tt = t - 1;
      double inflow = 0;
      for (const TankerSchedule& ts : s.tankers)
        if (ts.position[t] == fid) inflow += ts.transfer_l[tt];
      double outflow = 0;
      for (std::size_t g = 0; g < sc.fleet.generators.size(); ++g) {
        const GeneratorSchedule& gs = s.generators[g];
        if (gs.position[t] != fid) continue;
        const double deficit =
            gs.burn_l[tt] - gs.sof[t - 1] * sc.fleet.generators[g].tank_l;
        outflow += std::max(0.0, deficit) + gs.refill_l[tt];
      }
      const double lhs = cap * (st.sof[t] - st.sof[t - 1]);
      if (cx.off(lhs - inflow + outflow, cap))
        cx.flag("7i", span_tag(fid, t), lhs - inflow + outflow,
                "site stock breaks its recursion");
      if (st.sof[t] < -tol || st.sof[t] > 1 + tol)
        cx.flag("7o", span_tag(fid, t), st.sof[t], "site stock out of range");
    }
    if (cx.off(st.sof[0] - init, 1.0))
      cx.flag("7n", span_tag(fid, 0), st.sof[0] - init, "initial site stock is wrong");
  }

  // ---- grid ----
  const int N = sc.nodes_count();
  const int L = sc.branches_count();
  const int root = sc.substation;
  const bool fed = sc.study.substation_energized;
  if (static_cast<int>(s.grid.closed.size()) != D ||
      static_cast<int>(s.grid.pickup.size()) != D ||
      static_cast<int>(s.grid.energized.size()) != D ||
      static_cast<int>(s.grid.v_squared.size()) != D ||
      static_cast<int>(s.grid.branch_p_kw.size()) != D ||
      static_cast<int>(s.grid.branch_q_kvar.size()) != D)
    throw std::runtime_error("grid series has the wrong span count");

  // Fleet whereabouts per node, for injections and source presence.
  auto node_idx = [&](const std::string& id) { return sc.node_index.at(id); };
  const double vlo = sc.network.v_min_pu * sc.network.v_min_pu;
  const double vhi = sc.network.v_max_pu * sc.network.v_max_pu;

  for (int t = 1; t <= D; ++t) {
    const int tt = t - 1;
    const auto& closed = s.grid.closed[tt];
    const auto& pickup = s.grid.pickup[tt];
    const auto& energized = s.grid.energized[tt];
    const auto& vsq = s.grid.v_squared[tt];
    const auto& bp = s.grid.branch_p_kw[tt];
    const auto& bq = s.grid.branch_q_kvar[tt];
    if (static_cast<int>(closed.size()) != L || static_cast<int>(bp.size()) != L ||
        static_cast<int>(bq.size()) != L || static_cast<int>(pickup.size()) != N ||
        static_cast<int>(energized.size()) != N || static_cast<int>(vsq.size()) != N)
      throw std::runtime_error("grid arrays have the wrong width in span " +
                               std::to_string(t));
    auto tag = [&](const std::string& id) { return span_tag(id, t); };

    for (int b = 0; b < L; ++b)
      if (closed[b] != 0 && closed[b] != 1)
        cx.flag("8g", tag(sc.network.branches[b].from + "-" + sc.network.branches[b].to),
                closed[b], "switch state is not 0/1");
    for (int u = 0; u < N; ++u) {
      if (pickup[u] != 0 && pickup[u] != 1)
        cx.flag("9e", tag(sc.network.nodes[u].id), pickup[u], "pickup is not 0/1");
      if (energized[u] != 0 && energized[u] != 1)
        cx.flag("9m", tag(sc.network.nodes[u].id), energized[u],
                "energized flag is not 0/1");
    }

    // Closed switches must keep the network radial.
    {
      std::vector<int> parent(N);
      for (int u = 0; u < N; ++u) parent[u] = u;
      std::function<int(int)> find = [&](int u) {
        while (parent[u] != u) u = parent[u] = parent[parent[u]];
        return u;
      };
      for (int b = 0; b < L; ++b) {
        if (closed[b] != 1) continue;
        int a = find(node_idx(sc.network.branches[b].from));
        int c = find(node_idx(sc.network.branches[b].to));
        if (a == c)
          cx.flag("8g", tag(sc.network.branches[b].from + "-" +
                            sc.network.branches[b].to),
                  1, "closed switches form a loop");
        else
          parent[a] = c;
      }
    }

    // Fault pinning.
    {
      FaultSets fs = sc.fault_sets_at(t);
      for (int b : fs.open_branches)
        if (closed[b] == 1)
          cx.flag("9i", tag(sc.network.branches[b].from + "-" +
                            sc.network.branches[b].to),
                  1, "faulted branch is closed");
      for (int b : fs.closed_branches)
        if (closed[b] == 0)
          cx.flag("9i", tag(sc.network.branches[b].from + "-" +
                            sc.network.branches[b].to),
                  1, "branch with a stuck switch is open");
      for (int u : fs.open_nodes)
        if (pickup[u] == 1)
          cx.flag("9i", tag(sc.network.nodes[u].id), 1, "faulted load is picked up");
      for (int u : fs.closed_nodes)
        if (energized[u] == 1 && pickup[u] == 0)
          cx.flag("9i", tag(sc.network.nodes[u].id), 1,
                  "energized load with a stuck-closed switch is shed");
    }

    // Monotone restoration.
    for (int u = 0; u < N; ++u) {
      const int prev = t > 1 ? s.grid.pickup[tt - 1][u] : 0;
      if (pickup[u] < prev)
        cx.flag("9e", tag(sc.network.nodes[u].id), prev - pickup[u],
                "restored load is shed again");
    }

    if (fed && energized[root] != 1)
      cx.flag("9j", tag(sc.network.nodes[root].id), 1, "substation is not energized");
    if (cx.off(vsq[root] - 1.0, 1.0))
      cx.flag("9g", tag(sc.network.nodes[root].id), vsq[root] - 1.0,
              "substation voltage is off nominal");
    for (int u = 0; u < N; ++u)
      if (vsq[u] < vlo - tol || vsq[u] > vhi + tol)
        cx.flag("9g", tag(sc.network.nodes[u].id), vsq[u],
                "squared voltage out of its window");

    // Branch flow limits and voltage drops.
    for (int b = 0; b < L; ++b) {
      const Branch& br = sc.network.branches[b];
      const std::string bid = br.from + "-" + br.to;
      const double p = bp[b] / base, q = bq[b] / base;
      const double smax = br.capacity_kva / base;
      if (closed[b] == 0) {
        if (cx.off(p, smax) || cx.off(q, smax))
          cx.flag("9h", tag(bid), std::hypot(p, q), "flow on an open branch");
        continue;
      }
      if (std::hypot(p, q) > smax * (1 + tol) + tol)
        cx.flag("9h", tag(bid), std::hypot(p, q) - smax,
                "flow beyond the branch rating");
      const double drop = vsq[node_idx(br.from)] - vsq[node_idx(br.to)] -
                          2 * (br.r_pu * p + br.x_pu * q);
      if (cx.off(drop, 1.0))
        cx.flag("9f", tag(bid), drop, "voltage drop is inconsistent");
    }

    // Nodal power balance against the fleet injections.
    for (int u = 0; u < N; ++u) {
      const Node& nd = sc.network.nodes[u];
      double inj_p = 0, inj_q = 0;
      if (sc.is_storage_node[u])
        for (const ModuleSchedule& ms : s.modules)
          if (ms.site[t] == nd.id) {
            inj_p += (ms.p_discharge_kw[tt] - ms.p_charge_kw[tt]) / base;
            inj_q += ms.q_kvar[tt] / base;
          }
      if (sc.is_generator_node[u])
        for (const GeneratorSchedule& gs : s.generators)
          if (gs.position[t] == nd.id) {
            inj_p += gs.p_kw[tt] / base;
            inj_q += gs.q_kvar[tt] / base;
          }
      double out_p = 0, out_q = 0;
      for (int b = 0; b < L; ++b) {
        const Branch& br = sc.network.branches[b];
        if (node_idx(br.from) == u) {
          out_p += bp[b] / base;
          out_q += bq[b] / base;
        }
        if (node_idx(br.to) == u) {
          out_p -= bp[b] / base;
          out_q -= bq[b] / base;
        }
      }
      const double need_p = pickup[u] * nd.p_load_kw[tt] / base + out_p;
      const double need_q = pickup[u] * nd.q_load_kvar[tt] / base + out_q;
      const double scale = 1.0;
      if (u == root && fed) {
        if (need_p < inj_p - tol * scale)
          cx.flag("9a", tag(nd.id), inj_p - need_p, "substation exports power");
        if (need_q < inj_q - tol * scale)
          cx.flag("9b", tag(nd.id), inj_q - need_q, "substation exports reactive power");
      } else {
        if (cx.off(need_p - inj_p, scale))
          cx.flag("9c", tag(nd.id), need_p - inj_p, "real power balance breaks");
        if (cx.off(need_q - inj_q, scale))
          cx.flag("9d", tag(nd.id), need_q - inj_q, "reactive power balance breaks");
      }
    }

    // Energization must trace back to a parked source or an energized arc.
    for (int u = 0; u < N; ++u) {
      if (u == root && fed) continue;
      const Node& nd = sc.network.nodes[u];
      // The no-resource benchmark fields no fleet: nothing parked counts.
      bool rho = false;
      if (variant != CaseId::none_resources) {
        if (sc.is_storage_node[u])
          for (const ModuleSchedule& ms : s.modules) rho |= ms.site[t] == nd.id;
        if (sc.is_generator_node[u])
          for (const GeneratorSchedule& gs : s.generators)
            rho |= gs.position[t] == nd.id;
      }
      bool sigma = false;
      for (int b = 0; b < L; ++b) {
        if (closed[b] != 1) continue;
        const Branch& br = sc.network.branches[b];
        if (node_idx(br.to) == u && energized[node_idx(br.from)] == 1) sigma = true;
        if (node_idx(br.from) == u && energized[node_idx(br.to)] == 1) sigma = true;
      }
      if (energized[u] == 1 && !rho && !sigma)
        cx.flag("9m", tag(nd.id), 1, "energized without a source or a live arc");
      if (energized[u] == 0 && (rho || sigma))
        cx.flag("9m", tag(nd.id), 1, "stays dark next to a source or a live arc");
    }

    if (sc.study.strict_pickup)
      for (int u = 0; u < N; ++u)
        if (pickup[u] == 1 && energized[u] == 0)
          cx.flag("strict-pickup", tag(sc.network.nodes[u].id), 1,
                  "picked up without energization");
  }

  // ---- bundles ride together under the bundled variant ----
  if (variant == CaseId::bundled)
    for (const Bundle& b : sc.study.case3_bundles) {
      const MerSchedule& cs = s.carriers[carrier_at.at(b.carrier)];
      for (const std::string& mid : b.modules) {
        const ModuleSchedule& ms = s.modules[module_at.at(mid)];
        for (int t = 0; t <= D; ++t) {
          const bool carrier_parked = !cs.position[t].empty();
          if (carrier_parked && ms.site[t] != cs.position[t])
            cx.flag("case3", span_tag(mid, t), 1,
                    "bundled module is away from its carrier");
          if (!carrier_parked && ms.carrier[t] != b.carrier)
            cx.flag("case3", span_tag(mid, t), 1,
                    "bundled module is off its traveling carrier");
        }
      }
    }

  // ---- objective reconstruction ----
  rep.restored_kwh_per_span.assign(D, 0.0);
  rep.restored_weighted_kwh_per_span.assign(D, 0.0);
  for (int t = 1; t <= D; ++t) {
    const int tt = t - 1;
    for (int u = 0; u < N; ++u) {
      const Node& nd = sc.network.nodes[u];
      if (s.grid.pickup[tt][u] == 1) {
        rep.restored_kwh_per_span[tt] += nd.p_load_kw[tt] * dt;
        rep.restored_weighted_kwh_per_span[tt] += nd.weight * nd.p_load_kw[tt] * dt;
      }
    }
  }
  double travel_spans = 0;
  for (const MerSchedule& c : s.carriers)
    for (int t = 1; t <= D; ++t) travel_spans += c.heading[t].empty() ? 0 : 1;
  for (const GeneratorSchedule& g : s.generators)
    for (int t = 1; t <= D; ++t) travel_spans += g.heading[t].empty() ? 0 : 1;
  for (const TankerSchedule& tk : s.tankers)
    for (int t = 1; t <= D; ++t) travel_spans += tk.heading[t].empty() ? 0 : 1;
  double exchanges = 0;
  for (const GeneratorSchedule& g : s.generators)
    for (int v : g.exchange) exchanges += v;
  for (const TankerSchedule& tk : s.tankers)
    for (int v : tk.exchange) exchanges += v;

  for (double v : rep.restored_weighted_kwh_per_span) rep.restored_weighted_kwh += v;
  rep.travel_penalty = sc.study.phi_travel * travel_spans;
  rep.fuel_penalty = sc.study.phi_fuel * exchanges;
  rep.objective = rep.restored_weighted_kwh - rep.travel_penalty - rep.fuel_penalty;
  return rep;
}

inline double recompute_objective(const Scenario& sc, const Schedule& s) {
  return check_schedule(sc, s).objective;
}

}  // namespace mersched
