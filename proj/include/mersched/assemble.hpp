#pragma once

#include <string>
#include <vector>

#include "fleet.hpp"
#include "grid.hpp"
#include "model_ir.hpp"
#include "scenario.hpp"

namespace mersched {

struct Model {
  Scenario sc;
  int D = 0;
  double base = 0;
  double dt = 0;
  ModelIR ir;
  std::vector<RoutingBlock> carriers, gens, tanks;
  SmessVars sv;
  ModuleVars mv;
  GeneratorVars gv;
  FuelVars fv;
  GridVars gd;
  std::vector<std::string> module_start, gen_start;  // effective initial sites
};

namespace detail {

inline void fix_all(ModelIR& ir, const std::vector<std::vector<int>>& vv, double val) {
  for (const auto& col : vv)
    for (int id : col) ir.fix_var(id, val);
}
inline void fix_all(ModelIR& ir, const std::vector<std::vector<std::vector<int>>>& vvv,
                    double val) {
  for (const auto& block : vvv) fix_all(ir, block, val);
}

}  // namespace detail

inline Model assemble(const Scenario& scenario) {
  Model m;
  m.sc = scenario;
  const Scenario& sc = m.sc;
  m.D = sc.time.spans;
  m.base = sc.network.base_power_kw;
  m.dt = sc.time.span_hours;
  BuildContext cx{sc, m.ir, m.D, m.base, m.dt};

  const CaseId variant = sc.study.variant;
  const bool stationary = variant == CaseId::stationary;

  m.module_start.clear();
  for (const Module& k : sc.fleet.modules)
    m.module_start.push_back(stationary ? sc.study.case2_module_node : k.start);
  m.gen_start.clear();
  for (const Generator& g : sc.fleet.generators)
    m.gen_start.push_back(stationary ? sc.study.case2_generator_node : g.start);

  const auto storage = sc.storage_sites();
  const auto fuel = sc.fuel_sites();
  for (const Carrier& c : sc.fleet.carriers)
    m.carriers.push_back(emit_routing(cx, c.id, "storage", storage, c.start));
  for (std::size_t i = 0; i < sc.fleet.generators.size(); ++i)
    m.gens.push_back(
        emit_routing(cx, sc.fleet.generators[i].id, "fuel", fuel, m.gen_start[i]));
  for (const Tanker& t : sc.fleet.tankers)
    m.tanks.push_back(emit_routing(cx, t.id, "fuel", fuel, t.start));

  m.sv = emit_smess(cx, m.carriers, m.module_start);
  m.mv = emit_modules(cx, m.sv);
  m.gv = emit_generators(cx, m.gens);
  m.fv = emit_fuel(cx, m.gens, m.tanks, m.gv);
  m.gd = emit_grid(cx, m.sv, m.mv, m.gv, m.gens);

  if (sc.study.strict_pickup)
    for (int u = 0; u < sc.nodes_count(); ++u)
      for (int t = 1; t <= m.D; ++t) {
        LinExpr e;
        e.add(m.gd.delta[u][t - 1], 1).add(m.gd.eta[u][t - 1], -1);
        m.ir.add_row("strict-pickup", e, Sense::le, 0);
      }

  // Weighted restored energy, less travel and exchange penalties.
  LinExpr obj;
  for (int t = 1; t <= m.D; ++t) {
    const int tt = t - 1;
    for (int u = 0; u < sc.nodes_count(); ++u) {
      const Node& nd = sc.network.nodes[u];
      double coef = nd.weight * nd.p_load_kw[tt] * m.dt;
      if (coef != 0) obj.add(m.gd.delta[u][tt], coef);
    }
    auto travel_pen = [&](const std::vector<RoutingBlock>& blocks) {
      for (const RoutingBlock& rb : blocks)
        for (const auto& col : rb.v) obj.add(col[t], -sc.study.phi_travel);
    };
    travel_pen(m.carriers);
    travel_pen(m.gens);
    travel_pen(m.tanks);
    for (const auto& unit : m.fv.gen_xch)
      for (const auto& col : unit) obj.add(col[tt], -sc.study.phi_fuel);
    for (const auto& unit : m.fv.tank_xch)
      for (const auto& col : unit) obj.add(col[tt], -sc.study.phi_fuel);
  }
  m.ir.objective = obj;

  // Study variants on top of the full formulation.
  auto freeze_travel = [&](std::vector<RoutingBlock>& blocks) {
    for (RoutingBlock& rb : blocks) detail::fix_all(m.ir, rb.v, 0);
  };
  switch (variant) {
    case CaseId::none_resources:
      freeze_travel(m.carriers);
      freeze_travel(m.gens);
      freeze_travel(m.tanks);
      detail::fix_all(m.ir, m.sv.gamma, 0);
      for (auto& j : m.sv.alpha) detail::fix_all(m.ir, j, 0);
      detail::fix_all(m.ir, m.mv.chg, 0);
      detail::fix_all(m.ir, m.mv.dis, 0);
      detail::fix_all(m.ir, m.mv.p_c, 0);
      detail::fix_all(m.ir, m.mv.p_d, 0);
      detail::fix_all(m.ir, m.mv.q_s, 0);
      detail::fix_all(m.ir, m.gv.p_g, 0);
      detail::fix_all(m.ir, m.gv.q_g, 0);
      detail::fix_all(m.ir, m.fv.gen_xch, 0);
      detail::fix_all(m.ir, m.fv.refill, 0);
      detail::fix_all(m.ir, m.fv.tank_xch, 0);
      detail::fix_all(m.ir, m.fv.transfer, 0);
      break;
    case CaseId::stationary:
      freeze_travel(m.carriers);
      freeze_travel(m.gens);
      freeze_travel(m.tanks);
      detail::fix_all(m.ir, m.sv.gamma, 0);
      for (auto& j : m.sv.alpha) detail::fix_all(m.ir, j, 0);
      break;
    case CaseId::bundled:
      for (const Bundle& b : sc.study.case3_bundles) {
        int j = -1;
        for (std::size_t c = 0; c < sc.fleet.carriers.size(); ++c)
          if (sc.fleet.carriers[c].id == b.carrier) j = static_cast<int>(c);
        for (const std::string& mid : b.modules) {
          int k = -1;
          for (std::size_t km = 0; km < sc.fleet.modules.size(); ++km)
            if (sc.fleet.modules[km].id == mid) k = static_cast<int>(km);
          for (int t = 0; t <= m.D; ++t) {
            for (std::size_t i = 0; i < storage.size(); ++i) {
              LinExpr e;
              e.add(m.sv.zeta[k][i][t], 1).add(m.carriers[j].x[i][t], -1);
              m.ir.add_row("case3", e, Sense::eq, 0);
            }
            LinExpr rid;
            rid.add(m.sv.gamma[k][j][t], 1);
            for (std::size_t i = 0; i < storage.size(); ++i)
              rid.add(m.carriers[j].v[i][t], -1);
            m.ir.add_row("case3", rid, Sense::eq, 0);
          }
        }
      }
      break;
    case CaseId::no_tanker:
      freeze_travel(m.tanks);
      detail::fix_all(m.ir, m.fv.tank_xch, 0);
      detail::fix_all(m.ir, m.fv.transfer, 0);
      break;
    case CaseId::joint:
      break;
  }
  return m;
}

}  // namespace mersched
