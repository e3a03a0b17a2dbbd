#pragma once

#include <map>
#include <string>
#include <vector>

#include "model_ir.hpp"
#include "scenario.hpp"

namespace mersched {

struct BuildContext {
  const Scenario& sc;
  ModelIR& ir;
  int D = 0;       // spans
  double base = 0; // kW per unit
  double dt = 0;   // hours per span
};

namespace names {
inline std::string v2(const std::string& p, const std::string& a, int t) {
  return p + "(" + a + "," + std::to_string(t) + ")";
}
inline std::string v3(const std::string& p, const std::string& a, const std::string& b,
                      int t) {
  return p + "(" + a + "," + b + "," + std::to_string(t) + ")";
}
inline std::string v4(const std::string& p, const std::string& a, const std::string& b,
                      const std::string& c, int t) {
  return p + "(" + a + "," + b + "," + c + "," + std::to_string(t) + ")";
}
}  // namespace names

// ---------------------------------------------------------------------------
// Position tracking shared by every mobile unit: where it parks (x), where it
// is heading (v), the trip length drawn at departure (S), the remaining
// travel-span budget (R), and the move indicator (w).
// ---------------------------------------------------------------------------

struct RoutingBlock {
  std::string mer;
  std::vector<std::string> sites;
  std::map<std::string, int> site_index;
  int start_site = -1;
  std::vector<std::vector<int>> travel;  // [from][to] spans
  std::vector<std::vector<int>> x, v;    // [site][t], t = 0..D
  std::vector<int> S, R, w;              // [t], t = 0..D
};

inline RoutingBlock emit_routing(BuildContext& cx, const std::string& mer,
                                 const std::string& cls,
                                 const std::vector<std::string>& sites,
                                 const std::string& start) {
  ModelIR& ir = cx.ir;
  const int D = cx.D;
  const int n = static_cast<int>(sites.size());

  RoutingBlock rb;
  rb.mer = mer;
  rb.sites = sites;
  for (int i = 0; i < n; ++i) rb.site_index[sites[i]] = i;
  rb.start_site = rb.site_index.at(start);
  rb.travel.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) rb.travel[i][j] = cx.sc.travel.spans_for(mer, cls, sites[i], sites[j]);

  rb.x.assign(n, {});
  rb.v.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (int t = 0; t <= D; ++t) {
      rb.x[i].push_back(ir.add_binary(names::v3("x", mer, sites[i], t)));
      rb.v[i].push_back(ir.add_binary(names::v3("v", mer, sites[i], t)));
    }
  for (int t = 0; t <= D; ++t) {
    rb.S.push_back(ir.add_var(names::v2("S", mer, t), 0, D, false));
    rb.R.push_back(ir.add_var(names::v2("R", mer, t), 0, D, false));
    rb.w.push_back(ir.add_binary(names::v2("w", mer, t)));
  }

  // Exactly one state per span: parked somewhere or heading somewhere.
  for (int t = 0; t <= D; ++t) {
    LinExpr e;
    for (int i = 0; i < n; ++i) e.add(rb.x[i][t], 1).add(rb.v[i][t], 1);
    ir.add_row("1a", e, Sense::eq, 1);
  }

  // Park/travel transitions; arrivals land only at the travel target.
  for (int t = 0; t < D; ++t)
    for (int i = 0; i < n; ++i) {
      LinExpr lo;
      lo.add(rb.x[i][t + 1], 1).add(rb.x[i][t], -1);
      lo.add(rb.v[i][t], -1.2).add(rb.v[i][t + 1], 1.2);
      for (int j = 0; j < n; ++j) lo.add(rb.v[j][t], -0.4).add(rb.v[j][t + 1], 0.4);
      ir.add_row("1b-lower", lo, Sense::ge, -0.8);

      LinExpr hi;
      hi.add(rb.x[i][t + 1], 1).add(rb.x[i][t], -1);
      hi.add(rb.v[i][t], -1).add(rb.v[i][t + 1], 1);
      for (int j = 0; j < n; ++j) hi.add(rb.v[j][t], 0.5).add(rb.v[j][t + 1], -0.5);
      ir.add_row("1b-upper", hi, Sense::le, 0.7);
    }

  // Trip length is charged at the departure span, from the departure node.
  for (int t = 1; t <= D; ++t) {
    for (int i = 0; i < n; ++i) {
      double m = 0;
      for (int j = 0; j < n; ++j) m += rb.travel[i][j];
      LinExpr e;
      e.add(rb.S[t], 1);
      for (int j = 0; j < n; ++j)
        if (rb.travel[i][j] != 0) e.add(rb.v[j][t], -static_cast<double>(rb.travel[i][j]));
      e.add(rb.x[i][t - 1], -m);
      ir.add_row("1c", e, Sense::ge, -m);
    }
    LinExpr nn;
    nn.add(rb.S[t], 1);
    ir.add_row("1c", nn, Sense::ge, 0);
  }

  // Remaining travel budget: gains the drawn trip length, pays one span per
  // span spent heading out.
  for (int t = 1; t <= D; ++t) {
    LinExpr e;
    e.add(rb.R[t], 1).add(rb.R[t - 1], -1).add(rb.S[t], -1);
    for (int i = 0; i < n; ++i) e.add(rb.v[i][t - 1], 1);
    ir.add_row("1d", e, Sense::eq, 0);
  }

  // Traveling exactly while budget remains.
  for (int t = 0; t <= D; ++t) {
    LinExpr lo;
    lo.add(rb.R[t], -1);
    for (int i = 0; i < n; ++i) lo.add(rb.v[i][t], static_cast<double>(D));
    ir.add_row("1e-lower", lo, Sense::ge, 0);
    LinExpr hi;
    hi.add(rb.R[t], 1);
    for (int i = 0; i < n; ++i) hi.add(rb.v[i][t], -1);
    ir.add_row("1e-upper", hi, Sense::ge, 0);
  }

  // Move indicator: on while consecutive travel spans run, and whenever the
  // heading changes.
  for (int t = 1; t <= D; ++t) {
    LinExpr hold;
    hold.add(rb.w[t], 1);
    for (int i = 0; i < n; ++i) hold.add(rb.v[i][t - 1], -1).add(rb.v[i][t], -1);
    ir.add_row("1f-hold", hold, Sense::ge, -1);
    for (int i = 0; i < n; ++i) {
      LinExpr up;
      up.add(rb.v[i][t], 1).add(rb.v[i][t - 1], -1).add(rb.w[t], -1);
      ir.add_row("1f-step", up, Sense::le, 0);
      LinExpr dn;
      dn.add(rb.v[i][t], 1).add(rb.v[i][t - 1], -1).add(rb.w[t], 1);
      ir.add_row("1f-step", dn, Sense::ge, 0);
    }
  }

  // Initial state.
  {
    LinExpr e;
    e.add(rb.x[rb.start_site][0], 1);
    ir.add_row("1g", e, Sense::eq, 1);
    LinExpr s0;
    s0.add(rb.S[0], 1);
    ir.add_row("1g", s0, Sense::eq, 0);
    LinExpr r0;
    r0.add(rb.R[0], 1);
    ir.add_row("1g", r0, Sense::eq, 0);
    LinExpr w0;
    w0.add(rb.w[0], 1);
    ir.add_row("1g", w0, Sense::eq, 0);
  }
  return rb;
}

// ---------------------------------------------------------------------------
// Carrier / module coupling: carriage assignment, drops on arrival, pickups
// at departure.
// ---------------------------------------------------------------------------

struct SmessVars {
  // gamma[k][j][t]: module k rides carrier j. zeta[k][i][t]: module k sits at
  // storage site i. alpha[j][i][k][t]: carrier j arrives at i dropping k.
  std::vector<std::vector<std::vector<int>>> gamma;
  std::vector<std::vector<std::vector<int>>> zeta;
  std::vector<std::vector<std::vector<std::vector<int>>>> alpha;
};

inline SmessVars emit_smess(BuildContext& cx, const std::vector<RoutingBlock>& carriers,
                            const std::vector<std::string>& module_starts) {
  ModelIR& ir = cx.ir;
  const int D = cx.D;
  const Scenario& sc = cx.sc;
  const auto& sites = sc.access.storage_nodes;
  const int n = static_cast<int>(sites.size());
  const int K = static_cast<int>(sc.fleet.modules.size());
  const int J = static_cast<int>(carriers.size());

  SmessVars sv;
  sv.gamma.assign(K, std::vector<std::vector<int>>(J));
  sv.zeta.assign(K, std::vector<std::vector<int>>(n));
  for (int k = 0; k < K; ++k) {
    const std::string& kid = sc.fleet.modules[k].id;
    for (int j = 0; j < J; ++j)
      for (int t = 0; t <= D; ++t)
        sv.gamma[k][j].push_back(ir.add_binary(names::v3("g", kid, carriers[j].mer, t)));
    for (int i = 0; i < n; ++i)
      for (int t = 0; t <= D; ++t)
        sv.zeta[k][i].push_back(ir.add_binary(names::v3("z", kid, sites[i], t)));
  }
  sv.alpha.assign(J, {});
  for (int j = 0; j < J; ++j) {
    sv.alpha[j].assign(n, std::vector<std::vector<int>>(K));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < K; ++k)
        for (int t = 1; t <= D; ++t)
          sv.alpha[j][i][k].push_back(ir.add_binary(
              names::v4("a", carriers[j].mer, sites[i], sc.fleet.modules[k].id, t)));
  }

  // Every module is either parked at one site or riding one carrier.
  for (int k = 0; k < K; ++k)
    for (int t = 0; t <= D; ++t) {
      LinExpr e;
      for (int i = 0; i < n; ++i) e.add(sv.zeta[k][i][t], 1);
      for (int j = 0; j < J; ++j) e.add(sv.gamma[k][j][t], 1);
      ir.add_row("2a", e, Sense::eq, 1);
    }

  // Carrier lift capacity.
  for (int j = 0; j < J; ++j)
    for (int t = 1; t <= D; ++t) {
      LinExpr e;
      for (int k = 0; k < K; ++k) e.add(sv.gamma[k][j][t], sc.fleet.modules[k].weight);
      ir.add_row("2b", e, Sense::le, sc.fleet.carriers[j].capacity);
    }

  // Initial module placement.
  for (int k = 0; k < K; ++k) {
    int i0 = -1;
    for (int i = 0; i < n; ++i)
      if (sites[i] == module_starts[k]) i0 = i;
    LinExpr e;
    e.add(sv.zeta[k][i0][0], 1);
    ir.add_row("2c", e, Sense::eq, 1);
  }

  for (int k = 0; k < K; ++k)
    for (int j = 0; j < J; ++j)
      for (int t = 1; t <= D; ++t) {
        // Parked carriers hold nothing.
        LinExpr a;
        a.add(sv.gamma[k][j][t], 1);
        for (int i = 0; i < n; ++i) a.add(carriers[j].x[i][t], 1);
        ir.add_row("3a", a, Sense::le, 1);

        // Carriage can only start at the module's own node, at departure.
        for (int i = 0; i < n; ++i) {
          LinExpr b;
          b.add(sv.gamma[k][j][t], 1).add(sv.zeta[k][i][t - 1], -1);
          b.add(carriers[j].x[i][t], -1).add(carriers[j].x[i][t - 1], 1);
          ir.add_row("3b", b, Sense::le, 1);
        }

        // Carriage changes only around a parked span.
        LinExpr up;
        up.add(sv.gamma[k][j][t], 1).add(sv.gamma[k][j][t - 1], -1);
        for (int i = 0; i < n; ++i)
          up.add(carriers[j].x[i][t - 1], -1).add(carriers[j].x[i][t], -1);
        ir.add_row("3c", up, Sense::le, 0);
        LinExpr dn;
        dn.add(sv.gamma[k][j][t - 1], 1).add(sv.gamma[k][j][t], -1);
        for (int i = 0; i < n; ++i)
          dn.add(carriers[j].x[i][t - 1], -1).add(carriers[j].x[i][t], -1);
        ir.add_row("3c", dn, Sense::le, 0);
      }

  // Arrival-and-drop detection, and the landing rules it drives.
  for (int j = 0; j < J; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < K; ++k)
        for (int t = 1; t <= D; ++t)
          and_product(ir, "4a", sv.alpha[j][i][k][t - 1],
                      {{carriers[j].x[i][t - 1], true},
                       {carriers[j].x[i][t], false},
                       {sv.gamma[k][j][t - 1], false}});
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < n; ++i)
      for (int t = 1; t <= D; ++t) {
        LinExpr lo;
        lo.add(sv.zeta[k][i][t], 1);
        for (int j = 0; j < J; ++j) lo.add(sv.alpha[j][i][k][t - 1], -1);
        ir.add_row("4b", lo, Sense::ge, 0);
        LinExpr up;
        up.add(sv.zeta[k][i][t], 1).add(sv.zeta[k][i][t - 1], -1);
        for (int j = 0; j < J; ++j) up.add(sv.alpha[j][i][k][t - 1], -1);
        ir.add_row("4c", up, Sense::le, 0);
      }
  return sv;
}

// ---------------------------------------------------------------------------
// Module electrical operation.
// ---------------------------------------------------------------------------

struct ModuleVars {
  // [k][i][t-1] over storage sites, t = 1..D
  std::vector<std::vector<std::vector<int>>> chg, dis, p_c, p_d, q_s;
  std::vector<std::vector<int>> soc;  // [k][t], t = 0..D
};

inline ModuleVars emit_modules(BuildContext& cx, const SmessVars& sv) {
  ModelIR& ir = cx.ir;
  const int D = cx.D;
  const Scenario& sc = cx.sc;
  const auto& sites = sc.access.storage_nodes;
  const int n = static_cast<int>(sites.size());
  const int K = static_cast<int>(sc.fleet.modules.size());

  ModuleVars mv;
  mv.chg.assign(K, std::vector<std::vector<int>>(n));
  mv.dis = mv.chg;
  mv.p_c = mv.chg;
  mv.p_d = mv.chg;
  mv.q_s = mv.chg;
  mv.soc.assign(K, {});
  for (int k = 0; k < K; ++k) {
    const Module& m = sc.fleet.modules[k];
    const double pc_max = m.p_charge_max_kw / cx.base;
    const double pd_max = m.p_discharge_max_kw / cx.base;
    const double s_max = m.s_rated_kva / cx.base;
    for (int i = 0; i < n; ++i)
      for (int t = 1; t <= D; ++t) {
        mv.chg[k][i].push_back(ir.add_binary(names::v3("c", m.id, sites[i], t)));
        mv.dis[k][i].push_back(ir.add_binary(names::v3("d", m.id, sites[i], t)));
        mv.p_c[k][i].push_back(
            ir.add_var(names::v3("pc", m.id, sites[i], t), 0, pc_max, false));
        mv.p_d[k][i].push_back(
            ir.add_var(names::v3("pd", m.id, sites[i], t), 0, pd_max, false));
        mv.q_s[k][i].push_back(
            ir.add_var(names::v3("qs", m.id, sites[i], t), -s_max, s_max, false));
      }
    for (int t = 0; t <= D; ++t)
      mv.soc[k].push_back(ir.add_var(names::v2("soc", m.id, t), 0, 1, false));
  }

  for (int k = 0; k < K; ++k) {
    const Module& m = sc.fleet.modules[k];
    const double pc_max = m.p_charge_max_kw / cx.base;
    const double pd_max = m.p_discharge_max_kw / cx.base;
    const double s_max = m.s_rated_kva / cx.base;

    for (int i = 0; i < n; ++i)
      for (int t = 1; t <= D; ++t) {
        const int tt = t - 1;
        LinExpr md;
        md.add(mv.chg[k][i][tt], 1).add(mv.dis[k][i][tt], 1).add(sv.zeta[k][i][t], -1);
        ir.add_row("5a", md, Sense::le, 0);

        LinExpr r1;
        r1.add(mv.p_c[k][i][tt], 1);
        ir.add_row("5b", r1, Sense::ge, 0);
        LinExpr r2;
        r2.add(mv.p_c[k][i][tt], 1).add(mv.chg[k][i][tt], -pc_max);
        ir.add_row("5b", r2, Sense::le, 0);
        LinExpr r3;
        r3.add(mv.p_d[k][i][tt], 1);
        ir.add_row("5b", r3, Sense::ge, 0);
        LinExpr r4;
        r4.add(mv.p_d[k][i][tt], 1).add(mv.dis[k][i][tt], -pd_max);
        ir.add_row("5b", r4, Sense::le, 0);
        LinExpr r5;
        r5.add(mv.q_s[k][i][tt], 1).add(sv.zeta[k][i][t], s_max);
        ir.add_row("5b", r5, Sense::ge, 0);
        LinExpr r6;
        r6.add(mv.q_s[k][i][tt], 1).add(sv.zeta[k][i][t], -s_max);
        ir.add_row("5b", r6, Sense::le, 0);
      }

    for (int t = 1; t <= D; ++t) {
      const int tt = t - 1;
      LinExpr px, qy;
      for (int i = 0; i < n; ++i) {
        px.add(mv.p_d[k][i][tt], 1).add(mv.p_c[k][i][tt], -1);
        qy.add(mv.q_s[k][i][tt], 1);
      }
      polygonal_disk(ir, "5c", px, qy, s_max, sc.study.disk_segments);

      // State of charge in fractions of usable energy.
      const double cf = cx.dt * cx.base / m.energy_kwh;
      LinExpr soc;
      soc.add(mv.soc[k][t], 1).add(mv.soc[k][t - 1], -1);
      for (int i = 0; i < n; ++i) {
        soc.add(mv.p_c[k][i][tt], -m.eff_charge * cf);
        soc.add(mv.p_d[k][i][tt], cf / m.eff_discharge);
      }
      ir.add_row("5d", soc, Sense::eq, 0);

      LinExpr lo;
      lo.add(mv.soc[k][t], 1);
      ir.add_row("5f", lo, Sense::ge, m.soc_min);
      LinExpr hi;
      hi.add(mv.soc[k][t], 1);
      ir.add_row("5f", hi, Sense::le, m.soc_max);
    }
    LinExpr init;
    init.add(mv.soc[k][0], 1);
    ir.add_row("5e", init, Sense::eq, m.soc_initial);
  }
  return mv;
}

// ---------------------------------------------------------------------------
// Generator electrical operation.
// ---------------------------------------------------------------------------

struct GeneratorVars {
  // [m][gi][t-1] over generator nodes, t = 1..D
  std::vector<std::vector<std::vector<int>>> p_g, q_g;
};

inline GeneratorVars emit_generators(BuildContext& cx,
                                     const std::vector<RoutingBlock>& gens) {
  ModelIR& ir = cx.ir;
  const int D = cx.D;
  const Scenario& sc = cx.sc;
  const int ng = static_cast<int>(sc.access.generator_sites.size());
  const int M = static_cast<int>(sc.fleet.generators.size());

  GeneratorVars gv;
  gv.p_g.assign(M, std::vector<std::vector<int>>(ng));
  gv.q_g = gv.p_g;
  for (int m = 0; m < M; ++m) {
    const Generator& g = sc.fleet.generators[m];
    const double p_max = g.p_max_kw / cx.base;
    const double q_max = g.q_max_kvar / cx.base;
    for (int gi = 0; gi < ng; ++gi) {
      const std::string& site = sc.access.generator_sites[gi].id;
      for (int t = 1; t <= D; ++t) {
        gv.p_g[m][gi].push_back(
            ir.add_var(names::v3("pg", g.id, site, t), 0, p_max, false));
        gv.q_g[m][gi].push_back(
            ir.add_var(names::v3("qg", g.id, site, t), -q_max, q_max, false));
      }
    }
  }

  for (int m = 0; m < M; ++m) {
    const Generator& g = sc.fleet.generators[m];
    const double p_max = g.p_max_kw / cx.base;
    const double q_max = g.q_max_kvar / cx.base;
    const double s_max = g.s_rated_kva / cx.base;
    for (int gi = 0; gi < ng; ++gi) {
      // Generator sites come first in the fuel-site ordering.
      for (int t = 1; t <= D; ++t) {
        const int tt = t - 1;
        const int x = gens[m].x[gi][t];
        LinExpr r1;
        r1.add(gv.p_g[m][gi][tt], 1);
        ir.add_row("6a", r1, Sense::ge, 0);
        LinExpr r2;
        r2.add(gv.p_g[m][gi][tt], 1).add(x, -p_max);
        ir.add_row("6a", r2, Sense::le, 0);
        LinExpr r3;
        r3.add(gv.q_g[m][gi][tt], 1).add(x, q_max);
        ir.add_row("6a", r3, Sense::ge, 0);
        LinExpr r4;
        r4.add(gv.q_g[m][gi][tt], 1).add(x, -q_max);
        ir.add_row("6a", r4, Sense::le, 0);
      }
    }
    for (int t = 1; t <= D; ++t) {
      const int tt = t - 1;
      LinExpr px, qy;
      for (int gi = 0; gi < ng; ++gi) {
        px.add(gv.p_g[m][gi][tt], 1);
        qy.add(gv.q_g[m][gi][tt], 1);
      }
      polygonal_disk(ir, "6b", px, qy, s_max, sc.study.disk_segments);
    }
  }
  return gv;
}

// ---------------------------------------------------------------------------
// Fuel logistics: burns, tank exchange, tanker transfers, storage levels.
// ---------------------------------------------------------------------------

struct FuelVars {
  // Generators, over fuel sites (generator nodes then depots), t = 1..D.
  std::vector<std::vector<std::vector<int>>> burn;       // B, liters
  std::vector<std::vector<std::vector<int>>> burn_site;  // B+, liters from stock
  std::vector<std::vector<std::vector<int>>> refill;     // G, liters to tank
  std::vector<std::vector<std::vector<int>>> gen_xch;    // l
  std::vector<std::vector<std::vector<int>>> tau;        // [m][seg][t-1]
  std::vector<std::vector<int>> covered;                 // b, [m][t-1]
  std::vector<std::vector<int>> gen_sof;                 // [m][t], t = 0..D
  // Tankers over fuel sites, t = 1..D.
  std::vector<std::vector<std::vector<int>>> transfer;  // D, liters (+ releases)
  std::vector<std::vector<std::vector<int>>> tank_xch;  // l
  std::vector<std::vector<int>> tank_sof;               // [h][t]
  std::vector<std::vector<int>> site_sof;               // [s][t], t = 0..D
};

inline std::vector<PiecewiseSegment> fuel_segments(const Generator& g, double base,
                                                   double dt) {
  std::vector<PiecewiseSegment> segs;
  double p_prev = 0, r_prev = 0;
  for (const FuelPoint& fp : g.fuel_curve) {
    PiecewiseSegment s;
    s.p_lo = p_prev / base;
    s.p_hi = fp.load_kw / base;
    double slope_kw = (fp.rate_l_per_h - r_prev) / (fp.load_kw - p_prev);
    s.slope = slope_kw * base * dt;
    s.intercept = (r_prev - slope_kw * p_prev) * dt;
    segs.push_back(s);
    p_prev = fp.load_kw;
    r_prev = fp.rate_l_per_h;
  }
  return segs;
}

inline FuelVars emit_fuel(BuildContext& cx, const std::vector<RoutingBlock>& gens,
                          const std::vector<RoutingBlock>& tanks,
                          const GeneratorVars& gv) {
  ModelIR& ir = cx.ir;
  const int D = cx.D;
  const Scenario& sc = cx.sc;
  const auto fsites = sc.fuel_sites();
  const int nf = static_cast<int>(fsites.size());
  const int ng = static_cast<int>(sc.access.generator_sites.size());
  const int M = static_cast<int>(sc.fleet.generators.size());
  const int H = static_cast<int>(sc.fleet.tankers.size());

  FuelVars fv;
  fv.burn.assign(M, std::vector<std::vector<int>>(nf));
  fv.burn_site = fv.burn;
  fv.refill = fv.burn;
  fv.gen_xch = fv.burn;
  fv.tau.assign(M, {});
  fv.covered.assign(M, {});
  fv.gen_sof.assign(M, {});
  for (int m = 0; m < M; ++m) {
    const Generator& g = sc.fleet.generators[m];
    for (int s = 0; s < nf; ++s) {
      const bool depot = s >= ng;
      for (int t = 1; t <= D; ++t) {
        fv.burn[m][s].push_back(
            ir.add_var(names::v3("B", g.id, fsites[s], t), 0, g.burn_max_l, false));
        fv.burn_site[m][s].push_back(
            ir.add_var(names::v3("Bp", g.id, fsites[s], t), 0, g.burn_max_l, false));
        fv.refill[m][s].push_back(ir.add_var(names::v3("G", g.id, fsites[s], t),
                                             depot ? 0 : -g.tank_l,
                                             depot ? 0 : g.tank_l, false));
        fv.gen_xch[m][s].push_back(ir.add_binary(names::v3("l", g.id, fsites[s], t)));
      }
    }
    const auto segs = fuel_segments(g, cx.base, cx.dt);
    fv.tau[m].assign(segs.size(), {});
    for (std::size_t l = 0; l < segs.size(); ++l)
      for (int t = 1; t <= D; ++t)
        fv.tau[m][l].push_back(
            ir.add_binary(names::v3("tau", g.id, "s" + std::to_string(l), t)));
    for (int t = 1; t <= D; ++t)
      fv.covered[m].push_back(ir.add_binary(names::v2("b", g.id, t)));
    for (int t = 0; t <= D; ++t)
      fv.gen_sof[m].push_back(ir.add_var(names::v2("fm", g.id, t), 0, 1, false));
  }
  fv.transfer.assign(H, std::vector<std::vector<int>>(nf));
  fv.tank_xch = fv.transfer;
  fv.tank_sof.assign(H, {});
  for (int h = 0; h < H; ++h) {
    const Tanker& tk = sc.fleet.tankers[h];
    for (int s = 0; s < nf; ++s)
      for (int t = 1; t <= D; ++t) {
        fv.transfer[h][s].push_back(ir.add_var(names::v3("tr", tk.id, fsites[s], t),
                                               -tk.rate_in_l_per_h * cx.dt,
                                               tk.rate_out_l_per_h * cx.dt, false));
        fv.tank_xch[h][s].push_back(ir.add_binary(names::v3("l", tk.id, fsites[s], t)));
      }
    for (int t = 0; t <= D; ++t)
      fv.tank_sof[h].push_back(ir.add_var(names::v2("fh", tk.id, t), 0, 1, false));
  }
  fv.site_sof.assign(nf, {});
  for (int s = 0; s < nf; ++s)
    for (int t = 0; t <= D; ++t)
      fv.site_sof[s].push_back(ir.add_var(names::v2("fs", fsites[s], t), 0, 1, false));

  auto site_caps = [&]() {
    std::vector<double> caps;
    for (const FuelSite& g : sc.access.generator_sites) caps.push_back(g.capacity_l);
    for (const FuelSite& d : sc.access.depots) caps.push_back(d.capacity_l);
    return caps;
  }();

  for (int m = 0; m < M; ++m) {
    const Generator& g = sc.fleet.generators[m];
    const auto segs = fuel_segments(g, cx.base, cx.dt);

    for (int s = 0; s < nf; ++s)
      for (int t = 1; t <= D; ++t) {
        const int tt = t - 1;
        // Burn is possible only while parked there.
        LinExpr b1;
        b1.add(fv.burn[m][s][tt], 1);
        ir.add_row("7a", b1, Sense::ge, 0);
        LinExpr b2;
        b2.add(fv.burn[m][s][tt], 1).add(gens[m].x[s][t], -g.burn_max_l);
        ir.add_row("7a", b2, Sense::le, 0);
        if (s >= ng) {
          LinExpr z;
          z.add(fv.burn[m][s][tt], 1);
          ir.add_row("7b", z, Sense::eq, 0);
        }
        // Stock-fed share of the burn.
        LinExpr p1;
        p1.add(fv.burn_site[m][s][tt], 1);
        ir.add_row("7f", p1, Sense::ge, 0);
        LinExpr p2;
        p2.add(fv.burn_site[m][s][tt], 1).add(fv.burn[m][s][tt], -1);
        ir.add_row("7f", p2, Sense::le, 0);
        // Exchange flag needs presence.
        LinExpr xc;
        xc.add(fv.gen_xch[m][s][tt], 1).add(gens[m].x[s][t], -1);
        ir.add_row("7j", xc, Sense::le, 0);
      }

    double big = g.burn_max_l;
    for (const PiecewiseSegment& s : segs)
      big = std::max(big, g.burn_max_l + std::abs(s.slope) * (g.p_max_kw / cx.base) +
                              std::abs(s.intercept));
    for (int t = 1; t <= D; ++t) {
      const int tt = t - 1;
      LinExpr out, in;
      for (int s = 0; s < nf; ++s) out.add(fv.burn[m][s][tt], 1);
      for (int gi = 0; gi < ng; ++gi) in.add(gv.p_g[m][gi][tt], 1);
      std::vector<int> taus;
      for (std::size_t l = 0; l < segs.size(); ++l) taus.push_back(fv.tau[m][l][tt]);
      piecewise_bigM(ir, "7d", out, 0, g.burn_max_l, in, 0, g.p_max_kw / cx.base, taus,
                     segs, big);
      LinExpr one;
      for (int v : taus) one.add(v, 1);
      ir.add_row("7e", one, Sense::eq, 1);

      // Tank-coverage split: burn beyond the carried stock is drawn from the
      // site, exactly.
      LinExpr e2a, e2b, e3, e4a, e4b;
      for (int s = 0; s < ng; ++s) {
        e2a.add(fv.burn[m][s][tt], 1);
        e4a.add(fv.burn_site[m][s][tt], 1).add(fv.burn[m][s][tt], -1);
        e3.add(fv.burn_site[m][s][tt], 1);
      }
      e2b = e2a;
      e4b = e4a;
      e2a.add(fv.gen_sof[m][t - 1], -g.tank_l).add(fv.covered[m][tt], g.tank_l);
      ir.add_row("7f", e2a, Sense::ge, 0);
      e2b.add(fv.gen_sof[m][t - 1], -g.tank_l).add(fv.covered[m][tt], g.burn_max_l);
      ir.add_row("7f", e2b, Sense::le, g.burn_max_l);
      e3.add(fv.covered[m][tt], g.burn_max_l);
      ir.add_row("7f", e3, Sense::le, g.burn_max_l);
      e4a.add(fv.gen_sof[m][t - 1], g.tank_l);
      ir.add_row("7f", e4a, Sense::ge, 0);
      e4b.add(fv.gen_sof[m][t - 1], g.tank_l).add(fv.covered[m][tt], -g.tank_l);
      ir.add_row("7f", e4b, Sense::le, 0);

      // Tank level recursion, scaled by capacity.
      LinExpr sof;
      sof.add(fv.gen_sof[m][t], g.tank_l).add(fv.gen_sof[m][t - 1], -g.tank_l);
      for (int s = 0; s < ng; ++s) {
        sof.add(fv.burn[m][s][tt], 1).add(fv.burn_site[m][s][tt], -1);
        sof.add(fv.refill[m][s][tt], -1);
      }
      ir.add_row("7g", sof, Sense::eq, 0);

      LinExpr lo;
      lo.add(fv.gen_sof[m][t], 1);
      ir.add_row("7o", lo, Sense::ge, 0);
      LinExpr hi;
      hi.add(fv.gen_sof[m][t], 1);
      ir.add_row("7o", hi, Sense::le, 1);
    }

    // Tank refills move through the exchange flag.
    for (int gi = 0; gi < ng; ++gi)
      for (int t = 1; t <= D; ++t) {
        const int tt = t - 1;
        LinExpr lo;
        lo.add(fv.refill[m][gi][tt], 1).add(fv.gen_xch[m][gi][tt], g.tank_l);
        ir.add_row("7k", lo, Sense::ge, 0);
        LinExpr hi;
        hi.add(fv.refill[m][gi][tt], 1).add(fv.gen_xch[m][gi][tt], -g.tank_l);
        ir.add_row("7k", hi, Sense::le, 0);
      }

    LinExpr init;
    init.add(fv.gen_sof[m][0], 1);
    ir.add_row("7n", init, Sense::eq, g.initial_sof);
  }

  for (int h = 0; h < H; ++h) {
    const Tanker& tk = sc.fleet.tankers[h];
    for (int s = 0; s < nf; ++s)
      for (int t = 1; t <= D; ++t) {
        const int tt = t - 1;
        LinExpr xc;
        xc.add(fv.tank_xch[h][s][tt], 1).add(tanks[h].x[s][t], -1);
        ir.add_row("7l", xc, Sense::le, 0);
        LinExpr lo;
        lo.add(fv.transfer[h][s][tt], 1)
            .add(fv.tank_xch[h][s][tt], tk.rate_in_l_per_h * cx.dt);
        ir.add_row("7m", lo, Sense::ge, 0);
        LinExpr hi;
        hi.add(fv.transfer[h][s][tt], 1)
            .add(fv.tank_xch[h][s][tt], -tk.rate_out_l_per_h * cx.dt);
        ir.add_row("7m", hi, Sense::le, 0);
      }
    for (int t = 1; t <= D; ++t) {
      LinExpr sof;
      sof.add(fv.tank_sof[h][t], tk.tank_l).add(fv.tank_sof[h][t - 1], -tk.tank_l);
      for (int s = 0; s < nf; ++s) sof.add(fv.transfer[h][s][t - 1], 1);
      ir.add_row("7h", sof, Sense::eq, 0);
      LinExpr lo;
      lo.add(fv.tank_sof[h][t], 1);
      ir.add_row("7o", lo, Sense::ge, 0);
      LinExpr hi;
      hi.add(fv.tank_sof[h][t], 1);
      ir.add_row("7o", hi, Sense::le, 1);
    }
    LinExpr init;
    init.add(fv.tank_sof[h][0], 1);
    ir.add_row("7n", init, Sense::eq, tk.initial_sof);
  }

  // Site storage levels.
  for (int s = 0; s < nf; ++s) {
    const double cap = site_caps[s];
    for (int t = 1; t <= D; ++t) {
      const int tt = t - 1;
      LinExpr sof;
      sof.add(fv.site_sof[s][t], cap).add(fv.site_sof[s][t - 1], -cap);
      for (int h = 0; h < H; ++h) sof.add(fv.transfer[h][s][tt], -1);
      for (int m = 0; m < M; ++m)
        sof.add(fv.burn_site[m][s][tt], 1).add(fv.refill[m][s][tt], 1);
      ir.add_row("7i", sof, Sense::eq, 0);
      LinExpr lo;
      lo.add(fv.site_sof[s][t], 1);
      ir.add_row("7o", lo, Sense::ge, 0);
      LinExpr hi;
      hi.add(fv.site_sof[s][t], 1);
      ir.add_row("7o", hi, Sense::le, 1);
    }
    double init_sof = s < ng ? sc.access.generator_sites[s].initial_sof
                             : sc.access.depots[s - ng].initial_sof;
    LinExpr init;
    init.add(fv.site_sof[s][0], 1);
    ir.add_row("7n", init, Sense::eq, init_sof);
  }
  return fv;
}

}  // namespace mersched
