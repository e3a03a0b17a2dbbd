#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fleet.hpp"
#include "model_ir.hpp"
#include "scenario.hpp"

namespace mersched {

struct GridVars {
  // All series are per operating span: index [..][t-1], t = 1..D.
  std::vector<std::vector<int>> kappa;   // branch closed
  std::vector<std::vector<int>> lam_f;   // tree arc, from->to
  std::vector<std::vector<int>> lam_r;   // tree arc, to->from
  std::vector<std::vector<int>> mu;      // branch in spanning tree
  std::vector<std::vector<int>> chi_f;   // closed and from-side energized
  std::vector<std::vector<int>> chi_r;   // closed and to-side energized
  std::vector<std::vector<int>> delta;   // load pickup
  std::vector<std::vector<int>> eta;     // node energized
  std::vector<std::vector<int>> rho;     // energized by a parked source
  std::vector<std::vector<int>> sigma;   // energized through a branch
  std::vector<std::vector<int>> vsq;     // squared voltage
  std::vector<std::vector<int>> p_in;    // net source injection, real
  std::vector<std::vector<int>> q_in;    // net source injection, reactive
  std::vector<std::vector<int>> br_p;    // branch real flow, from->to
  std::vector<std::vector<int>> br_q;    // branch reactive flow
  // Connectivity commodities: one per non-root node. flow_f[c][br][t-1] is the
  // from->to arc for commodity c; the root's slot stays empty.
  std::vector<std::vector<std::vector<int>>> flow_f, flow_r;
};

inline GridVars emit_grid(BuildContext& cx, const SmessVars& sv, const ModuleVars& mv,
                          const GeneratorVars& gv,
                          const std::vector<RoutingBlock>& gens) {
  ModelIR& ir = cx.ir;
  const Scenario& sc = cx.sc;
  const int D = cx.D;
  const int N = sc.nodes_count();
  const int L = sc.branches_count();
  const int root = sc.substation;
  const int K = static_cast<int>(sc.fleet.modules.size());
  const int MG = static_cast<int>(sc.fleet.generators.size());
  const bool fed = sc.study.substation_energized;

  // Site-column lookup per node (-1 when the fleet class cannot park there).
  std::vector<int> storage_col(N, -1), gen_col(N, -1);
  for (std::size_t i = 0; i < sc.access.storage_nodes.size(); ++i)
    storage_col[sc.node_of(sc.access.storage_nodes[i], "/access")] = static_cast<int>(i);
  for (std::size_t i = 0; i < sc.access.generator_sites.size(); ++i)
    gen_col[sc.node_of(sc.access.generator_sites[i].id, "/access")] =
        static_cast<int>(i);

  std::vector<int> from(L), to(L), degree(N, 0);
  std::vector<double> r_pu(L), x_pu(L), s_max(L);
  for (int b = 0; b < L; ++b) {
    const Branch& br = sc.network.branches[b];
    from[b] = sc.node_index.at(br.from);
    to[b] = sc.node_index.at(br.to);
    r_pu[b] = br.r_pu;
    x_pu[b] = br.x_pu;
    s_max[b] = br.capacity_kva / cx.base;
    degree[from[b]]++;
    degree[to[b]]++;
  }
  auto br_tag = [&](int b) {
    return sc.network.branches[b].from + "_" + sc.network.branches[b].to;
  };

  double inj_cap = 0;
  for (const Node& nd : sc.network.nodes)
    for (double v : nd.p_load_kw) inj_cap = std::max(inj_cap, v);
  double p_big = 0, q_big = 0;
  for (const Node& nd : sc.network.nodes) {
    double pmax = 0, qmax = 0;
    for (double v : nd.p_load_kw) pmax = std::max(pmax, v);
    for (double v : nd.q_load_kvar) qmax = std::max(qmax, v);
    p_big += pmax / cx.base;
    q_big += qmax / cx.base;
  }
  for (const Module& m : sc.fleet.modules) {
    p_big += std::max(m.p_charge_max_kw, m.p_discharge_max_kw) / cx.base;
    q_big += m.s_rated_kva / cx.base;
  }
  for (const Generator& g : sc.fleet.generators) {
    p_big += g.p_max_kw / cx.base;
    q_big += g.q_max_kvar / cx.base;
  }

  const double v_lo = sc.network.v_min_pu * sc.network.v_min_pu;
  const double v_hi = sc.network.v_max_pu * sc.network.v_max_pu;

  GridVars g;
  g.kappa.assign(L, {});
  g.lam_f = g.kappa;
  g.lam_r = g.kappa;
  g.mu = g.kappa;
  g.chi_f = g.kappa;
  g.chi_r = g.kappa;
  for (int b = 0; b < L; ++b)
    for (int t = 1; t <= D; ++t) {
      g.kappa[b].push_back(ir.add_binary(names::v2("kp", br_tag(b), t)));
      g.lam_f[b].push_back(ir.add_binary(names::v2("lam", br_tag(b), t)));
      g.lam_r[b].push_back(ir.add_binary(names::v2("lam2", br_tag(b), t)));
      g.mu[b].push_back(ir.add_binary(names::v2("mu", br_tag(b), t)));
      g.chi_f[b].push_back(ir.add_binary(names::v2("ch", br_tag(b), t)));
      g.chi_r[b].push_back(ir.add_binary(names::v2("ch2", br_tag(b), t)));
    }
  g.delta.assign(N, {});
  g.eta = g.delta;
  g.rho = g.delta;
  g.sigma = g.delta;
  g.vsq = g.delta;
  g.p_in = g.delta;
  g.q_in = g.delta;
  for (int u = 0; u < N; ++u) {
    const std::string& id = sc.network.nodes[u].id;
    for (int t = 1; t <= D; ++t) {
      g.delta[u].push_back(ir.add_binary(names::v2("del", id, t)));
      g.eta[u].push_back(ir.add_binary(names::v2("eta", id, t)));
      int rv = ir.add_binary(names::v2("rho", id, t));
      int sv2 = ir.add_binary(names::v2("sig", id, t));
      if (u == root && fed) {
        ir.fix_var(rv, 0);
        ir.fix_var(sv2, 0);
      }
      g.rho[u].push_back(rv);
      g.sigma[u].push_back(sv2);
      g.vsq[u].push_back(ir.add_var(names::v2("vq", id, t), v_lo, v_hi, false));
      g.p_in[u].push_back(ir.add_var(names::v2("pin", id, t), -p_big, p_big, false));
      g.q_in[u].push_back(ir.add_var(names::v2("qin", id, t), -q_big, q_big, false));
    }
  }
  g.br_p.assign(L, {});
  g.br_q = g.br_p;
  for (int b = 0; b < L; ++b)
    for (int t = 1; t <= D; ++t) {
      g.br_p[b].push_back(
          ir.add_var(names::v2("fp", br_tag(b), t), -s_max[b], s_max[b], false));
      g.br_q[b].push_back(
          ir.add_var(names::v2("fq", br_tag(b), t), -s_max[b], s_max[b], false));
    }
  g.flow_f.assign(N, std::vector<std::vector<int>>(L));
  g.flow_r = g.flow_f;
  for (int c = 0; c < N; ++c) {
    if (c == root) continue;
    const std::string& cid = sc.network.nodes[c].id;
    for (int b = 0; b < L; ++b)
      for (int t = 1; t <= D; ++t) {
        g.flow_f[c][b].push_back(
            ir.add_var(names::v3("ff", cid, br_tag(b), t), 0, 1, false));
        g.flow_r[c][b].push_back(
            ir.add_var(names::v3("fr", cid, br_tag(b), t), 0, 1, false));
      }
  }

  for (int t = 1; t <= D; ++t) {
    const int tt = t - 1;

    // One unit of virtual flow from the root to every other node over the
    // fictitious spanning tree: forces mu to describe one tree per span.
    for (int c = 0; c < N; ++c) {
      if (c == root) continue;
      for (int u = 0; u < N; ++u) {
        LinExpr bal;
        for (int b = 0; b < L; ++b) {
          if (to[b] == u) bal.add(g.flow_f[c][b][tt], 1).add(g.flow_r[c][b][tt], -1);
          if (from[b] == u) bal.add(g.flow_f[c][b][tt], -1).add(g.flow_r[c][b][tt], 1);
        }
        const char* fam = u == root ? "8a" : (u == c ? "8b" : "8c");
        ir.add_row(fam, bal, Sense::eq, u == root ? -1 : (u == c ? 1 : 0));
      }
      for (int b = 0; b < L; ++b) {
        LinExpr f1;
        f1.add(g.flow_f[c][b][tt], 1);
        ir.add_row("8d", f1, Sense::ge, 0);
        LinExpr f2;
        f2.add(g.flow_f[c][b][tt], 1).add(g.lam_f[b][tt], -1);
        ir.add_row("8d", f2, Sense::le, 0);
        LinExpr f3;
        f3.add(g.flow_r[c][b][tt], 1);
        ir.add_row("8d", f3, Sense::ge, 0);
        LinExpr f4;
        f4.add(g.flow_r[c][b][tt], 1).add(g.lam_r[b][tt], -1);
        ir.add_row("8d", f4, Sense::le, 0);
      }
    }
    {
      LinExpr tree;
      for (int b = 0; b < L; ++b)
        tree.add(g.lam_f[b][tt], 1).add(g.lam_r[b][tt], 1);
      ir.add_row("8e", tree, Sense::eq, N - 1);
    }
    for (int b = 0; b < L; ++b) {
      LinExpr orient;
      orient.add(g.lam_f[b][tt], 1).add(g.lam_r[b][tt], 1).add(g.mu[b][tt], -1);
      ir.add_row("8f", orient, Sense::eq, 0);
      LinExpr sw;
      sw.add(g.kappa[b][tt], 1).add(g.mu[b][tt], -1);
      ir.add_row("8g", sw, Sense::le, 0);
    }

    // Net source injection per node; at an externally fed root the grid
    // import rides on top, so the row relaxes to >=.
    for (int u = 0; u < N; ++u) {
      LinExpr pi;
      pi.add(g.p_in[u][tt], 1);
      LinExpr qi;
      qi.add(g.q_in[u][tt], 1);
      if (storage_col[u] >= 0)
        for (int k = 0; k < K; ++k) {
          pi.add(mv.p_d[k][storage_col[u]][tt], -1).add(mv.p_c[k][storage_col[u]][tt], 1);
          qi.add(mv.q_s[k][storage_col[u]][tt], -1);
        }
      if (gen_col[u] >= 0)
        for (int m = 0; m < MG; ++m) {
          pi.add(gv.p_g[m][gen_col[u]][tt], -1);
          qi.add(gv.q_g[m][gen_col[u]][tt], -1);
        }
      const Sense sense = (u == root && fed) ? Sense::ge : Sense::eq;
      ir.add_row("9a", pi, sense, 0);
      ir.add_row("9b", qi, sense, 0);
    }

    // Nodal balance with switched pickup.
    for (int u = 0; u < N; ++u) {
      const Node& nd = sc.network.nodes[u];
      LinExpr pb;
      pb.add(g.p_in[u][tt], 1).add(g.delta[u][tt], -nd.p_load_kw[tt] / cx.base);
      LinExpr qb;
      qb.add(g.q_in[u][tt], 1).add(g.delta[u][tt], -nd.q_load_kvar[tt] / cx.base);
      for (int b = 0; b < L; ++b) {
        if (from[b] == u) {
          pb.add(g.br_p[b][tt], -1);
          qb.add(g.br_q[b][tt], -1);
        }
        if (to[b] == u) {
          pb.add(g.br_p[b][tt], 1);
          qb.add(g.br_q[b][tt], 1);
        }
      }
      ir.add_row("9c", pb, Sense::eq, 0);
      ir.add_row("9d", qb, Sense::eq, 0);
    }

    // Pickup is monotone.
    for (int u = 0; u < N; ++u) {
      LinExpr mon;
      mon.add(g.delta[u][tt], 1);
      if (t > 1) mon.add(g.delta[u][tt - 1], -1);
      ir.add_row("9e", mon, Sense::ge, 0);
    }

    // Voltage drop along closed branches.
    for (int b = 0; b < L; ++b) {
      double m = (v_hi - v_lo) + 2 * (r_pu[b] + x_pu[b]) * s_max[b];
      if (sc.study.bigm == BigMPolicy::uniform) {
        if (sc.study.uniform_bigm < m)
          throw std::invalid_argument("uniform big-M too small for voltage rows");
        m = sc.study.uniform_bigm;
      }
      LinExpr drop;
      drop.add(g.vsq[from[b]][tt], 1).add(g.vsq[to[b]][tt], -1);
      drop.add(g.br_p[b][tt], -2 * r_pu[b]).add(g.br_q[b][tt], -2 * x_pu[b]);
      LinExpr up = drop;
      up.add(g.kappa[b][tt], m);
      ir.add_row("9f", up, Sense::le, m);
      LinExpr dn = drop;
      dn.add(g.kappa[b][tt], -m);
      ir.add_row("9f", dn, Sense::ge, -m);
    }

    // Voltage window; the root rides at nominal.
    for (int u = 0; u < N; ++u) {
      const double lo = u == root ? 1.0 : v_lo;
      const double hi = u == root ? 1.0 : v_hi;
      LinExpr l1;
      l1.add(g.vsq[u][tt], 1);
      ir.add_row("9g", l1, Sense::ge, lo);
      LinExpr l2;
      l2.add(g.vsq[u][tt], 1);
      ir.add_row("9g", l2, Sense::le, hi);
    }

    // Branch capability, gated by the switch.
    {
      const int kseg = sc.study.disk_segments;
      const double pi_c = std::acos(-1.0);
      for (int b = 0; b < L; ++b) {
        const double edge = s_max[b] * std::cos(pi_c / kseg);
        for (int m = 0; m < kseg; ++m) {
          double theta = (2.0 * m + 1.0) * pi_c / kseg;
          LinExpr e;
          e.add(g.br_p[b][tt], std::cos(theta)).add(g.br_q[b][tt], std::sin(theta));
          e.add(g.kappa[b][tt], -edge);
          ir.add_row("9h", e, Sense::le, 0);
        }
      }
    }

    // Fault pinning.
    {
      FaultSets fs = sc.fault_sets_at(t);
      for (int b : fs.open_branches) {
        LinExpr e;
        e.add(g.kappa[b][tt], 1);
        ir.add_row("9i", e, Sense::eq, 0);
      }
      for (int b : fs.closed_branches) {
        LinExpr e;
        e.add(g.kappa[b][tt], 1);
        ir.add_row("9i", e, Sense::eq, 1);
      }
      for (int u : fs.open_nodes) {
        LinExpr e;
        e.add(g.delta[u][tt], 1);
        ir.add_row("9i", e, Sense::eq, 0);
      }
      for (int u : fs.closed_nodes) {
        LinExpr e;
        e.add(g.delta[u][tt], 1).add(g.eta[u][tt], -1);
        ir.add_row("9i", e, Sense::ge, 0);
      }
    }

    if (fed) {
      LinExpr e;
      e.add(g.eta[root][tt], 1);
      ir.add_row("9j", e, Sense::eq, 1);
    }

    // Source presence and propagated energization. The no-resource benchmark
    // fields no fleet, so nothing parked can light a bus there.
    const bool fleet_present = sc.study.variant != CaseId::none_resources;
    for (int u = 0; u < N; ++u) {
      if (u == root && fed) continue;
      const auto [a1, a2] = sc.access_coefficients(u);
      LinExpr parked;
      if (a1 && fleet_present)
        for (int k = 0; k < K; ++k) parked.add(sv.zeta[k][storage_col[u]][t], 1);
      if (a2 && fleet_present)
        for (int m = 0; m < MG; ++m) parked.add(gens[m].x[gen_col[u]][t], 1);
      const double denom = a1 * K + a2 * MG + 1;
      LinExpr r1;
      r1.add(g.rho[u][tt], denom);
      append_scaled(r1, parked, -1);
      ir.add_row("9k", r1, Sense::ge, 0);
      LinExpr r2;
      r2.add(g.rho[u][tt], 1);
      append_scaled(r2, parked, -1);
      ir.add_row("9k", r2, Sense::le, 0);

      LinExpr inc;
      for (int b = 0; b < L; ++b) {
        if (to[b] == u) inc.add(g.chi_f[b][tt], 1);
        if (from[b] == u) inc.add(g.chi_r[b][tt], 1);
      }
      LinExpr s1;
      s1.add(g.sigma[u][tt], static_cast<double>(degree[u]));
      append_scaled(s1, inc, -1);
      ir.add_row("9l", s1, Sense::ge, 0);
      LinExpr s2;
      s2.add(g.sigma[u][tt], 1);
      append_scaled(s2, inc, -1);
      ir.add_row("9l", s2, Sense::le, 0);

      LinExpr m1;
      m1.add(g.eta[u][tt], 1).add(g.rho[u][tt], -1);
      ir.add_row("9m", m1, Sense::ge, 0);
      LinExpr m2;
      m2.add(g.eta[u][tt], 1).add(g.sigma[u][tt], -1);
      ir.add_row("9m", m2, Sense::ge, 0);
      LinExpr m3;
      m3.add(g.eta[u][tt], 1).add(g.rho[u][tt], -1).add(g.sigma[u][tt], -1);
      ir.add_row("9m", m3, Sense::le, 0);
    }

    // Closed-and-energized arc indicators.
    for (int b = 0; b < L; ++b) {
      and_product(ir, "10", g.chi_f[b][tt],
                  {{g.eta[from[b]][tt], false}, {g.kappa[b][tt], false}});
      and_product(ir, "10", g.chi_r[b][tt],
                  {{g.eta[to[b]][tt], false}, {g.kappa[b][tt], false}});
    }
  }
  return g;
}

}  // namespace mersched
