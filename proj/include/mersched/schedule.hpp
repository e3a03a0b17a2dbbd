#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "assemble.hpp"
#include "scenario.hpp"

namespace mersched {

// A finished plan in physical units, keyed by ids rather than variable names.
// Position strings are site ids; an empty string means "in transit". Module
// whereabouts use site/carrier pairs with exactly one side set per span.

struct MerSchedule {
  std::string id;
  std::vector<std::string> position;  // t = 0..D
  std::vector<std::string> heading;   // t = 0..D
};

struct ModuleSchedule {
  std::string id;
  std::vector<std::string> site;     // t = 0..D
  std::vector<std::string> carrier;  // t = 0..D
  std::vector<double> p_charge_kw, p_discharge_kw, q_kvar;  // t = 1..D
  std::vector<double> soc;                                  // t = 0..D
};

struct GeneratorSchedule {
  std::string id;
  std::vector<std::string> position, heading;  // t = 0..D
  std::vector<double> p_kw, q_kvar;            // t = 1..D
  std::vector<double> burn_l, refill_l;        // t = 1..D
  std::vector<int> exchange;                   // t = 1..D
  std::vector<double> sof;                     // t = 0..D
};

struct TankerSchedule {
  std::string id;
  std::vector<std::string> position, heading;  // t = 0..D
  std::vector<double> transfer_l;              // t = 1..D
  std::vector<int> exchange;                   // t = 1..D
  std::vector<double> sof;                     // t = 0..D
};

struct SiteSchedule {
  std::string id;
  std::vector<double> sof;  // t = 0..D
};

struct GridSchedule {
  // Outer index is the span (t-1); inner follows the scenario's branch or
  // node order.
  std::vector<std::vector<int>> closed, pickup, energized;
  std::vector<std::vector<double>> v_squared;
  std::vector<std::vector<double>> branch_p_kw, branch_q_kvar;
};

struct Schedule {
  std::string case_label = "case5";
  int spans = 0;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<MerSchedule> carriers;
  std::vector<ModuleSchedule> modules;
  std::vector<GeneratorSchedule> generators;
  std::vector<TankerSchedule> tankers;
  std::vector<SiteSchedule> sites;
  GridSchedule grid;
};

// ---------------------------------------------------------------------------
// Extraction from a solved model.
// ---------------------------------------------------------------------------

namespace detail {

inline int as_binary(double v, const std::string& name) {
  double r = std::round(v);
  if (std::abs(v - r) > 1e-4 || r < -0.5 || r > 1.5)
    throw std::runtime_error("non-integral binary value " + std::to_string(v) +
                             " for " + name);
  return static_cast<int>(r);
}

}  // namespace detail

inline Schedule extract_schedule(const Model& m, const std::vector<double>& x,
                                 double objective = std::numeric_limits<double>::quiet_NaN()) {
  if (x.size() != m.ir.vars.size())
    throw std::runtime_error("assignment length does not match the model");
  const Scenario& sc = m.sc;
  const int D = m.D;
  const double base = m.base;
  auto bin = [&](int var) { return detail::as_binary(x[var], m.ir.vars[var].name); };

  Schedule s;
  s.case_label = to_string(sc.study.variant);
  s.spans = D;
  s.objective = objective;

  auto routing_series = [&](const RoutingBlock& rb, std::vector<std::string>& pos,
                            std::vector<std::string>& head) {
    pos.assign(D + 1, "");
    head.assign(D + 1, "");
    for (int t = 0; t <= D; ++t) {
      int parked = 0, moving = 0;
      for (std::size_t i = 0; i < rb.sites.size(); ++i) {
        if (bin(rb.x[i][t])) {
          pos[t] = rb.sites[i];
          ++parked;
        }
        if (bin(rb.v[i][t])) {
          head[t] = rb.sites[i];
          ++moving;
        }
      }
      if (parked + moving != 1)
        throw std::runtime_error("unit " + rb.mer + " has " +
                                 std::to_string(parked + moving) +
                                 " active states in span " + std::to_string(t));
    }
  };

  for (const RoutingBlock& rb : m.carriers) {
    MerSchedule ms;
    ms.id = rb.mer;
    routing_series(rb, ms.position, ms.heading);
    s.carriers.push_back(std::move(ms));
  }

  const auto& storage = sc.access.storage_nodes;
  for (std::size_t k = 0; k < sc.fleet.modules.size(); ++k) {
    ModuleSchedule md;
    md.id = sc.fleet.modules[k].id;
    md.site.assign(D + 1, "");
    md.carrier.assign(D + 1, "");
    for (int t = 0; t <= D; ++t) {
      int hits = 0;
      for (std::size_t i = 0; i < storage.size(); ++i)
        if (bin(m.sv.zeta[k][i][t])) {
          md.site[t] = storage[i];
          ++hits;
        }
      for (std::size_t j = 0; j < m.carriers.size(); ++j)
        if (bin(m.sv.gamma[k][j][t])) {
          md.carrier[t] = m.carriers[j].mer;
          ++hits;
        }
      if (hits != 1)
        throw std::runtime_error("module " + md.id + " has " + std::to_string(hits) +
                                 " active states in span " + std::to_string(t));
    }
    for (int t = 1; t <= D; ++t) {
      const int tt = t - 1;
      double pc = 0, pd = 0, q = 0;
      for (std::size_t i = 0; i < storage.size(); ++i) {
        pc += x[m.mv.p_c[k][i][tt]];
        pd += x[m.mv.p_d[k][i][tt]];
        q += x[m.mv.q_s[k][i][tt]];
      }
      md.p_charge_kw.push_back(pc * base);
      md.p_discharge_kw.push_back(pd * base);
      md.q_kvar.push_back(q * base);
    }
    for (int t = 0; t <= D; ++t) md.soc.push_back(x[m.mv.soc[k][t]]);
    s.modules.push_back(std::move(md));
  }

  const auto fsites = sc.fuel_sites();
  const int ng = static_cast<int>(sc.access.generator_sites.size());
  for (std::size_t g = 0; g < sc.fleet.generators.size(); ++g) {
    GeneratorSchedule gs;
    gs.id = sc.fleet.generators[g].id;
    routing_series(m.gens[g], gs.position, gs.heading);
    for (int t = 1; t <= D; ++t) {
      const int tt = t - 1;
      double p = 0, q = 0, b = 0, r = 0;
      int l = 0;
      for (int gi = 0; gi < ng; ++gi) {
        p += x[m.gv.p_g[g][gi][tt]];
        q += x[m.gv.q_g[g][gi][tt]];
      }
      for (std::size_t sI = 0; sI < fsites.size(); ++sI) {
        b += x[m.fv.burn[g][sI][tt]];
        r += x[m.fv.refill[g][sI][tt]];
        l += bin(m.fv.gen_xch[g][sI][tt]);
      }
      gs.p_kw.push_back(p * base);
      gs.q_kvar.push_back(q * base);
      gs.burn_l.push_back(b);
      gs.refill_l.push_back(r);
      gs.exchange.push_back(l);
    }
    for (int t = 0; t <= D; ++t) gs.sof.push_back(x[m.fv.gen_sof[g][t]]);
    s.generators.push_back(std::move(gs));
  }

  for (std::size_t h = 0; h < sc.fleet.tankers.size(); ++h) {
    TankerSchedule ts;
    ts.id = sc.fleet.tankers[h].id;
    routing_series(m.tanks[h], ts.position, ts.heading);
    for (int t = 1; t <= D; ++t) {
      const int tt = t - 1;
      double tr = 0;
      int l = 0;
      for (std::size_t sI = 0; sI < fsites.size(); ++sI) {
        tr += x[m.fv.transfer[h][sI][tt]];
        l += bin(m.fv.tank_xch[h][sI][tt]);
      }
      ts.transfer_l.push_back(tr);
      ts.exchange.push_back(l);
    }
    for (int t = 0; t <= D; ++t) ts.sof.push_back(x[m.fv.tank_sof[h][t]]);
    s.tankers.push_back(std::move(ts));
  }

  for (std::size_t sI = 0; sI < fsites.size(); ++sI) {
    SiteSchedule st;
    st.id = fsites[sI];
    for (int t = 0; t <= D; ++t) st.sof.push_back(x[m.fv.site_sof[sI][t]]);
    s.sites.push_back(std::move(st));
  }

  const int N = sc.nodes_count();
  const int L = sc.branches_count();
  for (int t = 1; t <= D; ++t) {
    const int tt = t - 1;
    std::vector<int> closed(L), pickup(N), energized(N);
    std::vector<double> vsq(N), bp(L), bq(L);
    for (int b = 0; b < L; ++b) {
      closed[b] = bin(m.gd.kappa[b][tt]);
      bp[b] = x[m.gd.br_p[b][tt]] * base;
      bq[b] = x[m.gd.br_q[b][tt]] * base;
    }
    for (int u = 0; u < N; ++u) {
      pickup[u] = bin(m.gd.delta[u][tt]);
      energized[u] = bin(m.gd.eta[u][tt]);
      vsq[u] = x[m.gd.vsq[u][tt]];
    }
    s.grid.closed.push_back(std::move(closed));
    s.grid.pickup.push_back(std::move(pickup));
    s.grid.energized.push_back(std::move(energized));
    s.grid.v_squared.push_back(std::move(vsq));
    s.grid.branch_p_kw.push_back(std::move(bp));
    s.grid.branch_q_kvar.push_back(std::move(bq));
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON round trip.
// ---------------------------------------------------------------------------

namespace detail {

inline Json strings_json(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const std::string& s : v) a.push_back(s);
  return a;
}
inline Json doubles_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double d : v) a.push_back(d);
  return a;
}
inline Json ints_json(const std::vector<int>& v) {
  Json a = Json::array();
  for (int d : v) a.push_back(d);
  return a;
}
template <class T>
inline std::vector<T> vec_from(const Json& a, const char* what) {
  if (!a.is_array()) throw std::runtime_error(std::string("expected array: ") + what);
  std::vector<T> out;
  for (const Json& e : a) out.push_back(e.get<T>());
  return out;
}

}  // namespace detail

inline Json schedule_to_json(const Schedule& s) {
  Json j;
  j["case"] = s.case_label;
  j["spans"] = s.spans;
  if (std::isfinite(s.objective)) j["objective"] = s.objective;
  j["carriers"] = Json::array();
  for (const MerSchedule& c : s.carriers) {
    Json e;
    e["id"] = c.id;
    e["position"] = detail::strings_json(c.position);
    e["heading"] = detail::strings_json(c.heading);
    j["carriers"].push_back(e);
  }
  j["modules"] = Json::array();
  for (const ModuleSchedule& k : s.modules) {
    Json e;
    e["id"] = k.id;
    e["site"] = detail::strings_json(k.site);
    e["carrier"] = detail::strings_json(k.carrier);
    e["p_charge_kw"] = detail::doubles_json(k.p_charge_kw);
    e["p_discharge_kw"] = detail::doubles_json(k.p_discharge_kw);
    e["q_kvar"] = detail::doubles_json(k.q_kvar);
    e["soc"] = detail::doubles_json(k.soc);
    j["modules"].push_back(e);
  }
  j["generators"] = Json::array();
  for (const GeneratorSchedule& g : s.generators) {
    Json e;
    e["id"] = g.id;
    e["position"] = detail::strings_json(g.position);
    e["heading"] = detail::strings_json(g.heading);
    e["p_kw"] = detail::doubles_json(g.p_kw);
    e["q_kvar"] = detail::doubles_json(g.q_kvar);
    e["burn_l"] = detail::doubles_json(g.burn_l);
    e["refill_l"] = detail::doubles_json(g.refill_l);
    e["exchange"] = detail::ints_json(g.exchange);
    e["sof"] = detail::doubles_json(g.sof);
    j["generators"].push_back(e);
  }
  j["tankers"] = Json::array();
  for (const TankerSchedule& t : s.tankers) {
    Json e;
    e["id"] = t.id;
    e["position"] = detail::strings_json(t.position);
    e["heading"] = detail::strings_json(t.heading);
    e["transfer_l"] = detail::doubles_json(t.transfer_l);
    e["exchange"] = detail::ints_json(t.exchange);
    e["sof"] = detail::doubles_json(t.sof);
    j["tankers"].push_back(e);
  }
  j["sites"] = Json::array();
  for (const SiteSchedule& st : s.sites) {
    Json e;
    e["id"] = st.id;
    e["sof"] = detail::doubles_json(st.sof);
    j["sites"].push_back(e);
  }
  Json g;
  g["closed"] = Json::array();
  g["pickup"] = Json::array();
  g["energized"] = Json::array();
  g["v_squared"] = Json::array();
  g["branch_p_kw"] = Json::array();
  g["branch_q_kvar"] = Json::array();
  for (const auto& v : s.grid.closed) g["closed"].push_back(detail::ints_json(v));
  for (const auto& v : s.grid.pickup) g["pickup"].push_back(detail::ints_json(v));
  for (const auto& v : s.grid.energized) g["energized"].push_back(detail::ints_json(v));
  for (const auto& v : s.grid.v_squared) g["v_squared"].push_back(detail::doubles_json(v));
  for (const auto& v : s.grid.branch_p_kw)
    g["branch_p_kw"].push_back(detail::doubles_json(v));
  for (const auto& v : s.grid.branch_q_kvar)
    g["branch_q_kvar"].push_back(detail::doubles_json(v));
  j["grid"] = g;
  return j;
}

inline Schedule schedule_from_json(const Json& j) {
  Schedule s;
  s.case_label = j.value("case", "case5");
  s.spans = j.at("spans").get<int>();
  if (j.contains("objective")) s.objective = j["objective"].get<double>();
  for (const Json& e : j.value("carriers", Json::array())) {
    MerSchedule c;
    c.id = e.at("id").get<std::string>();
    c.position = detail::vec_from<std::string>(e.at("position"), "position");
    c.heading = detail::vec_from<std::string>(e.at("heading"), "heading");
    s.carriers.push_back(std::move(c));
  }
  for (const Json& e : j.value("modules", Json::array())) {
    ModuleSchedule k;
    k.id = e.at("id").get<std::string>();
    k.site = detail::vec_from<std::string>(e.at("site"), "site");
    k.carrier = detail::vec_from<std::string>(e.at("carrier"), "carrier");
    k.p_charge_kw = detail::vec_from<double>(e.at("p_charge_kw"), "p_charge_kw");
    k.p_discharge_kw =
        detail::vec_from<double>(e.at("p_discharge_kw"), "p_discharge_kw");
    k.q_kvar = detail::vec_from<double>(e.at("q_kvar"), "q_kvar");
    k.soc = detail::vec_from<double>(e.at("soc"), "soc");
    s.modules.push_back(std::move(k));
  }
  for (const Json& e : j.value("generators", Json::array())) {
    GeneratorSchedule g;
    g.id = e.at("id").get<std::string>();
    g.position = detail::vec_from<std::string>(e.at("position"), "position");
    g.heading = detail::vec_from<std::string>(e.at("heading"), "heading");
    g.p_kw = detail::vec_from<double>(e.at("p_kw"), "p_kw");
    g.q_kvar = detail::vec_from<double>(e.at("q_kvar"), "q_kvar");
    g.burn_l = detail::vec_from<double>(e.at("burn_l"), "burn_l");
    g.refill_l = detail::vec_from<double>(e.at("refill_l"), "refill_l");
    g.exchange = detail::vec_from<int>(e.at("exchange"), "exchange");
    g.sof = detail::vec_from<double>(e.at("sof"), "sof");
    s.generators.push_back(std::move(g));
  }
  for (const Json& e : j.value("tankers", Json::array())) {
    TankerSchedule t;
    t.id = e.at("id").get<std::string>();
    t.position = detail::vec_from<std::string>(e.at("position"), "position");
    t.heading = detail::vec_from<std::string>(e.at("heading"), "heading");
    t.transfer_l = detail::vec_from<double>(e.at("transfer_l"), "transfer_l");
    t.exchange = detail::vec_from<int>(e.at("exchange"), "exchange");
    t.sof = detail::vec_from<double>(e.at("sof"), "sof");
    s.tankers.push_back(std::move(t));
  }
  for (const Json& e : j.value("sites", Json::array())) {
    SiteSchedule st;
    st.id = e.at("id").get<std::string>();
    st.sof = detail::vec_from<double>(e.at("sof"), "sof");
    s.sites.push_back(std::move(st));
  }
  const Json& g = j.at("grid");
  for (const Json& v : g.at("closed")) s.grid.closed.push_back(detail::vec_from<int>(v, "closed"));
  for (const Json& v : g.at("pickup")) s.grid.pickup.push_back(detail::vec_from<int>(v, "pickup"));
  for (const Json& v : g.at("energized"))
    s.grid.energized.push_back(detail::vec_from<int>(v, "energized"));
  for (const Json& v : g.at("v_squared"))
    s.grid.v_squared.push_back(detail::vec_from<double>(v, "v_squared"));
  for (const Json& v : g.at("branch_p_kw"))
    s.grid.branch_p_kw.push_back(detail::vec_from<double>(v, "branch_p_kw"));
  for (const Json& v : g.at("branch_q_kvar"))
    s.grid.branch_q_kvar.push_back(detail::vec_from<double>(v, "branch_q_kvar"));
  return s;
}

inline std::string serialize_schedule(const Schedule& s) {
  return schedule_to_json(s).dump(1) + "\n";
}

inline Schedule parse_schedule_text(const std::string& text) {
  return schedule_from_json(Json::parse(text));
}

}  // namespace mersched
