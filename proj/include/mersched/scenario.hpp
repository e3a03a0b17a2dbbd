#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mersched {

using Json = nlohmann::ordered_json;

// Thrown for any problem with a scenario document. `kind` is one of
// "io", "schema", "reference", "invariant"; `path` points into the document.
struct ScenarioError : std::runtime_error {
  std::string kind;
  std::string path;
  ScenarioError(std::string k, std::string p, const std::string& msg)
      : std::runtime_error(k + " error at " + p + ": " + msg),
        kind(std::move(k)),
        path(std::move(p)) {}
};

namespace detail {
inline void require(bool ok, const char* kind, const std::string& path,
                    const std::string& msg) {
  if (!ok) throw ScenarioError(kind, path, msg);
}

// Ids end up as LP row/column name fragments, so they are restricted to a
// grammar every LP reader accepts: leading letter, then [A-Za-z0-9_.].
inline bool valid_id(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.';
  });
}
}  // namespace detail

struct TimeGrid {
  int spans = 0;          // number of operating spans, indexed 1..spans
  double span_hours = 0;  // duration of one span in hours
  double horizon_hours() const { return spans * span_hours; }
};

struct Node {
  std::string id;
  std::vector<double> p_load_kw;   // one entry per span
  std::vector<double> q_load_kvar; // one entry per span
  double weight = 1.0;
  bool has_load() const {
    auto pos = [](double v) { return v > 0; };
    return std::any_of(p_load_kw.begin(), p_load_kw.end(), pos) ||
           std::any_of(q_load_kvar.begin(), q_load_kvar.end(), pos);
  }
};

struct Branch {
  std::string from;
  std::string to;
  double r_pu = 0;
  double x_pu = 0;
  double capacity_kva = 0;
};

struct NetworkSpec {
  double base_power_kw = 0;
  double base_voltage_kv = 0;
  std::string substation;
  double v_min_pu = 0;
  double v_max_pu = 0;
  std::vector<Node> nodes;
  std::vector<Branch> branches;
};

struct FuelSite {
  std::string id;  // generator node id, or depot id
  double capacity_l = 0;
  double initial_sof = 0;
};

struct AccessSpec {
  std::vector<std::string> storage_nodes;    // nodes carriers/modules may use
  std::vector<FuelSite> generator_sites;     // nodes generators may park at
  std::vector<FuelSite> depots;              // off-network fuel depots
};

struct FaultStage {
  int first_span = 1;
  int last_span = 1;
  std::vector<std::string> open_nodes;                      // load switch stuck open
  std::vector<std::string> closed_nodes;                    // load switch stuck closed
  std::vector<std::pair<std::string, std::string>> open_branches;
  std::vector<std::pair<std::string, std::string>> closed_branches;
};

struct FaultSets {
  std::vector<int> open_nodes;     // node indices
  std::vector<int> closed_nodes;   // node indices
  std::vector<int> open_branches;  // branch indices
  std::vector<int> closed_branches;
  std::size_t total() const {
    return open_nodes.size() + closed_nodes.size() + open_branches.size() +
           closed_branches.size();
  }
};

struct Carrier {
  std::string id;
  double capacity = 0;  // total module weight it can carry
  std::string start;    // storage node
};

struct Module {
  std::string id;
  double weight = 1.0;
  double p_charge_max_kw = 0;
  double p_discharge_max_kw = 0;
  double s_rated_kva = 0;
  double energy_kwh = 0;
  double eff_charge = 1.0;
  double eff_discharge = 1.0;
  double soc_initial = 0;
  double soc_min = 0;
  double soc_max = 1;
  std::string start;  // storage node
};

struct FuelPoint {
  double load_kw = 0;
  double rate_l_per_h = 0;
};

struct Generator {
  std::string id;
  double p_max_kw = 0;
  double q_max_kvar = 0;
  double s_rated_kva = 0;
  double tank_l = 0;
  double initial_sof = 0;
  double burn_max_l = 0;              // per span; derived from curve when absent
  std::vector<FuelPoint> fuel_curve;  // published points, load strictly increasing
  std::string start;                  // generator node or depot
};

struct Tanker {
  std::string id;
  double tank_l = 0;
  double initial_sof = 0;
  double rate_in_l_per_h = 0;   // max intake; defaults to tank/span
  double rate_out_l_per_h = 0;  // max release; defaults to tank/span
  std::string start;            // generator node or depot
};

struct FleetSpec {
  std::vector<Carrier> carriers;
  std::vector<Module> modules;
  std::vector<Generator> generators;
  std::vector<Tanker> tankers;
};

// Travel durations in whole spans, keyed by fleet class then ordered site pair.
// Class "storage" covers carriers; class "fuel" covers generators and tankers.
struct TravelTimes {
  std::map<std::tuple<std::string, std::string, std::string>, int> class_spans;
  std::map<std::tuple<std::string, std::string, std::string>, int> mer_spans;

  int spans_for(const std::string& mer, const std::string& cls,
                const std::string& from, const std::string& to) const {
    if (from == to) return 0;
    if (auto it = mer_spans.find({mer, from, to}); it != mer_spans.end())
      return it->second;
    auto it = class_spans.find({cls, from, to});
    detail::require(it != class_spans.end(), "invariant", "/travel",
                    "no travel time for (" + from + ", " + to + ") in class " + cls);
    return it->second;
  }
};

enum class CaseId { none_resources = 1, stationary = 2, bundled = 3, no_tanker = 4, joint = 5 };

inline std::string to_string(CaseId c) {
  switch (c) {
    case CaseId::none_resources: return "case1";
    case CaseId::stationary: return "case2";
    case CaseId::bundled: return "case3";
    case CaseId::no_tanker: return "case4";
    case CaseId::joint: return "case5";
  }
  return "case5";
}

inline CaseId case_from_string(const std::string& s) {
  if (s == "case1") return CaseId::none_resources;
  if (s == "case2") return CaseId::stationary;
  if (s == "case3") return CaseId::bundled;
  if (s == "case4") return CaseId::no_tanker;
  if (s == "case5") return CaseId::joint;
  throw ScenarioError("schema", "/study/case", "unknown case id: " + s);
}

enum class BigMPolicy { tight, uniform };

struct Bundle {
  std::string carrier;
  std::vector<std::string> modules;
};

struct StudyConfig {
  double phi_travel = 0.1;
  double phi_fuel = 0.1;
  CaseId variant = CaseId::joint;
  double gap = 1e-3;
  double time_limit_s = 0;  // 0 means no limit
  int disk_segments = 8;
  bool strict_pickup = false;        // adds pickup <= energized rows when true
  bool substation_energized = true;  // root keeps bulk-grid supply
  BigMPolicy bigm = BigMPolicy::tight;
  double uniform_bigm = 1e4;
  std::string case2_module_node;     // defaults to first module's start
  std::string case2_generator_node;  // defaults to first generator's start
  std::vector<Bundle> case3_bundles; // defaults to grouping by start carrier
};

struct Scenario {
  int version = 1;
  TimeGrid time;
  NetworkSpec network;
  AccessSpec access;
  std::vector<FaultStage> faults;
  FleetSpec fleet;
  TravelTimes travel;
  StudyConfig study;

  // ---- derived lookups, filled by finalize() ----
  std::map<std::string, int> node_index;
  std::map<std::pair<std::string, std::string>, int> branch_index;  // both orders
  int substation = -1;
  std::vector<char> is_storage_node;    // per node
  std::vector<char> is_generator_node;  // per node

  const Node& node(int i) const { return network.nodes[i]; }
  int nodes_count() const { return static_cast<int>(network.nodes.size()); }
  int branches_count() const { return static_cast<int>(network.branches.size()); }

  int node_of(const std::string& id, const std::string& path) const {
    auto it = node_index.find(id);
    detail::require(it != node_index.end(), "reference", path, "unknown node id: " + id);
    return it->second;
  }
  int branch_of(const std::string& a, const std::string& b, const std::string& path) const {
    auto it = branch_index.find({a, b});
    detail::require(it != branch_index.end(), "reference", path,
                    "unknown branch (" + a + ", " + b + ")");
    return it->second;
  }

  double to_pu_power(double kw) const { return kw / network.base_power_kw; }

  // Fleet site lists, in document order.
  std::vector<std::string> storage_sites() const { return access.storage_nodes; }
  std::vector<std::string> fuel_sites() const {
    std::vector<std::string> out;
    for (const auto& g : access.generator_sites) out.push_back(g.id);
    for (const auto& d : access.depots) out.push_back(d.id);
    return out;
  }
  bool is_depot(const std::string& id) const {
    return std::any_of(access.depots.begin(), access.depots.end(),
                       [&](const FuelSite& d) { return d.id == id; });
  }

  // Source-access coefficients: a1 = storage fleet may connect, a2 = generator
  // fleet may connect. Both zero for plain nodes, both one for shared nodes.
  std::pair<int, int> access_coefficients(int node) const {
    return {is_storage_node[node] ? 1 : 0, is_generator_node[node] ? 1 : 0};
  }

  FaultSets fault_sets_at(int span) const {
    FaultSets out;
    for (const auto& st : faults) {
      if (span < st.first_span || span > st.last_span) continue;
      for (const auto& n : st.open_nodes) out.open_nodes.push_back(node_index.at(n));
      for (const auto& n : st.closed_nodes) out.closed_nodes.push_back(node_index.at(n));
      for (const auto& b : st.open_branches)
        out.open_branches.push_back(branch_index.at({b.first, b.second}));
      for (const auto& b : st.closed_branches)
        out.closed_branches.push_back(branch_index.at({b.first, b.second}));
    }
    return out;
  }

  void finalize();
};

namespace detail {

inline std::string idx_path(const std::string& base, std::size_t i,
                            const std::string& key = "") {
  std::string p = base + "/" + std::to_string(i);
  if (!key.empty()) p += "/" + key;
  return p;
}

inline double get_num(const Json& j, const std::string& key, const std::string& path,
                      std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    require(fallback.has_value(), "schema", path + "/" + key, "missing required number");
    return *fallback;
  }
  require(j.at(key).is_number(), "schema", path + "/" + key, "expected a number");
  return j.at(key).get<double>();
}

inline int get_int(const Json& j, const std::string& key, const std::string& path,
                   std::optional<int> fallback = std::nullopt) {
  if (!j.contains(key)) {
    require(fallback.has_value(), "schema", path + "/" + key, "missing required integer");
    return *fallback;
  }
  require(j.at(key).is_number_integer(), "schema", path + "/" + key,
          "expected an integer");
  return j.at(key).get<int>();
}

inline bool get_bool(const Json& j, const std::string& key, const std::string& path,
                     bool fallback) {
  if (!j.contains(key)) return fallback;
  require(j.at(key).is_boolean(), "schema", path + "/" + key, "expected a boolean");
  return j.at(key).get<bool>();
}

inline std::string get_str(const Json& j, const std::string& key, const std::string& path,
                           std::optional<std::string> fallback = std::nullopt) {
  if (!j.contains(key)) {
    require(fallback.has_value(), "schema", path + "/" + key, "missing required string");
    return *fallback;
  }
  require(j.at(key).is_string(), "schema", path + "/" + key, "expected a string");
  return j.at(key).get<std::string>();
}

inline std::string get_id(const Json& j, const std::string& key, const std::string& path) {
  std::string s = get_str(j, key, path);
  require(valid_id(s), "schema", path + "/" + key,
          "id must match [A-Za-z][A-Za-z0-9_.]*: " + s);
  return s;
}

// A per-span series given either as a scalar (held constant) or an array of
// exactly `spans` numbers.
inline std::vector<double> get_series(const Json& j, const std::string& key,
                                      const std::string& path, int spans,
                                      double fallback) {
  std::vector<double> out;
  if (!j.contains(key)) {
    out.assign(spans, fallback);
    return out;
  }
  const Json& v = j.at(key);
  if (v.is_number()) {
    out.assign(spans, v.get<double>());
    return out;
  }
  require(v.is_array() && static_cast<int>(v.size()) == spans, "schema",
          path + "/" + key, "expected a number or an array with one entry per span");
  for (const auto& e : v) {
    require(e.is_number(), "schema", path + "/" + key, "expected numeric entries");
    out.push_back(e.get<double>());
  }
  return out;
}

inline std::pair<std::string, std::string> get_branch_ref(const Json& v,
                                                          const std::string& path) {
  require(v.is_array() && v.size() == 2 && v[0].is_string() && v[1].is_string(),
          "schema", path, "expected a [from, to] pair of node ids");
  return {v[0].get<std::string>(), v[1].get<std::string>()};
}

}  // namespace detail

inline void Scenario::finalize() {
  using detail::require;
  node_index.clear();
  branch_index.clear();

  require(time.spans >= 1, "invariant", "/time/span_count", "need at least one span");
  require(time.span_hours > 0, "invariant", "/time/span_length_h", "must be positive");
  require(network.base_power_kw > 0, "invariant", "/network/base_power_kw",
          "must be positive");
  require(network.base_voltage_kv > 0, "invariant", "/network/base_voltage_kv",
          "must be positive");
  require(network.v_min_pu > 0 && network.v_min_pu < network.v_max_pu, "invariant",
          "/network/v_min_pu", "need 0 < v_min < v_max");
  require(network.v_min_pu <= 1.0 && network.v_max_pu >= 1.0, "invariant",
          "/network/v_min_pu", "voltage window must contain 1.0");

  for (std::size_t i = 0; i < network.nodes.size(); ++i) {
    const Node& n = network.nodes[i];
    require(!node_index.count(n.id), "invariant", detail::idx_path("/network/nodes", i),
            "duplicate node id: " + n.id);
    node_index[n.id] = static_cast<int>(i);
    require(n.weight >= 0, "invariant", detail::idx_path("/network/nodes", i, "weight"),
            "must be nonnegative");
    for (double v : n.p_load_kw)
      require(v >= 0, "invariant", detail::idx_path("/network/nodes", i, "p_load_kw"),
              "loads must be nonnegative");
    for (double v : n.q_load_kvar)
      require(v >= 0, "invariant", detail::idx_path("/network/nodes", i, "q_load_kvar"),
              "loads must be nonnegative");
  }
  require(node_index.count(network.substation), "reference", "/network/substation",
          "unknown node id: " + network.substation);
  substation = node_index[network.substation];

  for (std::size_t i = 0; i < network.branches.size(); ++i) {
    const Branch& b = network.branches[i];
    const std::string path = detail::idx_path("/network/branches", i);
    require(node_index.count(b.from), "reference", path + "/from",
            "unknown node id: " + b.from);
    require(node_index.count(b.to), "reference", path + "/to",
            "unknown node id: " + b.to);
    require(b.from != b.to, "invariant", path, "self-loop branch");
    require(b.r_pu >= 0 && b.x_pu >= 0, "invariant", path, "negative impedance");
    require(b.capacity_kva > 0, "invariant", path + "/capacity_kva", "must be positive");
    require(!branch_index.count({b.from, b.to}), "invariant", path,
            "duplicate branch (" + b.from + ", " + b.to + ")");
    branch_index[{b.from, b.to}] = static_cast<int>(i);
    branch_index[{b.to, b.from}] = static_cast<int>(i);
  }

  // Connectivity over the full switchable graph.
  if (!network.nodes.empty()) {
    std::vector<char> seen(network.nodes.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const Branch& b : network.branches) {
        int f = node_index[b.from], t = node_index[b.to];
        int other = (f == u) ? t : (t == u ? f : -1);
        if (other >= 0 && !seen[other]) {
          seen[other] = 1;
          stack.push_back(other);
        }
      }
    }
    require(std::all_of(seen.begin(), seen.end(), [](char c) { return c; }), "invariant",
            "/network/branches", "network graph is not connected");
  }

  is_storage_node.assign(network.nodes.size(), 0);
  is_generator_node.assign(network.nodes.size(), 0);
  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < access.storage_nodes.size(); ++i) {
      const auto& id = access.storage_nodes[i];
      const std::string path = detail::idx_path("/access/storage_nodes", i);
      require(node_index.count(id), "reference", path, "unknown node id: " + id);
      require(seen.insert(id).second, "invariant", path, "duplicate entry: " + id);
      is_storage_node[node_index[id]] = 1;
    }
  }
  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < access.generator_sites.size(); ++i) {
      const auto& g = access.generator_sites[i];
      const std::string path = detail::idx_path("/access/generator_nodes", i);
      require(node_index.count(g.id), "reference", path, "unknown node id: " + g.id);
      require(seen.insert(g.id).second, "invariant", path, "duplicate entry: " + g.id);
      require(g.capacity_l > 0, "invariant", path + "/fuel_capacity_l", "must be positive");
      require(g.initial_sof >= 0 && g.initial_sof <= 1, "invariant",
              path + "/initial_sof", "must lie in [0, 1]");
      is_generator_node[node_index[g.id]] = 1;
    }
    for (std::size_t i = 0; i < access.depots.size(); ++i) {
      const auto& d = access.depots[i];
      const std::string path = detail::idx_path("/access/depots", i);
      require(detail::valid_id(d.id), "schema", path + "/id", "bad id: " + d.id);
      require(!node_index.count(d.id), "invariant", path,
              "depot id collides with a node id: " + d.id);
      require(seen.insert(d.id).second, "invariant", path, "duplicate entry: " + d.id);
      require(d.capacity_l > 0, "invariant", path + "/fuel_capacity_l", "must be positive");
      require(d.initial_sof >= 0 && d.initial_sof <= 1, "invariant",
              path + "/initial_sof", "must lie in [0, 1]");
    }
  }

  // Fault stages: references, span ranges, per-span disjointness, shrinkage.
  for (std::size_t i = 0; i < faults.size(); ++i) {
    const FaultStage& st = faults[i];
    const std::string path = detail::idx_path("/faults", i);
    require(st.first_span >= 1 && st.last_span <= time.spans &&
                st.first_span <= st.last_span,
            "invariant", path, "span range outside the horizon");
    for (const auto& n : st.open_nodes)
      require(node_index.count(n), "reference", path + "/open_nodes",
              "unknown node id: " + n);
    for (const auto& n : st.closed_nodes)
      require(node_index.count(n), "reference", path + "/closed_nodes",
              "unknown node id: " + n);
    for (const auto& b : st.open_branches)
      require(branch_index.count({b.first, b.second}), "reference",
              path + "/open_branches", "unknown branch (" + b.first + ", " + b.second + ")");
    for (const auto& b : st.closed_branches)
      require(branch_index.count({b.first, b.second}), "reference",
              path + "/closed_branches",
              "unknown branch (" + b.first + ", " + b.second + ")");
  }
  {
    auto as_sets = [&](int t) {
      FaultSets fs = fault_sets_at(t);
      auto mk = [](std::vector<int> v) { return std::set<int>(v.begin(), v.end()); };
      return std::tuple{mk(fs.open_nodes), mk(fs.closed_nodes), mk(fs.open_branches),
                        mk(fs.closed_branches)};
    };
    auto subset = [](const std::set<int>& a, const std::set<int>& b) {
      return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    for (int t = 1; t <= time.spans; ++t) {
      auto [no, nc, lo, lc] = as_sets(t);
      for (int n : no)
        require(!nc.count(n), "invariant", "/faults",
                "node " + network.nodes[n].id + " both open- and closed-faulted in span " +
                    std::to_string(t));
      for (int b : lo)
        require(!lc.count(b), "invariant", "/faults",
                "branch both open- and closed-faulted in span " + std::to_string(t));
      if (t > 1) {
        auto [pno, pnc, plo, plc] = as_sets(t - 1);
        require(subset(no, pno) && subset(nc, pnc) && subset(lo, plo) && subset(lc, plc),
                "invariant", "/faults",
                "fault sets must shrink over time (span " + std::to_string(t) + ")");
      }
      // Faulted-closed branches must stay acyclic: they are pinned into the
      // fictitious spanning tree.
      std::map<int, int> comp;
      auto find = [&](auto&& self, int x) -> int {
        auto it = comp.find(x);
        if (it == comp.end() || it->second == x) return comp[x] = x;
        return comp[x] = self(self, it->second);
      };
      for (int bi : lc) {
        const Branch& b = network.branches[bi];
        int a = find(find, node_index[b.from]);
        int c = find(find, node_index[b.to]);
        require(a != c, "invariant", "/faults",
                "faulted-closed branches form a cycle in span " + std::to_string(t));
        comp[a] = c;
      }
    }
  }

  // Fleet checks.
  std::set<std::string> fleet_ids;
  auto unique_id = [&](const std::string& id, const std::string& path) {
    require(detail::valid_id(id), "schema", path, "bad id: " + id);
    require(fleet_ids.insert(id).second, "invariant", path, "duplicate fleet id: " + id);
    require(!node_index.count(id) && !is_depot(id), "invariant", path,
            "fleet id collides with a site id: " + id);
  };
  auto in_storage = [&](const std::string& id) {
    return std::find(access.storage_nodes.begin(), access.storage_nodes.end(), id) !=
           access.storage_nodes.end();
  };
  auto in_fuel_sites = [&](const std::string& id) {
    auto fs = fuel_sites();
    return std::find(fs.begin(), fs.end(), id) != fs.end();
  };

  double max_capacity = 0;
  for (std::size_t i = 0; i < fleet.carriers.size(); ++i) {
    const Carrier& c = fleet.carriers[i];
    const std::string path = detail::idx_path("/fleet/carriers", i);
    unique_id(c.id, path + "/id");
    require(c.capacity > 0, "invariant", path + "/capacity", "must be positive");
    require(in_storage(c.start), "reference", path + "/start",
            "carrier must start at a storage node: " + c.start);
    max_capacity = std::max(max_capacity, c.capacity);
  }
  for (std::size_t i = 0; i < fleet.modules.size(); ++i) {
    const Module& m = fleet.modules[i];
    const std::string path = detail::idx_path("/fleet/modules", i);
    unique_id(m.id, path + "/id");
    require(m.weight > 0, "invariant", path + "/weight", "must be positive");
    require(m.p_charge_max_kw >= 0 && m.p_discharge_max_kw >= 0, "invariant", path,
            "power limits must be nonnegative");
    require(m.s_rated_kva > 0, "invariant", path + "/s_rated_kva", "must be positive");
    require(m.energy_kwh > 0, "invariant", path + "/energy_kwh", "must be positive");
    require(m.eff_charge > 0 && m.eff_charge <= 1, "invariant", path + "/eff_charge",
            "must lie in (0, 1]");
    require(m.eff_discharge > 0 && m.eff_discharge <= 1, "invariant",
            path + "/eff_discharge", "must lie in (0, 1]");
    require(0 <= m.soc_min && m.soc_min <= m.soc_initial &&
                m.soc_initial <= m.soc_max && m.soc_max <= 1,
            "invariant", path, "need 0 <= soc_min <= soc_initial <= soc_max <= 1");
    require(in_storage(m.start), "reference", path + "/start",
            "module must start at a storage node: " + m.start);
    if (!fleet.carriers.empty())
      require(m.weight <= max_capacity, "invariant", path + "/weight",
              "no carrier can lift this module");
  }
  for (std::size_t i = 0; i < fleet.generators.size(); ++i) {
    const Generator& g = fleet.generators[i];
    const std::string path = detail::idx_path("/fleet/generators", i);
    unique_id(g.id, path + "/id");
    require(g.p_max_kw > 0, "invariant", path + "/p_max_kw", "must be positive");
    require(g.q_max_kvar >= 0, "invariant", path + "/q_max_kvar", "must be nonnegative");
    require(g.s_rated_kva > 0, "invariant", path + "/s_rated_kva", "must be positive");
    require(g.tank_l > 0, "invariant", path + "/fuel_capacity_l", "must be positive");
    require(g.initial_sof >= 0 && g.initial_sof <= 1, "invariant", path + "/initial_sof",
            "must lie in [0, 1]");
    require(!g.fuel_curve.empty(), "schema", path + "/fuel_rate_points",
            "at least one published point required");
    double prev = 0;
    for (std::size_t p = 0; p < g.fuel_curve.size(); ++p) {
      const auto& fp = g.fuel_curve[p];
      require(fp.load_kw > prev, "invariant", path + "/fuel_rate_points",
              "loads must be strictly increasing and positive");
      require(fp.rate_l_per_h > 0, "invariant", path + "/fuel_rate_points",
              "rates must be positive");
      prev = fp.load_kw;
    }
    require(g.fuel_curve.back().load_kw >= g.p_max_kw, "invariant",
            path + "/fuel_rate_points", "curve must cover the full power range");
    require(in_fuel_sites(g.start), "reference", path + "/start",
            "generator must start at a generator node or depot: " + g.start);
  }
  for (std::size_t i = 0; i < fleet.tankers.size(); ++i) {
    const Tanker& t = fleet.tankers[i];
    const std::string path = detail::idx_path("/fleet/tankers", i);
    unique_id(t.id, path + "/id");
    require(t.tank_l > 0, "invariant", path + "/fuel_capacity_l", "must be positive");
    require(t.initial_sof >= 0 && t.initial_sof <= 1, "invariant", path + "/initial_sof",
            "must lie in [0, 1]");
    require(t.rate_in_l_per_h > 0 && t.rate_out_l_per_h > 0, "invariant", path,
            "exchange rates must be positive");
    require(in_fuel_sites(t.start), "reference", path + "/start",
            "tanker must start at a generator node or depot: " + t.start);
  }

  // Travel tables must cover every ordered pair a fleet class can use.
  auto check_cover = [&](const std::string& cls, const std::vector<std::string>& sites,
                         bool any_mer) {
    if (!any_mer) return;
    for (const auto& a : sites)
      for (const auto& b : sites) {
        if (a == b) continue;
        auto it = travel.class_spans.find({cls, a, b});
        require(it != travel.class_spans.end(), "invariant", "/travel",
                "missing " + cls + " travel time (" + a + ", " + b + ")");
        require(it->second >= 1, "invariant", "/travel",
                "travel times must be at least one span: (" + a + ", " + b + ")");
      }
  };
  check_cover("storage", storage_sites(), !fleet.carriers.empty());
  check_cover("fuel", fuel_sites(),
              !fleet.generators.empty() || !fleet.tankers.empty());

  require(study.phi_travel >= 0 && study.phi_fuel >= 0, "invariant", "/study",
          "penalty factors must be nonnegative");
  require(study.gap >= 0, "invariant", "/study/gap", "must be nonnegative");
  require(study.disk_segments >= 3, "invariant", "/study/disk_segments",
          "need at least three polygon segments");

  // Case parameter defaults and references.
  if (study.case2_module_node.empty() && !fleet.modules.empty())
    study.case2_module_node = fleet.modules.front().start;
  if (study.case2_generator_node.empty() && !fleet.generators.empty())
    study.case2_generator_node = fleet.generators.front().start;
  if (!study.case2_module_node.empty())
    require(in_storage(study.case2_module_node), "reference", "/study/cases/case2",
            "not a storage node: " + study.case2_module_node);
  if (!study.case2_generator_node.empty())
    require(in_fuel_sites(study.case2_generator_node), "reference", "/study/cases/case2",
            "not a generator site: " + study.case2_generator_node);
  if (study.case3_bundles.empty()) {
    // Group modules onto the carrier sharing their start node, round-robin.
    for (const Carrier& c : fleet.carriers) {
      Bundle b;
      b.carrier = c.id;
      study.case3_bundles.push_back(b);
    }
    std::map<std::string, std::size_t> fill;
    for (const Module& m : fleet.modules) {
      Bundle* best = nullptr;
      double best_room = -1;
      for (std::size_t ci = 0; ci < study.case3_bundles.size(); ++ci) {
        const Carrier& c = fleet.carriers[ci];
        if (c.start != m.start) continue;
        double used = 0;
        for (const auto& id : study.case3_bundles[ci].modules)
          for (const Module& mm : fleet.modules)
            if (mm.id == id) used += mm.weight;
        double room = c.capacity - used;
        if (room >= m.weight && room > best_room) {
          best_room = room;
          best = &study.case3_bundles[ci];
        }
      }
      if (best) best->modules.push_back(m.id);
    }
    std::erase_if(study.case3_bundles, [](const Bundle& b) { return b.modules.empty(); });
  }
  {
    std::set<std::string> bundled;
    std::set<std::string> bundle_carriers;
    for (std::size_t i = 0; i < study.case3_bundles.size(); ++i) {
      const Bundle& b = study.case3_bundles[i];
      const std::string path = detail::idx_path("/study/cases/case3_bundles", i);
      const Carrier* carr = nullptr;
      for (const Carrier& c : fleet.carriers)
        if (c.id == b.carrier) carr = &c;
      require(carr != nullptr, "reference", path, "unknown carrier: " + b.carrier);
      require(bundle_carriers.insert(b.carrier).second, "invariant", path,
              "carrier appears in two bundles: " + b.carrier);
      double load = 0;
      for (const auto& mid : b.modules) {
        const Module* mod = nullptr;
        for (const Module& m : fleet.modules)
          if (m.id == mid) mod = &m;
        require(mod != nullptr, "reference", path, "unknown module: " + mid);
        require(bundled.insert(mid).second, "invariant", path,
                "module bundled twice: " + mid);
        require(mod->start == carr->start, "invariant", path,
                "bundled module must start at its carrier's node: " + mid);
        load += mod->weight;
      }
      require(load <= carr->capacity, "invariant", path,
              "bundle exceeds carrier capacity: " + b.carrier);
    }
  }
}

// ---------------------------------------------------------------------------
// JSON input
// ---------------------------------------------------------------------------

inline Scenario parse_scenario(const Json& doc) {
  using detail::get_bool;
  using detail::get_id;
  using detail::get_int;
  using detail::get_num;
  using detail::get_series;
  using detail::get_str;
  using detail::require;

  require(doc.is_object(), "schema", "/", "scenario document must be an object");
  for (const char* key : {"time", "network", "access", "fleet", "travel"})
    require(doc.contains(key), "schema", std::string("/") + key, "missing section");

  Scenario sc;
  sc.version = get_int(doc, "version", "", 1);

  const Json& jt = doc.at("time");
  sc.time.spans = get_int(jt, "span_count", "/time");
  sc.time.span_hours = get_num(jt, "span_length_h", "/time");
  const int D = sc.time.spans;

  const Json& jn = doc.at("network");
  sc.network.base_power_kw = get_num(jn, "base_power_kw", "/network");
  sc.network.base_voltage_kv = get_num(jn, "base_voltage_kv", "/network");
  sc.network.substation = get_str(jn, "substation", "/network");
  sc.network.v_min_pu = get_num(jn, "v_min_pu", "/network", 0.95);
  sc.network.v_max_pu = get_num(jn, "v_max_pu", "/network", 1.05);
  require(jn.contains("nodes") && jn.at("nodes").is_array(), "schema", "/network/nodes",
          "expected an array");
  const double z_base_ohm = sc.network.base_voltage_kv * sc.network.base_voltage_kv *
                            1000.0 / sc.network.base_power_kw;
  for (std::size_t i = 0; i < jn.at("nodes").size(); ++i) {
    const Json& e = jn.at("nodes")[i];
    const std::string path = detail::idx_path("/network/nodes", i);
    Node n;
    n.id = get_id(e, "id", path);
    n.p_load_kw = get_series(e, "p_load_kw", path, D, 0.0);
    n.q_load_kvar = get_series(e, "q_load_kvar", path, D, 0.0);
    n.weight = get_num(e, "weight", path, 1.0);
    sc.network.nodes.push_back(std::move(n));
  }
  require(jn.contains("branches") && jn.at("branches").is_array(), "schema",
          "/network/branches", "expected an array");
  for (std::size_t i = 0; i < jn.at("branches").size(); ++i) {
    const Json& e = jn.at("branches")[i];
    const std::string path = detail::idx_path("/network/branches", i);
    Branch b;
    b.from = get_str(e, "from", path);
    b.to = get_str(e, "to", path);
    const bool has_pu = e.contains("r_pu") || e.contains("x_pu");
    const bool has_ohm = e.contains("r_ohm") || e.contains("x_ohm");
    require(has_pu != has_ohm, "schema", path,
            "give impedance as r_pu/x_pu or r_ohm/x_ohm, not both");
    if (has_pu) {
      b.r_pu = get_num(e, "r_pu", path);
      b.x_pu = get_num(e, "x_pu", path);
    } else {
      b.r_pu = get_num(e, "r_ohm", path) / z_base_ohm;
      b.x_pu = get_num(e, "x_ohm", path) / z_base_ohm;
    }
    b.capacity_kva = get_num(e, "capacity_kva", path);
    sc.network.branches.push_back(std::move(b));
  }

  const Json& ja = doc.at("access");
  if (ja.contains("storage_nodes")) {
    require(ja.at("storage_nodes").is_array(), "schema", "/access/storage_nodes",
            "expected an array");
    for (const auto& e : ja.at("storage_nodes")) {
      require(e.is_string(), "schema", "/access/storage_nodes", "expected string ids");
      sc.access.storage_nodes.push_back(e.get<std::string>());
    }
  }
  auto parse_sites = [&](const char* key, std::vector<FuelSite>& out) {
    if (!ja.contains(key)) return;
    require(ja.at(key).is_array(), "schema", std::string("/access/") + key,
            "expected an array");
    for (std::size_t i = 0; i < ja.at(key).size(); ++i) {
      const Json& e = ja.at(key)[i];
      const std::string path = detail::idx_path(std::string("/access/") + key, i);
      FuelSite s;
      s.id = get_str(e, "id", path);
      s.capacity_l = get_num(e, "fuel_capacity_l", path);
      s.initial_sof = get_num(e, "initial_sof", path, 0.0);
      out.push_back(std::move(s));
    }
  };
  parse_sites("generator_nodes", sc.access.generator_sites);
  parse_sites("depots", sc.access.depots);

  if (doc.contains("faults")) {
    require(doc.at("faults").is_array(), "schema", "/faults", "expected an array");
    for (std::size_t i = 0; i < doc.at("faults").size(); ++i) {
      const Json& e = doc.at("faults")[i];
      const std::string path = detail::idx_path("/faults", i);
      FaultStage st;
      require(e.contains("spans") && e.at("spans").is_array() && e.at("spans").size() == 2,
              "schema", path + "/spans", "expected [first, last]");
      st.first_span = e.at("spans")[0].get<int>();
      st.last_span = e.at("spans")[1].get<int>();
      auto ids = [&](const char* key, std::vector<std::string>& out) {
        if (!e.contains(key)) return;
        require(e.at(key).is_array(), "schema", path + "/" + key, "expected an array");
        for (const auto& v : e.at(key)) {
          require(v.is_string(), "schema", path + "/" + key, "expected string ids");
          out.push_back(v.get<std::string>());
        }
      };
      ids("open_nodes", st.open_nodes);
      ids("closed_nodes", st.closed_nodes);
      auto pairs = [&](const char* key, std::vector<std::pair<std::string, std::string>>& out) {
        if (!e.contains(key)) return;
        require(e.at(key).is_array(), "schema", path + "/" + key, "expected an array");
        for (std::size_t p = 0; p < e.at(key).size(); ++p)
          out.push_back(detail::get_branch_ref(e.at(key)[p],
                                               detail::idx_path(path + "/" + key, p)));
      };
      pairs("open_branches", st.open_branches);
      pairs("closed_branches", st.closed_branches);
      sc.faults.push_back(std::move(st));
    }
  }

  const Json& jf = doc.at("fleet");
  if (jf.contains("carriers")) {
    for (std::size_t i = 0; i < jf.at("carriers").size(); ++i) {
      const Json& e = jf.at("carriers")[i];
      const std::string path = detail::idx_path("/fleet/carriers", i);
      Carrier c;
      c.id = get_id(e, "id", path);
      c.capacity = get_num(e, "capacity", path, 2.0);
      c.start = get_str(e, "start", path);
      sc.fleet.carriers.push_back(std::move(c));
    }
  }
  if (jf.contains("modules")) {
    for (std::size_t i = 0; i < jf.at("modules").size(); ++i) {
      const Json& e = jf.at("modules")[i];
      const std::string path = detail::idx_path("/fleet/modules", i);
      Module m;
      m.id = get_id(e, "id", path);
      m.weight = get_num(e, "weight", path, 1.0);
      m.p_charge_max_kw = get_num(e, "p_charge_max_kw", path);
      m.p_discharge_max_kw = get_num(e, "p_discharge_max_kw", path);
      m.s_rated_kva = get_num(e, "s_rated_kva", path);
      m.energy_kwh = get_num(e, "energy_kwh", path);
      m.eff_charge = get_num(e, "eff_charge", path, 1.0);
      m.eff_discharge = get_num(e, "eff_discharge", path, 1.0);
      m.soc_initial = get_num(e, "soc_initial", path);
      m.soc_min = get_num(e, "soc_min", path, 0.0);
      m.soc_max = get_num(e, "soc_max", path, 1.0);
      m.start = get_str(e, "start", path);
      sc.fleet.modules.push_back(std::move(m));
    }
  }
  if (jf.contains("generators")) {
    for (std::size_t i = 0; i < jf.at("generators").size(); ++i) {
      const Json& e = jf.at("generators")[i];
      const std::string path = detail::idx_path("/fleet/generators", i);
      Generator g;
      g.id = get_id(e, "id", path);
      g.p_max_kw = get_num(e, "p_max_kw", path);
      g.q_max_kvar = get_num(e, "q_max_kvar", path, 0.0);
      g.s_rated_kva = get_num(e, "s_rated_kva", path);
      g.tank_l = get_num(e, "fuel_capacity_l", path);
      g.initial_sof = get_num(e, "initial_sof", path);
      require(e.contains("fuel_rate_points") && e.at("fuel_rate_points").is_array(),
              "schema", path + "/fuel_rate_points", "expected an array");
      for (const auto& p : e.at("fuel_rate_points")) {
        FuelPoint fp;
        fp.load_kw = get_num(p, "load_kw", path + "/fuel_rate_points");
        fp.rate_l_per_h = get_num(p, "rate_l_per_h", path + "/fuel_rate_points");
        g.fuel_curve.push_back(fp);
      }
      double worst = 0;
      for (const auto& fp : g.fuel_curve) worst = std::max(worst, fp.rate_l_per_h);
      g.burn_max_l = get_num(e, "burn_max_l", path, worst * sc.time.span_hours);
      g.start = get_str(e, "start", path);
      sc.fleet.generators.push_back(std::move(g));
    }
  }
  if (jf.contains("tankers")) {
    for (std::size_t i = 0; i < jf.at("tankers").size(); ++i) {
      const Json& e = jf.at("tankers")[i];
      const std::string path = detail::idx_path("/fleet/tankers", i);
      Tanker t;
      t.id = get_id(e, "id", path);
      t.tank_l = get_num(e, "fuel_capacity_l", path);
      t.initial_sof = get_num(e, "initial_sof", path);
      const double full_tank_rate = t.tank_l / sc.time.span_hours;
      t.rate_in_l_per_h = get_num(e, "rate_in_l_per_h", path, full_tank_rate);
      t.rate_out_l_per_h = get_num(e, "rate_out_l_per_h", path, full_tank_rate);
      t.start = get_str(e, "start", path);
      sc.fleet.tankers.push_back(std::move(t));
    }
  }

  const Json& jv = doc.at("travel");
  auto parse_table = [&](const char* cls) {
    if (!jv.contains(cls)) return;
    require(jv.at(cls).is_array(), "schema", std::string("/travel/") + cls,
            "expected an array");
    for (std::size_t i = 0; i < jv.at(cls).size(); ++i) {
      const Json& e = jv.at(cls)[i];
      const std::string path = detail::idx_path(std::string("/travel/") + cls, i);
      std::string a = get_str(e, "from", path);
      std::string b = get_str(e, "to", path);
      int spans = get_int(e, "spans", path);
      sc.travel.class_spans[{cls, a, b}] = spans;
      if (!sc.travel.class_spans.count({cls, b, a}))
        sc.travel.class_spans[{cls, b, a}] = spans;
    }
  };
  parse_table("storage");
  parse_table("fuel");
  if (jv.contains("per_mer")) {
    require(jv.at("per_mer").is_array(), "schema", "/travel/per_mer", "expected an array");
    for (std::size_t i = 0; i < jv.at("per_mer").size(); ++i) {
      const Json& e = jv.at("per_mer")[i];
      const std::string path = detail::idx_path("/travel/per_mer", i);
      std::string mer = get_str(e, "mer", path);
      std::string a = get_str(e, "from", path);
      std::string b = get_str(e, "to", path);
      int spans = get_int(e, "spans", path);
      sc.travel.mer_spans[{mer, a, b}] = spans;
      if (!sc.travel.mer_spans.count({mer, b, a})) sc.travel.mer_spans[{mer, b, a}] = spans;
    }
  }

  if (doc.contains("study")) {
    const Json& js = doc.at("study");
    sc.study.phi_travel = get_num(js, "phi_travel", "/study", 0.1);
    sc.study.phi_fuel = get_num(js, "phi_fuel", "/study", 0.1);
    sc.study.variant = case_from_string(get_str(js, "case", "/study", "case5"));
    sc.study.gap = get_num(js, "gap", "/study", 1e-3);
    sc.study.time_limit_s = get_num(js, "time_limit_s", "/study", 0.0);
    sc.study.disk_segments = get_int(js, "disk_segments", "/study", 8);
    sc.study.strict_pickup = get_bool(js, "strict_pickup", "/study", false);
    sc.study.substation_energized = get_bool(js, "substation_energized", "/study", true);
    std::string pol = get_str(js, "bigm_policy", "/study", "tight");
    require(pol == "tight" || pol == "uniform", "schema", "/study/bigm_policy",
            "expected tight or uniform");
    sc.study.bigm = pol == "tight" ? BigMPolicy::tight : BigMPolicy::uniform;
    sc.study.uniform_bigm = get_num(js, "uniform_bigm", "/study", 1e4);
    if (js.contains("cases")) {
      const Json& jc = js.at("cases");
      if (jc.contains("case2")) {
        sc.study.case2_module_node = get_str(jc.at("case2"), "module_node",
                                             "/study/cases/case2", "");
        sc.study.case2_generator_node = get_str(jc.at("case2"), "generator_node",
                                                "/study/cases/case2", "");
      }
      if (jc.contains("case3_bundles")) {
        require(jc.at("case3_bundles").is_array(), "schema", "/study/cases/case3_bundles",
                "expected an array");
        for (std::size_t i = 0; i < jc.at("case3_bundles").size(); ++i) {
          const Json& e = jc.at("case3_bundles")[i];
          const std::string path = detail::idx_path("/study/cases/case3_bundles", i);
          Bundle b;
          b.carrier = get_str(e, "carrier", path);
          require(e.contains("modules") && e.at("modules").is_array(), "schema",
                  path + "/modules", "expected an array");
          for (const auto& m : e.at("modules")) b.modules.push_back(m.get<std::string>());
          sc.study.case3_bundles.push_back(std::move(b));
        }
      }
    }
  }

  sc.finalize();
  return sc;
}

inline Scenario parse_scenario_text(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  detail::require(!doc.is_discarded(), "io", "/", "not valid JSON");
  return parse_scenario(doc);
}

// ---------------------------------------------------------------------------
// JSON output (normalized form; parse(serialize(s)) == s field-by-field)
// ---------------------------------------------------------------------------

inline Json serialize_scenario(const Scenario& sc) {
  Json doc;
  doc["version"] = sc.version;
  doc["time"] = {{"span_count", sc.time.spans}, {"span_length_h", sc.time.span_hours}};

  Json jn;
  jn["base_power_kw"] = sc.network.base_power_kw;
  jn["base_voltage_kv"] = sc.network.base_voltage_kv;
  jn["substation"] = sc.network.substation;
  jn["v_min_pu"] = sc.network.v_min_pu;
  jn["v_max_pu"] = sc.network.v_max_pu;
  jn["nodes"] = Json::array();
  for (const Node& n : sc.network.nodes) {
    Json e;
    e["id"] = n.id;
    e["p_load_kw"] = n.p_load_kw;
    e["q_load_kvar"] = n.q_load_kvar;
    e["weight"] = n.weight;
    jn["nodes"].push_back(e);
  }
  jn["branches"] = Json::array();
  for (const Branch& b : sc.network.branches) {
    Json e;
    e["from"] = b.from;
    e["to"] = b.to;
    e["r_pu"] = b.r_pu;
    e["x_pu"] = b.x_pu;
    e["capacity_kva"] = b.capacity_kva;
    jn["branches"].push_back(e);
  }
  doc["network"] = jn;

  Json ja;
  ja["storage_nodes"] = sc.access.storage_nodes;
  auto dump_sites = [](const std::vector<FuelSite>& sites) {
    Json arr = Json::array();
    for (const FuelSite& s : sites)
      arr.push_back({{"id", s.id},
                     {"fuel_capacity_l", s.capacity_l},
                     {"initial_sof", s.initial_sof}});
    return arr;
  };
  ja["generator_nodes"] = dump_sites(sc.access.generator_sites);
  ja["depots"] = dump_sites(sc.access.depots);
  doc["access"] = ja;

  doc["faults"] = Json::array();
  for (const FaultStage& st : sc.faults) {
    Json e;
    e["spans"] = {st.first_span, st.last_span};
    e["open_nodes"] = st.open_nodes;
    e["closed_nodes"] = st.closed_nodes;
    auto dump_pairs = [](const std::vector<std::pair<std::string, std::string>>& v) {
      Json arr = Json::array();
      for (const auto& p : v) arr.push_back({p.first, p.second});
      return arr;
    };
    e["open_branches"] = dump_pairs(st.open_branches);
    e["closed_branches"] = dump_pairs(st.closed_branches);
    doc["faults"].push_back(e);
  }

  Json jf;
  jf["carriers"] = Json::array();
  for (const Carrier& c : sc.fleet.carriers)
    jf["carriers"].push_back(
        {{"id", c.id}, {"capacity", c.capacity}, {"start", c.start}});
  jf["modules"] = Json::array();
  for (const Module& m : sc.fleet.modules) {
    Json e;
    e["id"] = m.id;
    e["weight"] = m.weight;
    e["p_charge_max_kw"] = m.p_charge_max_kw;
    e["p_discharge_max_kw"] = m.p_discharge_max_kw;
    e["s_rated_kva"] = m.s_rated_kva;
    e["energy_kwh"] = m.energy_kwh;
    e["eff_charge"] = m.eff_charge;
    e["eff_discharge"] = m.eff_discharge;
    e["soc_initial"] = m.soc_initial;
    e["soc_min"] = m.soc_min;
    e["soc_max"] = m.soc_max;
    e["start"] = m.start;
    jf["modules"].push_back(e);
  }
  jf["generators"] = Json::array();
  for (const Generator& g : sc.fleet.generators) {
    Json e;
    e["id"] = g.id;
    e["p_max_kw"] = g.p_max_kw;
    e["q_max_kvar"] = g.q_max_kvar;
    e["s_rated_kva"] = g.s_rated_kva;
    e["fuel_capacity_l"] = g.tank_l;
    e["initial_sof"] = g.initial_sof;
    e["burn_max_l"] = g.burn_max_l;
    e["fuel_rate_points"] = Json::array();
    for (const FuelPoint& p : g.fuel_curve)
      e["fuel_rate_points"].push_back(
          {{"load_kw", p.load_kw}, {"rate_l_per_h", p.rate_l_per_h}});
    e["start"] = g.start;
    jf["generators"].push_back(e);
  }
  jf["tankers"] = Json::array();
  for (const Tanker& t : sc.fleet.tankers) {
    Json e;
    e["id"] = t.id;
    e["fuel_capacity_l"] = t.tank_l;
    e["initial_sof"] = t.initial_sof;
    e["rate_in_l_per_h"] = t.rate_in_l_per_h;
    e["rate_out_l_per_h"] = t.rate_out_l_per_h;
    e["start"] = t.start;
    jf["tankers"].push_back(e);
  }
  doc["fleet"] = jf;

  Json jv;
  jv["storage"] = Json::array();
  jv["fuel"] = Json::array();
  for (const auto& [key, spans] : sc.travel.class_spans) {
    const auto& [cls, a, b] = key;
    jv[cls].push_back({{"from", a}, {"to", b}, {"spans", spans}});
  }
  jv["per_mer"] = Json::array();
  for (const auto& [key, spans] : sc.travel.mer_spans) {
    const auto& [mer, a, b] = key;
    jv["per_mer"].push_back({{"mer", mer}, {"from", a}, {"to", b}, {"spans", spans}});
  }
  doc["travel"] = jv;

  Json js;
  js["phi_travel"] = sc.study.phi_travel;
  js["phi_fuel"] = sc.study.phi_fuel;
  js["case"] = to_string(sc.study.variant);
  js["gap"] = sc.study.gap;
  js["time_limit_s"] = sc.study.time_limit_s;
  js["disk_segments"] = sc.study.disk_segments;
  js["strict_pickup"] = sc.study.strict_pickup;
  js["substation_energized"] = sc.study.substation_energized;
  js["bigm_policy"] = sc.study.bigm == BigMPolicy::tight ? "tight" : "uniform";
  js["uniform_bigm"] = sc.study.uniform_bigm;
  Json jc;
  jc["case2"] = {{"module_node", sc.study.case2_module_node},
                 {"generator_node", sc.study.case2_generator_node}};
  jc["case3_bundles"] = Json::array();
  for (const Bundle& b : sc.study.case3_bundles)
    jc["case3_bundles"].push_back({{"carrier", b.carrier}, {"modules", b.modules}});
  js["cases"] = jc;
  doc["study"] = js;
  return doc;
}

}  // namespace mersched
