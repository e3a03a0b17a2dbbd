#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scenario.hpp"

namespace mersched {

// Reference optimizer for small scenarios, written against the scenario
// semantics directly rather than the optimization model. It enumerates the
// discrete skeleton exhaustively (routes, rides, exchange flags, switch
// states, pickup profiles), orders skeletons by their objective, and accepts
// the first one whose continuous remainder (powers, energies, fuel levels,
// flows, voltages) admits a feasible point. The remainder is checked with an
// in-house phase-1 simplex, so the result owes nothing to the solver stack
// it is used to cross-examine.

struct OracleOptions {
  std::size_t max_candidates = 2000000;  // discrete skeletons admitted to the search
  std::size_t max_plans = 200000;        // per-unit route/ride plans
  std::size_t max_leaf_combos = 4096;    // per-skeleton completion assignments
  double lp_eps = 1e-7;
};

struct OracleResult {
  bool feasible = false;
  double objective = -std::numeric_limits<double>::infinity();
  long candidates = 0;  // skeletons generated
  long lps = 0;         // simplex runs spent
};

namespace oracle_detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Dense phase-1 simplex over boxed variables. Feasibility only.
// ---------------------------------------------------------------------------

class FeasLP {
 public:
  int add_var(double lo, double hi) {
    lo_.push_back(lo);
    hi_.push_back(hi);
    return static_cast<int>(lo_.size()) - 1;
  }

  void add_row(std::vector<std::pair<int, double>> terms, char sense, double rhs) {
    rows_.push_back({std::move(terms), rhs, sense});
  }

  // Returns true when a point satisfies every row and box; fills `point`
  // (indexed like add_var calls) when given.
  bool solve(std::vector<double>* point, double eps) const {
    const int nx = static_cast<int>(lo_.size());
    std::vector<int> y0(nx), y1(nx, -1), sgn(nx, 1);
    std::vector<double> shift(nx, 0.0);
    std::vector<double> yub;
    int ny = 0;
    for (int j = 0; j < nx; ++j) {
      if (lo_[j] > hi_[j] + 1e-12) return false;
      if (lo_[j] > -kInf) {
        shift[j] = lo_[j];
        y0[j] = ny++;
        yub.push_back(hi_[j] < kInf ? hi_[j] - lo_[j] : kInf);
      } else if (hi_[j] < kInf) {
        shift[j] = hi_[j];
        sgn[j] = -1;
        y0[j] = ny++;
        yub.push_back(kInf);
      } else {
        y0[j] = ny++;
        yub.push_back(kInf);
        y1[j] = ny++;
        yub.push_back(kInf);
      }
    }

    struct NRow {
      std::vector<double> a;
      double rhs;
      char sense;
    };
    std::vector<NRow> nrs;
    nrs.reserve(rows_.size() + ny);
    for (const RawRow& r : rows_) {
      NRow n;
      n.a.assign(ny, 0.0);
      n.rhs = r.rhs;
      n.sense = r.sense;
      for (const auto& [j, c] : r.a) {
        n.rhs -= c * shift[j];
        n.a[y0[j]] += c * sgn[j];
        if (y1[j] >= 0) n.a[y1[j]] -= c;
      }
      nrs.push_back(std::move(n));
    }
    for (int y = 0; y < ny; ++y)
      if (yub[y] < kInf) {
        NRow n;
        n.a.assign(ny, 0.0);
        n.a[y] = 1.0;
        n.rhs = yub[y];
        n.sense = '<';
        nrs.push_back(std::move(n));
      }
    for (NRow& r : nrs)
      if (r.rhs < 0) {
        for (double& v : r.a) v = -v;
        r.rhs = -r.rhs;
        r.sense = r.sense == '<' ? '>' : (r.sense == '>' ? '<' : '=');
      }

    const int m = static_cast<int>(nrs.size());
    int nslack = 0, nart = 0;
    for (const NRow& r : nrs) {
      if (r.sense != '=') ++nslack;
      if (r.sense != '<') ++nart;
    }
    const int ncol = ny + nslack + nart;
    const int stride = ncol + 1;
    std::vector<double> T(static_cast<std::size_t>(m + 1) * stride, 0.0);
    auto at = [&](int i, int j) -> double& { return T[static_cast<std::size_t>(i) * stride + j]; };
    std::vector<int> basis(m, -1);
    int sl = ny, ar = ny + nslack;
    for (int i = 0; i < m; ++i) {
      for (int y = 0; y < ny; ++y) at(i, y) = nrs[i].a[y];
      at(i, ncol) = nrs[i].rhs;
      if (nrs[i].sense == '<') {
        at(i, sl) = 1.0;
        basis[i] = sl++;
      } else if (nrs[i].sense == '>') {
        at(i, sl++) = -1.0;
        at(i, ar) = 1.0;
        basis[i] = ar++;
      } else {
        at(i, ar) = 1.0;
        basis[i] = ar++;
      }
    }
    // Cost row for min(sum of artificials); rhs cell carries -z.
    for (int i = 0; i < m; ++i)
      if (basis[i] >= ny + nslack)
        for (int j = 0; j <= ncol; ++j) at(m, j) -= at(i, j);
    for (int j = ny + nslack; j < ncol; ++j) at(m, j) += 1.0;

    long iter = 0;
    const long bland_after = 2L * (m + ncol) + 64;
    const long iter_cap = 400L * (m + ncol) + 4096;
    while (true) {
      int enter = -1;
      if (iter < bland_after) {
        double best = -1e-9;
        for (int j = 0; j < ncol; ++j)
          if (at(m, j) < best) {
            best = at(m, j);
            enter = j;
          }
      } else {
        for (int j = 0; j < ncol; ++j)
          if (at(m, j) < -1e-9) {
            enter = j;
            break;
          }
      }
      if (enter < 0) break;
      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m; ++i)
        if (at(i, enter) > 1e-9) {
          const double ratio = at(i, ncol) / at(i, enter);
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      if (leave < 0) return false;
      const double piv = at(leave, enter);
      for (int j = 0; j <= ncol; ++j) at(leave, j) /= piv;
      for (int i = 0; i <= m; ++i) {
        if (i == leave) continue;
        const double f = at(i, enter);
        if (f == 0.0) continue;
        for (int j = 0; j <= ncol; ++j) at(i, j) -= f * at(leave, j);
      }
      basis[leave] = enter;
      if (++iter > iter_cap)
        throw std::runtime_error("reference optimizer: simplex stalled");
    }
    if (-at(m, ncol) > eps) return false;
    if (point) {
      std::vector<double> y(ny, 0.0);
      for (int i = 0; i < m; ++i)
        if (basis[i] < ny) y[basis[i]] = at(i, ncol);
      point->assign(nx, 0.0);
      for (int j = 0; j < nx; ++j) {
        double v = shift[j] + sgn[j] * y[y0[j]];
        if (y1[j] >= 0) v = y[y0[j]] - y[y1[j]];
        (*point)[j] = v;
      }
    }
    return true;
  }

 private:
  struct RawRow {
    std::vector<std::pair<int, double>> a;
    double rhs;
    char sense;
  };
  std::vector<double> lo_, hi_;
  std::vector<RawRow> rows_;
};

// Linear form helper: running sum of variable terms plus a constant.
struct Form {
  std::vector<std::pair<int, double>> terms;
  double cst = 0;
  Form& add(int var, double c) {
    if (var >= 0 && c != 0.0) terms.push_back({var, c});
    return *this;
  }
  Form& add(const Form& o, double c) {
    for (const auto& [v, a] : o.terms) terms.push_back({v, a * c});
    cst += o.cst * c;
    return *this;
  }
};

inline void add_form_row(FeasLP& lp, Form f, char sense, double rhs) {
  lp.add_row(std::move(f.terms), sense, rhs - f.cst);
}

// k-gon inscribed in the disk of the given radius, applied to (x, y).
inline void polygon_rows(FeasLP& lp, const Form& x, const Form& y, double radius,
                         int k) {
  const double pi = std::acos(-1.0);
  const double r = std::max(radius, 1e-12);
  for (int mseg = 0; mseg < k; ++mseg) {
    const double th = (2.0 * mseg + 1.0) * pi / k;
    Form e;
    e.add(x, std::cos(th) / r).add(y, std::sin(th) / r);
    add_form_row(lp, std::move(e), '<', std::cos(pi / k));
  }
}

// ---------------------------------------------------------------------------
// Route and ride enumeration
// ---------------------------------------------------------------------------

struct Traj {
  std::vector<int> pos;   // t = 0..D; site index or -1
  std::vector<int> head;  // t = 0..D; target site index or -1
  int travel = 0;         // traveling spans, t >= 1
};

inline std::vector<Traj> enumerate_trajectories(
    int nsite, int start, const std::function<int(int, int)>& needed, int D,
    bool frozen, std::size_t cap) {
  std::vector<Traj> out;
  Traj cur;
  cur.pos.assign(D + 1, -1);
  cur.head.assign(D + 1, -1);
  cur.pos[0] = start;
  if (frozen) {
    for (int t = 1; t <= D; ++t) cur.pos[t] = start;
    out.push_back(cur);
    return out;
  }
  // State: parked at `site`, or en route `from -> target` with `gone` spans done.
  std::function<void(int, bool, int, int, int, int)> walk =
      [&](int t, bool parked, int site, int from, int target, int gone) {
        if (t == D) {
          if (out.size() >= cap)
            throw std::runtime_error("reference optimizer: route space too large");
          out.push_back(cur);
          return;
        }
        if (parked) {
          cur.pos[t + 1] = site;
          walk(t + 1, true, site, -1, -1, 0);
          cur.pos[t + 1] = -1;
          for (int j = 0; j < nsite; ++j) {
            cur.head[t + 1] = j;
            ++cur.travel;
            walk(t + 1, false, -1, site, j, 1);
            --cur.travel;
            cur.head[t + 1] = -1;
          }
        } else {
          cur.head[t + 1] = target;
          ++cur.travel;
          walk(t + 1, false, -1, from, target, gone + 1);
          --cur.travel;
          cur.head[t + 1] = -1;
          if (gone >= std::max(1, needed(from, target))) {
            cur.pos[t + 1] = target;
            walk(t + 1, true, target, -1, -1, 0);
            cur.pos[t + 1] = -1;
          }
        }
      };
  walk(0, true, start, -1, -1, 0);
  return out;
}

struct RidePlan {
  std::vector<int> site;     // t = 0..D; storage-site index or -1
  std::vector<int> carrier;  // t = 0..D; carrier index or -1
};

inline std::vector<RidePlan> enumerate_rides(
    const std::vector<const Traj*>& carr, int start, int D, bool frozen,
    int forced_carrier, std::size_t cap) {
  std::vector<RidePlan> out;
  RidePlan cur;
  cur.site.assign(D + 1, -1);
  cur.carrier.assign(D + 1, -1);
  cur.site[0] = start;
  if (frozen) {
    for (int t = 1; t <= D; ++t) cur.site[t] = start;
    out.push_back(cur);
    return out;
  }
  if (forced_carrier >= 0) {
    const Traj& c = *carr[forced_carrier];
    for (int t = 0; t <= D; ++t) {
      cur.site[t] = c.pos[t];
      cur.carrier[t] = c.pos[t] < 0 ? forced_carrier : -1;
    }
    out.push_back(cur);
    return out;
  }
  std::function<void(int)> walk = [&](int t) {
    if (t == D) {
      if (out.size() >= cap)
        throw std::runtime_error("reference optimizer: ride space too large");
      out.push_back(cur);
      return;
    }
    if (cur.site[t] >= 0) {
      cur.site[t + 1] = cur.site[t];
      walk(t + 1);
      cur.site[t + 1] = -1;
      for (std::size_t c = 0; c < carr.size(); ++c)
        if (carr[c]->pos[t] == cur.site[t] && carr[c]->head[t + 1] >= 0) {
          cur.carrier[t + 1] = static_cast<int>(c);
          walk(t + 1);
          cur.carrier[t + 1] = -1;
        }
    } else {
      const int c = cur.carrier[t];
      if (carr[c]->head[t + 1] >= 0) {
        cur.carrier[t + 1] = c;
        walk(t + 1);
        cur.carrier[t + 1] = -1;
      } else {
        cur.site[t + 1] = carr[c]->pos[t + 1];
        walk(t + 1);
        cur.site[t + 1] = -1;
      }
    }
  };
  walk(0);
  return out;
}

template <class F>
inline void product_each(const std::vector<std::size_t>& sizes, F&& f) {
  for (std::size_t s : sizes)
    if (s == 0) return;
  std::vector<std::size_t> idx(sizes.size(), 0);
  while (true) {
    f(idx);
    std::size_t k = 0;
    while (k < sizes.size() && ++idx[k] == sizes[k]) idx[k++] = 0;
    if (k == sizes.size()) break;
  }
}

struct DSU {
  std::vector<int> p;
  explicit DSU(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

// One fully resolved discrete skeleton.
struct Cand {
  double obj = 0;
  std::vector<int8_t> mod_pos;   // K x (D+1); storage-site index or -1 (riding)
  std::vector<int8_t> gen_pos;   // MG x (D+1); fuel-site index or -1
  std::vector<int8_t> tank_pos;  // MF x (D+1)
  std::vector<uint32_t> gen_l, tank_l;       // exchange-flag masks, bit t-1
  std::vector<uint32_t> kappa;               // per span t-1: closed-branch mask
  std::vector<int8_t> don;                   // per node: pickup switch-on span, D+1 = never
};

struct Segment {
  double p_lo, p_hi;   // kW
  double slope, icept; // L/h per kW, L/h
};

inline std::vector<Segment> curve_segments(const Generator& g) {
  std::vector<Segment> segs;
  double p0 = 0, r0 = 0;
  for (const FuelPoint& fp : g.fuel_curve) {
    Segment s;
    s.p_lo = p0;
    s.p_hi = fp.load_kw;
    s.slope = (fp.rate_l_per_h - r0) / (fp.load_kw - p0);
    s.icept = r0 - s.slope * p0;
    segs.push_back(s);
    p0 = fp.load_kw;
    r0 = fp.rate_l_per_h;
  }
  return segs;
}

}  // namespace oracle_detail

inline OracleResult brute_force_optimal(const Scenario& sc, OracleOptions opt = {}) {
  using namespace oracle_detail;
  const int D = sc.time.spans;
  const double dt = sc.time.span_hours;
  const double base = sc.network.base_power_kw;
  const CaseId variant = sc.study.variant;
  const bool fed = sc.study.substation_energized;
  const bool strict = sc.study.strict_pickup;
  const bool freeze_travel =
      variant == CaseId::none_resources || variant == CaseId::stationary;
  const bool freeze_powers = variant == CaseId::none_resources;
  const bool freeze_exchange = variant == CaseId::none_resources;
  const bool freeze_tanker = variant == CaseId::no_tanker;

  const auto storage = sc.storage_sites();
  const auto fsites = sc.fuel_sites();
  const int nS = static_cast<int>(storage.size());
  const int nF = static_cast<int>(fsites.size());
  const int nGsite = static_cast<int>(sc.access.generator_sites.size());
  const int N = sc.nodes_count();
  const int L = sc.branches_count();
  const int K = static_cast<int>(sc.fleet.modules.size());
  const int C = static_cast<int>(sc.fleet.carriers.size());
  const int MG = static_cast<int>(sc.fleet.generators.size());
  const int MF = static_cast<int>(sc.fleet.tankers.size());
  const int root = sc.substation;
  if (L > 31) throw std::runtime_error("reference optimizer: too many branches");

  std::vector<int> storage_node(nS), fuel_node(nF, -1);
  for (int i = 0; i < nS; ++i) storage_node[i] = sc.node_index.at(storage[i]);
  for (int i = 0; i < nGsite; ++i) fuel_node[i] = sc.node_index.at(fsites[i]);
  auto site_of = [](const std::vector<std::string>& v, const std::string& s) {
    return static_cast<int>(std::find(v.begin(), v.end(), s) - v.begin());
  };

  // ---- per-unit route plans ----
  std::vector<std::vector<Traj>> carr_t(C), gen_t(MG), tank_t(MF);
  for (int c = 0; c < C; ++c) {
    const Carrier& cr = sc.fleet.carriers[c];
    carr_t[c] = enumerate_trajectories(
        nS, site_of(storage, cr.start),
        [&](int a, int b) {
          return sc.travel.spans_for(cr.id, "storage", storage[a], storage[b]);
        },
        D, freeze_travel, opt.max_plans);
  }
  for (int m = 0; m < MG; ++m) {
    const Generator& g = sc.fleet.generators[m];
    const std::string start = variant == CaseId::stationary
                                  ? sc.study.case2_generator_node
                                  : g.start;
    gen_t[m] = enumerate_trajectories(
        nF, site_of(fsites, start),
        [&](int a, int b) {
          return sc.travel.spans_for(g.id, "fuel", fsites[a], fsites[b]);
        },
        D, freeze_travel, opt.max_plans);
  }
  for (int h = 0; h < MF; ++h) {
    const Tanker& tk = sc.fleet.tankers[h];
    tank_t[h] = enumerate_trajectories(
        nF, site_of(fsites, tk.start),
        [&](int a, int b) {
          return sc.travel.spans_for(tk.id, "fuel", fsites[a], fsites[b]);
        },
        D, freeze_travel || freeze_tanker, opt.max_plans);
  }

  // ---- faults and switch-state options per span ----
  std::vector<FaultSets> fsets(D + 1);
  std::vector<uint32_t> pin_closed(D + 1, 0), pin_open(D + 1, 0);
  std::vector<std::vector<char>> nfo(D + 1, std::vector<char>(N, 0)), nfc = nfo;
  for (int t = 1; t <= D; ++t) {
    fsets[t] = sc.fault_sets_at(t);
    for (int b : fsets[t].open_branches) pin_open[t] |= 1u << b;
    for (int b : fsets[t].closed_branches) pin_closed[t] |= 1u << b;
    for (int u : fsets[t].open_nodes) nfo[t][u] = 1;
    for (int u : fsets[t].closed_nodes) nfc[t][u] = 1;
  }
  std::vector<int> bfrom(L), bto(L);
  for (int b = 0; b < L; ++b) {
    bfrom[b] = sc.node_index.at(sc.network.branches[b].from);
    bto[b] = sc.node_index.at(sc.network.branches[b].to);
  }
  std::vector<std::vector<uint32_t>> kappa_opts(D + 1);
  for (int t = 1; t <= D; ++t) {
    std::vector<int> free_b;
    for (int b = 0; b < L; ++b)
      if (!((pin_open[t] | pin_closed[t]) >> b & 1u)) free_b.push_back(b);
    if (free_b.size() > 16)
      throw std::runtime_error("reference optimizer: too many free switches");
    const uint32_t combos = 1u << free_b.size();
    for (uint32_t s = 0; s < combos; ++s) {
      uint32_t closed = pin_closed[t];
      for (std::size_t i = 0; i < free_b.size(); ++i)
        if (s >> i & 1u) closed |= 1u << free_b[i];
      DSU d(N);
      bool ok = true;
      for (int b = 0; b < L && ok; ++b)
        if (closed >> b & 1u) ok = d.join(bfrom[b], bto[b]);
      if (ok) kappa_opts[t].push_back(closed);
    }
  }

  // ---- load bookkeeping ----
  std::vector<char> has_load(N, 0);
  std::vector<int> loaded;
  for (int u = 0; u < N; ++u)
    if (sc.network.nodes[u].has_load()) {
      has_load[u] = 1;
      loaded.push_back(u);
    }
  // restored[u][s]: weighted restored energy when node u switches on in span s.
  std::vector<std::vector<double>> restored(N, std::vector<double>(D + 2, 0.0));
  for (int u : loaded)
    for (int s = D; s >= 1; --s)
      restored[u][s] = restored[u][s + 1] +
                       sc.network.nodes[u].weight * sc.network.nodes[u].p_load_kw[s - 1] * dt;

  // ---- skeleton generation ----
  std::vector<Cand> cands;
  const double phi_t = sc.study.phi_travel, phi_f = sc.study.phi_fuel;

  std::vector<int> bundle_of(K, -1);  // module -> carrier index under the bundled case
  if (variant == CaseId::bundled)
    for (const Bundle& b : sc.study.case3_bundles) {
      int ci = -1;
      for (int c = 0; c < C; ++c)
        if (sc.fleet.carriers[c].id == b.carrier) ci = c;
      for (const std::string& mid : b.modules)
        for (int k = 0; k < K; ++k)
          if (sc.fleet.modules[k].id == mid) bundle_of[k] = ci;
    }

  std::vector<std::size_t> carr_sizes(C);
  for (int c = 0; c < C; ++c) carr_sizes[c] = carr_t[c].size();

  product_each(carr_sizes, [&](const std::vector<std::size_t>& ci) {
    std::vector<const Traj*> carr(C);
    double carr_travel = 0;
    for (int c = 0; c < C; ++c) {
      carr[c] = &carr_t[c][ci[c]];
      carr_travel += carr[c]->travel;
    }
    // ride plans per module under this carrier motion
    std::vector<std::vector<RidePlan>> rides(K);
    for (int k = 0; k < K; ++k) {
      const Module& md = sc.fleet.modules[k];
      const std::string start = variant == CaseId::stationary
                                    ? sc.study.case2_module_node
                                    : md.start;
      rides[k] = enumerate_rides(carr, site_of(storage, start), D,
                                 freeze_travel, bundle_of[k], opt.max_plans);
    }
    std::vector<std::size_t> ride_sizes(K);
    for (int k = 0; k < K; ++k) ride_sizes[k] = rides[k].size();

    product_each(ride_sizes, [&](const std::vector<std::size_t>& ri) {
      std::vector<const RidePlan*> ride(K);
      for (int k = 0; k < K; ++k) ride[k] = &rides[k][ri[k]];
      for (int c = 0; c < C; ++c)
        for (int t = 1; t <= D; ++t) {
          double w = 0;
          for (int k = 0; k < K; ++k)
            if (ride[k]->carrier[t] == c) w += sc.fleet.modules[k].weight;
          if (w > sc.fleet.carriers[c].capacity + 1e-9) return;
        }

      std::vector<std::size_t> gen_sizes(MG), tank_sizes(MF);
      for (int m = 0; m < MG; ++m) gen_sizes[m] = gen_t[m].size();
      for (int h = 0; h < MF; ++h) tank_sizes[h] = tank_t[h].size();
      product_each(gen_sizes, [&](const std::vector<std::size_t>& gi) {
        std::vector<const Traj*> gen(MG);
        double gen_travel = 0;
        for (int m = 0; m < MG; ++m) {
          gen[m] = &gen_t[m][gi[m]];
          gen_travel += gen[m]->travel;
        }
        product_each(tank_sizes, [&](const std::vector<std::size_t>& hi) {
          std::vector<const Traj*> tank(MF);
          double tank_travel = 0;
          for (int h = 0; h < MF; ++h) {
            tank[h] = &tank_t[h][hi[h]];
            tank_travel += tank[h]->travel;
          }
          const double travel_cost =
              phi_t * (carr_travel + gen_travel + tank_travel);

          // exchange-flag masks
          std::vector<std::vector<uint32_t>> gl(MG), tl(MF);
          for (int m = 0; m < MG; ++m) {
            uint32_t elig = 0;
            if (!freeze_exchange)
              for (int t = 1; t <= D; ++t)
                if (gen[m]->pos[t] >= 0 && gen[m]->pos[t] < nGsite)
                  elig |= 1u << (t - 1);
            uint32_t s = elig;
            while (true) {
              gl[m].push_back(s);
              if (s == 0) break;
              s = (s - 1) & elig;
            }
          }
          for (int h = 0; h < MF; ++h) {
            uint32_t elig = 0;
            if (!freeze_exchange && !freeze_tanker)
              for (int t = 1; t <= D; ++t)
                if (tank[h]->pos[t] >= 0) elig |= 1u << (t - 1);
            uint32_t s = elig;
            while (true) {
              tl[h].push_back(s);
              if (s == 0) break;
              s = (s - 1) & elig;
            }
          }
          std::vector<std::size_t> lsizes;
          for (int m = 0; m < MG; ++m) lsizes.push_back(gl[m].size());
          for (int h = 0; h < MF; ++h) lsizes.push_back(tl[h].size());

          // sources per node per span (for energization and power pruning);
          // the no-resource benchmark fields no fleet, so it has none
          std::vector<std::vector<char>> src(D + 1, std::vector<char>(N, 0));
          if (variant != CaseId::none_resources)
            for (int t = 1; t <= D; ++t) {
              for (int k = 0; k < K; ++k)
                if (ride[k]->site[t] >= 0) src[t][storage_node[ride[k]->site[t]]] = 1;
              for (int m = 0; m < MG; ++m)
                if (gen[m]->pos[t] >= 0 && gen[m]->pos[t] < nGsite)
                  src[t][fuel_node[gen[m]->pos[t]]] = 1;
            }

          product_each(lsizes, [&](const std::vector<std::size_t>& li) {
            double l_cost = 0;
            std::vector<uint32_t> glm(MG), tlm(MF);
            for (int m = 0; m < MG; ++m) {
              glm[m] = gl[m][li[m]];
              l_cost += phi_f * __builtin_popcount(glm[m]);
            }
            for (int h = 0; h < MF; ++h) {
              tlm[h] = tl[h][li[MG + h]];
              l_cost += phi_f * __builtin_popcount(tlm[h]);
            }

            std::vector<std::size_t> ksizes(D);
            for (int t = 1; t <= D; ++t) ksizes[t - 1] = kappa_opts[t].size();
            product_each(ksizes, [&](const std::vector<std::size_t>& ki) {
              // energization and power availability per (span, node)
              std::vector<std::vector<char>> eta(D + 1, std::vector<char>(N, 0));
              std::vector<std::vector<char>> powered = eta;
              for (int t = 1; t <= D; ++t) {
                const uint32_t closed = kappa_opts[t][ki[t - 1]];
                DSU d(N);
                for (int b = 0; b < L; ++b)
                  if (closed >> b & 1u) d.join(bfrom[b], bto[b]);
                std::vector<char> c_src(N, 0), c_nfc(N, 0);
                std::vector<int> c_size(N, 0);
                for (int u = 0; u < N; ++u) {
                  const int r = d.find(u);
                  ++c_size[r];
                  if (src[t][u]) c_src[r] = 1;
                  if (nfc[t][u] && has_load[u]) c_nfc[r] = 1;
                }
                for (int u = 0; u < N; ++u) {
                  const int r = d.find(u);
                  const bool pow =
                      c_src[r] || (fed && d.find(root) == r);
                  powered[t][u] = pow;
                  eta[t][u] = pow || (c_size[r] >= 2 && !c_nfc[r]);
                }
              }
              // pickup switch-on ranges
              std::vector<int> s_lo(N, 1), s_cap(N, D + 1);
              bool dead = false;
              for (int u = 0; u < N && !dead; ++u) {
                for (int t = 1; t <= D; ++t) {
                  if (nfo[t][u]) s_lo[u] = std::max(s_lo[u], t + 1);
                  if (strict && !eta[t][u]) s_lo[u] = std::max(s_lo[u], t + 1);
                  if (has_load[u] && !powered[t][u])
                    s_lo[u] = std::max(s_lo[u], t + 1);
                  if (nfc[t][u] && eta[t][u]) s_cap[u] = std::min(s_cap[u], t);
                }
                if (s_cap[u] < s_lo[u]) dead = true;
              }
              if (dead) return;

              std::vector<std::size_t> dsizes(loaded.size());
              for (std::size_t i = 0; i < loaded.size(); ++i)
                dsizes[i] = static_cast<std::size_t>(s_cap[loaded[i]] - s_lo[loaded[i]] + 1);
              product_each(dsizes, [&](const std::vector<std::size_t>& di) {
                Cand cd;
                cd.don.assign(N, static_cast<int8_t>(D + 1));
                double rest = 0;
                for (std::size_t i = 0; i < loaded.size(); ++i) {
                  const int u = loaded[i];
                  const int s = s_lo[u] + static_cast<int>(di[i]);
                  cd.don[u] = static_cast<int8_t>(s);
                  rest += restored[u][s];
                }
                for (int u = 0; u < N; ++u)
                  if (!has_load[u] && s_cap[u] <= D)
                    cd.don[u] = static_cast<int8_t>(s_cap[u]);
                cd.obj = rest - travel_cost - l_cost;
                cd.mod_pos.resize(static_cast<std::size_t>(K) * (D + 1));
                for (int k = 0; k < K; ++k)
                  for (int t = 0; t <= D; ++t)
                    cd.mod_pos[k * (D + 1) + t] =
                        static_cast<int8_t>(ride[k]->site[t]);
                cd.gen_pos.resize(static_cast<std::size_t>(MG) * (D + 1));
                for (int m = 0; m < MG; ++m)
                  for (int t = 0; t <= D; ++t)
                    cd.gen_pos[m * (D + 1) + t] = static_cast<int8_t>(gen[m]->pos[t]);
                cd.tank_pos.resize(static_cast<std::size_t>(MF) * (D + 1));
                for (int h = 0; h < MF; ++h)
                  for (int t = 0; t <= D; ++t)
                    cd.tank_pos[h * (D + 1) + t] =
                        static_cast<int8_t>(tank[h]->pos[t]);
                cd.gen_l = glm;
                cd.tank_l = tlm;
                cd.kappa.resize(D);
                for (int t = 1; t <= D; ++t) cd.kappa[t - 1] = kappa_opts[t][ki[t - 1]];
                if (cands.size() >= opt.max_candidates)
                  throw std::runtime_error(
                      "reference optimizer: skeleton space too large");
                cands.push_back(std::move(cd));
              });
            });
          });
        });
      });
    });
  });

  OracleResult res;
  res.candidates = static_cast<long>(cands.size());
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Cand& a, const Cand& b) { return a.obj > b.obj; });

  // ---- continuous remainder per skeleton ----
  std::vector<std::vector<Segment>> segs(MG);
  for (int m = 0; m < MG; ++m) segs[m] = curve_segments(sc.fleet.generators[m]);

  const double vlo = sc.network.v_min_pu * sc.network.v_min_pu;
  const double vhi = sc.network.v_max_pu * sc.network.v_max_pu;
  const int kdisk = sc.study.disk_segments;
  long lps = 0;

  // Build and test the remainder for one completion choice. `bseg[m][t-1]`
  // encodes b * nseg + segment for spans at a generator node, -1 elsewhere.
  // `cd_mask[k][t-1]`: 0 free, 1 charge shut, 2 discharge shut.
  auto leaf_lp = [&](const Cand& cd, const std::vector<std::vector<int>>& bseg,
                     const std::vector<std::vector<int>>* cd_mask,
                     std::vector<double>* sol,
                     std::vector<std::array<int, 2>>* cd_vars) -> bool {
    FeasLP lp;
    ++lps;
    auto mpos = [&](int k, int t) { return static_cast<int>(cd.mod_pos[k * (D + 1) + t]); };
    auto gpos = [&](int m, int t) { return static_cast<int>(cd.gen_pos[m * (D + 1) + t]); };
    auto hpos = [&](int h, int t) { return static_cast<int>(cd.tank_pos[h * (D + 1) + t]); };
    auto don = [&](int u, int t) { return t >= cd.don[u] ? 1.0 : 0.0; };

    // module powers and state of charge
    std::vector<std::vector<int>> pc(K), pd(K), qk(K), soc(K);
    for (int k = 0; k < K; ++k) {
      const Module& md = sc.fleet.modules[k];
      pc[k].assign(D + 1, -1);
      pd[k].assign(D + 1, -1);
      qk[k].assign(D + 1, -1);
      soc[k].assign(D + 1, -1);
      for (int t = 1; t <= D; ++t) {
        soc[k][t] = lp.add_var(md.soc_min, md.soc_max);
        if (mpos(k, t) < 0 || freeze_powers) continue;
        const int mask = cd_mask ? (*cd_mask)[k][t - 1] : 0;
        pc[k][t] = lp.add_var(0.0, mask == 1 ? 0.0 : md.p_charge_max_kw);
        pd[k][t] = lp.add_var(0.0, mask == 2 ? 0.0 : md.p_discharge_max_kw);
        qk[k][t] = lp.add_var(-md.s_rated_kva, md.s_rated_kva);
        if (cd_vars) cd_vars->push_back({pc[k][t], pd[k][t]});
        Form x;
        x.add(pd[k][t], 1).add(pc[k][t], -1);
        Form y;
        y.add(qk[k][t], 1);
        polygon_rows(lp, x, y, md.s_rated_kva, kdisk);
      }
      for (int t = 1; t <= D; ++t) {
        Form step;
        step.add(soc[k][t], 1);
        if (t > 1) step.add(soc[k][t - 1], -1);
        const double cf = dt / md.energy_kwh;
        step.add(pc[k][t], -md.eff_charge * cf).add(pd[k][t], cf / md.eff_discharge);
        add_form_row(lp, std::move(step), '=', t > 1 ? 0.0 : md.soc_initial);
      }
    }

    // generators: power, burn, tank level; stock draw accumulated per site
    std::vector<std::vector<int>> pg(MG), qg(MG), sofg(MG);
    std::vector<std::vector<Form>> site_take(nF, std::vector<Form>(D + 1));
    for (int m = 0; m < MG; ++m) {
      const Generator& g = sc.fleet.generators[m];
      pg[m].assign(D + 1, -1);
      qg[m].assign(D + 1, -1);
      sofg[m].assign(D + 1, -1);
      for (int t = 1; t <= D; ++t) sofg[m][t] = lp.add_var(0.0, 1.0);
      for (int t = 1; t <= D; ++t) {
        Form burn;        // liters over the span
        Form take;        // liters drawn from the site stock
        const int at = gpos(m, t);
        const bool at_gen = at >= 0 && at < nGsite && !freeze_powers;
        if (at_gen) {
          const int code = bseg[m][t - 1];
          const int nseg = static_cast<int>(segs[m].size());
          const Segment& sg = segs[m][code % nseg];
          const bool covered = code / nseg == 1;
          const double lo = std::max(0.0, sg.p_lo);
          const double hi = std::min(g.p_max_kw, sg.p_hi);
          if (lo > hi + 1e-9) return false;
          pg[m][t] = lp.add_var(lo, hi);
          qg[m][t] = lp.add_var(-g.q_max_kvar, g.q_max_kvar);
          Form x;
          x.add(pg[m][t], 1);
          Form y;
          y.add(qg[m][t], 1);
          polygon_rows(lp, x, y, g.s_rated_kva, kdisk);
          burn.add(pg[m][t], sg.slope * dt);
          burn.cst += sg.icept * dt;
          // burn may not exceed one span's ceiling
          Form bcap = burn;
          add_form_row(lp, std::move(bcap), '<', g.burn_max_l);
          Form prev;  // tank level entering the span, as a form
          if (t > 1)
            prev.add(sofg[m][t - 1], 1);
          else
            prev.cst = g.initial_sof;
          // stock-fed share: burn beyond what the tank held
          Form excess = burn;
          excess.add(prev, -g.tank_l);
          if (covered) {
            Form pos = excess;
            add_form_row(lp, std::move(pos), '>', 0.0);
            take.add(excess, 1);
          } else {
            Form neg = excess;
            add_form_row(lp, std::move(neg), '<', 0.0);
          }
          if (cd.gen_l[m] >> (t - 1) & 1u) {
            const int refill = lp.add_var(-g.tank_l, g.tank_l);
            take.add(refill, 1);
          }
          Form chain;
          chain.add(sofg[m][t], 1).add(prev, -1);
          chain.add(take, -1.0 / g.tank_l).add(burn, 1.0 / g.tank_l);
          add_form_row(lp, std::move(chain), '=', 0.0);
          site_take[at][t].add(take, 1);
        } else {
          Form chain;
          chain.add(sofg[m][t], 1);
          if (t > 1)
            chain.add(sofg[m][t - 1], -1);
          add_form_row(lp, std::move(chain), '=', t > 1 ? 0.0 : g.initial_sof);
        }
      }
    }

    // tankers
    std::vector<std::vector<int>> soft(MF);
    for (int h = 0; h < MF; ++h) {
      const Tanker& tk = sc.fleet.tankers[h];
      soft[h].assign(D + 1, -1);
      for (int t = 1; t <= D; ++t) soft[h][t] = lp.add_var(0.0, 1.0);
      for (int t = 1; t <= D; ++t) {
        Form chain;
        chain.add(soft[h][t], 1);
        if (t > 1) chain.add(soft[h][t - 1], -1);
        const int at = hpos(h, t);
        if (at >= 0 && (cd.tank_l[h] >> (t - 1) & 1u)) {
          const int tr = lp.add_var(-tk.rate_in_l_per_h * dt, tk.rate_out_l_per_h * dt);
          chain.add(tr, 1.0 / tk.tank_l);
          site_take[at][t].add(tr, -1);  // release adds to the stock
        }
        add_form_row(lp, std::move(chain), '=', t > 1 ? 0.0 : tk.initial_sof);
      }
    }

    // site stocks
    for (int s = 0; s < nF; ++s) {
      const double cap = s < nGsite ? sc.access.generator_sites[s].capacity_l
                                    : sc.access.depots[s - nGsite].capacity_l;
      const double init = s < nGsite ? sc.access.generator_sites[s].initial_sof
                                     : sc.access.depots[s - nGsite].initial_sof;
      std::vector<int> sof(D + 1, -1);
      for (int t = 1; t <= D; ++t) sof[t] = lp.add_var(0.0, 1.0);
      for (int t = 1; t <= D; ++t) {
        Form chain;
        chain.add(sof[t], 1);
        if (t > 1) chain.add(sof[t - 1], -1);
        chain.add(site_take[s][t], 1.0 / cap);
        add_form_row(lp, std::move(chain), '=', t > 1 ? 0.0 : init);
      }
    }

    // grid: voltages, closed-branch flows, nodal balance
    for (int t = 1; t <= D; ++t) {
      const uint32_t closed = cd.kappa[t - 1];
      std::vector<int> vq(N), bp(L, -1), bq(L, -1);
      for (int u = 0; u < N; ++u)
        vq[u] = u == root ? lp.add_var(1.0, 1.0) : lp.add_var(vlo, vhi);
      for (int b = 0; b < L; ++b) {
        if (!(closed >> b & 1u)) continue;
        const Branch& br = sc.network.branches[b];
        const double smax = br.capacity_kva / base;
        bp[b] = lp.add_var(-smax, smax);
        bq[b] = lp.add_var(-smax, smax);
        Form x;
        x.add(bp[b], 1);
        Form y;
        y.add(bq[b], 1);
        polygon_rows(lp, x, y, smax, kdisk);
        Form drop;
        drop.add(vq[bfrom[b]], 1).add(vq[bto[b]], -1);
        drop.add(bp[b], -2 * br.r_pu).add(bq[b], -2 * br.x_pu);
        add_form_row(lp, std::move(drop), '=', 0.0);
      }
      for (int u = 0; u < N; ++u) {
        const Node& nd = sc.network.nodes[u];
        Form pb, qb;
        for (int b = 0; b < L; ++b) {
          if (bp[b] < 0) continue;
          if (bfrom[b] == u) {
            pb.add(bp[b], 1);
            qb.add(bq[b], 1);
          }
          if (bto[b] == u) {
            pb.add(bp[b], -1);
            qb.add(bq[b], -1);
          }
        }
        pb.cst += don(u, t) * nd.p_load_kw[t - 1] / base;
        qb.cst += don(u, t) * nd.q_load_kvar[t - 1] / base;
        for (int k = 0; k < K; ++k)
          if (pc[k][t] >= 0 && storage_node[mpos(k, t)] == u) {
            pb.add(pd[k][t], -1.0 / base).add(pc[k][t], 1.0 / base);
            qb.add(qk[k][t], -1.0 / base);
          }
        for (int m = 0; m < MG; ++m)
          if (pg[m][t] >= 0 && fuel_node[gpos(m, t)] == u) {
            pb.add(pg[m][t], -1.0 / base);
            qb.add(qg[m][t], -1.0 / base);
          }
        const char sense = (u == root && fed) ? '>' : '=';
        add_form_row(lp, std::move(pb), sense, 0.0);
        add_form_row(lp, std::move(qb), sense, 0.0);
      }
    }
    return lp.solve(sol, opt.lp_eps);
  };

  // One stock-indicator/segment assignment; settles the charge-or-discharge
  // disjunction exactly when the relaxed point mixes the two.
  auto try_bseg = [&](const Cand& cd,
                      const std::vector<std::vector<int>>& bseg) -> bool {
    std::vector<double> sol;
    std::vector<std::array<int, 2>> cdv;
    if (!leaf_lp(cd, bseg, nullptr, &sol, &cdv)) return false;
    bool mixed = false;
    for (const auto& [a, b] : cdv)
      if (sol[a] > 1e-6 && sol[b] > 1e-6) mixed = true;
    if (!mixed) return true;
    std::vector<std::pair<int, int>> slots;  // (module, span)
    for (int k = 0; k < K; ++k)
      for (int t = 1; t <= D; ++t)
        if (!freeze_powers && cd.mod_pos[k * (D + 1) + t] >= 0)
          slots.push_back({k, t});
    if ((std::size_t{1} << slots.size()) > opt.max_leaf_combos)
      throw std::runtime_error("reference optimizer: completion space too large");
    for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
      std::vector<std::vector<int>> cdm(K, std::vector<int>(D, 0));
      for (std::size_t i = 0; i < slots.size(); ++i)
        cdm[slots[i].first][slots[i].second - 1] = (mask >> i & 1u) ? 1 : 2;
      if (leaf_lp(cd, bseg, &cdm, nullptr, nullptr)) return true;
    }
    return false;
  };

  // completion search for one skeleton
  auto leaf_feasible = [&](const Cand& cd) -> bool {
    // option lists for the stock-draw indicator and curve segment
    std::vector<std::vector<int>> spots(MG);  // spans at a generator node
    std::vector<std::size_t> osizes;
    for (int m = 0; m < MG; ++m) {
      if (freeze_powers) continue;
      for (int t = 1; t <= D; ++t) {
        const int at = static_cast<int>(cd.gen_pos[m * (D + 1) + t]);
        if (at >= 0 && at < nGsite) {
          spots[m].push_back(t);
          osizes.push_back(2 * segs[m].size());
        }
      }
    }
    std::size_t total = 1;
    for (std::size_t s : osizes) {
      total *= s;
      if (total > opt.max_leaf_combos)
        throw std::runtime_error("reference optimizer: completion space too large");
    }
    bool found = false;
    product_each(osizes, [&](const std::vector<std::size_t>& oi) {
      if (found) return;
      std::vector<std::vector<int>> bseg(MG);
      std::size_t cursor = 0;
      for (int m = 0; m < MG; ++m) {
        bseg[m].assign(D, -1);
        for (int t : spots[m]) bseg[m][t - 1] = static_cast<int>(oi[cursor++]);
      }
      if (try_bseg(cd, bseg)) found = true;
    });
    return found;
  };

  for (const Cand& cd : cands) {
    if (leaf_feasible(cd)) {
      res.feasible = true;
      res.objective = cd.obj;
      break;
    }
  }
  res.lps = lps;
  return res;
}

}  // namespace mersched
