#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mersched {

enum class Sense { le, ge, eq };

struct VarDef {
  std::string name;
  double lb = 0;
  double ub = 0;
  bool integral = false;
};

struct LinTerm {
  int var = -1;
  double coef = 0;
};

struct LinExpr {
  std::vector<LinTerm> terms;

  LinExpr& add(int var, double coef) {
    terms.push_back({var, coef});
    return *this;
  }
  // Merge duplicate variables, drop exact zeros, order by column index.
  void canonicalize() {
    std::sort(terms.begin(), terms.end(),
              [](const LinTerm& a, const LinTerm& b) { return a.var < b.var; });
    std::vector<LinTerm> out;
    for (const LinTerm& t : terms) {
      if (!out.empty() && out.back().var == t.var)
        out.back().coef += t.coef;
      else
        out.push_back(t);
    }
    std::erase_if(out, [](const LinTerm& t) { return t.coef == 0.0; });
    terms = std::move(out);
  }
};

struct LinRow {
  std::string family;  // label tying the row to its constraint family
  std::string name;    // unique row name, safe for LP files
  LinExpr expr;
  Sense sense = Sense::le;
  double rhs = 0;
};

class ModelIR {
 public:
  std::vector<VarDef> vars;
  std::vector<LinRow> rows;
  LinExpr objective;  // always maximized

  int add_var(const std::string& name, double lb, double ub, bool integral) {
    if (index_.count(name)) throw std::logic_error("duplicate variable: " + name);
    if (lb > ub) throw std::logic_error("empty bound range for " + name);
    vars.push_back({name, lb, ub, integral});
    int id = static_cast<int>(vars.size()) - 1;
    index_[name] = id;
    return id;
  }
  int add_binary(const std::string& name) { return add_var(name, 0, 1, true); }

  int var_id(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("unknown variable: " + name);
    return it->second;
  }
  bool has_var(const std::string& name) const { return index_.count(name) != 0; }

  // Pin a variable to a constant by collapsing its bounds (no extra row).
  void fix_var(int id, double value) {
    vars[id].lb = value;
    vars[id].ub = value;
  }

  void add_row(const std::string& family, LinExpr expr, Sense sense, double rhs) {
    expr.canonicalize();
    LinRow row;
    row.family = family;
    row.name = row_name(family);
    row.expr = std::move(expr);
    row.sense = sense;
    row.rhs = rhs;
    rows.push_back(std::move(row));
  }

  // lo <= expr <= hi as two rows under one family.
  void add_range(const std::string& family, const LinExpr& expr, double lo, double hi) {
    add_row(family, expr, Sense::ge, lo);
    add_row(family, expr, Sense::le, hi);
  }

  std::map<std::string, long> rows_by_family() const {
    std::map<std::string, long> out;
    for (const LinRow& r : rows) out[r.family]++;
    return out;
  }

  long binary_count() const {
    return std::count_if(vars.begin(), vars.end(),
                         [](const VarDef& v) { return v.integral; });
  }
  long continuous_count() const {
    return static_cast<long>(vars.size()) - binary_count();
  }

  // LP names reject '-', so family labels are folded into [A-Za-z0-9_.].
  static std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'))
        c = '_';
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])))
      out.insert(out.begin(), 'c');
    return out;
  }

 private:
  std::map<std::string, int> index_;
  std::map<std::string, long> family_counter_;

  std::string row_name(const std::string& family) {
    long n = family_counter_[family]++;
    return sanitize(family) + "." + std::to_string(n);
  }
};

// ---------------------------------------------------------------------------
// Assignment evaluation (used by tests and the validator's row-level pass)
// ---------------------------------------------------------------------------

inline double eval_expr(const LinExpr& e, const std::vector<double>& x) {
  double s = 0;
  for (const LinTerm& t : e.terms) s += t.coef * x[t.var];
  return s;
}

struct RowViolation {
  int row = -1;
  double amount = 0;  // positive slack deficit
};

inline double row_violation(const LinRow& r, const std::vector<double>& x) {
  double v = eval_expr(r.expr, x);
  switch (r.sense) {
    case Sense::le: return std::max(0.0, v - r.rhs);
    case Sense::ge: return std::max(0.0, r.rhs - v);
    case Sense::eq: return std::abs(v - r.rhs);
  }
  return 0;
}

inline std::vector<RowViolation> violated_rows(const ModelIR& ir,
                                               const std::vector<double>& x,
                                               double tol) {
  std::vector<RowViolation> out;
  for (std::size_t i = 0; i < ir.rows.size(); ++i) {
    double v = row_violation(ir.rows[i], x);
    if (v > tol) out.push_back({static_cast<int>(i), v});
  }
  return out;
}

inline std::vector<RowViolation> violated_bounds(const ModelIR& ir,
                                                 const std::vector<double>& x,
                                                 double tol) {
  std::vector<RowViolation> out;
  for (std::size_t i = 0; i < ir.vars.size(); ++i) {
    double over = std::max(x[i] - ir.vars[i].ub, ir.vars[i].lb - x[i]);
    if (over > tol) out.push_back({static_cast<int>(i), over});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gadgets
// ---------------------------------------------------------------------------

struct BoolLit {
  int var = -1;
  bool negated = false;
};

// z == AND of the literals, for binary z and binary literal variables.
// Emits |lits| upper rows plus one lower row.
inline void and_product(ModelIR& ir, const std::string& family, int z,
                        const std::vector<BoolLit>& lits) {
  double slack = 0;
  LinExpr lower;
  lower.add(z, 1.0);
  for (const BoolLit& l : lits) {
    LinExpr upper;
    upper.add(z, 1.0);
    if (l.negated) {
      // z <= 1 - v
      upper.add(l.var, 1.0);
      ir.add_row(family, upper, Sense::le, 1.0);
      lower.add(l.var, 1.0);
      slack += 1.0;
    } else {
      upper.add(l.var, -1.0);
      ir.add_row(family, upper, Sense::le, 0.0);
      lower.add(l.var, -1.0);
    }
  }
  // z >= sum(lits) - (k - 1)
  ir.add_row(family, lower, Sense::ge,
             slack - (static_cast<double>(lits.size()) - 1.0));
}

inline void append_scaled(LinExpr& dst, const LinExpr& src, double factor) {
  for (const LinTerm& t : src.terms) dst.add(t.var, t.coef * factor);
}

// Inner polygonal approximation of x^2 + y^2 <= radius^2 with k segments:
// the regular k-gon inscribed in the disk, vertices at angles 2*pi*m/k.
inline void polygonal_disk(ModelIR& ir, const std::string& family, const LinExpr& x,
                           const LinExpr& y, double radius, int k) {
  if (k < 3) throw std::invalid_argument("polygonal_disk needs k >= 3");
  const double pi = std::acos(-1.0);
  const double edge = radius * std::cos(pi / k);
  for (int m = 0; m < k; ++m) {
    double theta = (2.0 * m + 1.0) * pi / k;
    LinExpr e;
    append_scaled(e, x, std::cos(theta));
    append_scaled(e, y, std::sin(theta));
    ir.add_row(family, e, Sense::le, edge);
  }
}

struct PiecewiseSegment {
  double p_lo = 0;
  double p_hi = 0;
  double slope = 0;      // output per unit input
  double intercept = 0;  // output offset
};

// Segment-selected affine relation: with exactly one tau set (chosen elsewhere),
//   out == slope_l * in + intercept_l  and  in in [p_lo_l, p_hi_l].
// Four rows per segment. bigM must dominate every attainable residual given the
// stated bounds on `in` and `out`, otherwise the relation silently tightens;
// such a bigM is rejected.
inline void piecewise_bigM(ModelIR& ir, const std::string& family, const LinExpr& out,
                           double out_lo, double out_hi, const LinExpr& in,
                           double in_lo, double in_hi, const std::vector<int>& tau,
                           const std::vector<PiecewiseSegment>& segs, double bigM) {
  if (tau.size() != segs.size())
    throw std::invalid_argument("piecewise_bigM: one indicator per segment");
  double required = 0;
  for (const PiecewiseSegment& s : segs) {
    double v1 = s.slope * in_lo + s.intercept;
    double v2 = s.slope * in_hi + s.intercept;
    double seg_min = std::min(v1, v2), seg_max = std::max(v1, v2);
    required = std::max(required, out_hi - seg_min);
    required = std::max(required, seg_max - out_lo);
    required = std::max(required, s.p_lo - in_lo);
    required = std::max(required, in_hi - s.p_hi);
  }
  if (bigM < required * (1.0 - 1e-12))
    throw std::invalid_argument("piecewise_bigM: bigM " + std::to_string(bigM) +
                                " below required " + std::to_string(required));
  for (std::size_t l = 0; l < segs.size(); ++l) {
    const PiecewiseSegment& s = segs[l];
    LinExpr value = out;
    append_scaled(value, in, -s.slope);
    LinExpr v_up = value;
    v_up.add(tau[l], bigM);
    ir.add_row(family, v_up, Sense::le, s.intercept + bigM);
    LinExpr v_dn = value;
    v_dn.add(tau[l], -bigM);
    ir.add_row(family, v_dn, Sense::ge, s.intercept - bigM);
    LinExpr d_up = in;
    d_up.add(tau[l], bigM);
    ir.add_row(family, d_up, Sense::le, s.p_hi + bigM);
    LinExpr d_dn = in;
    d_dn.add(tau[l], -bigM);
    ir.add_row(family, d_dn, Sense::ge, s.p_lo - bigM);
  }
}

}  // namespace mersched
