#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "model_ir.hpp"

namespace mersched {

// Shortest exact decimal form; round-trips through strtod to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Writer: emits the model in LP format. Output is byte-deterministic for a
// given model: fixed section order, canonical term order, shortest numerals.
// ---------------------------------------------------------------------------

namespace lp_detail {

class LineBuilder {
 public:
  explicit LineBuilder(std::string& out, std::size_t wrap = 200)
      : out_(out), wrap_(wrap) {}
  void token(const std::string& t) {
    if (col_ > 1 && col_ + t.size() + 1 > wrap_) {
      out_ += "\n ";
      col_ = 1;
    } else if (col_ > 0) {
      out_ += ' ';
      ++col_;
    }
    out_ += t;
    col_ += t.size();
  }
  void end_line() {
    out_ += '\n';
    col_ = 0;
  }

 private:
  std::string& out_;
  std::size_t wrap_;
  std::size_t col_ = 0;
};

inline void write_terms(LineBuilder& lb, const LinExpr& e,
                        const std::vector<VarDef>& vars) {
  if (e.terms.empty()) {
    lb.token("0");
    lb.token(vars.empty() ? "none" : vars.front().name);
    return;
  }
  for (const LinTerm& t : e.terms) {
    lb.token(t.coef < 0 ? "-" : "+");
    lb.token(format_double(std::abs(t.coef)));
    lb.token(vars[t.var].name);
  }
}

}  // namespace lp_detail

inline std::string write_lp(const ModelIR& ir) {
  std::string out;
  lp_detail::LineBuilder lb(out);

  out += "Maximize\n";
  lb.token("obj:");
  LinExpr obj = ir.objective;
  obj.canonicalize();
  lp_detail::write_terms(lb, obj, ir.vars);
  lb.end_line();

  out += "Subject To\n";
  for (const LinRow& r : ir.rows) {
    lb.token(r.name + ":");
    lp_detail::write_terms(lb, r.expr, ir.vars);
    switch (r.sense) {
      case Sense::le: lb.token("<="); break;
      case Sense::ge: lb.token(">="); break;
      case Sense::eq: lb.token("="); break;
    }
    lb.token(format_double(r.rhs));
    lb.end_line();
  }

  out += "Bounds\n";
  for (const VarDef& v : ir.vars) {
    if (v.lb == v.ub) {
      lb.token(v.name);
      lb.token("=");
      lb.token(format_double(v.lb));
    } else {
      lb.token(format_double(v.lb));
      lb.token("<=");
      lb.token(v.name);
      lb.token("<=");
      lb.token(format_double(v.ub));
    }
    lb.end_line();
  }

  bool any_binary = false;
  for (const VarDef& v : ir.vars) any_binary |= v.integral;
  if (any_binary) {
    out += "Binaries\n";
    for (const VarDef& v : ir.vars)
      if (v.integral) {
        lb.token(v.name);
        lb.end_line();
      }
  }
  out += "End\n";
  return out;
}

// ---------------------------------------------------------------------------
// Reader: parses the dialect the writer emits, plus common spelling variants.
// ---------------------------------------------------------------------------

struct LpBound {
  double lb = 0;
  double ub = 0;
};

struct LpRow {
  std::string name;
  std::vector<std::pair<std::string, double>> terms;
  Sense sense = Sense::le;
  double rhs = 0;
};

struct LpModel {
  bool maximize = true;
  std::vector<std::pair<std::string, double>> objective;
  std::vector<LpRow> rows;
  std::map<std::string, LpBound> bounds;
  std::vector<std::string> binaries;
};

namespace lp_detail {

struct Lexer {
  const std::string& s;
  std::size_t i = 0;
  std::vector<std::string> pending;

  explicit Lexer(const std::string& text) : s(text) {}

  std::string next() {
    if (!pending.empty()) {
      std::string t = std::move(pending.back());
      pending.pop_back();
      return t;
    }
    while (i < s.size()) {
      char c = s[i];
      if (c == '\\') {  // comment to end of line
        while (i < s.size() && s[i] != '\n') ++i;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c == '+' || c == '-' || c == ':') {
        ++i;
        return std::string(1, c);
      }
      if (c == '<' || c == '>' || c == '=') {
        ++i;
        if (i < s.size() && (s[i] == '=' || s[i] == '<' || s[i] == '>')) {
          char d = s[i++];
          if (c == '=' && d == '<') return "<=";
          if (c == '=' && d == '>') return ">=";
          return std::string(1, c) + "=";
        }
        if (c == '<') return "<=";
        if (c == '>') return ">=";
        return "=";
      }
      std::size_t j = i;
      while (j < s.size()) {
        char d = s[j];
        if (std::isspace(static_cast<unsigned char>(d)) || d == '+' || d == ':' ||
            d == '<' || d == '>' || d == '=' || d == '\\')
          break;
        // '-' splits tokens except inside an exponent (1e-5).
        if (d == '-' && !(j > i && (s[j - 1] == 'e' || s[j - 1] == 'E') &&
                          std::isdigit(static_cast<unsigned char>(s[i]))))
          break;
        ++j;
      }
      std::string t = s.substr(i, j - i);
      i = j;
      return t;
    }
    return "";
  }

  std::string peek() {
    if (pending.empty()) pending.push_back(next());
    return pending.back();
  }
  void unread(std::string t) { pending.push_back(std::move(t)); }
};

inline std::string lower(std::string t) {
  for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return t;
}

inline bool is_section_word(const std::string& lt) {
  return lt == "subject" || lt == "st" || lt == "s.t." || lt == "bounds" ||
         lt == "binaries" || lt == "binary" || lt == "bin" || lt == "generals" ||
         lt == "general" || lt == "gen" || lt == "end";
}

inline bool looks_numeric(const std::string& t) {
  if (t.empty()) return false;
  char c = t[0];
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
         lower(t) == "inf" || lower(t) == "infinity";
}

inline double read_number(Lexer& lx, const std::string& where) {
  double sign = 1;
  std::string t = lx.next();
  while (t == "+" || t == "-") {
    if (t == "-") sign = -sign;
    t = lx.next();
  }
  if (t.empty()) throw std::runtime_error("lp parse: number expected " + where);
  std::string lt = lower(t);
  if (lt == "inf" || lt == "infinity")
    return sign * std::numeric_limits<double>::infinity();
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0')
    throw std::runtime_error("lp parse: bad number '" + t + "' " + where);
  return sign * v;
}

// Reads a linear term list, stopping at a sense token or section keyword.
// Returns the stopping token via `stop`.
inline std::vector<std::pair<std::string, double>> read_terms(Lexer& lx,
                                                              std::string& stop) {
  std::vector<std::pair<std::string, double>> terms;
  for (;;) {
    std::string t = lx.peek();
    std::string lt = lower(t);
    if (t.empty() || t == "<=" || t == ">=" || t == "=" || is_section_word(lt)) {
      stop = t;
      return terms;
    }
    double sign = 1;
    t = lx.next();
    while (t == "+" || t == "-") {
      if (t == "-") sign = -sign;
      t = lx.next();
    }
    if (looks_numeric(t)) {
      char* end = nullptr;
      double coef = std::strtod(t.c_str(), &end) * sign;
      std::string name = lx.next();
      if (name.empty()) throw std::runtime_error("lp parse: dangling coefficient");
      terms.push_back({name, coef});
    } else {
      terms.push_back({t, sign});
    }
  }
}

}  // namespace lp_detail

inline LpModel parse_lp(const std::string& text) {
  using namespace lp_detail;
  Lexer lx(text);
  LpModel model;

  std::string t = lower(lx.next());
  if (t == "maximize" || t == "max" || t == "maximise")
    model.maximize = true;
  else if (t == "minimize" || t == "min" || t == "minimise")
    model.maximize = false;
  else
    throw std::runtime_error("lp parse: expected objective sense, got '" + t + "'");

  // Optional objective label ("obj:").
  {
    std::string a = lx.next();
    if (lx.peek() == ":")
      lx.next();
    else
      lx.unread(a);
  }
  std::string stop;
  model.objective = read_terms(lx, stop);
  if (stop == "<=" || stop == ">=" || stop == "=")
    throw std::runtime_error("lp parse: objective must not have a relation");

  t = lower(lx.next());
  if (t == "subject") {
    if (lower(lx.next()) != "to") throw std::runtime_error("lp parse: expected 'To'");
  } else if (t != "st" && t != "s.t.") {
    throw std::runtime_error("lp parse: expected constraint section, got '" + t + "'");
  }

  for (;;) {
    std::string first = lx.peek();
    std::string lf = lower(first);
    if (first.empty()) throw std::runtime_error("lp parse: unexpected end of file");
    if (lf == "bounds" || lf == "binaries" || lf == "binary" || lf == "bin" ||
        lf == "end" || lf == "generals" || lf == "general" || lf == "gen")
      break;
    LpRow row;
    first = lx.next();
    if (lx.peek() == ":") {
      lx.next();
      row.name = first;
    } else {
      lx.unread(first);
      row.name = "r" + std::to_string(model.rows.size());
    }
    row.terms = read_terms(lx, stop);
    if (stop == "<=")
      row.sense = Sense::le;
    else if (stop == ">=")
      row.sense = Sense::ge;
    else if (stop == "=")
      row.sense = Sense::eq;
    else
      throw std::runtime_error("lp parse: row '" + row.name + "' missing relation");
    lx.next();
    row.rhs = read_number(lx, "after relation in row " + row.name);
    model.rows.push_back(std::move(row));
  }

  for (;;) {
    std::string section = lower(lx.next());
    if (section == "end" || section.empty()) break;
    if (section == "bounds") {
      for (;;) {
        std::string a = lx.peek();
        std::string la = lower(a);
        if (a.empty() || is_section_word(la)) break;
        if (looks_numeric(a) || a == "+" || a == "-") {
          double lo = read_number(lx, "in bounds");
          std::string rel = lx.next();
          if (rel != "<=") throw std::runtime_error("lp parse: expected <= in bounds");
          std::string name = lx.next();
          auto& b = model.bounds[name];
          b.lb = lo;
          b.ub = std::numeric_limits<double>::infinity();
          if (lx.peek() == "<=") {
            lx.next();
            b.ub = read_number(lx, "in bounds");
          }
        } else {
          std::string name = lx.next();
          std::string rel = lx.next();
          std::string lrel = lower(rel);
          auto& b = model.bounds[name];
          if (lrel == "free") {
            b.lb = -std::numeric_limits<double>::infinity();
            b.ub = std::numeric_limits<double>::infinity();
          } else if (rel == "=") {
            double v = read_number(lx, "in bounds");
            b.lb = b.ub = v;
          } else if (rel == "<=") {
            b.lb = 0;
            b.ub = read_number(lx, "in bounds");
          } else if (rel == ">=") {
            b.lb = read_number(lx, "in bounds");
            b.ub = std::numeric_limits<double>::infinity();
          } else {
            throw std::runtime_error("lp parse: bad bounds line near '" + name + "'");
          }
        }
      }
    } else if (section == "binaries" || section == "binary" || section == "bin" ||
               section == "generals" || section == "general" || section == "gen") {
      bool binary = section[0] == 'b';
      for (;;) {
        std::string a = lx.peek();
        if (a.empty() || is_section_word(lower(a))) break;
        lx.next();
        if (binary) model.binaries.push_back(a);
      }
    } else {
      throw std::runtime_error("lp parse: unknown section '" + section + "'");
    }
  }
  return model;
}

}  // namespace mersched
