#!/usr/bin/env python3
"""Solve an LP-format MILP and write a JSON result.

Reads the LP dialect written by the C++ library (Maximize / Subject To /
Bounds / Binaries / End), builds the matrices, and dispatches to one of two
solvers: HiGHS through scipy.optimize.milp, or GLPK through cvxopt.

The result file always carries: status, objective, bound, gap, seconds,
values, message. Exit code 0 means a result file was written, whatever the
solve outcome; anything else is a hard failure.
"""

import argparse
import json
import math
import re
import sys
import time

_TOKEN = re.compile(
    r"""\s*(?:
          (?P<op><=|>=|=<|=>|[<>=+\-:])
        | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
        | (?P<name>[A-Za-z][A-Za-z0-9_.(),]*)
        )""",
    re.X,
)

_SECTIONS = {
    "maximize", "maximise", "max", "minimize", "minimise", "min",
    "subject", "st", "s.t.", "bounds", "bound", "binaries", "binary",
    "bin", "generals", "general", "gen", "end",
}


def tokenize(text):
    out = []
    for line in text.splitlines():
        cut = line.find("\\")
        if cut >= 0:
            line = line[:cut]
        pos = 0
        while pos < len(line):
            m = _TOKEN.match(line, pos)
            if not m:
                if line[pos].isspace():
                    pos += 1
                    continue
                raise ValueError(f"bad LP token at: {line[pos:pos + 20]!r}")
            pos = m.end()
            out.append(m.group().strip())
    return out


class Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ValueError("unexpected end of LP input")
        self.pos += 1
        return t

    def at_section(self):
        t = self.peek()
        return t is not None and t.lower() in _SECTIONS

    def number(self):
        sign = 1.0
        t = self.next()
        while t in "+-":
            if t == "-":
                sign = -sign
            t = self.next()
        if t.lower() in ("inf", "infinity"):
            return sign * math.inf
        return sign * float(t)

    def terms(self):
        """Signed coefficient/name pairs until a sense token or section."""
        acc = []
        sign = 1.0
        coef = None
        while True:
            t = self.peek()
            if t is None or t in ("<=", ">=", "=<", "=>", "<", ">", "=") or self.at_section():
                break
            self.next()
            if t == "+":
                continue
            if t == "-":
                sign = -sign
                continue
            if re.fullmatch(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?", t):
                coef = (coef if coef is not None else 1.0) * float(t)
                continue
            acc.append((t, sign * (1.0 if coef is None else coef)))
            sign, coef = 1.0, None
        return acc


def parse_lp(text):
    p = Parser(tokenize(text))
    head = p.next().lower()
    if head in ("maximize", "maximise", "max"):
        maximize = True
    elif head in ("minimize", "minimise", "min"):
        maximize = False
    else:
        raise ValueError(f"expected an objective sense, got {head!r}")

    # Optional objective label.
    if p.peek() is not None and not p.at_section():
        save = p.pos
        tok = p.next()
        if p.peek() == ":":
            p.next()
        elif not re.fullmatch(r"[+\-]|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?", tok):
            # A bare name followed by more terms is still a label in this
            # dialect only when ':' follows; otherwise rewind.
            p.pos = save
        else:
            p.pos = save
    objective = p.terms()

    t = p.next().lower()
    if t == "subject":
        if p.peek() and p.peek().lower() == "to":
            p.next()
    elif t not in ("st", "s.t."):
        raise ValueError("expected the constraints section")

    rows = []
    while not (p.peek() is None or p.peek().lower() in
               ("bounds", "bound", "binaries", "binary", "bin",
                "generals", "general", "gen", "end")):
        name = None
        save = p.pos
        tok = p.peek()
        if tok is not None and re.fullmatch(r"[A-Za-z][A-Za-z0-9_.(),]*", tok):
            p.next()
            if p.peek() == ":":
                p.next()
                name = tok
            else:
                p.pos = save
        terms = p.terms()
        sense = p.next()
        if sense in ("=<",):
            sense = "<="
        if sense in ("=>",):
            sense = ">="
        if sense in ("<", ">"):
            sense += "="
        if sense not in ("<=", ">=", "="):
            raise ValueError(f"bad row sense {sense!r}")
        rhs = p.number()
        rows.append((name or f"r{len(rows)}", terms, sense, rhs))

    bounds = {}
    integers = set()
    while p.peek() is not None:
        section = p.next().lower()
        if section == "end":
            break
        if section in ("bounds", "bound"):
            while p.peek() is not None and not p.at_section():
                save = p.pos
                first = p.peek()
                if re.fullmatch(r"[A-Za-z][A-Za-z0-9_.(),]*", first) and first.lower() not in ("inf", "infinity"):
                    nm = p.next()
                    t2 = p.peek()
                    if t2 == "free":
                        p.next()
                        bounds[nm] = (-math.inf, math.inf)
                    elif t2 in ("<=", "=<", "<"):
                        p.next()
                        bounds[nm] = (bounds.get(nm, (0.0, math.inf))[0], p.number())
                    elif t2 in (">=", "=>", ">"):
                        p.next()
                        bounds[nm] = (p.number(), bounds.get(nm, (0.0, math.inf))[1])
                    elif t2 == "=":
                        p.next()
                        v = p.number()
                        bounds[nm] = (v, v)
                    else:
                        p.pos = save
                        break
                else:
                    lo = p.number()
                    s1 = p.next()
                    if s1 not in ("<=", "=<", "<"):
                        raise ValueError("bad bound line")
                    nm = p.next()
                    hi = math.inf
                    if p.peek() in ("<=", "=<", "<"):
                        p.next()
                        hi = p.number()
                    bounds[nm] = (lo, hi)
        elif section in ("binaries", "binary", "bin", "generals", "general", "gen"):
            is_binary = section.startswith("bin")
            while p.peek() is not None and not p.at_section():
                nm = p.next()
                integers.add(nm)
                if is_binary and nm not in bounds:
                    bounds[nm] = (0.0, 1.0)
        else:
            raise ValueError(f"unknown section {section!r}")

    names = []
    seen = {}
    def touch(nm):
        if nm not in seen:
            seen[nm] = len(names)
            names.append(nm)
    for nm, _ in objective:
        touch(nm)
    for _, terms, _, _ in rows:
        for nm, _ in terms:
            touch(nm)
    for nm in bounds:
        touch(nm)
    for nm in integers:
        touch(nm)

    return {
        "maximize": maximize,
        "objective": objective,
        "rows": rows,
        "bounds": bounds,
        "integers": integers,
        "names": names,
        "index": seen,
    }


def solve_highs(model, gap, time_limit):
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import csr_matrix

    n = len(model["names"])
    idx = model["index"]
    c = np.zeros(n)
    for nm, coef in model["objective"]:
        c[idx[nm]] += coef
    if model["maximize"]:
        c = -c

    data, indices, indptr = [], [], [0]
    lo, hi = [], []
    for _, terms, sense, rhs in model["rows"]:
        merged = {}
        for nm, coef in terms:
            merged[idx[nm]] = merged.get(idx[nm], 0.0) + coef
        for j, coef in sorted(merged.items()):
            indices.append(j)
            data.append(coef)
        indptr.append(len(data))
        if sense == "<=":
            lo.append(-math.inf)
            hi.append(rhs)
        elif sense == ">=":
            lo.append(rhs)
            hi.append(math.inf)
        else:
            lo.append(rhs)
            hi.append(rhs)
    A = csr_matrix((data, indices, indptr), shape=(len(model["rows"]), n))

    lb = np.zeros(n)
    ub = np.full(n, math.inf)
    for nm, (blo, bhi) in model["bounds"].items():
        lb[idx[nm]] = blo
        ub[idx[nm]] = bhi
    integrality = np.zeros(n)
    for nm in model["integers"]:
        integrality[idx[nm]] = 1

    options = {"mip_rel_gap": gap, "presolve": True}
    if time_limit > 0:
        options["time_limit"] = time_limit
    t0 = time.perf_counter()
    res = milp(
        c=c,
        constraints=LinearConstraint(A, lo, hi),
        integrality=integrality,
        bounds=Bounds(lb, ub),
        options=options,
    )
    if res.status == 2:
        # HiGHS presolve occasionally misreports feasible models with fixed
        # binaries as infeasible; confirm the verdict without presolve.
        res = milp(
            c=c,
            constraints=LinearConstraint(A, lo, hi),
            integrality=integrality,
            bounds=Bounds(lb, ub),
            options={**options, "presolve": False},
        )
    seconds = time.perf_counter() - t0

    sgn = -1.0 if model["maximize"] else 1.0
    objective = sgn * res.fun if res.fun is not None else None
    bound = None
    if getattr(res, "mip_dual_bound", None) is not None:
        bound = sgn * res.mip_dual_bound
    rel_gap = getattr(res, "mip_gap", None)
    if rel_gap is None and objective is not None and bound is not None:
        rel_gap = abs(objective - bound) / max(1.0, abs(objective))

    if res.status == 0:
        status = "optimal" if (rel_gap is None or rel_gap <= 1e-9) else "gap-limit"
    elif res.status == 1:
        status = "time-limit"
    elif res.status == 2:
        status = "infeasible"
    elif res.status == 3:
        status = "unbounded"
    else:
        status = "error"

    values = {}
    if res.x is not None:
        values = {nm: float(res.x[idx[nm]]) for nm in model["names"]}
    return {
        "status": status,
        "objective": objective,
        "bound": bound,
        "gap": rel_gap if rel_gap is not None and math.isfinite(rel_gap) else None,
        "seconds": seconds,
        "values": values,
        "message": str(res.message),
    }


def solve_glpk(model, gap, time_limit):
    from cvxopt import matrix, spmatrix
    from cvxopt import glpk

    n = len(model["names"])
    idx = model["index"]
    c = [0.0] * n
    for nm, coef in model["objective"]:
        c[idx[nm]] += coef
    if model["maximize"]:
        c = [-v for v in c]

    gi, gj, gv, h = [], [], [], []
    ai, aj, av, b = [], [], [], []

    def add_ineq(terms, rhs):
        r = len(h)
        for j, coef in terms:
            gi.append(r)
            gj.append(j)
            gv.append(coef)
        h.append(rhs)

    for _, terms, sense, rhs in model["rows"]:
        merged = {}
        for nm, coef in terms:
            merged[idx[nm]] = merged.get(idx[nm], 0.0) + coef
        items = sorted(merged.items())
        if sense == "<=":
            add_ineq(items, rhs)
        elif sense == ">=":
            add_ineq([(j, -coef) for j, coef in items], -rhs)
        else:
            r = len(b)
            for j, coef in items:
                ai.append(r)
                aj.append(j)
                av.append(coef)
            b.append(rhs)

    for nm, (blo, bhi) in model["bounds"].items():
        j = idx[nm]
        if math.isfinite(bhi):
            add_ineq([(j, 1.0)], bhi)
        if math.isfinite(blo):
            add_ineq([(j, -1.0)], -blo)
    for j in range(n):
        nm = model["names"][j]
        if nm not in model["bounds"]:
            add_ineq([(j, -1.0)], 0.0)  # default lower bound 0

    G = spmatrix(gv, gi, gj, (len(h), n))
    A = spmatrix(av, ai, aj, (len(b), n)) if b else None
    I = {idx[nm] for nm in model["integers"]}

    glpk.options["msg_lev"] = "GLP_MSG_OFF"
    if time_limit > 0:
        glpk.options["tm_lim"] = int(time_limit * 1000)
    if gap > 0:
        glpk.options["mip_gap"] = gap

    t0 = time.perf_counter()
    if A is not None:
        status, x = glpk.ilp(matrix(c), G, matrix(h), A, matrix(b), I=I, B=set())
    else:
        status, x = glpk.ilp(matrix(c), G, matrix(h), I=I, B=set())
    seconds = time.perf_counter() - t0

    sgn = -1.0 if model["maximize"] else 1.0
    st = status.lower()
    if "optimal" in st:
        out_status = "optimal"
    elif "infeasible" in st and "dual" not in st:
        out_status = "infeasible"
    elif "dual infeasible" in st or "unbounded" in st:
        out_status = "unbounded"
    else:
        out_status = "time-limit"

    objective = None
    values = {}
    if x is not None:
        xs = list(x)
        # c was negated for maximization; sgn undoes it exactly once.
        objective = sgn * sum(ci * xi for ci, xi in zip(c, xs))
        values = {nm: float(xs[idx[nm]]) for nm in model["names"]}
    bound = objective if out_status == "optimal" else None
    rel_gap = 0.0 if out_status == "optimal" else None
    return {
        "status": out_status,
        "objective": objective,
        "bound": bound,
        "gap": rel_gap,
        "seconds": seconds,
        "values": values,
        "message": status,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lp", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--solver", choices=("highs", "glpk"), default="highs")
    ap.add_argument("--gap", type=float, default=0.0)
    ap.add_argument("--time-limit", type=float, default=0.0)
    args = ap.parse_args()

    with open(args.lp, "r", encoding="utf-8") as f:
        model = parse_lp(f.read())

    if args.solver == "highs":
        result = solve_highs(model, args.gap, args.time_limit)
    else:
        result = solve_glpk(model, args.gap, args.time_limit)

    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(result, f, allow_nan=False)
    return 0


if __name__ == "__main__":
    sys.exit(main())
