#!/usr/bin/env python3
"""Reference external MILP solver for the mfd-safe bridge.

Usage: lp_milp_solve.py MODEL.lp SOLUTION.out TIME_LIMIT_SEC SEED

Reads the LP subset emitted by the library (Maximize/Minimize, Subject To,
Bounds, Binaries, Generals, End), solves it with scipy's HiGHS MILP wrapper,
and writes a solution file: one status line (optimal/infeasible/timeout)
followed by `name value` pairs for every variable.
"""

import re
import sys

import numpy as np
from scipy.optimize import milp, LinearConstraint, Bounds

TERM_RE = re.compile(r"([+-]?)\s*(\d+(?:\.\d+)?)?\s*\*?\s*([A-Za-z_][A-Za-z0-9_()\[\]]*)")


def parse_terms(expr):
    terms = []
    for sign, coef, name in TERM_RE.findall(expr):
        c = float(coef) if coef else 1.0
        if sign == "-":
            c = -c
        terms.append((name, c))
    return terms


def parse_lp(path):
    with open(path) as f:
        lines = [ln.split("\\")[0].rstrip() for ln in f]

    section = None
    maximize = False
    objective = []
    rows = []  # (terms, sense, rhs)
    bounds = {}  # name -> [lo, hi]
    binaries = set()
    generals = set()

    pending = ""

    def flush_row():
        nonlocal pending
        s = pending.strip()
        pending = ""
        if not s:
            return
        if ":" in s:
            s = s.split(":", 1)[1].strip()
        m = re.search(r"(<=|>=|=)", s)
        if section == "obj":
            objective.extend(parse_terms(s))
            return
        if not m:
            raise ValueError("constraint without relation: " + s)
        lhs, sense, rhs = s[: m.start()], m.group(1), s[m.end():]
        rows.append((parse_terms(lhs), sense, float(rhs)))

    for raw in lines:
        s = raw.strip()
        if not s:
            continue
        low = s.lower()
        if low in ("maximize", "minimize", "subject to", "st", "s.t.", "bounds",
                   "binaries", "binary", "generals", "general", "end"):
            flush_row()
            if low == "maximize":
                section, maximize = "obj", True
            elif low == "minimize":
                section, maximize = "obj", False
            elif low in ("subject to", "st", "s.t."):
                section = "rows"
            elif low == "bounds":
                section = "bounds"
            elif low in ("binaries", "binary"):
                section = "bin"
            elif low in ("generals", "general"):
                section = "gen"
            else:
                section = None
            continue
        if section in ("obj", "rows"):
            pending += " " + s
            if section == "rows" and re.search(r"(<=|>=|=)\s*[+-]?\d", pending):
                flush_row()
        elif section == "bounds":
            m = re.match(r"([+-]?\d+(?:\.\d+)?)\s*<=\s*(\S+)\s*<=\s*([+-]?\d+(?:\.\d+)?)", s)
            if m:
                bounds[m.group(2)] = [float(m.group(1)), float(m.group(3))]
                continue
            m = re.match(r"(\S+)\s*>=\s*([+-]?\d+(?:\.\d+)?)", s)
            if m:
                bounds.setdefault(m.group(1), [0.0, np.inf])[0] = float(m.group(2))
                continue
            m = re.match(r"(\S+)\s*<=\s*([+-]?\d+(?:\.\d+)?)", s)
            if m:
                bounds.setdefault(m.group(1), [0.0, np.inf])[1] = float(m.group(2))
                continue
            m = re.match(r"(\S+)\s*free", s, re.IGNORECASE)
            if m:
                bounds[m.group(1)] = [-np.inf, np.inf]
                continue
            raise ValueError("unparsed bound: " + s)
        elif section == "bin":
            binaries.update(s.split())
        elif section == "gen":
            generals.update(s.split())
    flush_row()

    names = []
    seen = set()

    def note(name):
        if name not in seen:
            seen.add(name)
            names.append(name)

    for name, _ in objective:
        note(name)
    for terms, _, _ in rows:
        for name, _ in terms:
            note(name)
    for name in list(bounds) + sorted(binaries) + sorted(generals):
        note(name)

    return names, maximize, objective, rows, bounds, binaries


def main():
    if len(sys.argv) != 5:
        print("usage: lp_milp_solve.py model.lp solution.out time_limit_sec seed",
              file=sys.stderr)
        return 2
    model_path, sol_path, time_limit, seed = sys.argv[1:5]
    del seed  # HiGHS runs deterministically for these models

    names, maximize, objective, rows, bounds, binaries = parse_lp(model_path)
    idx = {n: i for i, n in enumerate(names)}
    n = len(names)

    c = np.zeros(n)
    for name, coef in objective:
        c[idx[name]] += coef
    if maximize:
        c = -c

    lo = np.zeros(n)
    hi = np.full(n, np.inf)
    for name, (a, b) in bounds.items():
        lo[idx[name]], hi[idx[name]] = a, b
    for name in binaries:
        lo[idx[name]] = max(lo[idx[name]], 0.0)
        hi[idx[name]] = min(hi[idx[name]], 1.0)

    A = np.zeros((len(rows), n))
    cl = np.zeros(len(rows))
    cu = np.zeros(len(rows))
    for r, (terms, sense, rhs) in enumerate(rows):
        for name, coef in terms:
            A[r, idx[name]] += coef
        if sense == "<=":
            cl[r], cu[r] = -np.inf, rhs
        elif sense == ">=":
            cl[r], cu[r] = rhs, np.inf
        else:
            cl[r] = cu[r] = rhs

    res = milp(
        c,
        constraints=LinearConstraint(A, cl, cu) if len(rows) else (),
        bounds=Bounds(lo, hi),
        integrality=np.ones(n),  # every variable in these models is integer
        options={"time_limit": float(time_limit)},
    )

    with open(sol_path, "w") as f:
        if res.status == 0:
            f.write("optimal\n")
            for i, name in enumerate(names):
                f.write(f"{name} {round(float(res.x[i]))}\n")
        elif res.status == 2:
            f.write("infeasible\n")
        elif res.status == 1:
            f.write("timeout\n")
        else:
            f.write("timeout\n")
            print(f"solver status {res.status}: {res.message}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
