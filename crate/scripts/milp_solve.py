#!/usr/bin/env python3
"""Solve an LP file written by `tts ilp-export` with scipy's MILP solver.

Usage: milp_solve.py MODEL.lp SOLUTION.sol

Only the subset of the LP format the exporter writes is understood:
a `Minimize` objective, `Subject To` rows with integer coefficients,
`Bounds` lines of the form `var = 0` and a `Binary` section.
The solution file holds `name value` lines, or `# status infeasible`.
"""

import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import lil_matrix

TERM = re.compile(r"([+-])?\s*(\d+)?\s*([A-Za-z_][A-Za-z0-9_]*)")


def parse_expr(text):
    terms = []
    for sign, coef, var in TERM.findall(text):
        value = int(coef) if coef else 1
        terms.append((-value if sign == "-" else value, var))
    return terms


def parse_lp(path):
    section = None
    objective = []
    rows = []
    fixed = []
    binaries = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line in ("Minimize", "Subject To", "Bounds", "Binary", "End"):
                section = line
                continue
            if section == "Minimize":
                objective += parse_expr(line.split(":", 1)[1])
            elif section == "Subject To":
                body = line.split(":", 1)[1]
                match = re.match(r"(.*?)(>=|<=|=)\s*(-?\d+)\s*$", body)
                if not match:
                    raise ValueError("cannot parse row: " + line)
                rows.append((parse_expr(match.group(1)), match.group(2), int(match.group(3))))
            elif section == "Bounds":
                var, value = [s.strip() for s in line.split("=")]
                fixed.append((var, float(value)))
            elif section == "Binary":
                binaries += line.split()
    return objective, rows, fixed, binaries


def main(lp_path, sol_path):
    objective, rows, fixed, binaries = parse_lp(lp_path)
    names = list(binaries)
    for _, var in objective:
        if var not in names:
            names.append(var)
    index = {name: i for i, name in enumerate(names)}
    c = np.zeros(len(names))
    for coef, var in objective:
        c[index[var]] += coef
    lower = np.zeros(len(names))
    upper = np.ones(len(names))
    for var, value in fixed:
        lower[index[var]] = upper[index[var]] = value

    constraints = []
    if rows:
        a = lil_matrix((len(rows), len(names)))
        lo = np.full(len(rows), -np.inf)
        hi = np.full(len(rows), np.inf)
        for r, (terms, sense, rhs) in enumerate(rows):
            for coef, var in terms:
                a[r, index[var]] += coef
            if sense in (">=", "="):
                lo[r] = rhs
            if sense in ("<=", "="):
                hi[r] = rhs
        constraints.append(LinearConstraint(a.tocsr(), lo, hi))

    if not names:
        with open(sol_path, "w") as fh:
            fh.write("# status optimal\n# objective 0\n")
        return 0

    result = milp(c, constraints=constraints, integrality=np.ones(len(names)), bounds=Bounds(lower, upper))
    if result.status == 2:
        with open(sol_path, "w") as fh:
            fh.write("# status infeasible\n")
        return 0
    if result.x is None:
        sys.stderr.write("solver failed: %s\n" % result.message)
        return 1
    with open(sol_path, "w") as fh:
        fh.write("# status optimal\n# objective %g\n" % result.fun)
        for name, value in zip(names, result.x):
            fh.write("%s %d\n" % (name, int(round(value))))
    return 0


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.stderr.write(__doc__)
        sys.exit(2)
    sys.exit(main(sys.argv[1], sys.argv[2]))
