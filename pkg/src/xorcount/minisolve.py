#!/usr/bin/env python3
"""Tiny standalone SAT solver for extended DIMACS (``x`` parity lines).

Plays the role of a third-party solver binary behind the external
backend: reads one file, prints ``s SATISFIABLE`` plus ``v`` lines (or
``s UNSATISFIABLE``), exits 10/20.  Plain DPLL with unit propagation on
clauses and parity constraints; depends on nothing outside the standard
library and intentionally does not import the rest of this package.
"""

import sys


def parse(path):
    num_vars = 0
    clauses, xors = [], []
    with open(path) as fh:
        for raw in fh:
            s = raw.strip()
            if not s or s.startswith("c"):
                continue
            if s.startswith("%"):
                break
            if s.startswith("p"):
                parts = s.split()
                num_vars = int(parts[2])
                continue
            if s.startswith("x"):
                toks = s[1:].split()
                vs, rhs = [], 1
                for t in toks:
                    lit = int(t)
                    if lit == 0:
                        break
                    if lit < 0:
                        rhs ^= 1
                    vs.append(abs(lit))
                xors.append((vs, rhs))
                continue
            lits = [int(t) for t in s.split()]
            cl = []
            for lit in lits:
                if lit == 0:
                    clauses.append(cl)
                    cl = []
                else:
                    cl.append(lit)
            if cl:
                clauses.append(cl)  # tolerate missing terminator at line end
    return num_vars, clauses, xors


def solve(num_vars, clauses, xors):
    values = [0] * (num_vars + 1)
    trail = []

    def set_lit(lit):
        v = abs(lit)
        want = 1 if lit > 0 else -1
        if values[v]:
            return values[v] == want
        values[v] = want
        trail.append(v)
        return True

    def propagate():
        changed = True
        while changed:
            changed = False
            for cl in clauses:
                unit = None
                open_lits = 0
                sat = False
                for lit in cl:
                    lv = values[abs(lit)]
                    if lv == 0:
                        unit = lit
                        open_lits += 1
                    elif (lv > 0) == (lit > 0):
                        sat = True
                        break
                if sat:
                    continue
                if open_lits == 0:
                    return False
                if open_lits == 1:
                    set_lit(unit)
                    changed = True
            for vs, rhs in xors:
                par = 0
                unk = None
                open_vars = 0
                for v in vs:
                    lv = values[v]
                    if lv == 0:
                        unk = v
                        open_vars += 1
                        if open_vars > 1:
                            break
                    elif lv > 0:
                        par ^= 1
                if open_vars == 0:
                    if par != rhs:
                        return False
                elif open_vars == 1:
                    set_lit(unk if (par ^ rhs) else -unk)
                    changed = True
        return True

    def dpll():
        if not propagate():
            return False
        v = 0
        for i in range(1, num_vars + 1):
            if values[i] == 0:
                v = i
                break
        if v == 0:
            return True
        for sign in (1, -1):
            mark = len(trail)
            values[v] = sign
            trail.append(v)
            if dpll():
                return True
            for u in trail[mark:]:
                values[u] = 0
            del trail[mark:]
        return False

    if dpll():
        return values
    return None


def main():
    if len(sys.argv) != 2:
        print("usage: minisolve.py FILE", file=sys.stderr)
        return 1
    num_vars, clauses, xors = parse(sys.argv[1])
    sys.setrecursionlimit(10000 + 10 * num_vars)
    model = solve(num_vars, clauses, xors)
    if model is None:
        print("s UNSATISFIABLE")
        return 20
    print("s SATISFIABLE")
    lits = [v if model[v] > 0 else -v for v in range(1, num_vars + 1)]
    for i in range(0, len(lits), 20):
        chunk = lits[i : i + 20]
        tail = " 0" if i + 20 >= len(lits) else ""
        print("v " + " ".join(str(x) for x in chunk) + tail)
    if not lits:
        print("v 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())
