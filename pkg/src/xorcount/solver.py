"""A small CDCL SAT solver.

Conflict-driven clause learning with two watched literals, first-UIP
conflict analysis, VSIDS-style activity decision order with phase
saving, and Luby restarts (base interval 128 conflicts; the policy is
fixed so runs are reproducible).  Parity constraints are not handled
natively; callers CNF-encode them first.

The solver is incremental in the way enumeration needs: clauses may be
added between solve() calls (the solver backtracks to the root level
first) and learnt clauses survive across calls.  Instances here are
small, so there is no clause-database reduction and decisions use a
linear argmax scan instead of a heap.
"""

from __future__ import annotations

import time
from typing import Optional

_RESTART_BASE = 128
_ACT_DECAY = 1.0 / 0.95
_ACT_RESCALE = 1e100


class DeadlineExceeded(Exception):
    """A solve ran past its wall-clock deadline."""


def _luby(i: int) -> int:
    # i-th term (1-based) of the Luby restart sequence
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) // 2
        seq -= 1
        i %= size
    return 1 << seq


class Solver:
    def __init__(self, num_vars: int = 0):
        self.nv = 0
        self.values: list[int] = [0]  # per var: 1 true, -1 false, 0 unassigned
        self.levels: list[int] = [0]
        self.reasons: list[Optional[list[int]]] = [None]
        self.activity: list[float] = [0.0]
        self.phase: list[int] = [0]
        self.watches: list[list[list[int]]] = [[], []]
        self._seen = bytearray(1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.var_inc = 1.0
        self.conflicts = 0
        self._restarts = 0
        self._unsat = False
        if num_vars:
            self.ensure_vars(num_vars)

    def ensure_vars(self, n: int):
        while self.nv < n:
            self.nv += 1
            self.values.append(0)
            self.levels.append(0)
            self.reasons.append(None)
            self.activity.append(0.0)
            self.phase.append(-1)
            self.watches.append([])
            self.watches.append([])
            self._seen.append(0)

    def _lit_value(self, lit: int) -> int:
        return self.values[lit] if lit > 0 else -self.values[-lit]

    def _assign(self, lit: int, reason: Optional[list[int]]):
        v = lit if lit > 0 else -lit
        self.values[v] = 1 if lit > 0 else -1
        self.levels[v] = len(self.trail_lim)
        self.reasons[v] = reason
        self.trail.append(lit)

    def _backtrack(self, level: int):
        if len(self.trail_lim) <= level:
            return
        lim = self.trail_lim[level]
        values, phase = self.values, self.phase
        for lit in self.trail[lim:]:
            v = lit if lit > 0 else -lit
            phase[v] = values[v]
            values[v] = 0
            self.reasons[v] = None
        del self.trail[lim:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def add_clause(self, lits) -> None:
        """Add a clause at the root level (backtracking there if needed)."""
        if self._unsat:
            return
        self._backtrack(0)
        seen = set()
        out = []
        for lit in lits:
            self.ensure_vars(abs(lit))
            if -lit in seen:
                return  # tautology
            if lit in seen:
                continue
            seen.add(lit)
            lv = self._lit_value(lit)
            if lv == 1:
                return  # satisfied at root
            if lv == -1:
                continue  # false at root, drop
            out.append(lit)
        if not out:
            self._unsat = True
            return
        if len(out) == 1:
            self._assign(out[0], None)
            if self._propagate() is not None:
                self._unsat = True
            return
        c = list(out)
        self._watch(c)

    def _watch(self, c: list[int]):
        for lit in (c[0], c[1]):
            enc = (lit << 1) if lit > 0 else ((-lit << 1) | 1)
            self.watches[enc].append(c)

    def _propagate(self) -> Optional[list[int]]:
        values = self.values
        watches = self.watches
        trail = self.trail
        while self.qhead < len(trail):
            lit = trail[self.qhead]
            self.qhead += 1
            v = lit if lit > 0 else -lit
            flit = -lit
            ws = watches[(v << 1) | (lit > 0)]
            i = j = 0
            n_ws = len(ws)
            while i < n_ws:
                c = ws[i]
                i += 1
                if c[0] == flit:
                    c[0] = c[1]
                    c[1] = flit
                first = c[0]
                fv = values[first] if first > 0 else -values[-first]
                if fv == 1:
                    ws[j] = c
                    j += 1
                    continue
                found = False
                for k in range(2, len(c)):
                    lk = c[k]
                    if (values[lk] if lk > 0 else -values[-lk]) >= 0:
                        c[1] = lk
                        c[k] = flit
                        watches[(lk << 1) if lk > 0 else ((-lk << 1) | 1)].append(c)
                        found = True
                        break
                if found:
                    continue
                ws[j] = c
                j += 1
                if fv == -1:
                    while i < n_ws:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    return c
                self._assign(first, c)
            del ws[j:]
        return None

    def _bump(self, v: int):
        self.activity[v] += self.var_inc
        if self.activity[v] > _ACT_RESCALE:
            inv = 1.0 / _ACT_RESCALE
            for i in range(1, self.nv + 1):
                self.activity[i] *= inv
            self.var_inc *= inv

    def _analyze(self, confl: list[int]):
        levels, reasons, trail, seen = self.levels, self.reasons, self.trail, self._seen
        cur = len(self.trail_lim)
        learnt = [0]
        touched = []
        counter = 0
        idx = len(trail) - 1
        p = 0
        while True:
            for q in (confl if p == 0 else confl[1:]):
                vq = q if q > 0 else -q
                if not seen[vq] and levels[vq] > 0:
                    seen[vq] = 1
                    touched.append(vq)
                    self._bump(vq)
                    if levels[vq] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while True:
                pl = trail[idx]
                idx -= 1
                if seen[pl if pl > 0 else -pl]:
                    break
            p = pl
            counter -= 1
            if counter == 0:
                break
            confl = reasons[p if p > 0 else -p]
        learnt[0] = -p
        for v in touched:
            seen[v] = 0
        if len(learnt) == 1:
            return learnt, 0
        mi = 1
        for k in range(2, len(learnt)):
            if levels[abs(learnt[k])] > levels[abs(learnt[mi])]:
                mi = k
        learnt[1], learnt[mi] = learnt[mi], learnt[1]
        return learnt, levels[abs(learnt[1])]

    def _decide(self) -> int:
        values, activity = self.values, self.activity
        best, best_act = 0, -1.0
        for v in range(1, self.nv + 1):
            if values[v] == 0 and activity[v] > best_act:
                best, best_act = v, activity[v]
        return best if self.phase[best] > 0 else -best

    def solve(self, deadline: Optional[float] = None):
        """Return a model as a bool list indexed by variable (index 0 unused),
        or None when unsatisfiable.  Raises DeadlineExceeded past `deadline`
        (a time.monotonic() value)."""
        if self._unsat:
            return None
        self._backtrack(0)
        if self._propagate() is not None:
            self._unsat = True
            return None
        since_restart = 0
        restart_limit = _RESTART_BASE * _luby(self._restarts + 1)
        ticks = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                if not self.trail_lim:
                    self._unsat = True
                    return None
                self.conflicts += 1
                since_restart += 1
                learnt, bl = self._analyze(confl)
                self._backtrack(bl)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    self._watch(learnt)
                    self._assign(learnt[0], learnt)
                self.var_inc *= _ACT_DECAY
                if self.var_inc > _ACT_RESCALE:
                    self._bump(1)  # triggers rescale
                ticks += 1
                if deadline is not None and ticks % 64 == 0:
                    if time.monotonic() > deadline:
                        raise DeadlineExceeded()
                if since_restart >= restart_limit:
                    self._restarts += 1
                    restart_limit = _RESTART_BASE * _luby(self._restarts + 1)
                    since_restart = 0
                    self._backtrack(0)
            else:
                if len(self.trail) == self.nv:
                    values = self.values
                    return [False] + [values[v] == 1 for v in range(1, self.nv + 1)]
                ticks += 1
                if deadline is not None and ticks % 64 == 0:
                    if time.monotonic() > deadline:
                        raise DeadlineExceeded()
                self.trail_lim.append(len(self.trail))
                self._assign(self._decide(), None)
