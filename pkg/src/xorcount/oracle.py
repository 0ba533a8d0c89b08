"""Bounded model enumeration under parity constraints.

The one oracle primitive the counters need: how many projected models
does F /\\ XORs have, counted up to a cutoff?  `bounded_count` stops as
soon as `thresh` models are seen, so the result is exact below the
cutoff and reports saturation at it.  Enumeration works by blocking:
after each model, a clause forbidding its scope projection is added, so
every projected assignment is counted once no matter how the solver
fills in the rest.

Two interchangeable backends: the built-in CDCL solver (parity
constraints CNF-encoded with auxiliary variables), and an external
process speaking the extended-DIMACS convention (one invocation per
model, blocking clauses accumulated into the query file).
"""

from __future__ import annotations

import os
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .formula import Formula, serialize_extended_dimacs
from .hashing import XorConstraint
from .solver import DeadlineExceeded, Solver


class SolverError(RuntimeError):
    """An external solver crashed, timed out abnormally, or spoke garbage."""


@dataclass(frozen=True)
class BoundedResult:
    """count is exact when not saturated; saturated means count == thresh."""

    count: int
    saturated: bool


def _parity_clauses(variables: Sequence[int], rhs: int):
    """All 2^(k-1) clauses forbidding the violating assignments of
    XOR(variables) = rhs.  k = len(variables) must be small."""
    k = len(variables)
    out = []
    for bits in range(1 << k):
        if (bits.bit_count() & 1) == rhs:
            continue
        out.append(
            tuple(v if not (bits >> j) & 1 else -v for j, v in enumerate(variables))
        )
    return out


def encode_xors_cnf(
    xors: Sequence[XorConstraint], first_aux_var: int
) -> list[tuple[int, ...]]:
    """CNF-encode parity constraints, chaining wide ones through fresh
    auxiliary variables numbered consecutively from first_aux_var.

    A constraint over w >= 4 variables becomes ceil((w-1)/2) chained
    pieces: the first combines three variables into an aux output, each
    later piece absorbs two more, and the last piece carries the
    right-hand side.  Projected counts are preserved because auxiliary
    variables are functionally determined.  The degenerate empty
    constraint yields the empty clause (rhs 1) or nothing (rhs 0).
    """
    clauses: list[tuple[int, ...]] = []
    aux = first_aux_var
    for xc in xors:
        vs = sorted(xc.variables)
        rhs = xc.rhs
        if not vs:
            if rhs == 1:
                clauses.append(())
            continue
        # chain: first piece eats 3 variables, later pieces eat 2
        if len(vs) <= 3:
            clauses.extend(_parity_clauses(vs, rhs))
            continue
        piece = vs[:3] + [aux]
        clauses.extend(_parity_clauses(piece, 0))
        carry = aux
        aux += 1
        rest = vs[3:]
        while len(rest) > 2:
            piece = [carry, rest[0], rest[1], aux]
            clauses.extend(_parity_clauses(piece, 0))
            carry = aux
            aux += 1
            rest = rest[2:]
        clauses.extend(_parity_clauses([carry] + rest, rhs))
    return clauses


class BuiltinBackend:
    """Enumeration with the in-process CDCL solver."""

    kind = "built-in"

    def __init__(self, first_aux_gap: int = 0):
        # aux variables start right after the formula's; the gap exists only
        # so tests can confirm counts do not depend on aux numbering
        self.first_aux_gap = first_aux_gap

    def _load(self, formula: Formula, xors: Sequence[XorConstraint]) -> Solver:
        s = Solver(formula.num_vars)
        for cl in formula.clauses:
            s.add_clause(cl)
        first_aux = formula.num_vars + 1 + self.first_aux_gap
        for cl in encode_xors_cnf(xors, first_aux):
            s.add_clause(cl)
        return s

    def bounded_count(
        self,
        formula: Formula,
        xors: Sequence[XorConstraint] = (),
        thresh: int = 1,
        deadline: Optional[float] = None,
    ) -> BoundedResult:
        if thresh < 1:
            raise ValueError("thresh must be >= 1")
        s = self._load(formula, xors)
        scope = formula.scope.variables
        count = 0
        while True:
            # per-model check: one solve call can finish in fewer ticks
            # than the solver's own deadline polling interval
            if deadline is not None and time.monotonic() > deadline:
                raise DeadlineExceeded()
            model = s.solve(deadline)
            if model is None:
                return BoundedResult(count, False)
            count += 1
            if count >= thresh:
                return BoundedResult(thresh, True)
            block = tuple(-v if model[v] else v for v in scope)
            if not block:
                return BoundedResult(count, False)
            s.add_clause(block)

    def has_model(
        self,
        formula: Formula,
        xors: Sequence[XorConstraint] = (),
        extra_units: Sequence[int] = (),
        deadline: Optional[float] = None,
    ) -> bool:
        if deadline is not None and time.monotonic() > deadline:
            raise DeadlineExceeded()
        s = self._load(formula, xors)
        for lit in extra_units:
            s.add_clause((lit,))
        return s.solve(deadline) is not None


def default_external_command() -> list[str]:
    # -S skips site initialization; the script needs nothing beyond stdlib
    # and enumeration pays the interpreter startup once per model
    return [sys.executable, "-S", os.path.join(os.path.dirname(__file__), "minisolve.py")]


class ExternalBackend:
    """Enumeration through a solver subprocess.

    The command is invoked once per model with a path to an extended
    DIMACS file (original clauses, accumulated blocking clauses, parity
    lines) and must answer with an `s SATISFIABLE` / `s UNSATISFIABLE`
    line plus `v` lines.  Scope variables the solver leaves unassigned
    are expanded combinatorially (a partial model stands for all of its
    completions).
    """

    kind = "external-process"

    def __init__(self, command: Optional[Sequence[str]] = None):
        self.command = list(command) if command else default_external_command()

    def _invoke(self, text: str, deadline: Optional[float]):
        timeout = None
        if deadline is not None:
            timeout = deadline - time.monotonic()
            if timeout <= 0:
                raise DeadlineExceeded()
        fd, path = tempfile.mkstemp(suffix=".cnf", prefix="xorcount_")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            try:
                proc = subprocess.run(
                    self.command + [path],
                    capture_output=True,
                    text=True,
                    timeout=timeout,
                )
            except subprocess.TimeoutExpired:
                raise DeadlineExceeded() from None
            except OSError as exc:
                raise SolverError(f"failed to launch {self.command[0]}: {exc}") from exc
        finally:
            os.unlink(path)
        status = None
        lits: list[int] = []
        for line in proc.stdout.splitlines():
            line = line.strip()
            if line.startswith("s "):
                tag = line[2:].strip()
                if tag == "SATISFIABLE":
                    status = True
                elif tag == "UNSATISFIABLE":
                    status = False
            elif line.startswith("v ") or line == "v":
                for tok in line[1:].split():
                    try:
                        lit = int(tok)
                    except ValueError:
                        raise SolverError(f"bad literal in model line: {tok!r}") from None
                    if lit != 0:
                        lits.append(lit)
        if status is None:
            raise SolverError(
                f"solver gave no s-line (exit {proc.returncode}): "
                f"{proc.stderr.strip()[:200]!r}"
            )
        if not status:
            return False, {}
        return True, {abs(l): l > 0 for l in lits}

    def bounded_count(
        self,
        formula: Formula,
        xors: Sequence[XorConstraint] = (),
        thresh: int = 1,
        deadline: Optional[float] = None,
    ) -> BoundedResult:
        if thresh < 1:
            raise ValueError("thresh must be >= 1")
        # degenerate parity rows have no file syntax; decide them here
        xs = []
        for xc in xors:
            if not xc.variables:
                if xc.rhs == 1:
                    return BoundedResult(0, False)
                continue
            xs.append(xc)
        scope = formula.scope.variables
        blocking: list[tuple[int, ...]] = []
        count = 0
        while True:
            work = replace(formula, clauses=formula.clauses + tuple(blocking))
            sat, model = self._invoke(serialize_extended_dimacs(work, xs), deadline)
            if not sat:
                return BoundedResult(count, False)
            assigned = [v for v in scope if v in model]
            free = len(scope) - len(assigned)
            count += 1 << free
            if count >= thresh:
                return BoundedResult(thresh, True)
            if not assigned:
                return BoundedResult(count, False)
            blocking.append(tuple(-v if model[v] else v for v in assigned))

    def has_model(
        self,
        formula: Formula,
        xors: Sequence[XorConstraint] = (),
        extra_units: Sequence[int] = (),
        deadline: Optional[float] = None,
    ) -> bool:
        for xc in xors:
            if not xc.variables and xc.rhs == 1:
                return False
        xs = [xc for xc in xors if xc.variables]
        extra = tuple((lit,) for lit in extra_units)
        work = replace(formula, clauses=formula.clauses + extra)
        sat, _ = self._invoke(serialize_extended_dimacs(work, xs), deadline)
        return sat


def get_backend(name: Optional[str] = None, command: Optional[Sequence[str]] = None):
    if name in (None, "built-in", "builtin"):
        return BuiltinBackend()
    if name in ("external", "external-process"):
        return ExternalBackend(command)
    raise ValueError(f"unknown backend {name!r}")
