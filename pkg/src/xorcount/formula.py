"""CNF formulas, DIMACS parsing, and the extended format with parity lines.

Literals are signed integers in DIMACS convention (+v / -v), clauses are
tuples of literals.  A formula carries an optional projection scope: the
set of variables that model counting ranges over.  Without a `c ind`
declaration the scope is every variable, including variables that occur
in no clause (each free in-scope variable doubles the model count).

The extended format adds `x` lines for parity constraints: `x 1 2 3 0`
asserts x1 ^ x2 ^ x3 = 1, and a negated first literal flips the
right-hand side to 0 (`x -1 2 3 0` asserts x1 ^ x2 ^ x3 = 0).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .hashing import XorConstraint

logger = logging.getLogger(__name__)


class ParseError(ValueError):
    """Raised on malformed DIMACS input; carries the 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class ProjectionScope:
    """The variables a count ranges over; is_full marks the default scope."""

    variables: tuple[int, ...]
    is_full: bool

    def __contains__(self, v: int) -> bool:
        return v in set(self.variables)

    def __len__(self) -> int:
        return len(self.variables)


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    scope: ProjectionScope

    @property
    def scope_vars(self) -> tuple[int, ...]:
        return self.scope.variables


def normalize_clause(lits: Iterable[int]) -> Optional[tuple[int, ...]]:
    """Drop duplicate literals (keeping first occurrence); return None for
    tautologies (a literal together with its negation)."""
    seen = set()
    out = []
    for lit in lits:
        if -lit in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


def make_formula(
    num_vars: int,
    clauses: Iterable[Iterable[int]],
    scope: Optional[Iterable[int]] = None,
) -> Formula:
    """Validate and normalize raw clauses into a Formula.

    Tautological clauses are dropped; duplicate literals are removed.
    `scope=None` means the full scope {1..num_vars}.
    """
    if num_vars < 0:
        raise ValueError("num_vars must be non-negative")
    norm = []
    dropped = 0
    for cl in clauses:
        cl = tuple(cl)
        if not cl:
            raise ValueError("empty clause")
        for lit in cl:
            if lit == 0 or abs(lit) > num_vars:
                raise ValueError(f"literal {lit} out of range for {num_vars} variables")
        ncl = normalize_clause(cl)
        if ncl is None:
            dropped += 1
        else:
            norm.append(ncl)
    if dropped:
        logger.debug("dropped %d tautological clause(s)", dropped)
    if scope is None:
        scope_obj = ProjectionScope(tuple(range(1, num_vars + 1)), is_full=True)
    else:
        vs = sorted(set(scope))
        if not vs and num_vars > 0:
            raise ValueError("projection scope must be non-empty")
        for v in vs:
            if v < 1 or v > num_vars:
                raise ValueError(f"scope variable {v} out of range")
        full = vs == list(range(1, num_vars + 1))
        scope_obj = ProjectionScope(tuple(vs), is_full=full)
    return Formula(num_vars=num_vars, clauses=tuple(norm), scope=scope_obj)


def _decode(text: Union[str, bytes]) -> str:
    if isinstance(text, bytes):
        return text.decode("utf-8", errors="replace")
    return text


def _parse(text: Union[str, bytes], allow_xor: bool):
    num_vars = declared = None
    raw_clauses: list[list[int]] = []
    pending: list[int] = []
    ind_vars: list[int] = []
    xors: list[tuple[list[int], int]] = []
    saw_content = False

    lines = _decode(text).splitlines()
    lineno = 0
    for lineno, line in enumerate(lines, start=1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("%"):
            break  # benchmark-archive end marker
        if s.startswith("c"):
            fields = s.split()
            if len(fields) >= 2 and fields[0] == "c" and fields[1] == "ind":
                if num_vars is None:
                    raise ParseError("scope declaration before header", lineno)
                toks = fields[2:]
                if not toks or toks[-1] != "0":
                    raise ParseError("scope line not 0-terminated", lineno)
                for t in toks[:-1]:
                    try:
                        v = int(t)
                    except ValueError:
                        raise ParseError(f"bad scope token {t!r}", lineno) from None
                    if v < 1 or v > num_vars:
                        raise ParseError(f"scope variable {v} out of range", lineno)
                    ind_vars.append(v)
            continue
        if s.startswith("p"):
            if num_vars is not None:
                raise ParseError("duplicate header", lineno)
            fields = s.split()
            if len(fields) != 4 or fields[0] != "p" or fields[1] != "cnf":
                raise ParseError("malformed header", lineno)
            try:
                num_vars, declared = int(fields[2]), int(fields[3])
            except ValueError:
                raise ParseError("malformed header", lineno) from None
            if num_vars < 0 or declared < 0:
                raise ParseError("malformed header", lineno)
            saw_content = True
            continue
        if s.startswith("x"):
            if not allow_xor:
                raise ParseError("parity line in plain CNF input", lineno)
            if num_vars is None:
                raise ParseError("parity line before header", lineno)
            toks = s[1:].split()
            if not toks or toks[-1] != "0":
                raise ParseError("parity line not 0-terminated", lineno)
            vs: list[int] = []
            rhs = 1
            for t in toks[:-1]:
                try:
                    lit = int(t)
                except ValueError:
                    raise ParseError(f"bad parity token {t!r}", lineno) from None
                if lit == 0:
                    raise ParseError("literal 0 inside parity line", lineno)
                if abs(lit) > num_vars:
                    raise ParseError(f"literal {lit} out of range", lineno)
                if lit < 0:
                    rhs ^= 1
                vs.append(abs(lit))
            xors.append((vs, rhs))
            continue
        # clause data; clauses may span lines until the terminating 0
        if num_vars is None:
            raise ParseError("malformed header", lineno)
        saw_content = True
        for t in s.split():
            try:
                lit = int(t)
            except ValueError:
                raise ParseError(f"bad literal token {t!r}", lineno) from None
            if lit == 0:
                if not pending:
                    raise ParseError("empty clause", lineno)
                raw_clauses.append(pending)
                pending = []
            else:
                if abs(lit) > num_vars:
                    raise ParseError(
                        f"literal {lit} out of range for {num_vars} variables", lineno
                    )
                pending.append(lit)

    if not saw_content:
        raise ParseError("empty file")
    if num_vars is None:
        raise ParseError("malformed header: no 'p cnf' line")
    if pending:
        raise ParseError("clause not 0-terminated", lineno)
    if declared is not None and declared != len(raw_clauses):
        logger.warning(
            "header declares %d clauses but %d were read", declared, len(raw_clauses)
        )
    scope = sorted(set(ind_vars)) if ind_vars else None
    formula = make_formula(num_vars, raw_clauses, scope)
    xor_objs = tuple(XorConstraint(frozenset(vs), rhs) for vs, rhs in xors)
    return formula, xor_objs


def parse_dimacs(text: Union[str, bytes]) -> Formula:
    """Parse plain DIMACS CNF with optional `c ind` scope lines."""
    formula, _ = _parse(text, allow_xor=False)
    return formula


def parse_extended_dimacs(
    text: Union[str, bytes]
) -> tuple[Formula, tuple[XorConstraint, ...]]:
    """Parse DIMACS extended with `x` parity lines."""
    return _parse(text, allow_xor=True)


def serialize_extended_dimacs(
    formula: Formula, xors: Sequence[XorConstraint] = ()
) -> str:
    """Render a formula (and optional parity constraints) back to text.

    The header counts only CNF clauses.  A non-full scope is emitted as
    `c ind` lines.  Parity constraints become `x` lines with the rhs
    encoded in the sign of the first literal; constraints over the empty
    variable set have no line form and are rejected.
    """
    out = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    if not formula.scope.is_full:
        vs = list(formula.scope.variables)
        for i in range(0, len(vs), 10):
            chunk = " ".join(str(v) for v in vs[i : i + 10])
            out.append(f"c ind {chunk} 0")
    for cl in formula.clauses:
        out.append(" ".join(str(x) for x in cl) + " 0")
    for xc in xors:
        vs = sorted(xc.variables)
        if not vs:
            raise ValueError("cannot serialize a parity constraint over no variables")
        lits = [str(v) for v in vs]
        if xc.rhs == 0:
            lits[0] = f"-{lits[0]}"
        out.append("x " + " ".join(lits) + " 0")
    return "\n".join(out) + "\n"
