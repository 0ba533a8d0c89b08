"""Exact (projected) model counting for small formulas.

This is the ground truth the approximate counter is judged against, so
it deliberately shares no machinery with the search-based oracle.  For
formulas whose variable count fits under `limit`, the whole truth table
is materialised as one big integer: bit a of the table is 1 iff
assignment a satisfies the formula.  Clauses, parity constraints and
projection all become bitwise operations on these masks, and the count
is a popcount.

When the variable count is too large but the projection scope is small,
each scope assignment is tested for an extension with a SAT solve
(2^|scope| decisions).  Anything else is refused: exact counting stays
a tool for small inputs.
"""

from __future__ import annotations

from functools import reduce
from typing import Optional, Sequence

from .formula import Formula
from .hashing import XorConstraint


class ScopeTooLargeError(ValueError):
    pass


def variable_masks(n: int) -> list[int]:
    """Truth-table masks for x1..xn over 2^n assignments.

    Bit a of masks[i] is the value of x_{i+1} in assignment a (a's bit i).
    Built by doubling the universe one variable at a time.
    """
    masks: list[int] = []
    for i in range(n):
        half = 1 << i
        new = ((1 << half) - 1) << half
        masks = [m | (m << half) for m in masks]
        masks.append(new)
    return masks


def _table_count(formula: Formula, xors: Sequence[XorConstraint]) -> int:
    n = formula.num_vars
    size = 1 << n
    universe = (1 << size) - 1 if n > 0 else 1
    masks = variable_masks(n)

    table = universe
    for cl in formula.clauses:
        acc = 0
        for lit in cl:
            m = masks[abs(lit) - 1]
            acc |= m if lit > 0 else (~m & universe)
        table &= acc
        if not table:
            break
    for xc in xors:
        parity = 0
        for v in xc.variables:
            parity ^= masks[v - 1]
        if xc.rhs == 0:
            parity ^= universe
        table &= parity
        if not table:
            break

    if not formula.scope.is_full:
        in_scope = set(formula.scope.variables)
        for i in range(n):
            if i + 1 in in_scope:
                continue
            half = 1 << i
            # fold the x_{i+1}=1 half onto the =0 half, keep =0 positions
            table = (table | (table >> half)) & ~masks[i] & universe
    return table.bit_count()


def _scope_enum_count(formula: Formula, xors, backend) -> int:
    scope = formula.scope.variables
    count = 0
    for bits in range(1 << len(scope)):
        units = tuple(
            v if (bits >> j) & 1 else -v for j, v in enumerate(scope)
        )
        if backend.has_model(formula, xors, extra_units=units):
            count += 1
    return count


def count_exact(
    formula: Formula,
    xors: Sequence[XorConstraint] = (),
    limit: int = 26,
    backend=None,
) -> int:
    """Exact projected model count of formula /\\ xors.

    Raises ScopeTooLargeError when both num_vars and the scope exceed
    `limit` (the truth-table path allocates 2^num_vars bits).
    """
    for xc in xors:
        for v in xc.variables:
            if v > formula.num_vars:
                raise ValueError(f"parity variable {v} out of range")
    if formula.num_vars <= limit:
        return _table_count(formula, xors)
    if len(formula.scope) <= limit:
        if backend is None:
            from .oracle import BuiltinBackend

            backend = BuiltinBackend()
        return _scope_enum_count(formula, xors, backend)
    raise ScopeTooLargeError(
        f"{formula.num_vars} variables and scope {len(formula.scope)} both exceed limit {limit}"
    )
