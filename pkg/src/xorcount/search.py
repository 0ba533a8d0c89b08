"""Locating the first unsaturated hash level.

Cell counts shrink as prefix length m grows (cells are nested), so
saturation against a fixed cutoff is monotone: saturated below some
transition level, unsaturated from it on.  The search finds that
transition with few oracle calls, reusing the previous round's level as
a warm start: probe a 3-wide window around it, then gallop (doubling
steps) from the last informative bound, then binary search inside the
bracket.  Without a warm start it is a plain binary search over [1, n].

A probe budget of window + ceil(log2 n) + 2 calls is enforced: galloping
falls back to binary search rather than exceed it.  Results are cached
per level, and a saturated level at or above a known unsaturated one is
a monotonicity violation (a broken oracle), reported as an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .hashing import XorHash, cell_constraints
from .oracle import BoundedResult


class MonotonicityError(RuntimeError):
    """The oracle reported a saturated level above an unsaturated one."""


@dataclass
class SearchState:
    cache: dict[int, BoundedResult] = field(default_factory=dict)
    known_small: set[int] = field(default_factory=set)  # unsaturated levels
    known_big: set[int] = field(default_factory=set)  # saturated levels
    queries: int = 0


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


def transition_search(
    query: Callable[[int], BoundedResult], n: int, prev_m: Optional[int] = None
) -> tuple[int, BoundedResult, SearchState]:
    """Find the smallest m in [1, n] whose cell count is below the cutoff.

    `query(m)` must report the bounded count at level m; level 0 is
    assumed saturated (the caller established that before searching).
    If every level is saturated, returns (n, saturated result) and the
    caller treats that as a failed round.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    state = SearchState()
    max_sat = 0  # largest level known saturated
    min_unsat = n + 1  # smallest level known unsaturated
    budget = _ceil_log2(n) + 2 + (3 if prev_m is not None else 0)

    def q(m: int) -> BoundedResult:
        nonlocal max_sat, min_unsat
        if m in state.cache:
            return state.cache[m]
        r = query(m)
        state.queries += 1
        state.cache[m] = r
        if r.saturated:
            state.known_big.add(m)
            if m > max_sat:
                max_sat = m
        else:
            state.known_small.add(m)
            if m < min_unsat:
                min_unsat = m
        if max_sat >= min_unsat:
            raise MonotonicityError(
                f"saturated at level {max_sat} but unsaturated at {min_unsat}"
            )
        return r

    def binary():
        nonlocal max_sat, min_unsat
        while min_unsat - max_sat > 1:
            q((max_sat + min_unsat) // 2)

    if prev_m is None:
        binary()
    else:
        pm = min(max(prev_m, 1), n)
        if not q(pm).saturated:
            if pm > 1 and not q(pm - 1).saturated:
                # transition below the window: gallop down from pm-1
                base, step = pm - 1, 2
                while min_unsat - max_sat > 1:
                    if state.queries + 1 + _ceil_log2(min_unsat - max_sat) > budget:
                        break
                    probe = max(1, base - step)
                    if probe <= max_sat:
                        break
                    q(probe)
                    step *= 2
                binary()
        else:
            if pm < n and q(pm + 1).saturated:
                # transition above the window: gallop up from pm+1
                base, step = pm + 1, 2
                while min_unsat > n and max_sat < n:
                    if state.queries + 1 + _ceil_log2(min_unsat - max_sat) > budget:
                        break
                    q(min(n, base + step))
                    step *= 2
                binary()
            # pm == n saturated: fall through with min_unsat still n+1

    if min_unsat > n:
        # every level saturated; n was necessarily probed
        return n, state.cache[n], state
    assert min_unsat - max_sat == 1
    return min_unsat, state.cache[min_unsat], state


def find_transition(
    formula,
    h: XorHash,
    thresh: int,
    prev_m: Optional[int] = None,
    backend=None,
    deadline: Optional[float] = None,
) -> tuple[int, BoundedResult, SearchState]:
    """transition_search over the cells of hash h applied to the formula's
    projection scope."""
    if backend is None:
        from .oracle import BuiltinBackend

        backend = BuiltinBackend()
    variables = formula.scope.variables

    def query(m: int) -> BoundedResult:
        xors = cell_constraints(h.prefix(m), variables)
        return backend.bounded_count(formula, xors, thresh, deadline)

    return transition_search(query, h.n, prev_m)
