"""Random XOR (parity) hash functions over GF(2).

A hash maps assignments of n boolean variables to n output bits via
h(x) = Ax + b, with A a random n-by-n bit matrix and b a random bit
vector.  Prefixes of the output define a nested family: keeping the
first m output bits splits the assignment space into 2^m cells, and
the cell of a prefix of length m+1 is contained in the cell of its
length-m prefix.  Every draw also fixes a random target point alpha;
the "cell" of a slice is the set of assignments whose first m hash
bits agree with the first m bits of alpha.

Rows are stored as machine integers (bit j of a row selects column j),
so evaluating one output bit is a single AND plus a popcount.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class XorConstraint:
    """A parity constraint: XOR of the listed variables equals rhs."""

    variables: frozenset[int]
    rhs: int

    def __post_init__(self):
        if self.rhs not in (0, 1):
            raise ValueError("rhs must be 0 or 1")
        for v in self.variables:
            if not isinstance(v, int) or v < 1:
                raise ValueError("variables must be positive integers")

    def evaluate(self, assignment: dict[int, bool]) -> bool:
        acc = 0
        for v in self.variables:
            acc ^= 1 if assignment[v] else 0
        return acc == self.rhs


@dataclass(frozen=True)
class XorHash:
    """A full n-bit hash draw: row masks, offset bits, and target bits."""

    n: int
    rows: tuple[int, ...]
    offset: int
    target: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("hash dimension must be >= 1")
        if len(self.rows) != self.n:
            raise ValueError("need exactly n rows")
        mask = (1 << self.n) - 1
        for r in self.rows:
            if r < 0 or r > mask:
                raise ValueError("row mask out of range")
        if not (0 <= self.offset <= mask and 0 <= self.target <= mask):
            raise ValueError("offset/target out of range")

    def apply(self, x: int) -> int:
        """Hash a point (bit j of x = value of column j); returns n output bits."""
        out = 0
        for i, row in enumerate(self.rows):
            out |= ((row & x).bit_count() & 1) << i
        return out ^ self.offset

    def prefix(self, m: int) -> "PrefixSlice":
        return PrefixSlice(self, m)


@dataclass(frozen=True)
class PrefixSlice:
    """The first m output bits of a hash, together with the target prefix."""

    hash: XorHash
    m: int

    def __post_init__(self):
        if not 0 <= self.m <= self.hash.n:
            raise ValueError("prefix length must be in [0, n]")

    def matches(self, x: int) -> bool:
        """True when x lies in the cell (first m hash bits hit the target)."""
        if self.m == 0:
            return True
        mask = (1 << self.m) - 1
        return (self.hash.apply(x) ^ self.hash.target) & mask == 0


def sample_hash(n: int, rng: random.Random) -> XorHash:
    """Draw A, b and alpha uniformly.  Every bit comes from rng, in a fixed
    order (rows first, then offset, then target), so a seeded generator
    reproduces the same hash on any platform."""
    if n < 1:
        raise ValueError("hash dimension must be >= 1")
    rows = tuple(rng.getrandbits(n) for _ in range(n))
    offset = rng.getrandbits(n)
    target = rng.getrandbits(n)
    return XorHash(n=n, rows=rows, offset=offset, target=target)


def cell_constraints(
    slice_: PrefixSlice, variables: Optional[Sequence[int]] = None
) -> tuple[XorConstraint, ...]:
    """Translate the first m rows into parity constraints over CNF variables.

    Row i yields: XOR of the variables selected by the row = target_i ^ offset_i.
    When `variables` is given, column j of the matrix stands for variables[j]
    (used when hashing ranges over a projection scope rather than x1..xn).
    A row with no selected variables still yields a (degenerate) constraint;
    rhs 0 is vacuous and rhs 1 is unsatisfiable, and consumers must honour
    that rather than drop the row.
    """
    h = slice_.hash
    if variables is None:
        variables = range(1, h.n + 1)
    else:
        if len(variables) < h.n:
            raise ValueError("need at least n variables to name the columns")
    out = []
    for i in range(slice_.m):
        row = h.rows[i]
        vs = frozenset(variables[j] for j in range(h.n) if (row >> j) & 1)
        rhs = ((h.target >> i) ^ (h.offset >> i)) & 1
        out.append(XorConstraint(variables=vs, rhs=rhs))
    return tuple(out)
