"""The approximate counter: estimate rounds, median, and the driver.

Each round draws a fresh XOR hash over the projection scope, finds the
first prefix level m whose cell holds fewer than `thresh` models, and
turns that into an estimate of the form mantissa * 2^m.  The two modes
differ only in the mantissa:

  classic   the surviving cell count itself;
  rounding  a fixed per-eps value (optionally floored by the cell
            count), which concentrates per-round error enough that far
            fewer rounds reach the same confidence.

The driver answers exactly (no rounds at all) whenever the whole
formula has fewer than `thresh` models.  Estimates are compared and
medianed exactly through Fraction arithmetic; a round whose every level
saturates is retried with a fresh hash a bounded number of times.
"""

from __future__ import annotations

import decimal
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional, Sequence, Union

from .formula import Formula
from .hashing import sample_hash
from .planner import classic_iterations, profile_for, rounding_iterations
from .search import find_transition

MODES = ("rounding", "classic")

DEFAULT_EPSILON = 0.8
DEFAULT_DELTA = 0.001


class RoundFailedError(RuntimeError):
    """A round kept saturating at every hash level, retries included."""


@dataclass(frozen=True)
class RoundConfig:
    epsilon: float
    thresh: int
    pivot: float
    round_up: bool
    round_value: float


def make_round_config(epsilon: float) -> RoundConfig:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    inv = 1.0 + 1.0 / epsilon
    pivot = 9.84 * inv * inv
    thresh = ceil(9.84 * (1.0 + epsilon / (1.0 + epsilon)) * inv * inv)
    prof = profile_for(epsilon)
    return RoundConfig(
        epsilon=epsilon,
        thresh=thresh,
        pivot=pivot,
        round_up=prof.round_up,
        round_value=prof.round_value_factor(epsilon) * pivot,
    )


@dataclass(frozen=True)
class Estimate:
    """A count in scientific form mantissa * 2^exponent (mantissa >= 0)."""

    mantissa: Union[int, float]
    exponent: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.mantissa) * Fraction(2) ** self.exponent

    def decimal(self, sig: int = 4) -> str:
        """Decimal rendering with `sig` significant digits, any magnitude."""
        value = self.as_fraction()
        if value == 0:
            return "0"
        ctx = decimal.Context(prec=sig)
        d = ctx.divide(
            decimal.Decimal(value.numerator), decimal.Decimal(value.denominator)
        )
        return str(d)

    def __str__(self) -> str:
        return f"{self.mantissa} * 2^{self.exponent}"


def find_median(estimates: Sequence[Estimate]) -> Estimate:
    """Middle element under exact value order; ties keep input order, so
    any of the equal representatives may surface."""
    if not estimates:
        raise ValueError("no estimates")
    ordered = sorted(estimates, key=Estimate.as_fraction)
    return ordered[len(ordered) // 2]


@dataclass(frozen=True)
class FinalCount:
    estimate: Estimate
    is_exact: bool
    mode: str
    epsilon: float
    delta: float
    iterations: int
    round_ms: tuple[int, ...]
    seed: object

    @property
    def value(self) -> Fraction:
        return self.estimate.as_fraction()


def rounding_core(formula, cfg, h, backend, prev_m=None, deadline=None):
    """One rounding-mode round: (estimate, m) for a fresh hash h."""
    m, res, _ = find_transition(formula, h, cfg.thresh, prev_m, backend, deadline)
    if res.saturated:
        return None  # every level saturated; caller retries
    if cfg.round_up:
        mantissa = max(res.count, cfg.round_value)
    else:
        mantissa = cfg.round_value
    return Estimate(mantissa, m), m


def classic_core(formula, cfg, h, backend, prev_m=None, deadline=None):
    """One classic-mode round: cell count times cell count's level weight."""
    m, res, _ = find_transition(formula, h, cfg.thresh, prev_m, backend, deadline)
    if res.saturated:
        return None
    return Estimate(res.count, m), m


def _round_rng(seed, index: int) -> random.Random:
    # string seeding is platform-stable in CPython
    return random.Random(f"{seed!r}:{index}")


def count(
    formula: Formula,
    epsilon: float = DEFAULT_EPSILON,
    delta: float = DEFAULT_DELTA,
    mode: str = "rounding",
    seed=None,
    backend=None,
    independent_rounds: bool = False,
    time_limit: Optional[float] = None,
    max_round_retries: int = 3,
) -> FinalCount:
    """(epsilon, delta) approximate projected model count.

    With probability at least 1-delta the returned value lies within a
    factor 1+epsilon of the true count.  `seed` fixes every random
    choice (identical seeds reproduce identical hashes bit for bit).
    `independent_rounds` derives a separate stream per round index and
    drops the warm-start chaining, so rounds can run in any order and
    still combine into the same answer.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must be in (0, 1)")
    cfg = make_round_config(epsilon)  # validates epsilon
    if backend is None:
        from .oracle import BuiltinBackend

        backend = BuiltinBackend()
    deadline = None if time_limit is None else time.monotonic() + time_limit

    base = backend.bounded_count(formula, (), cfg.thresh, deadline)
    if not base.saturated:
        return FinalCount(
            estimate=Estimate(base.count, 0),
            is_exact=True,
            mode=mode,
            epsilon=epsilon,
            delta=delta,
            iterations=0,
            round_ms=(),
            seed=seed,
        )

    t = rounding_iterations(epsilon, delta) if mode == "rounding" else classic_iterations(delta)
    core = rounding_core if mode == "rounding" else classic_core
    dim = len(formula.scope)
    assert dim >= 1  # a saturated base case needs >= thresh >= 2 models

    rng = random.Random(seed)
    estimates: list[Estimate] = []
    ms: list[int] = []
    prev_m: Optional[int] = None
    for i in range(t):
        stream = _round_rng(seed, i) if independent_rounds else rng
        warm = None if independent_rounds else prev_m
        outcome = None
        for _ in range(max_round_retries + 1):
            h = sample_hash(dim, stream)
            outcome = core(formula, cfg, h, backend, warm, deadline)
            if outcome is not None:
                break
        if outcome is None:
            raise RoundFailedError(
                f"round {i}: all {dim} hash levels saturated after "
                f"{max_round_retries + 1} hash draws"
            )
        est, m = outcome
        estimates.append(est)
        ms.append(m)
        prev_m = m

    return FinalCount(
        estimate=find_median(estimates),
        is_exact=False,
        mode=mode,
        epsilon=epsilon,
        delta=delta,
        iterations=t,
        round_ms=tuple(ms),
        seed=seed,
    )
