"""Shared test oracles: brute-force counting and exact tail probabilities.

Everything here is deliberately independent of the package's own
machinery (direct clause evaluation, Fraction arithmetic, a trinomial
DP) so the implementations under test are checked against a second
route, not themselves.
"""

import random
from fractions import Fraction

import pytest

from xorcount import make_formula


def clause_satisfied(clause, assignment):
    # assignment: dict var -> bool
    return any(assignment[abs(l)] == (l > 0) for l in clause)


def xor_satisfied(xc, assignment):
    acc = 0
    for v in xc.variables:
        acc ^= 1 if assignment[v] else 0
    return acc == xc.rhs


def brute_models(formula, xors=()):
    """All full models of formula /\\ xors by direct evaluation."""
    n = formula.num_vars
    out = []
    for bits in range(1 << n):
        a = {v: bool((bits >> (v - 1)) & 1) for v in range(1, n + 1)}
        if all(clause_satisfied(c, a) for c in formula.clauses) and all(
            xor_satisfied(x, a) for x in xors
        ):
            out.append(a)
    return out


def brute_count(formula, xors=()):
    """Projected brute-force count: distinct scope restrictions of models."""
    scope = formula.scope.variables
    seen = set()
    for a in brute_models(formula, xors):
        seen.add(tuple(a[v] for v in scope))
    return len(seen)


def random_cnf(rng, n, n_clauses, scope=None, widths=(2, 3, 3)):
    clauses = []
    for _ in range(n_clauses):
        k = min(n, rng.choice(widths))
        vs = rng.sample(range(1, n + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return make_formula(n, clauses, scope)


def eta_exact(t, m, p: Fraction) -> Fraction:
    """Exact rational binomial upper tail, usable up to t around 64."""
    from math import comb

    q = 1 - p
    return sum(comb(t, k) * p**k * q ** (t - k) for k in range(m, t + 1))


def trinomial_median_error(t, p_low, p_up) -> float:
    """DP over t iid draws with outcome probabilities (p_low, p_up, rest):
    probability that either outcome reaches ceil(t/2) occurrences."""
    import numpy as np

    dp = np.zeros((t + 1, t + 1))
    dp[0, 0] = 1.0
    rest = 1.0 - p_low - p_up
    for _ in range(t):
        new = dp * rest
        new[1:, :] += dp[:-1, :] * p_low
        new[:, 1:] += dp[:, :-1] * p_up
        dp = new
    half = (t + 1) // 2
    return float(dp[half:, :].sum() + dp[:, half:].sum() - dp[half:, half:].sum())


@pytest.fixture
def rng():
    return random.Random(20250819)
