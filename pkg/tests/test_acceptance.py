"""Acceptance suite: one test per shipped guarantee, each printing a
PASS/FAIL line straight to the terminal (capture bypassed) so the run
log shows every criterion's verdict.

These are statistical and end-to-end checks at fixed seeds; the heavier
ones (5 and 8 share one experiment) take minutes by design.
"""

import math
import random
import statistics
import time
from fractions import Fraction

import pytest

from xorcount import (
    BuiltinBackend,
    ExternalBackend,
    XorConstraint,
    cell_constraints,
    classic_iterations,
    count,
    count_exact,
    error_curve_rows,
    eta,
    exact_median_error,
    make_formula,
    make_round_config,
    observed_error,
    rounding_core,
    rounding_iterations,
    sample_hash,
)

from conftest import brute_count, trinomial_median_error
from test_hashing import family_moments


def verdict(capsys, ok: bool, label: str, detail: str = ""):
    with capsys.disabled():
        tail = f"  ({detail})" if detail else ""
        print(f"\n[{'PASS' if ok else 'FAIL'}] {label}{tail}", flush=True)
    assert ok, f"{label}: {detail}"


def _random_formula(rng, n, n_clauses):
    clauses = []
    for _ in range(n_clauses):
        k = min(n, rng.choice((2, 3, 3)))
        vs = rng.sample(range(1, n + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return make_formula(n, clauses, None)


def _saturating_formula(rng, n):
    """A random formula with at least thresh(0.8) = 72 models, so every
    approximate run does real rounds instead of the exact base case."""
    while True:
        f = _random_formula(rng, n, max(1, round(0.45 * n)))
        if count_exact(f) >= 72:
            return f


# -------------------------------------------------------------- criterion 1


def test_criterion_1_iteration_tables(capsys):
    got = [rounding_iterations(eps, 0.001) for eps in (0.3, 0.8, 1.5, 3.5, 6.0)]
    ok = (
        got == [37, 19, 17, 7, 5]
        and rounding_iterations(0.8, 0.1) == 5
        and classic_iterations(0.1) == 21
        and classic_iterations(0.001) == 117
    )
    verdict(
        capsys,
        ok,
        "criterion 1: iteration tables",
        f"rounding {got}, classic {classic_iterations(0.1)}/{classic_iterations(0.001)}",
    )


# -------------------------------------------------------------- criterion 2


def test_criterion_2_median_error_vs_dp_oracle(capsys):
    p_lows = (0.023, 0.055, 0.085, 0.157, 0.262)
    p_ups = (0.044, 0.1, 0.169, 0.25, 0.36)
    worst = 0.0
    strict_ok = True
    for p_low in p_lows:
        for p_up in p_ups:
            for t in range(1, 52, 2):
                dp = trinomial_median_error(t, p_low, p_up)
                worst = max(worst, abs(exact_median_error(t, p_low, p_up) - dp))
                if t >= 3 and not dp < eta(t, (t + 1) // 2, p_low + p_up):
                    strict_ok = False
    ok = worst <= 1e-12 and strict_ok
    verdict(
        capsys,
        ok,
        "criterion 2: split-bound equals trinomial DP (1e-12), strictly under one-sided bound",
        f"max |diff| {worst:.2e} over 25 pairs x odd t <= 51, strictness {strict_ok}",
    )


# -------------------------------------------------------------- criterion 3


def test_criterion_3_hash_family_moments_and_nesting(capsys):
    rng = random.Random("acceptance-3")
    moments_ok = True
    checked = 0
    for _ in range(20):
        f = _random_formula(rng, 3, rng.randrange(0, 4))
        sols = [
            bits
            for bits in range(8)
            if all(
                any(((bits >> (abs(l) - 1)) & 1) == (1 if l > 0 else 0) for l in cl)
                for cl in f.clauses
            )
        ]
        for m, (mean, var) in family_moments(sols, 3, (1, 2, 3)).items():
            if mean != Fraction(len(sols), 2**m) or var > mean:
                moments_ok = False
            checked += 1

    nesting_ok = True
    for n in (4, 7, 10):
        for _ in range(8):
            h = sample_hash(n, rng)
            for x in range(1 << n):
                flags = [h.prefix(m).matches(x) for m in range(1, n + 1)]
                for m in range(1, n):
                    if flags[m] and not flags[m - 1]:
                        nesting_ok = False
    ok = moments_ok and nesting_ok
    verdict(
        capsys,
        ok,
        "criterion 3: exact family moments (mean = |sol|/2^m, var <= mean) and cell nesting",
        f"{checked} exhaustive (formula, m) checks, nesting at n in 4/7/10",
    )


# -------------------------------------------------------------- criterion 4


def test_criterion_4_bounded_count_equivalence(capsys):
    rng = random.Random("acceptance-4")
    builtin = BuiltinBackend()
    external = ExternalBackend()
    bad = 0
    total_models = 0
    for _ in range(200):
        while True:
            n = rng.randrange(3, 13)
            f = _random_formula(rng, n, rng.randrange(n, round(1.8 * n) + 1))
            xors = [
                XorConstraint(
                    frozenset(rng.sample(range(1, n + 1), rng.randrange(1, n + 1))),
                    rng.randrange(2),
                )
                for _ in range(rng.randrange(1, 5))
            ]
            true = brute_count(f, xors)
            if true <= 100:
                break
        total_models += true
        thresh = (1 << n) + 1
        b = builtin.bounded_count(f, xors, thresh)
        e = external.bounded_count(f, xors, thresh)
        if not (
            b.count == e.count == true and not b.saturated and not e.saturated
        ):
            bad += 1
    verdict(
        capsys,
        bad == 0,
        "criterion 4: bounded_count equals brute force on both backends",
        f"200 (formula, xors) pairs, {total_models} total models, {bad} mismatches",
    )


# -------------------------------------------------- criteria 5 and 8 (shared)


@pytest.fixture(scope="session")
def pac_experiment():
    """30 formulas x 200 seeded runs at (0.8, 0.2), rounding mode."""
    rng = random.Random("acceptance-5")
    sizes = [8, 9, 10, 11, 12] * 4 + [13, 13, 14, 14, 15, 15, 16, 17, 18, 20]
    assert len(sizes) == 30
    per_formula_violations = []
    errors = []
    for fi, n in enumerate(sizes):
        f = _saturating_formula(rng, n)
        exact = count_exact(f)
        lo = Fraction(exact) / Fraction(9, 5)
        hi = Fraction(exact) * Fraction(9, 5)
        viol = 0
        for run in range(200):
            fc = count(f, 0.8, 0.2, mode="rounding", seed=f"c5:{fi}:{run}")
            if not lo <= fc.value <= hi:
                viol += 1
            errors.append(observed_error(fc, exact))
        per_formula_violations.append(viol)
    return per_formula_violations, errors


def test_criterion_5_pac_guarantee(capsys, pac_experiment):
    violations, _ = pac_experiment
    worst = max(violations)
    verdict(
        capsys,
        worst <= 57,
        "criterion 5: per-formula [E/1.8, 1.8E] violations within binomial(200, 0.2) 99.9th pct",
        f"worst {worst}/200 across 30 formulas (cap 57), total {sum(violations)}",
    )


def test_criterion_8_observed_error(capsys, pac_experiment):
    _, errors = pac_experiment
    mean = statistics.fmean(errors)
    median = statistics.median(errors)
    ok = mean <= 0.3 and median <= 0.15
    verdict(
        capsys,
        ok,
        "criterion 8: observed error quality (mean <= 0.3, median <= 0.15)",
        f"mean {mean:.4f}, median {median:.4f} over {len(errors)} runs",
    )


# -------------------------------------------------------------- criterion 6


def test_criterion_6_per_round_failure_frequencies(capsys):
    rng = random.Random("acceptance-6")
    cfg = make_round_config(0.8)
    backend = BuiltinBackend()
    rounds_per_formula = 400
    low = up = total = 0
    for n in (11, 12, 12, 13, 13):
        f = _saturating_formula(rng, n)
        exact = Fraction(count_exact(f))
        for _ in range(rounds_per_formula):
            out = None
            while out is None:
                h = sample_hash(len(f.scope), rng)
                out = rounding_core(f, cfg, h, backend)
            est, _ = out
            v = est.as_fraction()
            if v < exact / Fraction(9, 5):
                low += 1
            elif v > exact * Fraction(9, 5):
                up += 1
            total += 1
    freq_low, freq_up = low / total, up / total
    cap_low = 0.157 + 3 * math.sqrt(0.157 * 0.843 / 2000)
    cap_up = 0.169 + 3 * math.sqrt(0.169 * 0.831 / 2000)
    ok = total >= 2000 and freq_low <= cap_low and freq_up <= cap_up
    verdict(
        capsys,
        ok,
        "criterion 6: empirical per-round failure rates under tabulated bounds",
        f"freq(L) {freq_low:.4f} <= {cap_low:.4f}, freq(U) {freq_up:.4f} <= {cap_up:.4f}, {total} rounds",
    )


# -------------------------------------------------------------- criterion 7


def test_criterion_7_round_counts_and_speedup(capsys):
    rng = random.Random("acceptance-7")
    instances = [_saturating_formula(rng, rng.randrange(12, 15)) for _ in range(10)]

    counts_ok = True
    classic_total = rounding_total = 0.0
    for i, f in enumerate(instances):
        t0 = time.perf_counter()
        r = count(f, 0.8, 0.001, mode="rounding", seed=f"c7:{i}")
        t1 = time.perf_counter()
        c = count(f, 0.8, 0.001, mode="classic", seed=f"c7:{i}")
        t2 = time.perf_counter()
        if r.is_exact or c.is_exact:
            counts_ok = False
        if r.iterations != 19 or len(r.round_ms) != 19:
            counts_ok = False
        if c.iterations != 117 or len(c.round_ms) != 117:
            counts_ok = False
        rounding_total += t1 - t0
        classic_total += t2 - t1
    ratio = classic_total / rounding_total
    ok = counts_ok and ratio >= 3.0
    verdict(
        capsys,
        ok,
        "criterion 7: 19 vs 117 rounds and >= 3x wall-clock gap",
        f"rounds ok {counts_ok}, classic {classic_total:.1f}s / rounding {rounding_total:.1f}s = {ratio:.2f}x",
    )


# -------------------------------------------------------------- criterion 9


def test_criterion_9_error_curve_crossings(capsys):
    rows = error_curve_rows(0.8, 131)
    first_round = next(t for t, rb, _ in rows if rb <= 1e-3)
    first_classic = next(t for t, _, cb in rows if cb <= 1e-3)
    ok = first_round == 19 and first_classic == 117
    verdict(
        capsys,
        ok,
        "criterion 9: failure-bound curves cross 1e-3 at t=19 (rounding) and t=117 (classic)",
        f"crossings at t={first_round} and t={first_classic}",
    )
