"""Benchmark harness comparing the two counter modes.

Runs every instance under each mode with a wall-clock limit, then
aggregates PAR-2 scores (a timeout costs twice the limit), the
geometric-mean speedup of rounding over classic on instances both modes
solved, and observed estimation error against exact counts where those
are available.  Instances run independently, so the harness can fan out
over processes; results are aggregated in a fixed order either way.
"""

from __future__ import annotations

import concurrent.futures
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import count
from .formula import Formula
from .oracle import get_backend
from .solver import DeadlineExceeded

CSV_HEADER = "instance,mode,seconds,timeout,estimate_mantissa,estimate_exp,seed"


@dataclass
class BenchRecord:
    instance: str
    mode: str
    seconds: float
    timed_out: bool
    mantissa: Optional[float]
    exponent: Optional[int]
    seed: str
    error: Optional[str] = None  # crash note; scored like a timeout

    @property
    def solved(self) -> bool:
        return not self.timed_out and self.error is None

    def value(self) -> Optional[Fraction]:
        if self.mantissa is None or self.exponent is None:
            return None
        return Fraction(self.mantissa) * Fraction(2) ** self.exponent


@dataclass
class BenchReport:
    records: list[BenchRecord]
    time_limit: float
    modes: tuple[str, ...]

    def for_mode(self, mode: str) -> list[BenchRecord]:
        return [r for r in self.records if r.mode == mode]

    def solved_count(self, mode: str) -> int:
        return sum(1 for r in self.for_mode(mode) if r.solved)

    def par2(self, mode: str) -> float:
        """Mean runtime with unsolved runs charged twice the limit."""
        rows = self.for_mode(mode)
        if not rows:
            return 0.0
        total = sum(r.seconds if r.solved else 2.0 * self.time_limit for r in rows)
        return total / len(rows)

    def geomean_speedup(self, base: str = "classic", target: str = "rounding"):
        """Geometric mean of base/target runtimes over instances solved by
        both modes; None when no instance qualifies."""
        by_inst: dict[str, dict[str, BenchRecord]] = {}
        for r in self.records:
            by_inst.setdefault(r.instance, {})[r.mode] = r
        logs = []
        for inst, rows in by_inst.items():
            a, b = rows.get(base), rows.get(target)
            if a and b and a.solved and b.solved:
                logs.append(
                    math.log(max(a.seconds, 1e-9) / max(b.seconds, 1e-9))
                )
        if not logs:
            return None
        return math.exp(sum(logs) / len(logs))

    def csv(self) -> str:
        lines = [CSV_HEADER]
        for r in sorted(self.records, key=lambda r: (r.instance, r.mode)):
            unsolved = r.timed_out or r.error is not None
            lines.append(
                f"{r.instance},{r.mode},{r.seconds:.6f},{int(unsolved)},"
                f"{'' if r.mantissa is None else repr(r.mantissa)},"
                f"{'' if r.exponent is None else r.exponent},{r.seed}"
            )
        return "\n".join(lines) + "\n"


def _as_value(estimate) -> Fraction:
    if hasattr(estimate, "value"):  # FinalCount
        return estimate.value
    if hasattr(estimate, "as_fraction"):  # Estimate
        return estimate.as_fraction()
    return Fraction(estimate)


def observed_error(estimate, exact: int) -> float:
    """max(estimate/exact, exact/estimate) - 1; how far outside a
    multiplicative band the estimate landed.  Zero iff they agree."""
    value = _as_value(estimate)
    if exact <= 0 or value <= 0:
        raise ValueError("observed error needs positive counts")
    ratio = max(value / exact, Fraction(exact) / value)
    return float(ratio - 1)


def report_from_csv(text: str, time_limit: float) -> BenchReport:
    """Rebuild a report from its own CSV (everything but the time limit
    lives in the rows)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unrecognized CSV header")
    records = []
    for ln in lines[1:]:
        inst, mode, secs, tout, mant, exp, seed = ln.split(",", 6)
        records.append(
            BenchRecord(
                instance=inst,
                mode=mode,
                seconds=float(secs),
                timed_out=tout == "1",
                mantissa=None if mant == "" else float(mant),
                exponent=None if exp == "" else int(exp),
                seed=seed,
            )
        )
    modes = tuple(sorted({r.mode for r in records}))
    return BenchReport(records=records, time_limit=time_limit, modes=modes)


def _instance_seed(master, name: str) -> str:
    return f"{master!r}/{name}"


def _run_one(args) -> BenchRecord:
    (name, formula, mode, epsilon, delta, time_limit, seed_str, backend_name, command) = args
    backend = get_backend(backend_name, command)
    start = time.monotonic()
    try:
        result = count(
            formula,
            epsilon=epsilon,
            delta=delta,
            mode=mode,
            seed=seed_str,
            backend=backend,
            time_limit=time_limit,
        )
    except DeadlineExceeded:
        return BenchRecord(name, mode, time_limit, True, None, None, seed_str)
    except Exception as exc:  # crash isolation: score it, keep going
        elapsed = time.monotonic() - start
        return BenchRecord(
            name, mode, elapsed, False, None, None, seed_str, error=repr(exc)
        )
    elapsed = time.monotonic() - start
    return BenchRecord(
        name,
        mode,
        elapsed,
        False,
        result.estimate.mantissa,
        result.estimate.exponent,
        seed_str,
    )


def run_bench(
    instances: Sequence[tuple[str, Formula]],
    epsilon: float = 0.8,
    delta: float = 0.001,
    time_limit: float = 60.0,
    seed=0,
    modes: tuple[str, ...] = ("rounding", "classic"),
    workers: int = 1,
    backend_name: Optional[str] = None,
    command: Optional[Sequence[str]] = None,
) -> BenchReport:
    if not instances:
        raise ValueError("no instances to run")
    tasks = [
        (
            name,
            formula,
            mode,
            epsilon,
            delta,
            time_limit,
            _instance_seed(seed, name),
            backend_name,
            list(command) if command else None,
        )
        for name, formula in instances
        for mode in modes
    ]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_run_one, tasks))
    else:
        records = [_run_one(t) for t in tasks]
    records.sort(key=lambda r: (r.instance, r.mode))
    return BenchReport(records=records, time_limit=time_limit, modes=tuple(modes))
