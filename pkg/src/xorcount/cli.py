"""Command-line interface.

Subcommands:
  count     approximate a (projected) model count
  exact     exact count for small inputs
  plan      show the per-eps configuration and round counts
  curves    CSV of median failure bounds per round count
  bench     run both modes over a directory of CNF files
  solve     one SAT call over extended DIMACS (s/v output, exit 10/20)
  selftest  quick internal consistency checks

Exit codes: 0 success, 2 bad parameters/usage, 3 input parse error,
4 solver or backend failure, 5 selftest failure (solve: 10 SAT,
20 UNSAT).
"""

from __future__ import annotations

import argparse
import glob
import json
import logging
import os
import shlex
import sys

from . import __version__
from .bench import run_bench
from .core import (
    DEFAULT_DELTA,
    DEFAULT_EPSILON,
    MODES,
    RoundFailedError,
    count,
    make_round_config,
)
from .exact import ScopeTooLargeError, count_exact
from .formula import ParseError, parse_dimacs, parse_extended_dimacs
from .oracle import SolverError, encode_xors_cnf, get_backend
from .planner import (
    classic_iterations,
    classic_iterations_closed_form,
    curves_csv,
    error_curve_rows,
    profile_for,
    rounding_iterations,
)
from .solver import DeadlineExceeded, Solver

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_SOLVER = 4
EXIT_SELFTEST = 5

log = logging.getLogger("xorcount")


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _solver_command(args):
    cmd = getattr(args, "solver_cmd", None) or os.environ.get("XORCOUNT_SOLVER")
    return shlex.split(cmd) if cmd else None


def _emit(args, payload: dict, text_lines):
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _cmd_count(args) -> int:
    formula = parse_dimacs(_read_input(args.input))
    backend = get_backend(args.backend, _solver_command(args))
    result = count(
        formula,
        epsilon=args.epsilon,
        delta=args.delta,
        mode=args.mode,
        seed=args.seed,
        backend=backend,
        independent_rounds=args.independent_rounds,
        time_limit=args.time_limit,
    )
    est = result.estimate
    payload = {
        "mantissa": est.mantissa,
        "exponent": est.exponent,
        "decimal": est.decimal(),
        "exact": result.is_exact,
        "mode": result.mode,
        "epsilon": result.epsilon,
        "delta": result.delta,
        "rounds": result.iterations,
        "round_levels": list(result.round_ms),
        "seed": str(args.seed),
    }
    lines = [
        f"estimate: {est.mantissa} * 2^{est.exponent}",
        f"decimal: {est.decimal()}",
        f"exact: {'yes' if result.is_exact else 'no'}",
        f"mode: {result.mode}  rounds: {result.iterations}",
    ]
    if args.verbose and result.round_ms:
        lines.append(f"round levels: {' '.join(map(str, result.round_ms))}")
    _emit(args, payload, lines)
    return EXIT_OK


def _cmd_exact(args) -> int:
    formula, xors = parse_extended_dimacs(_read_input(args.input))
    value = count_exact(formula, xors, limit=args.limit)
    _emit(args, {"count": str(value)}, [str(value)])
    return EXIT_OK


def _cmd_plan(args) -> int:
    cfg = make_round_config(args.epsilon)
    prof = profile_for(args.epsilon)
    t_round = rounding_iterations(args.epsilon, args.delta)
    t_classic = classic_iterations(args.delta)
    payload = {
        "epsilon": cfg.epsilon,
        "delta": args.delta,
        "thresh": cfg.thresh,
        "pivot": cfg.pivot,
        "round_value": cfg.round_value,
        "round_up": cfg.round_up,
        "p_low": prof.p_low,
        "p_up": prof.p_up,
        "rounding_rounds": t_round,
        "classic_rounds": t_classic,
        "classic_rounds_closed_form": classic_iterations_closed_form(args.delta),
    }
    lines = [
        f"epsilon={cfg.epsilon} delta={args.delta}",
        f"thresh: {cfg.thresh}",
        f"pivot: {cfg.pivot:.4f}",
        f"round value: {cfg.round_value:.4f} (round up: {'yes' if cfg.round_up else 'no'})",
        f"per-round failure: low {prof.p_low}, up {prof.p_up}",
        f"t(rounding)={t_round} t(classic)={t_classic} "
        f"(classic closed form {payload['classic_rounds_closed_form']})",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def _cmd_curves(args) -> int:
    text = curves_csv(error_curve_rows(args.epsilon, args.t_max))
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


def _cmd_bench(args) -> int:
    paths = sorted(glob.glob(os.path.join(args.directory, "*.cnf")))
    if not paths:
        print(f"no .cnf files under {args.directory}", file=sys.stderr)
        return EXIT_USAGE
    instances = []
    for p in paths:
        name = os.path.splitext(os.path.basename(p))[0]
        instances.append((name, parse_dimacs(_read_input(p))))
    report = run_bench(
        instances,
        epsilon=args.epsilon,
        delta=args.delta,
        time_limit=args.time_limit,
        seed=args.seed,
        workers=args.workers,
        backend_name=args.backend,
        command=_solver_command(args),
    )
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(report.csv())
    for mode in report.modes:
        print(
            f"{mode}: solved {report.solved_count(mode)}/{len(instances)}  "
            f"PAR-2 {report.par2(mode):.3f}s"
        )
    speedup = report.geomean_speedup()
    if speedup is not None:
        print(f"geomean speedup (classic/rounding): {speedup:.2f}x")
    if args.verbose:
        for r in report.records:
            status = "ok" if r.solved else ("timeout" if r.timed_out else "error")
            print(f"  {r.instance} [{r.mode}] {r.seconds:.3f}s {status}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    formula, xors = parse_extended_dimacs(_read_input(args.input))
    solver = Solver(formula.num_vars)
    for cl in formula.clauses:
        solver.add_clause(cl)
    for cl in encode_xors_cnf(xors, formula.num_vars + 1):
        solver.add_clause(cl)
    model = solver.solve()
    if model is None:
        print("s UNSATISFIABLE")
        return 20
    print("s SATISFIABLE")
    lits = [v if model[v] else -v for v in range(1, formula.num_vars + 1)]
    for i in range(0, len(lits), 20):
        chunk = lits[i : i + 20]
        tail = " 0" if i + 20 >= len(lits) else ""
        print("v " + " ".join(str(x) for x in chunk) + tail)
    if not lits:
        print("v 0")
    return 10


def _cmd_selftest(args) -> int:
    failures = 0

    def check(name, ok, detail=""):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
        if not ok:
            failures += 1

    from .planner import eta

    check("eta(3,2,0.25) = 10/64", abs(eta(3, 2, 0.25) - 0.15625) < 1e-15)
    check("rounds(0.8, 0.001) = 19", rounding_iterations(0.8, 0.001) == 19)
    check("classic rounds(0.001) = 117", classic_iterations(0.001) == 117)
    cfg = make_round_config(0.8)
    check("thresh(0.8) = 72", cfg.thresh == 72)

    from .formula import make_formula

    f = make_formula(3, [(1, 2), (-1, 3)])
    check("exact count", count_exact(f) == 4)
    got = count(f, epsilon=0.8, delta=0.1, seed=11)
    check(
        "small formula counted exactly via base case",
        got.is_exact and got.estimate.as_fraction() == 4,
    )
    free = make_formula(4, [(1,)])
    check("free variables double the count", count_exact(free) == 8)
    return EXIT_OK if failures == 0 else EXIT_SELFTEST


def _add_common(p, with_backend=False):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("-v", "--verbose", action="count", default=0)
    if with_backend:
        p.add_argument(
            "--backend",
            choices=["built-in", "external"],
            default="built-in",
            help="where SAT calls go (default: built-in)",
        )
        p.add_argument(
            "--solver-cmd",
            metavar="CMD",
            help="external solver command line (or set XORCOUNT_SOLVER)",
        )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="xorcount",
        description="Approximate model counting with (epsilon, delta) guarantees.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="approximate model count of a DIMACS file")
    p.add_argument("input", help="CNF path or - for stdin")
    p.add_argument("-e", "--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("-d", "--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--mode", choices=list(MODES), default="rounding")
    p.add_argument("--seed", default=0)
    p.add_argument("--time-limit", type=float, default=None, metavar="SEC")
    p.add_argument(
        "--independent-rounds",
        action="store_true",
        help="derive per-round seeds (order-independent rounds)",
    )
    _add_common(p, with_backend=True)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("exact", help="exact count (small formulas only)")
    p.add_argument("input")
    p.add_argument("--limit", type=int, default=26, help="max variables/scope size")
    _add_common(p)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("plan", help="show configuration for epsilon and delta")
    p.add_argument("-e", "--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("-d", "--delta", type=float, default=DEFAULT_DELTA)
    _add_common(p)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("curves", help="median failure bound per round count, CSV")
    p.add_argument("-e", "--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--t-max", type=int, default=151)
    p.add_argument("-o", "--out", default="-")
    _add_common(p)
    p.set_defaults(func=_cmd_curves)

    p = sub.add_parser("bench", help="run both modes over a directory of .cnf files")
    p.add_argument("directory")
    p.add_argument("-e", "--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("-d", "--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--time-limit", type=float, default=60.0, metavar="SEC")
    p.add_argument("--seed", default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", metavar="FILE", help="write per-run records here")
    _add_common(p, with_backend=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("solve", help="single SAT call on extended DIMACS")
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("selftest", help="quick internal consistency checks")
    _add_common(p)
    p.set_defaults(func=_cmd_selftest)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, ScopeTooLargeError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, RoundFailedError, DeadlineExceeded) as exc:
        kind = "timeout" if isinstance(exc, DeadlineExceeded) else "solver failure"
        print(f"{kind}: {exc}" if str(exc) else kind, file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
