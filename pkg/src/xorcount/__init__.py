"""Hashing-based approximate model counting with (epsilon, delta) guarantees."""

__version__ = "0.1.0"

from .bench import BenchRecord, BenchReport, observed_error, report_from_csv, run_bench
from .core import (
    DEFAULT_DELTA,
    DEFAULT_EPSILON,
    Estimate,
    FinalCount,
    RoundConfig,
    RoundFailedError,
    classic_core,
    count,
    find_median,
    make_round_config,
    rounding_core,
)
from .exact import ScopeTooLargeError, count_exact
from .formula import (
    Formula,
    ParseError,
    ProjectionScope,
    make_formula,
    normalize_clause,
    parse_dimacs,
    parse_extended_dimacs,
    serialize_extended_dimacs,
)
from .hashing import PrefixSlice, XorConstraint, XorHash, cell_constraints, sample_hash
from .oracle import (
    BoundedResult,
    BuiltinBackend,
    ExternalBackend,
    SolverError,
    encode_xors_cnf,
    get_backend,
)
from .planner import (
    CLASSIC_P_MAX,
    ROUNDING_PROFILES,
    RoundingProfile,
    classic_iterations,
    classic_iterations_closed_form,
    curves_csv,
    error_curve_rows,
    eta,
    exact_median_error,
    profile_for,
    rounding_iterations,
)
from .search import MonotonicityError, SearchState, find_transition, transition_search
from .solver import DeadlineExceeded, Solver

__all__ = [
    "BenchRecord",
    "BenchReport",
    "BoundedResult",
    "BuiltinBackend",
    "CLASSIC_P_MAX",
    "DEFAULT_DELTA",
    "DEFAULT_EPSILON",
    "DeadlineExceeded",
    "Estimate",
    "ExternalBackend",
    "FinalCount",
    "Formula",
    "MonotonicityError",
    "ParseError",
    "PrefixSlice",
    "ProjectionScope",
    "ROUNDING_PROFILES",
    "RoundConfig",
    "RoundFailedError",
    "RoundingProfile",
    "ScopeTooLargeError",
    "SearchState",
    "Solver",
    "SolverError",
    "XorConstraint",
    "XorHash",
    "cell_constraints",
    "classic_core",
    "classic_iterations",
    "classic_iterations_closed_form",
    "count",
    "count_exact",
    "curves_csv",
    "encode_xors_cnf",
    "error_curve_rows",
    "eta",
    "exact_median_error",
    "find_median",
    "find_transition",
    "get_backend",
    "make_formula",
    "make_round_config",
    "normalize_clause",
    "observed_error",
    "parse_dimacs",
    "parse_extended_dimacs",
    "profile_for",
    "report_from_csv",
    "rounding_core",
    "rounding_iterations",
    "run_bench",
    "sample_hash",
    "serialize_extended_dimacs",
    "transition_search",
]
