"""Batch multi-objective Bayesian optimization with adaptive acquisition selection."""

from ._pdbo import (
    DimensionError,
    DomainError,
    ExperimentTrace,
    IoError,
    IterationRecord,
    LookupError,
    NumericalError,
    ParameterError,
    Problem,
    RunConfig,
    dominates,
    dpf,
    dpp_select,
    hvc,
    hypervolume,
    igd,
    make_problem,
    nondominated_front,
    problem_registry,
    read_front_file,
    read_trace,
    run,
    write_trace,
)

__all__ = [
    "DimensionError",
    "DomainError",
    "ExperimentTrace",
    "IoError",
    "IterationRecord",
    "LookupError",
    "NumericalError",
    "ParameterError",
    "Problem",
    "RunConfig",
    "dominates",
    "dpf",
    "dpp_select",
    "hvc",
    "hypervolume",
    "igd",
    "make_problem",
    "nondominated_front",
    "problem_registry",
    "read_front_file",
    "read_trace",
    "run",
    "write_trace",
]
