"""Unbiased rare-event estimation of P{sum_n a_n X_n > b} for heavy-tailed X."""

from .coefficients import Geometric, KappaClass, Polynomial, normalize_problem
from .distributions import CenteredPareto, Pareto
from .local_estimator import LocalEstimate, local_simulation
from .outer_randomizer import OuterLaw, estimate_batch, estimate_once
from .runner import CrudeTruncated, NaiveDebiased, Proposed, RunStats, asymptotic, run, sweep

__all__ = [
    "Pareto",
    "CenteredPareto",
    "Geometric",
    "Polynomial",
    "KappaClass",
    "normalize_problem",
    "LocalEstimate",
    "local_simulation",
    "OuterLaw",
    "estimate_once",
    "estimate_batch",
    "Proposed",
    "NaiveDebiased",
    "CrudeTruncated",
    "RunStats",
    "run",
    "sweep",
    "asymptotic",
]

__version__ = "0.1.0"
