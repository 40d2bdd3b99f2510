"""Bootstrap tests for the increasing convex order (Python bindings)."""

import json

from ._core import (
    __version__,
    bootstrap_distribution,
    canonical_distribution,
    cdf,
    empirical_stop_loss,
    mean,
    sample,
    statistic,
    stop_loss,
)
from . import _core

__all__ = [
    "__version__",
    "bootstrap_distribution",
    "canonical_distribution",
    "cdf",
    "classify",
    "empirical_stop_loss",
    "mean",
    "run_test",
    "sample",
    "statistic",
    "stop_loss",
    "table1",
]


def run_test(x, y, stat="both", alpha=0.05, resamples=1000, scheme="switched", seed=0, threads=0):
    """Run the bootstrap test(s); returns one report dict per statistic."""
    return json.loads(_core.run_test_json(list(x), list(y), stat, alpha, resamples, scheme, seed, threads))


def table1(tau=0.75, alphas=(0.10, 0.05, 0.025)):
    """Limiting critical values and rejection rates of the two-point example."""
    return json.loads(_core.table1_json(tau, list(alphas)))["rows"]


def classify(f, g, tau=0.5):
    """Classify a distribution pair relative to the null hypothesis."""
    return json.loads(_core.classify_json(f, g, tau))
