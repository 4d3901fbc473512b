"""Expected error of the learner and expected risk of a candidate query.

Under 0/1 loss with MAP predictions, the expected error of a posterior F
collapses to sum_i (1 - max_c F_ic). The risk of querying a candidate is
the expectation of that error over the candidate's own posterior, with one
hypothesized-label lookahead per class (this is the "subquery" unit that
selection budgets count).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError, ValidationError
from .harmonic import HarmonicModel, lookahead

ROW_SUM_TOL = 1e-6


@dataclass(frozen=True)
class RiskReport:
    """Risk of one candidate: per-hypothesized-class errors and their mix."""

    candidate: int
    expected_risk: float
    per_class_risk: tuple[float, ...]
    subquery_cost: int


def expected_error(posterior: np.ndarray) -> float:
    """sum_i (1 - max_c F_ic) over a row-stochastic posterior."""
    f = np.asarray(posterior, dtype=np.float64)
    sums = f.sum(axis=1)
    bad = np.abs(sums - 1.0) > ROW_SUM_TOL
    if bad.any():
        i = int(np.argmax(bad))
        raise ValidationError(f"posterior row {i} sums to {sums[i]!r}, not 1")
    return float(f.shape[0] - f.max(axis=1).sum())


def expected_risk(model: HarmonicModel, candidate: int) -> RiskReport:
    """Posterior-weighted expected error over the candidate's possible labels.

    Costs exactly one subquery: C lookaheads, one per hypothesized class.
    Reports are cached on the model until the next label invalidates them.
    """
    cached = model.risk_cache.get(candidate)
    if cached is not None:
        return cached  # type: ignore[return-value]
    per_class = tuple(
        expected_error(lookahead(model, candidate, cls))
        for cls in range(model.class_count)
    )
    risk = float(np.dot(model.posterior[candidate], per_class))
    report = RiskReport(
        candidate=candidate,
        expected_risk=risk,
        per_class_risk=per_class,
        subquery_cost=model.class_count,
    )
    model.risk_cache[candidate] = report
    return report


def select_min_risk(
    model: HarmonicModel, candidates: list[int]
) -> tuple[int, list[RiskReport]]:
    """Evaluate candidates in order; minimal risk wins, ties to the earliest."""
    if not candidates:
        raise UsageError("no candidates to evaluate")
    reports = [expected_risk(model, q) for q in candidates]
    best = min(range(len(reports)), key=lambda t: (reports[t].expected_risk, t))
    return reports[best].candidate, reports
