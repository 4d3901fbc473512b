"""Active-learning session loop: initial queries, oracle answers, bookkeeping.

A session owns the graph, the harmonic model, and (for tree strategies)
the cluster hierarchy. Queries are issued one at a time and are idempotent
until answered; every answered query appends the accuracy on the remaining
unlabeled points to the learning curve when ground truth is available.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import (
    ConfigurationError,
    OutOfOrderError,
    PoolExhaustedError,
    SessionComplete,
    UsageError,
    ValidationError,
)
from .graph import SimilarityGraph, build_graph
from .harmonic import HarmonicModel, LabelState, add_label, predict, solve_harmonic
from .hierarchy import ClusterTree, build_hierarchy, tree_linearization
from .strategies import (
    SelectionTrace,
    StrategyConfig,
    select_eer_breadth_first,
    select_eer_full,
    select_eer_random_subsample,
    select_entropy,
    select_hse,
    select_margin,
    select_random,
)

GRAPH_KINDS = ("perplexity", "mean", "binary", "knn")


@dataclass
class SessionConfig:
    """Benchmark protocol defaults: 10 neighbors, perplexity 30, 50 queries,
    25*ln(N) subqueries, 3 initial queries."""

    k: int = 10
    perplexity: float = 30.0
    query_budget: int = 50
    subquery_factor: float = 25.0
    initial_queries: int = 3
    strategy: StrategyConfig = field(default_factory=lambda: StrategyConfig("hse"))
    graph_kind: str = "perplexity"
    seed: int = 0
    subquery_log_base: float | None = None  # None = natural log

    def __post_init__(self):
        if isinstance(self.strategy, str):
            self.strategy = StrategyConfig(self.strategy)
        if self.graph_kind not in GRAPH_KINDS:
            raise ConfigurationError(f"unknown graph kind {self.graph_kind!r}")
        for name in ("k", "query_budget", "initial_queries"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be >= 1")
        if self.subquery_factor <= 0 or self.perplexity <= 0:
            raise ConfigurationError("perplexity and subquery_factor must be > 0")


@dataclass
class LearningCurve:
    accuracies: list[float] = field(default_factory=list)


def auc(curve: LearningCurve) -> float:
    """Mean per-query accuracy, the normalized area under the curve."""
    if not curve.accuracies:
        raise UsageError("learning curve is empty")
    return float(np.mean(curve.accuracies))


def subquery_budget_for(
    n: int, factor: float, log_base: float | None = None
) -> int:
    """ceil(factor * log(N)); natural log unless a base is configured."""
    log_n = math.log(n) if log_base is None else math.log(n, log_base)
    return max(1, math.ceil(factor * log_n))


@dataclass
class QueryRecord:
    point: int
    cls: int
    timestamp: float


class ActiveSession:
    """One oracle-in-the-loop run over a fixed dataset."""

    def __init__(
        self,
        dataset: Dataset,
        config: SessionConfig,
        graph: SimilarityGraph,
        model: HarmonicModel,
        tree: ClusterTree | None,
        initial_plan: list[int],
        rng: np.random.Generator,
    ):
        self.dataset = dataset
        self.config = config
        self.graph = graph
        self.model = model
        self.tree = tree
        self.query_log: list[QueryRecord] = []
        self.curve = LearningCurve()
        self.status = "awaiting_label"
        self.subquery_budget = subquery_budget_for(
            dataset.n, config.subquery_factor, config.subquery_log_base
        )
        self._initial_plan = initial_plan
        self._rng = rng
        self._issued: int | None = None
        self._last_trace: SelectionTrace | None = None

    @property
    def answered(self) -> int:
        return len(self.query_log)

    @property
    def last_trace(self) -> SelectionTrace | None:
        return self._last_trace

    def labeled_points(self) -> list[int]:
        return [q.point for q in self.query_log]


def _initial_queries(
    dataset: Dataset,
    config: SessionConfig,
    tree: ClusterTree | None,
    rng: np.random.Generator,
) -> list[int]:
    count = min(config.initial_queries, dataset.n)
    if config.strategy.kind == "hse":
        assert tree is not None
        plan: list[int] = []
        for node in tree_linearization(tree):
            if node.representative not in plan:
                plan.append(node.representative)
            if len(plan) == count:
                break
        return plan
    picks = rng.choice(dataset.n, size=count, replace=False)
    return [int(p) for p in picks]


def start_session(dataset: Dataset, config: SessionConfig) -> ActiveSession:
    """Build graph (and tree when the strategy needs it) and queue the
    initial queries; the session then awaits its first label."""
    if config.k >= dataset.n:
        raise ConfigurationError(
            f"k={config.k} needs more than {dataset.n} datapoints"
        )
    graph = build_graph(dataset, config.graph_kind, config.k, config.perplexity)
    tree = build_hierarchy(graph) if config.strategy.needs_tree else None
    model = solve_harmonic(graph, LabelState({}, dataset.class_count))
    rng = np.random.default_rng(config.seed)
    plan = _initial_queries(dataset, config, tree, rng)
    return ActiveSession(dataset, config, graph, model, tree, plan, rng)


def _dispatch_strategy(session: ActiveSession) -> tuple[int, SelectionTrace | None]:
    kind = session.config.strategy.kind
    model = session.model
    budget = session.subquery_budget
    if kind == "random":
        pool = [int(i) for i in model.unlabeled_ids]
        if not pool:
            raise PoolExhaustedError("no unlabeled points left")
        return select_random(pool, session._rng), None
    if kind == "margin":
        return select_margin(model), None
    if kind == "entropy":
        return select_entropy(model), None
    if kind == "eer_full":
        trace = select_eer_full(model)
    elif kind == "eer_random_subsample":
        trace = select_eer_random_subsample(model, budget, session._rng)
    elif kind == "eer_breadth_first":
        trace = select_eer_breadth_first(model, session.tree, budget)
    else:
        trace = select_hse(model, session.tree, budget)
    return trace.chosen, trace


def next_query(session: ActiveSession) -> int:
    """The point the oracle should label next; stable until answered."""
    if session.status == "complete":
        raise SessionComplete(f"budget of {session.config.query_budget} spent")
    if session._issued is not None:
        return session._issued
    if session._initial_plan:
        point = session._initial_plan[0]
        session._last_trace = None
    else:
        if session.model.unlabeled_ids.size == 0:
            raise PoolExhaustedError("no unlabeled points left")
        point, trace = _dispatch_strategy(session)
        session._last_trace = trace
    session._issued = point
    return point


def submit_label(session: ActiveSession, point: int, cls: int) -> ActiveSession:
    """Apply the oracle's answer for the currently issued query."""
    if session.status == "complete":
        raise SessionComplete(f"budget of {session.config.query_budget} spent")
    issued = session._issued if session._issued is not None else next_query(session)
    if point != issued:
        raise OutOfOrderError(f"expected label for point {issued}, got {point}")
    if not 0 <= cls < session.dataset.class_count:
        raise ValidationError(
            f"class {cls} out of range [0, {session.dataset.class_count})"
        )
    add_label(session.model, point, cls)
    session.query_log.append(QueryRecord(point, cls, time.time()))
    if session._initial_plan and session._initial_plan[0] == point:
        session._initial_plan.pop(0)
    session._issued = None

    if session.dataset.labels is not None:
        remaining = session.model.unlabeled_ids
        if remaining.size:
            correct = predict(session.model)[remaining] == session.dataset.labels[remaining]
            session.curve.accuracies.append(float(np.mean(correct)))
        else:
            session.curve.accuracies.append(1.0)

    if (
        session.answered >= session.config.query_budget
        or session.model.unlabeled_ids.size == 0
    ):
        session.status = "complete"
    return session


def run_simulated(
    dataset: Dataset, config: SessionConfig
) -> tuple[LearningCurve, list[float]]:
    """Full loop against the ground-truth oracle; times each selection."""
    if dataset.labels is None:
        raise UsageError("simulated runs need ground-truth labels")
    session = start_session(dataset, config)
    per_query_seconds: list[float] = []
    while session.status != "complete":
        t0 = time.perf_counter()
        try:
            point = next_query(session)
        except PoolExhaustedError:
            break
        per_query_seconds.append(time.perf_counter() - t0)
        submit_label(session, point, int(dataset.labels[point]))
    return session.curve, per_query_seconds


def curve_export(
    config: SessionConfig,
    curve: LearningCurve,
    per_query_seconds: list[float] | None = None,
) -> dict:
    """Curve record for files and the HTTP API."""
    out = {
        "strategy": config.strategy.kind,
        "seed": config.seed,
        "accuracies": curve.accuracies,
        "auc": auc(curve) if curve.accuracies else None,
    }
    if per_query_seconds is not None:
        out["per_query_seconds"] = per_query_seconds
    return out
