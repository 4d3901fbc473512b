"""Query-selection strategies.

The EER family shares one currency: a subquery evaluates the expected risk
of a single candidate (all hypothesized classes at once). Strategies
differ in which candidates they spend the budget on: everything
(eer_full), a uniform sample (eer_random_subsample), the cluster tree in
priority order (eer_breadth_first), or an adaptive frontier grown at the
current minimum-risk member (hse).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eer import RiskReport, expected_risk
from .errors import ConfigurationError, PoolExhaustedError, UsageError
from .harmonic import HarmonicModel
from .hierarchy import ClusterTree, TreeNode, tree_linearization

STRATEGY_KINDS = (
    "random",
    "margin",
    "entropy",
    "eer_full",
    "eer_random_subsample",
    "eer_breadth_first",
    "hse",
)
EER_KINDS = ("eer_full", "eer_random_subsample", "eer_breadth_first", "hse")


@dataclass
class StrategyConfig:
    kind: str
    subquery_budget: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ConfigurationError(f"unknown strategy kind {self.kind!r}")
        if self.subquery_budget is not None and self.subquery_budget < 1:
            raise ConfigurationError("subquery_budget must be >= 1")

    @property
    def needs_tree(self) -> bool:
        return self.kind in ("hse", "eer_breadth_first")


@dataclass
class SelectionTrace:
    """One selection round: the winner and every candidate it beat."""

    chosen: int
    evaluated: list[tuple[int, float]]
    subqueries_used: int

    def to_json_dict(self) -> dict:
        return {
            "chosen": self.chosen,
            "evaluated": [[p, r] for p, r in self.evaluated],
            "subqueries_used": self.subqueries_used,
        }


def _unlabeled(model: HarmonicModel) -> list[int]:
    return [int(i) for i in model.unlabeled_ids]


def select_random(unlabeled: list[int], rng: np.random.Generator) -> int:
    if not unlabeled:
        raise UsageError("empty unlabeled pool")
    return int(unlabeled[rng.integers(len(unlabeled))])


def select_margin(model: HarmonicModel) -> int:
    """Smallest top1-top2 posterior gap among unlabeled points."""
    pool = model.unlabeled_ids
    if pool.size == 0:
        raise UsageError("empty unlabeled pool")
    rows = np.sort(model.posterior[pool], axis=1)
    margins = rows[:, -1] - rows[:, -2]
    return int(pool[np.argmin(margins)])


def select_entropy(model: HarmonicModel) -> int:
    """Largest posterior entropy among unlabeled points (0 ln 0 = 0)."""
    pool = model.unlabeled_ids
    if pool.size == 0:
        raise UsageError("empty unlabeled pool")
    f = model.posterior[pool]
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(f > 0.0, np.log(f), 0.0)
    entropies = -(f * logs).sum(axis=1)
    return int(pool[np.argmax(entropies)])


def _trace_from(reports: list[RiskReport]) -> SelectionTrace:
    best = min(
        range(len(reports)), key=lambda t: (reports[t].expected_risk, t)
    )
    return SelectionTrace(
        chosen=reports[best].candidate,
        evaluated=[(r.candidate, r.expected_risk) for r in reports],
        subqueries_used=len(reports),
    )


def select_eer_full(model: HarmonicModel) -> SelectionTrace:
    """Exhaustive expected-risk scan of the whole unlabeled pool."""
    pool = _unlabeled(model)
    if not pool:
        raise PoolExhaustedError("no unlabeled candidates")
    return _trace_from([expected_risk(model, q) for q in pool])


def select_eer_random_subsample(
    model: HarmonicModel, budget: int, rng: np.random.Generator
) -> SelectionTrace:
    """Expected risk over a uniform without-replacement candidate sample."""
    if budget < 1:
        raise UsageError("budget must be >= 1")
    pool = _unlabeled(model)
    if not pool:
        raise PoolExhaustedError("no unlabeled candidates")
    take = min(budget, len(pool))
    picks = rng.choice(len(pool), size=take, replace=False)
    return _trace_from([expected_risk(model, pool[i]) for i in picks])


def select_eer_breadth_first(
    model: HarmonicModel, tree: ClusterTree, budget: int
) -> SelectionTrace:
    """Coarse-to-fine scan of the tree in priority order until the budget ends."""
    if budget < 1:
        raise UsageError("budget must be >= 1")
    reports: list[RiskReport] = []
    seen: set[int] = set()
    for node in tree_linearization(tree):
        if len(reports) >= budget:
            break
        rep = node.representative
        if rep in seen or model.is_labeled(rep):
            continue
        seen.add(rep)
        reports.append(expected_risk(model, rep))
    if not reports:
        raise PoolExhaustedError("all tree representatives are labeled")
    return _trace_from(reports)


def select_hse(
    model: HarmonicModel, tree: ClusterTree, budget: int
) -> SelectionTrace:
    """Hierarchical subquery search for the minimum expected-risk query.

    With no labels at all the root's representative is the query and no
    subqueries are spent. Otherwise an active set opens at the children of
    labeled tree nodes (plus the root while its representative is
    unlabeled), is evaluated in priority order, and greedily expands at the
    evaluated member with the lowest risk until the subquery budget runs
    out or nothing expandable remains.
    """
    if budget < 1:
        raise UsageError("budget must be >= 1")
    if not model.labels.assignments:
        return SelectionTrace(
            chosen=tree.node(tree.root).representative,
            evaluated=[],
            subqueries_used=0,
        )

    priority = tree.priority_ranks()
    active: list[TreeNode] = []
    active_ids: set[int] = set()
    expanded: set[int] = set()

    def admit(node: TreeNode) -> None:
        if node.id not in active_ids:
            active_ids.add(node.id)
            active.append(node)

    root_node = tree.node(tree.root)
    if not model.is_labeled(root_node.representative):
        admit(root_node)
    for node in tree.nodes:
        if model.is_labeled(node.representative):
            expanded.add(node.id)
            for child_id in node.children:
                admit(tree.node(child_id))

    risks: dict[int, float] = {}  # representative -> expected risk
    evaluated: list[tuple[int, float]] = []

    def evaluate(batch: list[TreeNode]) -> None:
        for node in sorted(batch, key=lambda t: priority[t.id]):
            if len(evaluated) >= budget:
                return
            rep = node.representative
            if rep in risks or model.is_labeled(rep):
                continue
            risk = expected_risk(model, rep).expected_risk
            risks[rep] = risk
            evaluated.append((rep, risk))

    evaluate(active)

    while len(evaluated) < budget:
        expandable = [
            node
            for node in active
            if node.children
            and node.id not in expanded
            and node.representative in risks
        ]
        if not expandable:
            break
        node = min(
            expandable,
            key=lambda t: (risks[t.representative], priority[t.id]),
        )
        expanded.add(node.id)
        children = [tree.node(cid) for cid in node.children]
        for child in children:
            admit(child)
        evaluate(children)

    if not evaluated:
        raise PoolExhaustedError("all tree representatives are labeled")
    best = min(range(len(evaluated)), key=lambda t: (evaluated[t][1], t))
    return SelectionTrace(
        chosen=evaluated[best][0],
        evaluated=evaluated,
        subqueries_used=len(evaluated),
    )
