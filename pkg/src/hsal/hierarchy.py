"""Cluster tree over the similarity graph via random-walk authority shifts.

Every tree node is represented by an actual datapoint, and an internal
node's representative is the representative of exactly one of its
children, so any node can stand in as a concrete subquery target. Levels
are built bottom-up: each level's reduced graph collapses the previous
level's clusters, a random walk at a doubling time scale scores local
authorities, and nodes shift toward the authority with the strongest
visit mass until the walk's fixed points absorb their basins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import SimilarityGraph


@dataclass
class TreeNode:
    id: int
    representative: int
    level: int
    parent: int | None
    children: list[int]
    member_count: int


@dataclass
class ClusterTree:
    nodes: list[TreeNode]
    root: int
    levels: int

    def node(self, node_id: int) -> TreeNode:
        return self.nodes[node_id]

    def __post_init__(self):
        self._linearization: list[TreeNode] | None = None
        self._priority: dict[int, int] | None = None

    def priority_ranks(self) -> dict[int, int]:
        """Node id -> rank in the subquery priority order (cached)."""
        if self._priority is None:
            self._priority = {
                t.id: rank for rank, t in enumerate(tree_linearization(self))
            }
        return self._priority

    def to_json_dict(self) -> dict:
        return {
            "levels": self.levels,
            "root": self.root,
            "nodes": [
                {
                    "id": t.id,
                    "representative": t.representative,
                    "level": t.level,
                    "parent": t.parent,
                    "member_count": t.member_count,
                }
                for t in self.nodes
            ],
        }


def _visit_matrix(p: np.ndarray, log2_steps: int) -> np.ndarray:
    """Expected visit counts over t = 2**log2_steps steps: sum of P^1..P^t."""
    power = p.copy()
    visits = p.copy()
    for _ in range(log2_steps):
        visits = visits + power @ visits
        power = power @ power
    return visits


def _authority_targets(w: np.ndarray, level: int) -> tuple[np.ndarray, np.ndarray]:
    """Shift target for each reduced node and the column visit mass."""
    m = w.shape[0]
    degrees = w.sum(axis=1)
    p = np.zeros_like(w)
    connected = degrees > 0
    p[connected] = w[connected] / degrees[connected, None]
    p[~connected, ~connected] = 1.0  # isolated clusters hold still
    visits = _visit_matrix(p, level + 1)
    mass = visits.sum(axis=0)

    targets = np.empty(m, dtype=np.int64)
    scores = visits * mass[None, :]
    for i in range(m):
        cand = np.nonzero(w[i] > 0)[0]
        cand = np.unique(np.append(cand, i))
        best = cand[np.argmax(scores[i, cand])]  # argmax ties -> lower id
        targets[i] = best
    return targets, mass


def _resolve_basins(targets: np.ndarray) -> np.ndarray:
    """Follow shift pointers to their fixed points; cycles collapse to the
    lowest-id member."""
    m = targets.size
    root_of = np.full(m, -1, dtype=np.int64)
    for start in range(m):
        if root_of[start] >= 0:
            continue
        path = [start]
        seen = {start}
        while True:
            nxt = int(targets[path[-1]])
            if root_of[nxt] >= 0:
                root = root_of[nxt]
                break
            if nxt == path[-1]:
                root = nxt
                break
            if nxt in seen:
                cycle_start = path.index(nxt)
                root = min(path[cycle_start:])
                break
            path.append(nxt)
            seen.add(nxt)
        for node in path:
            root_of[node] = root
    return root_of


def _order_children(children: list[TreeNode]) -> list[int]:
    return [
        t.id
        for t in sorted(children, key=lambda t: (-t.member_count, t.representative))
    ]


def build_hierarchy(graph: SimilarityGraph) -> ClusterTree:
    """Deterministic multi-level cluster tree over the graph.

    The walk scale doubles per level (t = 2^(level+1)). A level where every
    node is its own authority would stall, so it instead closes the tree
    with a root at the maximal-visit-mass node.
    """
    n = graph.n
    nodes = [TreeNode(i, i, 0, None, [], 1) for i in range(n)]
    current = list(range(n))  # node ids, ascending representative order
    w = graph.weights.toarray()
    level = 0

    while len(current) > 1:
        targets, mass = _authority_targets(w, level)
        root_of = _resolve_basins(targets)
        fixed = np.unique(root_of)

        if fixed.size == len(current):
            # no merges: force a single root over everything
            rep_idx = int(np.argmax(mass))
            children = [nodes[cid] for cid in current]
            root = TreeNode(
                id=len(nodes),
                representative=nodes[current[rep_idx]].representative,
                level=level + 1,
                parent=None,
                children=_order_children(children),
                member_count=sum(t.member_count for t in children),
            )
            nodes.append(root)
            for t in children:
                t.parent = root.id
            current = [root.id]
            break

        new_current: list[int] = []
        for f in fixed.tolist():
            members = np.nonzero(root_of == f)[0]
            children = [nodes[current[i]] for i in members.tolist()]
            parent = TreeNode(
                id=len(nodes),
                representative=nodes[current[f]].representative,
                level=level + 1,
                parent=None,
                children=_order_children(children),
                member_count=sum(t.member_count for t in children),
            )
            nodes.append(parent)
            for t in children:
                t.parent = parent.id
            new_current.append(parent.id)

        # collapse W: inter-cluster weights are summed, diagonal dropped
        m = fixed.size
        basin_index = {int(f): idx for idx, f in enumerate(fixed.tolist())}
        proj = np.zeros((len(current), m))
        for i, f in enumerate(root_of.tolist()):
            proj[i, basin_index[f]] = 1.0
        w = proj.T @ w @ proj
        np.fill_diagonal(w, 0.0)

        order = np.argsort([nodes[cid].representative for cid in new_current])
        current = [new_current[i] for i in order.tolist()]
        w = w[np.ix_(order, order)]
        level += 1

    root_id = current[0]
    return ClusterTree(nodes=nodes, root=root_id, levels=nodes[root_id].level + 1)


def tree_linearization(tree: ClusterTree) -> list[TreeNode]:
    """Priority order for subqueries: by level top-down, then by descendant
    count, then by representative id; the root always comes first."""
    if tree._linearization is None:
        tree._linearization = sorted(
            tree.nodes,
            key=lambda t: (-t.level, -t.member_count, t.representative),
        )
    return tree._linearization
