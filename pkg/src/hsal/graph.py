"""Sparse similarity-graph construction.

The default construction calibrates a per-node RBF bandwidth so that the
entropy of each node's neighbor distribution matches a target perplexity
(the effective number of local neighbors), sparsifies to the union kNN
edge set, and symmetrizes the directed conditionals. Three simpler
reweightings (mean / binary / knn bandwidths) are provided as baselines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .dataset import Dataset
from .errors import ConfigurationError

BASELINE_KINDS = ("mean", "binary", "knn")
LOG2 = float(np.log(2.0))


@dataclass
class SimilarityGraph:
    """Sparse symmetric weight matrix with per-node bandwidths.

    Weights are stored once per undirected edge in a CSR matrix with an
    exactly symmetric pattern, zero diagonal, and union-kNN support (every
    node keeps at least k incident edges).
    """

    n: int
    weights: sp.csr_matrix
    gammas: np.ndarray
    neighbor_lists: list[np.ndarray]
    k: int
    perplexity_target: float | None = None
    flagged_nodes: tuple[int, ...] = ()

    def degrees(self) -> np.ndarray:
        return np.asarray(self.weights.sum(axis=1)).ravel()

    def edge_list(self) -> list[tuple[int, int, float]]:
        """Undirected edges as (i, j, w) with i < j, ascending."""
        coo = sp.triu(self.weights, k=1).tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [
            (int(coo.row[t]), int(coo.col[t]), float(coo.data[t]))
            for t in order
        ]

    def to_json(self) -> str:
        """Graph export; weights printed with 17 significant digits."""
        edges = ",".join(
            f"[{i},{j},{w:.17g}]" for i, j, w in self.edge_list()
        )
        gammas = ",".join(f"{g:.17g}" for g in self.gammas.tolist())
        return f'{{"n":{self.n},"edges":[{edges}],"gammas":[{gammas}]}}'


def _pairwise_sq_dists(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    sq = (x * x).sum(axis=1)[:, None] + (y * y).sum(axis=1)[None, :]
    sq -= 2.0 * (x @ y.T)
    return np.maximum(sq, 0.0)


def knn_neighbors(dataset: Dataset, k: int, metric: str = "l2") -> list[np.ndarray]:
    """Each node's k nearest other nodes by L2 distance, ties to lower id."""
    if metric != "l2":
        raise ConfigurationError(f"unsupported metric {metric!r}")
    n = dataset.n
    if not 1 <= k < n:
        raise ConfigurationError(f"need 1 <= k < N, got k={k}, N={n}")
    feats = dataset.features
    out: list[np.ndarray] = []
    chunk = max(1, min(n, int(2e7) // max(n, 1)))
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        d2 = _pairwise_sq_dists(feats[start:stop], feats)
        for local, i in enumerate(range(start, stop)):
            d2[local, i] = np.inf
            # stable sort on distance keeps ascending id among ties
            order = np.argsort(d2[local], kind="stable")
            out.append(order[:k].astype(np.int64))
    return out


def neighbor_sq_distances(dataset: Dataset, i: int) -> np.ndarray:
    """Squared L2 distances from node i to every other node, in id order."""
    diff = dataset.features - dataset.features[i]
    d2 = (diff * diff).sum(axis=1)
    return np.delete(d2, i)


def _log2_perplexity(gamma: float, d2: np.ndarray) -> float:
    # shift by the min squared distance for a stable softmax
    shifted = gamma * (d2 - d2.min())
    expo = np.exp(-shifted)
    total = expo.sum()
    p = expo / total
    # H in nats of p_j = exp(-g*d2_j)/S is g*<shifted> + ln S
    return float((np.dot(p, shifted) + np.log(total)) / LOG2)


def calibrate_gamma(
    sq_distances: np.ndarray,
    target_perplexity: float,
    max_iter: int = 64,
    tol: float = 1e-5,
) -> tuple[float, bool]:
    """Binary-search the RBF precision so the neighbor entropy hits the target.

    Returns (gamma, converged). Perplexity decreases monotonically in gamma
    for non-degenerate distances; the bracket starts at gamma=1 and
    doubles/halves until the target is straddled, then bisects. A node that
    cannot reach the target (e.g. all-equidistant neighbors) comes back
    flagged with the best bracket midpoint, which is not fatal.
    """
    d2 = np.asarray(sq_distances, dtype=np.float64)
    if d2.size < 2:
        raise ConfigurationError("need at least 2 candidate neighbors")
    if target_perplexity > d2.size:
        raise ConfigurationError(
            f"target perplexity {target_perplexity} exceeds candidate count {d2.size}"
        )
    target = float(np.log2(target_perplexity))

    gamma = 1.0
    value = _log2_perplexity(gamma, d2)
    if abs(value - target) <= tol:
        return gamma, True

    # expand until the target is bracketed: perplexity falls as gamma grows
    lo, hi = gamma, gamma
    if value > target:
        for _ in range(max_iter):
            hi *= 2.0
            if _log2_perplexity(hi, d2) <= target:
                lo = hi / 2.0
                break
        else:
            return hi, False
    else:
        for _ in range(max_iter):
            lo /= 2.0
            if _log2_perplexity(lo, d2) >= target:
                hi = lo * 2.0
                break
        else:
            return lo, False

    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        value = _log2_perplexity(mid, d2)
        if abs(value - target) <= tol:
            return mid, True
        if value > target:
            lo = mid
        else:
            hi = mid
    return mid, False


def _conditional_row(gamma: float, d2: np.ndarray) -> np.ndarray:
    shifted = gamma * (d2 - d2.min())
    expo = np.exp(-shifted)
    return expo / expo.sum()


def _union_edges(neighbor_lists: list[np.ndarray]) -> list[tuple[int, int]]:
    edges: set[tuple[int, int]] = set()
    for i, nbrs in enumerate(neighbor_lists):
        for j in nbrs.tolist():
            edges.add((i, j) if i < j else (j, i))
    return sorted(edges)


def _assemble(
    n: int,
    edges: list[tuple[int, int]],
    values: np.ndarray,
    gammas: np.ndarray,
    k: int,
    perplexity_target: float | None,
    flagged: tuple[int, ...] = (),
) -> SimilarityGraph:
    rows = np.fromiter((e[0] for e in edges), dtype=np.int64, count=len(edges))
    cols = np.fromiter((e[1] for e in edges), dtype=np.int64, count=len(edges))
    w = sp.coo_matrix(
        (
            np.concatenate([values, values]),
            (np.concatenate([rows, cols]), np.concatenate([cols, rows])),
        ),
        shape=(n, n),
    ).tocsr()
    adjacency: list[set[int]] = [set() for _ in range(n)]
    for i, j in edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    neighbor_lists = [np.asarray(sorted(a), dtype=np.int64) for a in adjacency]
    return SimilarityGraph(
        n=n,
        weights=w,
        gammas=gammas,
        neighbor_lists=neighbor_lists,
        k=k,
        perplexity_target=perplexity_target,
        flagged_nodes=flagged,
    )


def build_perplexity_graph(
    dataset: Dataset,
    k: int,
    target_perplexity: float,
    calibrate_within_neighbors: bool = False,
) -> SimilarityGraph:
    """Perplexity-calibrated graph: calibrate, sparsify, symmetrize.

    Bandwidths are calibrated over all other nodes (a perplexity above k is
    unreachable over k candidates alone), the directed conditionals are then
    restricted to the union kNN edge set and symmetrized as
    w_ij = (p_j|i + p_i|j) / 2. ``calibrate_within_neighbors`` switches to
    calibrating over each node's own kNN candidates instead.
    """
    n = dataset.n
    if n < 3:
        raise ConfigurationError("perplexity graph needs at least 3 points")
    if not 1 <= k < n:
        raise ConfigurationError(f"need 1 <= k < N, got k={k}, N={n}")
    knn = knn_neighbors(dataset, k)
    gammas = np.empty(n)
    flagged: list[int] = []
    conditionals = np.zeros((n, n))  # transient, not kept past construction
    for i in range(n):
        d2_all = neighbor_sq_distances(dataset, i)
        others = np.delete(np.arange(n), i)
        if calibrate_within_neighbors:
            cand_ids = knn[i]
            d2 = d2_all[np.searchsorted(others, cand_ids)]
        else:
            cand_ids = others
            d2 = d2_all
        gamma, ok = calibrate_gamma(d2, min(target_perplexity, d2.size))
        if not ok:
            flagged.append(i)
        gammas[i] = gamma
        conditionals[i, cand_ids] = _conditional_row(gamma, d2)

    edges = _union_edges(knn)
    values = np.asarray(
        [0.5 * (conditionals[i, j] + conditionals[j, i]) for i, j in edges]
    )
    return _assemble(
        n, edges, values, gammas, k, target_perplexity, tuple(flagged)
    )


def build_baseline_graph(dataset: Dataset, k: int, kind: str) -> SimilarityGraph:
    """Union-kNN graph with a baseline reweighting: mean, binary, or knn."""
    if kind not in BASELINE_KINDS:
        raise ConfigurationError(f"unknown graph kind {kind!r}")
    n = dataset.n
    if not 1 <= k < n:
        raise ConfigurationError(f"need 1 <= k < N, got k={k}, N={n}")
    knn = knn_neighbors(dataset, k)
    edges = _union_edges(knn)
    feats = dataset.features

    def dist(i: int, j: int) -> float:
        diff = feats[i] - feats[j]
        return float(np.sqrt((diff * diff).sum()))

    if kind == "binary":
        values = np.ones(len(edges))
        gammas = np.ones(n)
    elif kind == "mean":
        sigma = float(np.mean([dist(i, j) for i, j in edges]))
        gamma = 1.0 / (2.0 * sigma * sigma)
        gammas = np.full(n, gamma)
        values = np.asarray(
            [np.exp(-gamma * dist(i, j) ** 2) for i, j in edges]
        )
    else:  # per-node bandwidth from each node's own kNN radius
        sigmas = np.asarray(
            [np.mean([dist(i, j) for j in knn[i]]) for i in range(n)]
        )
        gammas = 1.0 / (2.0 * sigmas * sigmas)
        values = np.asarray(
            [
                0.5
                * (
                    np.exp(-gammas[i] * dist(i, j) ** 2)
                    + np.exp(-gammas[j] * dist(i, j) ** 2)
                )
                for i, j in edges
            ]
        )
    return _assemble(n, edges, values, gammas, k, None)


def build_graph(dataset: Dataset, kind: str, k: int, perplexity: float) -> SimilarityGraph:
    """Dispatch on graph kind: perplexity or one of the baselines."""
    if kind == "perplexity":
        return build_perplexity_graph(dataset, k, perplexity)
    return build_baseline_graph(dataset, k, kind)
