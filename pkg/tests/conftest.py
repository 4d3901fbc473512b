"""Shared fixtures: small deterministic graphs and datasets."""

from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp

from hsal.dataset import Dataset
from hsal.graph import SimilarityGraph


def graph_from_edges(n: int, edges: list[tuple[int, int, float]], k: int = 1) -> SimilarityGraph:
    """Build a SimilarityGraph directly from an undirected edge list."""
    rows, cols, vals = [], [], []
    adjacency: list[set[int]] = [set() for _ in range(n)]
    for i, j, w in edges:
        rows += [i, j]
        cols += [j, i]
        vals += [w, w]
        adjacency[i].add(j)
        adjacency[j].add(i)
    weights = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    return SimilarityGraph(
        n=n,
        weights=weights,
        gammas=np.ones(n),
        neighbor_lists=[np.asarray(sorted(a), dtype=np.int64) for a in adjacency],
        k=k,
        perplexity_target=None,
    )


def random_connected_graph(
    rng: np.random.Generator, n: int, extra_edges: int | None = None
) -> SimilarityGraph:
    """Random spanning tree plus extra edges; weights uniform in [0.2, 1.2]."""
    edges: dict[tuple[int, int], float] = {}
    for i in range(1, n):
        j = int(rng.integers(i))
        edges[(j, i)] = float(rng.uniform(0.2, 1.2))
    if extra_edges is None:
        extra_edges = n
    for _ in range(extra_edges):
        i, j = rng.integers(n), rng.integers(n)
        if i == j:
            continue
        key = (min(i, j), max(i, j))
        edges.setdefault(key, float(rng.uniform(0.2, 1.2)))
    return graph_from_edges(n, [(i, j, w) for (i, j), w in edges.items()])


def random_dataset(rng: np.random.Generator, n: int, q: int, c: int) -> Dataset:
    labels = rng.integers(c, size=n)
    return Dataset(
        features=rng.standard_normal((n, q)),
        labels=labels,
        class_count=c,
        name="random",
    )


@pytest.fixture
def bridged_triangles() -> SimilarityGraph:
    """Two unit-weight triangles joined by one weak edge."""
    edges = [
        (0, 1, 1.0),
        (0, 2, 1.0),
        (1, 2, 1.0),
        (3, 4, 1.0),
        (3, 5, 1.0),
        (4, 5, 1.0),
        (2, 3, 1e-6),
    ]
    return graph_from_edges(6, edges)
