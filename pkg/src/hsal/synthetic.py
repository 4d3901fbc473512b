"""Synthetic datasets for benchmarks and tests."""

from __future__ import annotations

import numpy as np

from .dataset import Dataset


def gaussian_blobs(
    n: int,
    class_count: int,
    q: int = 2,
    separation: float = 10.0,
    spread: float | np.ndarray = 1.0,
    proportions: list[float] | None = None,
    centers: np.ndarray | None = None,
    seed: int = 0,
    name: str | None = None,
) -> Dataset:
    """Isotropic Gaussian clusters, adjacent centers `separation` apart.

    With the default separation/spread ratio the classes are well separated,
    which is what the benchmark fixtures assume. `proportions` skews the
    class sizes (default: equal); `centers` overrides the circle layout.
    """
    if centers is not None:
        centers = np.asarray(centers, dtype=float)
        if centers.shape != (class_count, q):
            raise ValueError("centers must be class_count x q")
    else:
        centers = np.zeros((class_count, q))
        if q == 1 or class_count <= 2:
            centers[:, 0] = separation * np.arange(class_count)
        else:
            angles = 2.0 * np.pi * np.arange(class_count) / class_count
            radius = separation / (2.0 * np.sin(np.pi / class_count))
            centers[:, 0] = radius * np.cos(angles)
            centers[:, 1] = radius * np.sin(angles)

    rng = np.random.default_rng(seed)
    if proportions is None:
        sizes = [n // class_count] * class_count
        for i in range(n % class_count):
            sizes[i] += 1
    else:
        if len(proportions) != class_count:
            raise ValueError("need one proportion per class")
        weights = np.asarray(proportions, dtype=float)
        weights = weights / weights.sum()
        sizes = np.maximum(1, np.floor(weights * n).astype(int)).tolist()
        i = 0
        while sum(sizes) < n:
            sizes[i % class_count] += 1
            i += 1
        while sum(sizes) > n:
            sizes[int(np.argmax(sizes))] -= 1
    spreads = np.broadcast_to(np.asarray(spread, dtype=float), (class_count, q))
    feats = []
    labels = []
    for c, size in enumerate(sizes):
        feats.append(centers[c] + spreads[c] * rng.standard_normal((size, q)))
        labels.extend([c] * size)
    order = rng.permutation(n)
    return Dataset(
        features=np.vstack(feats)[order],
        labels=np.asarray(labels, dtype=np.int64)[order],
        class_count=class_count,
        name=name or f"blobs{class_count}_{n}",
    )
