"""Harmonic label propagation on a similarity graph.

The posterior over classes solves F_u = (D_uu - W_uu)^-1 W_ul Y_l on the
unlabeled block, clamping labeled rows to one-hot. The inverse of the
unlabeled block is kept alongside the posterior so that adding a label is
an O(U^2) downdate and hypothesizing one (lookahead) is an O(U*C)
rank-one update instead of a fresh O(U^3) solve.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import ConflictError, NumericalError, ValidationError
from .graph import SimilarityGraph

PIVOT_TOL = 1e-14
REG_SCALE = 1e-9


@dataclass
class LabelState:
    """Oracle answers so far: point id -> class id, plus the class count."""

    assignments: dict[int, int]
    class_count: int

    def __post_init__(self):
        if self.class_count < 2:
            raise ValidationError("class_count must be >= 2")
        for point, cls in self.assignments.items():
            if not 0 <= cls < self.class_count:
                raise ValidationError(f"class {cls} out of range [0, {self.class_count})")

    def labeled_ids(self) -> list[int]:
        return sorted(self.assignments)

    def y_matrix(self, n: int) -> np.ndarray:
        """N x C one-hot rows for labeled points, zero rows otherwise."""
        y = np.zeros((n, self.class_count))
        for point, cls in self.assignments.items():
            y[point, cls] = 1.0
        return y


class HarmonicModel:
    """Posterior matrix plus the maintained unlabeled-block inverse."""

    def __init__(
        self,
        graph: SimilarityGraph,
        labels: LabelState,
        posterior: np.ndarray,
        g_inverse: np.ndarray,
        unlabeled_ids: np.ndarray,
        components: np.ndarray,
        comp_label_counts: np.ndarray,
        epsilon: float,
    ):
        self.graph = graph
        self.labels = labels
        self.posterior = posterior
        self.g_inverse = g_inverse
        self.unlabeled_ids = unlabeled_ids
        self.row_of = {int(p): r for r, p in enumerate(unlabeled_ids)}
        self.components = components
        self.comp_label_counts = comp_label_counts
        self.epsilon = epsilon
        self.version = 0
        self.risk_cache: dict[int, object] = {}

    @property
    def class_count(self) -> int:
        return self.labels.class_count

    def is_labeled(self, point: int) -> bool:
        return point in self.labels.assignments

    def state_hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.posterior.tobytes())
        h.update(self.g_inverse.tobytes())
        h.update(repr(sorted(self.labels.assignments.items())).encode())
        return h.hexdigest()


def _component_structure(weights: sp.csr_matrix) -> np.ndarray:
    """Connected components over the strictly positive support of W."""
    coo = weights.tocoo()
    mask = coo.data > 0.0
    support = sp.coo_matrix(
        (np.ones(mask.sum()), (coo.row[mask], coo.col[mask])),
        shape=weights.shape,
    )
    _, comp = connected_components(support, directed=False)
    return comp


def solve_harmonic(graph: SimilarityGraph, labels: LabelState) -> HarmonicModel:
    """Solve the harmonic system from scratch and build the incremental state.

    Unlabeled points in components that contain no label cannot be reached
    by propagation; their rows take the uniform posterior 1/C. Their
    singular diagonal blocks are regularized (eps = 1e-9 * mean degree) so
    the stored inverse exists, matching the all-unlabeled start state where
    the inverse covers the whole graph.
    """
    n = graph.n
    c = labels.class_count
    for point in labels.assignments:
        if not 0 <= point < n:
            raise ValidationError(f"labeled point {point} out of range [0, {n})")
    comp = _component_structure(graph.weights)
    n_comp = comp.max() + 1
    comp_label_counts = np.zeros(n_comp, dtype=np.int64)
    for point in labels.assignments:
        comp_label_counts[comp[point]] += 1

    labeled = np.asarray(labels.labeled_ids(), dtype=np.int64)
    mask = np.ones(n, dtype=bool)
    mask[labeled] = False
    unlabeled = np.nonzero(mask)[0]

    w = graph.weights.toarray()
    degrees = w.sum(axis=1)
    mean_degree = float(degrees.mean()) if n else 0.0
    eps = REG_SCALE * (mean_degree if mean_degree > 0 else 1.0)

    posterior = np.full((n, c), 1.0 / c)
    g = np.zeros((0, 0))
    if unlabeled.size:
        a = np.diag(degrees[unlabeled]) - w[np.ix_(unlabeled, unlabeled)]
        unreached = comp_label_counts[comp[unlabeled]] == 0
        a[unreached, unreached] += eps
        try:
            # column-major storage keeps lookahead's column reads contiguous
            g = np.asfortranarray(np.linalg.inv(a))
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"unlabeled block is singular: {exc}") from None
        if labeled.size:
            b = w[np.ix_(unlabeled, labeled)] @ labels.y_matrix(n)[labeled]
            f_u = g @ b
            f_u[unreached] = 1.0 / c
            posterior[unlabeled] = np.clip(f_u, 0.0, 1.0)
    for point, cls in labels.assignments.items():
        posterior[point] = 0.0
        posterior[point, cls] = 1.0

    return HarmonicModel(
        graph=graph,
        labels=LabelState(dict(labels.assignments), c),
        posterior=posterior,
        g_inverse=g,
        unlabeled_ids=unlabeled,
        components=comp,
        comp_label_counts=comp_label_counts,
        epsilon=eps,
    )


def _check_addable(model: HarmonicModel, point: int, cls: int) -> None:
    if not 0 <= point < model.graph.n:
        raise ValidationError(f"point {point} out of range [0, {model.graph.n})")
    if model.is_labeled(point):
        raise ConflictError(f"point {point} is already labeled")
    if not 0 <= cls < model.class_count:
        raise ValidationError(f"class {cls} out of range [0, {model.class_count})")


def _one_hot(cls: int, c: int) -> np.ndarray:
    row = np.zeros(c)
    row[cls] = 1.0
    return row


def _anchor_component(model: HarmonicModel, point: int, cls: int) -> None:
    """First label inside a component: rest of it follows the label exactly.

    The harmonic solution with a single boundary point is constant, and
    the component's block of the inverse is rebuilt from the now
    nonsingular system rather than downdated through the regularized one.
    """
    comp_id = model.components[point]
    in_comp = model.components[model.unlabeled_ids] == comp_id
    rows = np.nonzero(in_comp)[0]
    model.posterior[model.unlabeled_ids[rows]] = _one_hot(cls, model.class_count)

    keep = rows[model.unlabeled_ids[rows] != point]
    if keep.size:
        ids = model.unlabeled_ids[keep]
        w = model.graph.weights[np.ix_(ids, ids)].toarray()
        degrees = np.asarray(model.graph.weights.sum(axis=1)).ravel()[ids]
        block = np.diag(degrees) - w
        try:
            block_inv = np.linalg.inv(block)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                f"component {comp_id} block is singular: {exc}"
            ) from None
        model.g_inverse[np.ix_(keep, keep)] = block_inv


def add_label(model: HarmonicModel, point: int, cls: int) -> HarmonicModel:
    """Move a point to the labeled set, updating F and G incrementally.

    Equivalent to re-solving from scratch, at O(U^2) via the block-inverse
    downdate of G and the corresponding posterior shift. The first label in
    a component instead rebuilds that component's block of G, which the
    downdate cannot reach through the regularized near-singular inverse.
    """
    _check_addable(model, point, cls)
    comp_id = model.components[point]
    row = model.row_of[point]

    if model.comp_label_counts[comp_id] == 0:
        _anchor_component(model, point, cls)
        model.g_inverse = np.asfortranarray(
            np.delete(np.delete(model.g_inverse, row, axis=0), row, axis=1)
        )
    else:
        g_col = model.g_inverse[:, row]
        pivot = g_col[row]
        if abs(pivot) <= PIVOT_TOL:
            raise NumericalError(f"degenerate pivot at point {point}")
        shift = _one_hot(cls, model.class_count) - model.posterior[point]
        f_u = model.posterior[model.unlabeled_ids] + np.outer(g_col / pivot, shift)
        model.posterior[model.unlabeled_ids] = np.clip(f_u, 0.0, 1.0)
        minor = np.delete(np.delete(model.g_inverse, row, axis=0), row, axis=1)
        col = np.delete(g_col, row)
        model.g_inverse = np.asfortranarray(minor - np.outer(col, col) / pivot)

    model.posterior[point] = _one_hot(cls, model.class_count)
    model.unlabeled_ids = np.delete(model.unlabeled_ids, row)
    model.row_of = {int(p): r for r, p in enumerate(model.unlabeled_ids)}
    model.labels.assignments[point] = cls
    model.comp_label_counts[comp_id] += 1
    model.version += 1
    model.risk_cache.clear()
    return model


def lookahead(model: HarmonicModel, point: int, cls: int) -> np.ndarray:
    """Posterior that add_label(point, cls) would produce, without mutating.

    Rank-one update through the stored column of G; O(U*C). For a point in
    a component with no labels yet the hypothesized solution is the exact
    constant one, so the column ratio is bypassed.
    """
    _check_addable(model, point, cls)
    f_plus = model.posterior.copy()
    one_hot = _one_hot(cls, model.class_count)
    comp_id = model.components[point]

    if model.comp_label_counts[comp_id] == 0:
        in_comp = model.components[model.unlabeled_ids] == comp_id
        f_plus[model.unlabeled_ids[in_comp]] = one_hot
    else:
        row = model.row_of[point]
        g_col = model.g_inverse[:, row]
        pivot = g_col[row]
        if abs(pivot) <= PIVOT_TOL:
            raise NumericalError(f"degenerate pivot at point {point}")
        shift = one_hot - model.posterior[point]
        f_plus[model.unlabeled_ids] += np.outer(g_col / pivot, shift)
        np.clip(f_plus, 0.0, 1.0, out=f_plus)
    f_plus[point] = one_hot
    return f_plus


def predict(model: HarmonicModel) -> np.ndarray:
    """Per-point MAP class; argmax ties go to the lowest class id."""
    return model.posterior.argmax(axis=1)
