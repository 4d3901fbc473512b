"""Pool-based dataset loading, validation, and id addressing.

A dataset is an immutable N x Q feature matrix with optional ground-truth
class ids (dense integers 0..C-1) and optional per-point display assets.
CSV is the single ingestion format; the column names "label" and "asset"
are reserved and never treated as features.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError

RESERVED_COLUMNS = ("label", "asset")


@dataclass(frozen=True)
class Dataset:
    """Immutable pool of N datapoints in a Q-dimensional feature space."""

    features: np.ndarray
    labels: np.ndarray | None = None
    class_count: int = 2
    assets: tuple[str, ...] | None = None
    name: str = "dataset"
    class_names: tuple[str, ...] | None = None

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim != 2 or feats.shape[0] < 1 or feats.shape[1] < 1:
            raise ValidationError("features must be a non-empty N x Q matrix")
        if not np.all(np.isfinite(feats)):
            raise ValidationError("features contain non-finite values")
        object.__setattr__(self, "features", feats)
        if self.class_count < 2:
            raise ValidationError("class_count must be >= 2")
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (feats.shape[0],):
                raise ValidationError("labels must have one entry per point")
            if labels.min() < 0 or labels.max() >= self.class_count:
                raise ValidationError(
                    f"labels must lie in [0, {self.class_count})"
                )
            object.__setattr__(self, "labels", labels)
        if self.assets is not None and len(self.assets) != feats.shape[0]:
            raise ValidationError("assets must have one entry per point")
        feats.setflags(write=False)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def q(self) -> int:
        return self.features.shape[1]


def load_csv(
    path: str | Path,
    label_column: str | None = None,
    class_count: int | None = None,
) -> Dataset:
    """Load a dataset from a headered CSV file.

    All numeric columns except the label/asset columns become features, in
    header order. Labels are parsed as integers when a label column is
    present (``label_column`` or the reserved name "label"). A sidecar
    ``<file>.meta.json`` may supply {"class_names": [...], "name": "..."}.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", row=1) from None
        header = [h.strip() for h in header]
        if label_column is None and "label" in header:
            label_column = "label"
        if label_column is not None and label_column not in header:
            raise ValidationError(f"label column {label_column!r} not in header")
        asset_idx = header.index("asset") if "asset" in header else None
        label_idx = header.index(label_column) if label_column else None
        feature_idx = [
            i
            for i, name in enumerate(header)
            if i != label_idx and i != asset_idx
        ]
        if not feature_idx:
            raise ValidationError("no feature columns in file")

        rows: list[list[float]] = []
        labels: list[int] = []
        assets: list[str] = []
        for rownum, record in enumerate(reader, start=2):
            if len(record) != len(header):
                raise ParseError(
                    f"expected {len(header)} fields, got {len(record)}",
                    row=rownum,
                )
            try:
                rows.append([float(record[i]) for i in feature_idx])
            except ValueError as exc:
                raise ParseError(f"non-numeric feature: {exc}", row=rownum) from None
            if label_idx is not None:
                try:
                    labels.append(int(record[label_idx]))
                except ValueError:
                    raise ParseError(
                        f"non-integer label {record[label_idx]!r}", row=rownum
                    ) from None
            if asset_idx is not None:
                assets.append(record[asset_idx])

    if not rows:
        raise ParseError("file has no data rows", row=2)

    name = path.stem
    class_names = None
    sidecar = path.with_suffix(path.suffix + ".meta.json")
    if sidecar.exists():
        meta = json.loads(sidecar.read_text(encoding="utf-8"))
        name = meta.get("name", name)
        if meta.get("class_names"):
            class_names = tuple(str(c) for c in meta["class_names"])

    label_arr = np.asarray(labels, dtype=np.int64) if label_idx is not None else None
    if class_count is None:
        if label_arr is not None:
            class_count = int(label_arr.max()) + 1
        elif class_names is not None:
            class_count = len(class_names)
        else:
            class_count = 2
    if label_arr is not None and (label_arr.min() < 0 or label_arr.max() >= class_count):
        raise ValidationError(f"label out of range [0, {class_count})")

    return Dataset(
        features=np.asarray(rows, dtype=np.float64),
        labels=label_arr,
        class_count=max(class_count, 2),
        assets=tuple(assets) if asset_idx is not None else None,
        name=name,
        class_names=class_names,
    )


def save_csv(dataset: Dataset, path: str | Path) -> None:
    """Serialize a dataset so that load_csv round-trips features bit-for-bit."""
    path = Path(path)
    header = [f"f{i}" for i in range(dataset.q)]
    if dataset.labels is not None:
        header.append("label")
    if dataset.assets is not None:
        header.append("asset")
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(dataset.n):
            row: list[str] = [repr(v) for v in dataset.features[i].tolist()]
            if dataset.labels is not None:
                row.append(str(int(dataset.labels[i])))
            if dataset.assets is not None:
                row.append(dataset.assets[i])
            writer.writerow(row)


def split_state(dataset: Dataset, labeled: set[int]) -> tuple[list[int], list[int]]:
    """Partition point ids into (labeled, unlabeled), each ascending."""
    for i in labeled:
        if not 0 <= i < dataset.n:
            raise ValidationError(f"point id {i} out of range [0, {dataset.n})")
    labeled_ids = sorted(labeled)
    labeled_set = set(labeled_ids)
    unlabeled_ids = [i for i in range(dataset.n) if i not in labeled_set]
    return labeled_ids, unlabeled_ids
