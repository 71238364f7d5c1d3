"""Dataset container, feature-CSV ingestion, min-max scaling and subsampling."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Dataset:
    """Labeled feature matrix.

    ``features`` is an (m, n) float array, ``labels`` a length-m integer
    vector with values in ``{1..k}``. Instances are immutable and safe to
    share across threads.
    """

    features: np.ndarray
    labels: np.ndarray
    k: int

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        labs = np.asarray(self.labels, dtype=np.int64)
        if feats.ndim != 2 or feats.shape[0] < 1 or feats.shape[1] < 1:
            raise ValueError(f"features must be a non-empty 2-D matrix, got shape {feats.shape}")
        if labs.shape != (feats.shape[0],):
            raise ValueError("labels must be a vector with one entry per row")
        if self.k < 2:
            raise ValueError(f"need at least 2 classes, got k={self.k}")
        if labs.min() < 1 or labs.max() > self.k:
            raise ValueError(f"labels must lie in 1..{self.k}")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs)

    @property
    def m(self) -> int:
        return self.features.shape[0]

    @property
    def n(self) -> int:
        return self.features.shape[1]


def _looks_numeric(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def load_feature_csv(path, label_column=-1) -> Dataset:
    """Load a feature CSV into a Dataset.

    A single header row is optional and auto-detected (any non-numeric cell
    in the first row). ``label_column`` selects the label column by 0-based
    index, or by name when a header is present. All other columns are
    features, in file order. Labels are remapped to contiguous ``1..K``
    preserving numeric order.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except FileNotFoundError:
        raise ValueError(f"feature file not found: {path}") from None
    rows = [r for r in rows if r]
    if not rows:
        raise ValueError(f"empty feature file: {path}")

    header = None
    if any(not _looks_numeric(c) for c in rows[0]):
        header = rows[0]
        rows = rows[1:]
    if not rows:
        raise ValueError(f"feature file has a header but no data rows: {path}")

    ncols = len(rows[0])
    if isinstance(label_column, str):
        if header is None:
            raise ValueError("label column selected by name but the file has no header row")
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise ValueError(f"label column {label_column!r} not found in header") from None
    else:
        label_idx = int(label_column)
        if label_idx < 0:
            label_idx += ncols
        if not 0 <= label_idx < ncols:
            raise ValueError(f"label column index {label_column} out of range for {ncols} columns")

    feats = np.empty((len(rows), ncols - 1), dtype=np.float64)
    raw_labels = np.empty(len(rows), dtype=np.int64)
    for r, row in enumerate(rows):
        if len(row) != ncols:
            raise ValueError(f"ragged row {r}: expected {ncols} cells, got {len(row)}")
        j = 0
        for c, cell in enumerate(row):
            if c == label_idx:
                try:
                    raw_labels[r] = int(cell)
                except ValueError:
                    raise ValueError(f"unparsable label at row {r}, column {c}: {cell!r}") from None
            else:
                try:
                    v = float(cell)
                except ValueError:
                    raise ValueError(f"unparsable feature at row {r}, column {c}: {cell!r}") from None
                if not np.isfinite(v):
                    raise ValueError(f"non-finite feature at row {r}, column {c}: {cell!r}")
                feats[r, j] = v
                j += 1

    classes = np.unique(raw_labels)
    if classes.size < 2:
        raise ValueError("fewer than 2 classes in label column")
    labels = np.searchsorted(classes, raw_labels) + 1
    return Dataset(feats, labels, k=int(classes.size))


def minmax_scale(d: Dataset):
    """Scale every feature column to [0, 1].

    Returns the scaled dataset and the per-column ``(min, max)`` parameters
    for reuse on held-out data. Constant columns map to all-zeros.
    """
    lo = d.features.min(axis=0)
    hi = d.features.max(axis=0)
    return apply_minmax(d, (lo, hi)), (lo, hi)


def apply_minmax(d: Dataset, params) -> Dataset:
    """Apply previously fitted min-max parameters to a dataset."""
    lo, hi = params
    span = hi - lo
    safe = np.where(span > 0, span, 1.0)
    scaled = (d.features - lo) / safe
    scaled[:, span <= 0] = 0.0
    return Dataset(scaled, d.labels, d.k)


def subsample(d: Dataset, m_sub: int, seed: int) -> Dataset:
    """Uniform sample of ``m_sub`` rows without replacement, deterministic in seed."""
    if not 1 <= m_sub <= d.m:
        raise ValueError(f"m_sub={m_sub} out of range 1..{d.m}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    idx = rng.choice(d.m, size=m_sub, replace=False)
    return Dataset(d.features[idx], d.labels[idx], d.k)
