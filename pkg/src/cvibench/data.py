"""Dataset ingestion, standardization, pairwise distances, synthetic blobs.

All functions are pure and deterministic; values are treated as immutable
after construction.
"""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .partition import Partition


class ConstantColumnWarning(UserWarning):
    """A feature column had zero variance and was standardized to all zeros."""


@dataclass
class DataMatrix:
    """n x p numeric feature matrix with a flag recording standardization."""

    values: np.ndarray
    standardized: bool = False

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("values must be a 2-D matrix with at least one row and column")
        if not np.all(np.isfinite(v)):
            raise ValueError("all feature values must be finite")
        self.values = v

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass
class DistanceMatrix:
    """Condensed store of the n(n-1)/2 pairwise distances.

    Entry for the pair (i, j) with 0 <= i < j < n sits at condensed index
    ``n*i - i*(i+1)/2 + (j - i - 1)``, i.e. pairs are enumerated row-major:
    (0,1), (0,2), ..., (0,n-1), (1,2), ... -- the same order a nested
    ``for i: for j in range(i+1, n)`` loop visits them.
    """

    n: int
    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.float64)
        expected = self.n * (self.n - 1) // 2
        if d.ndim != 1 or d.size != expected:
            raise ValueError(f"condensed vector must have length {expected}, got {d.size}")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise ValueError("distances must be finite and non-negative")
        self.d = d

    def index(self, i: int, j: int) -> int:
        """Condensed index of the unordered pair {i, j}, 0-based."""
        if i == j:
            raise ValueError("no condensed entry for a pair (i, i)")
        if i > j:
            i, j = j, i
        if not (0 <= i < j < self.n):
            raise ValueError(f"pair ({i}, {j}) out of range for n={self.n}")
        return self.n * i - i * (i + 1) // 2 + (j - i - 1)

    def get(self, i: int, j: int) -> float:
        """Distance between objects i and j (0 on the diagonal)."""
        if i == j:
            return 0.0
        return float(self.d[self.index(i, j)])

    def to_square(self) -> np.ndarray:
        """Full symmetric n x n matrix with a zero diagonal."""
        sq = np.zeros((self.n, self.n))
        iu = np.triu_indices(self.n, 1)
        sq[iu] = self.d
        sq[(iu[1], iu[0])] = self.d
        return sq


@dataclass
class LabeledDataset:
    """Feature matrix plus the reference classification of its rows."""

    features: DataMatrix
    labels: Partition
    names: list[str] | None = None

    def __post_init__(self):
        if self.features.n != self.labels.n:
            raise ValueError("features and labels must agree on the number of rows")
        if self.features.n < 2:
            raise ValueError("a dataset needs at least 2 rows")
        if self.names is not None and len(self.names) != self.features.p:
            raise ValueError("names must match the number of feature columns")

    @property
    def n(self) -> int:
        return self.features.n

    @property
    def n_classes(self) -> int:
        return self.labels.k


def load_csv(path, label_spec, has_header: bool = True) -> LabeledDataset:
    """Read a labeled dataset from a comma-separated UTF-8 file.

    `label_spec` selects the class column either by header name or by
    0-based position (an int, or a string of digits when there is no header
    to name columns). The label column is removed from the features and its
    values are mapped to 1..C in order of first appearance.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: file is empty")

    header: list[str] | None = None
    if has_header:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]

    width = len(rows[0]) if rows else (len(header) if header else 0)
    if header is not None and rows and len(header) != width:
        raise DataError(f"{path}: header has {len(header)} fields but rows have {width}")
    label_idx = _resolve_label_column(label_spec, header, width, path)

    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 data rows, found {len(rows)}")

    raw_labels: list[str] = []
    feats = np.empty((len(rows), width - 1), dtype=np.float64)
    for r, row in enumerate(rows):
        if len(row) != width:
            raise DataError(f"{path}: row {r + 1} has {len(row)} fields, expected {width}")
        c_out = 0
        for c, cell in enumerate(row):
            if c == label_idx:
                raw_labels.append(cell.strip())
                continue
            try:
                value = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {r + 1}, column {c + 1}: cannot parse {cell.strip()!r} as a number"
                ) from None
            if not np.isfinite(value):
                raise DataError(f"{path}: row {r + 1}, column {c + 1}: value is not finite")
            feats[r, c_out] = value
            c_out += 1

    names = None
    if header is not None:
        names = [h for i, h in enumerate(header) if i != label_idx]
    return LabeledDataset(DataMatrix(feats), Partition.from_labels(raw_labels), names)


def _resolve_label_column(label_spec, header, width, path) -> int:
    if isinstance(label_spec, str) and header is not None and label_spec in header:
        return header.index(label_spec)
    try:
        idx = int(label_spec)
    except (TypeError, ValueError):
        raise DataError(f"{path}: label column {label_spec!r} not found") from None
    if not (0 <= idx < width):
        raise DataError(f"{path}: label column index {idx} out of range (file has {width} columns)")
    return idx


def standardize(m: DataMatrix) -> DataMatrix:
    """Center each column and scale it to unit sample standard deviation.

    Uses the n-1 denominator. Constant columns become all zeros and are
    reported through a single ConstantColumnWarning rather than an error.
    """
    if m.n < 2:
        raise ValueError("standardization needs at least 2 rows")
    mean = m.values.mean(axis=0)
    sd = m.values.std(axis=0, ddof=1)
    constant = np.flatnonzero(sd == 0.0)
    safe_sd = np.where(sd == 0.0, 1.0, sd)
    out = (m.values - mean) / safe_sd
    if constant.size:
        out[:, constant] = 0.0
        warnings.warn(
            ConstantColumnWarning(f"constant columns mapped to zeros: {constant.tolist()}"),
            stacklevel=2,
        )
    return DataMatrix(out, standardized=True)


def euclidean_distances(m: DataMatrix) -> DistanceMatrix:
    """Condensed Euclidean distances between all row pairs."""
    if m.n < 2:
        raise ValueError("need at least 2 rows to form pairwise distances")
    diffs = m.values[:, None, :] - m.values[None, :, :]
    sq = np.sqrt(np.einsum("ijk,ijk->ij", diffs, diffs))
    iu = np.triu_indices(m.n, 1)
    return DistanceMatrix(m.n, sq[iu])


def generate_blobs(spec, seed: int) -> LabeledDataset:
    """Sample labeled points from isotropic Gaussian blobs.

    `spec` is a sequence of (center, sd, count) triples; labels are the
    1-based blob index. Randomness comes from numpy's PCG64 generator
    (``np.random.default_rng(seed)``), so a given seed reproduces the
    dataset bit for bit on any platform running the same numpy version.
    """
    spec = list(spec)
    if not spec:
        raise ValueError("blob spec must not be empty")
    centers = [np.atleast_1d(np.asarray(c, dtype=np.float64)) for c, _, _ in spec]
    p = centers[0].size
    for c in centers:
        if c.size != p:
            raise ValueError("all blob centers must have the same dimension")
    rng = np.random.default_rng(seed)
    chunks = []
    labels = []
    for b, (center, sd, count) in enumerate(spec, start=1):
        if count < 1:
            raise ValueError(f"blob {b}: count must be >= 1")
        if sd < 0:
            raise ValueError(f"blob {b}: sd must be >= 0")
        pts = centers[b - 1] + sd * rng.standard_normal((count, p))
        chunks.append(pts)
        labels.extend([b] * count)
    return LabeledDataset(DataMatrix(np.vstack(chunks)), Partition(np.array(labels)))
