"""Internal cluster validity indices.

Four indices are implemented: two computed from coordinates
(calinski_harabasz, davies_bouldin) and two from pairwise distances
(mean_silhouette, point_biserial). Compute them on the same matrix the
clustering ran on (normally the standardized one); mathematically undefined
cases raise DegenerateError instead of returning infinities.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import DataMatrix, DistanceMatrix
from .errors import DegenerateError
from .partition import Partition


@dataclass(frozen=True)
class CviSpec:
    """Name and optimization direction of an index ("max" or "min" optimal)."""

    name: str
    direction: str

    def __post_init__(self):
        if self.direction not in ("max", "min"):
            raise ValueError("direction must be 'max' or 'min'")


@dataclass(frozen=True)
class CviValue:
    """One index evaluation on one partition."""

    spec: CviSpec
    k: int
    value: float


CVI_SPECS = {
    "calinski_harabasz": CviSpec("calinski_harabasz", "max"),
    "point_biserial": CviSpec("point_biserial", "max"),
    "mean_silhouette": CviSpec("mean_silhouette", "max"),
    "davies_bouldin": CviSpec("davies_bouldin", "min"),
}

# Row order used by reports: matches the reference summary layout.
DEFAULT_CVI_ORDER = ["calinski_harabasz", "point_biserial", "mean_silhouette", "davies_bouldin"]

CVI_ALIASES = {
    "ch": "calinski_harabasz",
    "pb": "point_biserial",
    "silhouette": "mean_silhouette",
    "asw": "mean_silhouette",
    "db": "davies_bouldin",
}


def resolve_cvi_name(name: str) -> str:
    key = name.strip().lower()
    key = CVI_ALIASES.get(key, key)
    if key not in CVI_SPECS:
        raise KeyError(f"unknown index {name!r}; known: {', '.join(CVI_SPECS)}")
    return key


def _cluster_stats(m: DataMatrix, p: Partition):
    """Per-cluster centroids and sizes."""
    centroids = np.empty((p.k, m.p))
    counts = np.empty(p.k, dtype=np.int64)
    for c in range(1, p.k + 1):
        idx = p.members(c)
        counts[c - 1] = idx.size
        centroids[c - 1] = m.values[idx].mean(axis=0)
    return centroids, counts


def calinski_harabasz(m: DataMatrix, p: Partition) -> float:
    """Variance-ratio index: between-group over within-group mean squares.

    CH = [BGSS / (k-1)] / [WGSS / (n-k)] with BGSS the size-weighted squared
    centroid deviations from the global mean and WGSS the summed squared
    deviations of points from their cluster centroid. Larger is better.
    """
    n, k = m.n, p.k
    if not (2 <= k <= n - 1):
        raise ValueError(f"calinski_harabasz needs 2 <= k <= n-1, got k={k}, n={n}")
    centroids, counts = _cluster_stats(m, p)
    grand = m.values.mean(axis=0)
    bgss = float(np.sum(counts * np.sum((centroids - grand) ** 2, axis=1)))
    wgss = float(np.sum((m.values - centroids[p.assign - 1]) ** 2))
    if wgss == 0.0:
        raise DegenerateError("perfect separation: zero within-cluster scatter")
    return (bgss / (k - 1)) / (wgss / (n - k))


def davies_bouldin(m: DataMatrix, p: Partition, dispersion: str = "rms") -> float:
    """Mean over clusters of the worst (S_i + S_j) / M_ij ratio. Smaller is better.

    S_c is the within-cluster dispersion around the centroid and M_ij the
    Euclidean distance between centroids i and j. `dispersion` selects the
    root-mean-square ("rms", the default, which reproduces the reference
    results) or the arithmetic mean ("mean") of member-to-centroid distances.
    """
    n, k = m.n, p.k
    if not (2 <= k <= n):
        raise ValueError(f"davies_bouldin needs 2 <= k <= n, got k={k}, n={n}")
    if dispersion not in ("rms", "mean"):
        raise ValueError("dispersion must be 'rms' or 'mean'")
    centroids, _ = _cluster_stats(m, p)
    scatter = np.empty(k)
    for c in range(1, k + 1):
        sq_dists = np.sum((m.values[p.members(c)] - centroids[c - 1]) ** 2, axis=1)
        if dispersion == "rms":
            scatter[c - 1] = np.sqrt(sq_dists.mean())
        else:
            scatter[c - 1] = np.sqrt(sq_dists).mean()
    diffs = centroids[:, None, :] - centroids[None, :, :]
    moats = np.sqrt(np.einsum("ijk,ijk->ij", diffs, diffs))
    off = ~np.eye(k, dtype=bool)
    if np.any(moats[off] == 0.0):
        raise DegenerateError("coincident cluster centroids")
    ratios = (scatter[:, None] + scatter[None, :]) / np.where(off, moats, np.inf)
    return float(ratios.max(axis=1).mean())


def mean_silhouette(d: DistanceMatrix, p: Partition, singleton_width: float = 1.0) -> float:
    """Mean silhouette width over all objects, in [-1, 1]. Larger is better.

    For each object, a = mean distance to the rest of its own cluster and
    b = smallest mean distance to another cluster; its width is
    (b - a) / max(a, b). Objects in singleton clusters have no `a` and score
    `singleton_width`: the default 1.0 reproduces the reference results,
    while 0.0 gives the conservative neutral convention.
    """
    n, k = d.n, p.k
    if not (2 <= k <= n - 1):
        raise ValueError(f"mean_silhouette needs 2 <= k <= n-1, got k={k}, n={n}")
    sq = d.to_square()
    own = p.assign - 1
    onehot = np.zeros((n, k))
    onehot[np.arange(n), own] = 1.0
    counts = onehot.sum(axis=0)
    totals = sq @ onehot  # totals[i, c] = summed distance from i to cluster c+1

    own_count = counts[own]
    a = np.divide(
        totals[np.arange(n), own], own_count - 1.0,
        out=np.zeros(n), where=own_count > 1,
    )
    mean_to = totals / counts[None, :]
    mean_to[np.arange(n), own] = np.inf
    b = mean_to.min(axis=1)

    denom = np.maximum(a, b)
    widths = np.divide(b - a, denom, out=np.zeros(n), where=denom > 0)
    widths = np.where(own_count == 1, singleton_width, widths)
    return float(widths.mean())


def point_biserial(d: DistanceMatrix, p: Partition) -> float:
    """Pearson correlation between distances and the split-pair indicator.

    Pairs in different clusters are coded 1 and same-cluster pairs 0, so a
    clustering that keeps small distances together scores close to +1.
    Equals the classical (M_b - M_w) sqrt(f_w f_b) / s_d form with the
    population standard deviation.
    """
    n, k = d.n, p.k
    if not (2 <= k <= n - 1):
        raise ValueError(f"point_biserial needs 2 <= k <= n-1, got k={k}, n={n}")
    iu = np.triu_indices(n, 1)
    split = (p.assign[iu[0]] != p.assign[iu[1]]).astype(np.float64)
    n_between = split.sum()
    if n_between == 0 or n_between == split.size:
        raise DegenerateError("need both within- and between-cluster pairs")
    dc = d.d - d.d.mean()
    tc = split - split.mean()
    dvar = float(dc @ dc)
    if dvar == 0.0:
        raise DegenerateError("zero distance variance")
    return float((dc @ tc) / np.sqrt(dvar * (tc @ tc)))


def compute_cvi(name: str, m: DataMatrix, d: DistanceMatrix, p: Partition) -> float:
    """Evaluate the named index, dispatching to coordinates or distances."""
    key = resolve_cvi_name(name)
    if key == "calinski_harabasz":
        return calinski_harabasz(m, p)
    if key == "davies_bouldin":
        return davies_bouldin(m, p)
    if key == "mean_silhouette":
        return mean_silhouette(d, p)
    return point_biserial(d, p)
