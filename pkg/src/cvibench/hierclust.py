"""Average-linkage agglomerative clustering and dendrogram cutting.

Node ids follow the merge-tree convention: leaves are 1..n, internal nodes
are n+1..2n-1 in merge order, the root is 2n-1.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .data import DistanceMatrix
from .errors import DataError
from .partition import Partition

HEIGHT_SLACK = 1e-12


@dataclass(frozen=True)
class Merge:
    """One agglomeration step: nodes `left` and `right` join at `height`."""

    left: int
    right: int
    height: float
    size: int


@dataclass
class Dendrogram:
    """Binary merge tree over n leaves (n-1 merges, non-decreasing heights)."""

    n: int
    merges: list[Merge]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("a dendrogram needs at least 2 leaves")
        if len(self.merges) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} merges, got {len(self.merges)}")
        sizes = {i: 1 for i in range(1, self.n + 1)}
        consumed: set[int] = set()
        prev = -np.inf
        for t, m in enumerate(self.merges):
            node_id = self.n + 1 + t
            if m.height < prev - HEIGHT_SLACK:
                raise ValueError(f"merge {t}: height {m.height} decreases below {prev}")
            prev = max(prev, m.height)
            for child in (m.left, m.right):
                if child not in sizes:
                    raise ValueError(f"merge {t}: unknown child node {child}")
                if child in consumed:
                    raise ValueError(f"merge {t}: node {child} already merged")
                consumed.add(child)
            sizes[node_id] = sizes[m.left] + sizes[m.right]
            if m.size != sizes[node_id]:
                raise ValueError(f"merge {t}: size {m.size} != {sizes[node_id]}")
        if sizes[2 * self.n - 1] != self.n:
            raise ValueError("root must contain every leaf")

    def to_dict(self) -> dict:
        """JSON-ready merge list, for debugging exports."""
        return {
            "leaf_count": self.n,
            "merges": [
                {"left": m.left, "right": m.right, "height": m.height, "size": m.size}
                for m in self.merges
            ],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "Dendrogram":
        merges = [
            Merge(int(m["left"]), int(m["right"]), float(m["height"]), int(m["size"]))
            for m in payload["merges"]
        ]
        return cls(int(payload["leaf_count"]), merges)


@dataclass
class PartitionSet:
    """Ordered collection of partitions of the same n objects."""

    partitions: list[Partition]
    algorithm: str = ""

    def __post_init__(self):
        if not self.partitions:
            raise ValueError("partition set must not be empty")
        n = self.partitions[0].n
        for p in self.partitions:
            if p.n != n:
                raise ValueError("all partitions must share the same object count")

    @property
    def n(self) -> int:
        return self.partitions[0].n

    @property
    def ks(self) -> list[int]:
        return [p.k for p in self.partitions]

    def __len__(self) -> int:
        return len(self.partitions)

    def __iter__(self):
        return iter(self.partitions)


def upgma(d: DistanceMatrix) -> Dendrogram:
    """Cluster by repeatedly merging the pair of nodes at minimal average distance.

    Inter-node distances are maintained with the average-linkage update
    D(A+B, C) = (|A| D(A,C) + |B| D(B,C)) / (|A| + |B|); the merge height is
    the minimal distance at that step. When several pairs tie at the minimum,
    the pair whose (smaller id, larger id) tuple is lexicographically
    smallest wins, which makes the tree deterministic.
    """
    n = d.n
    total = 2 * n - 1
    dist = np.full((total, total), np.inf)
    iu = np.triu_indices(n, 1)
    dist[iu] = d.d
    dist[(iu[1], iu[0])] = d.d

    sizes = np.ones(total, dtype=np.int64)
    active: list[int] = list(range(n))  # 0-based positions; node id = position + 1
    merges: list[Merge] = []

    for step in range(n - 1):
        act = np.array(active)
        sub = dist[np.ix_(act, act)]
        flat = int(np.argmin(sub))  # first occurrence = lexicographically smallest pair
        r, c = divmod(flat, act.size)
        if r > c:
            r, c = c, r
        a, b = int(act[r]), int(act[c])
        height = float(dist[a, b])

        new = n + step
        sizes[new] = sizes[a] + sizes[b]
        rest = act[(act != a) & (act != b)]
        if rest.size:
            dist[new, rest] = (sizes[a] * dist[a, rest] + sizes[b] * dist[b, rest]) / sizes[new]
            dist[rest, new] = dist[new, rest]
        active.remove(a)
        active.remove(b)
        active.append(new)
        merges.append(Merge(a + 1, b + 1, height, int(sizes[new])))

    return Dendrogram(n, merges)


def cut_k(t: Dendrogram, k: int) -> Partition:
    """Partition into exactly k clusters by undoing the last k-1 merges.

    Cutting by merge count rather than by a height threshold keeps the
    cluster count exact even when heights tie. Clusters are labeled 1..k in
    order of their smallest member index.
    """
    if not (1 <= k <= t.n):
        raise ValueError(f"k must lie in 1..{t.n}, got {k}")
    members: dict[int, list[int]] = {i: [i - 1] for i in range(1, t.n + 1)}
    for step in range(t.n - k):
        m = t.merges[step]
        members[t.n + 1 + step] = members.pop(m.left) + members.pop(m.right)
    clusters = sorted(members.values(), key=min)
    assign = np.empty(t.n, dtype=np.int64)
    for label, cluster in enumerate(clusters, start=1):
        assign[cluster] = label
    return Partition(assign, k=k)


def cut_range(t: Dendrogram, k_min: int, k_max: int) -> PartitionSet:
    """Partitions for every k in k_min..k_max, in increasing-k order."""
    if not (2 <= k_min <= k_max <= t.n):
        raise ValueError(f"need 2 <= k_min <= k_max <= {t.n}, got [{k_min}, {k_max}]")
    return PartitionSet([cut_k(t, k) for k in range(k_min, k_max + 1)], algorithm="upgma")


def read_partition_csv(path, n: int | None = None) -> Partition:
    """Read an externally produced clustering from `object_id,cluster` rows.

    Object ids are 1-based row numbers of the dataset and must cover 1..n
    exactly once. An optional header row is skipped. Cluster labels may be
    arbitrary strings; they are densified to 1..k by first appearance in
    object-id order.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if rows and not rows[0][0].strip().lstrip("-").isdigit():
        rows = rows[1:]
    entries: dict[int, str] = {}
    for r, row in enumerate(rows):
        if len(row) != 2:
            raise DataError(f"{path}: row {r + 1}: expected `object_id,cluster`, got {len(row)} fields")
        try:
            oid = int(row[0])
        except ValueError:
            raise DataError(f"{path}: row {r + 1}: object id {row[0]!r} is not an integer") from None
        if oid in entries:
            raise DataError(f"{path}: duplicate object id {oid}")
        entries[oid] = row[1].strip()
    count = n if n is not None else len(entries)
    if sorted(entries) != list(range(1, count + 1)):
        raise DataError(f"{path}: object ids must cover 1..{count} exactly once")
    return Partition.from_labels([entries[i] for i in range(1, count + 1)])
