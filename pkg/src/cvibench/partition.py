"""Cluster membership vectors.

A Partition assigns each of n objects to one of k labels 1..k. The same type
holds clusterings produced by an algorithm and reference classifications read
from a labeled dataset.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Partition:
    """Assignment of n objects to clusters labeled 1..k, every label used."""

    assign: np.ndarray
    k: int = field(default=0)

    def __post_init__(self):
        a = np.asarray(self.assign, dtype=np.int64)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("assign must be a non-empty 1-D sequence")
        self.assign = a
        if self.k == 0:
            self.k = int(a.max())
        if a.min() < 1 or a.max() > self.k:
            raise ValueError(f"labels must lie in 1..{self.k}")
        present = np.unique(a)
        if present.size != self.k:
            missing = sorted(set(range(1, self.k + 1)) - set(present.tolist()))
            raise ValueError(f"every label in 1..{self.k} must occur; missing {missing}")

    @property
    def n(self) -> int:
        return int(self.assign.size)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Build a Partition from arbitrary hashable labels.

        Labels are mapped to consecutive integers 1..k in order of first
        appearance, so the result is deterministic for a given row order.
        """
        mapping: dict = {}
        dense = np.empty(len(labels), dtype=np.int64)
        for i, lab in enumerate(labels):
            if lab not in mapping:
                mapping[lab] = len(mapping) + 1
            dense[i] = mapping[lab]
        return cls(dense)

    def relabeled(self, perm: dict[int, int]) -> "Partition":
        """Return a copy with labels renamed through a bijection 1..k -> 1..k."""
        if sorted(perm) != list(range(1, self.k + 1)) or sorted(perm.values()) != list(range(1, self.k + 1)):
            raise ValueError("perm must be a bijection on 1..k")
        lut = np.zeros(self.k + 1, dtype=np.int64)
        for old, new in perm.items():
            lut[old] = new
        return Partition(lut[self.assign], k=self.k)

    def members(self, label: int) -> np.ndarray:
        """0-based object indices assigned to `label`."""
        return np.flatnonzero(self.assign == label)
