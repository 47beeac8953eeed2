"""Similarity between a clustering and a reference classification."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError
from .partition import Partition


@dataclass(frozen=True)
class ContingencyTable:
    """Cross-tabulation n_cj = |class c intersected with cluster j|."""

    counts: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray
    n: int

    @classmethod
    def from_partitions(cls, p: Partition, q: Partition) -> "ContingencyTable":
        if p.n != q.n:
            raise ValueError(f"partitions disagree on n: {p.n} vs {q.n}")
        flat = (p.assign - 1) * q.k + (q.assign - 1)
        counts = np.bincount(flat, minlength=p.k * q.k).reshape(p.k, q.k)
        return cls(counts, counts.sum(axis=1), counts.sum(axis=0), p.n)


@dataclass(frozen=True)
class SimilarityValue:
    """An adjusted Rand value plus the pair-count sums behind it."""

    value: float
    pair_counts: dict


def adjusted_rand(p: Partition, q: Partition) -> float:
    """Adjusted Rand index of two partitions of the same objects.

    Pair counting corrected for chance: 1 for identical partitions (up to
    label renaming), about 0 for independent ones, negative below the random
    expectation. Binomial sums run in exact integer arithmetic with one
    float division at the end, so n in the hundreds cannot overflow.
    """
    return adjusted_rand_detail(p, q).value


def adjusted_rand_detail(p: Partition, q: Partition) -> SimilarityValue:
    table = ContingencyTable.from_partitions(p, q)
    sum_cells = sum(math.comb(int(v), 2) for v in table.counts.flat)
    sum_rows = sum(math.comb(int(v), 2) for v in table.row_sums)
    sum_cols = sum(math.comb(int(v), 2) for v in table.col_sums)
    total_pairs = math.comb(table.n, 2)

    # ARI = (sum_cells - E) / ((sum_rows + sum_cols)/2 - E), E = sum_rows*sum_cols/total_pairs,
    # cleared of fractions so every term stays an exact integer.
    numerator = 2 * (total_pairs * sum_cells - sum_rows * sum_cols)
    denominator = total_pairs * (sum_rows + sum_cols) - 2 * sum_rows * sum_cols
    if denominator == 0:
        raise DegenerateError("adjusted Rand undefined: chance-correction denominator is zero")
    return SimilarityValue(
        numerator / denominator,
        {
            "pair_total": total_pairs,
            "pair_same_both": sum_cells,
            "pair_same_first": sum_rows,
            "pair_same_second": sum_cols,
        },
    )
