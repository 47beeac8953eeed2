from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvibench import (
    ContingencyTable,
    DegenerateError,
    Partition,
    adjusted_rand,
    adjusted_rand_detail,
)
from oracles import brute_force_ari


def random_partition(rng, n, k_lo=1, k_hi=None):
    k = int(rng.integers(k_lo, (k_hi or n) + 1))
    assign = np.concatenate([np.arange(1, k + 1), rng.integers(1, k + 1, size=n - k)])
    rng.shuffle(assign)
    return Partition(assign, k=k)


def test_identity_is_exactly_one():
    rng = np.random.default_rng(31)
    for _ in range(20):
        p = random_partition(rng, int(rng.integers(2, 10)))
        if p.k in (1, p.n):
            continue
        assert adjusted_rand(p, p) == 1.0


def test_crossed_pairs_hand_case():
    p = Partition(np.array([1, 1, 2, 2]))
    q = Partition(np.array([1, 2, 1, 2]))
    assert adjusted_rand(p, q) == -0.5
    num, den = brute_force_ari(p.assign, q.assign)
    assert num / den == pytest.approx(-0.5, abs=1e-12)


def test_symmetry_and_label_permutation_invariance():
    rng = np.random.default_rng(32)
    for _ in range(50):
        n = int(rng.integers(3, 9))
        p = random_partition(rng, n, 2, n - 1)
        q = random_partition(rng, n, 2, n - 1)
        assert adjusted_rand(p, q) == adjusted_rand(q, p)
        labels = list(range(1, q.k + 1))
        rng.shuffle(labels)
        renamed = q.relabeled(dict(zip(range(1, q.k + 1), labels)))
        assert adjusted_rand(p, renamed) == adjusted_rand(p, q)


def test_matches_brute_force_pair_counting():
    rng = np.random.default_rng(33)
    for _ in range(200):
        n = int(rng.integers(2, 8))
        p = random_partition(rng, n)
        q = random_partition(rng, n)
        num, den = brute_force_ari(p.assign, q.assign)
        if den == 0:
            with pytest.raises(DegenerateError):
                adjusted_rand(p, q)
        else:
            assert adjusted_rand(p, q) == pytest.approx(num / den, abs=1e-12)


def test_upper_bound_and_identity_characterization():
    rng = np.random.default_rng(34)
    for _ in range(100):
        n = int(rng.integers(3, 9))
        p = random_partition(rng, n, 2, n - 1)
        q = random_partition(rng, n, 2, n - 1)
        value = adjusted_rand(p, q)
        assert value <= 1.0
        same_structure = Partition.from_labels(p.assign.tolist()).assign.tolist() == \
            Partition.from_labels(q.assign.tolist()).assign.tolist()
        assert (value == 1.0) == same_structure


def test_mismatched_n():
    with pytest.raises(ValueError, match="disagree"):
        adjusted_rand(Partition(np.array([1, 2])), Partition(np.array([1, 1, 2])))


def test_degenerate_denominators():
    singletons = Partition(np.array([1, 2, 3]))
    lump = Partition(np.array([1, 1, 1]))
    with pytest.raises(DegenerateError):
        adjusted_rand(singletons, singletons)
    with pytest.raises(DegenerateError):
        adjusted_rand(lump, lump)


def test_negative_below_chance():
    p = Partition(np.array([1, 1, 2, 2]))
    q = Partition(np.array([1, 2, 1, 2]))
    assert adjusted_rand(p, q) < 0


def test_contingency_table_sums():
    p = Partition(np.array([1, 1, 2, 2, 3]))
    q = Partition(np.array([1, 2, 2, 2, 1]))
    table = ContingencyTable.from_partitions(p, q)
    assert table.counts.sum() == 5
    assert table.counts.tolist() == [[1, 1], [0, 2], [1, 0]]
    assert table.row_sums.tolist() == [2, 2, 1]
    assert table.col_sums.tolist() == [2, 3]


def test_detail_reports_pair_counts():
    p = Partition(np.array([1, 1, 2, 2]))
    detail = adjusted_rand_detail(p, p)
    assert detail.value == 1.0
    assert detail.pair_counts == {
        "pair_total": 6,
        "pair_same_both": 2,
        "pair_same_first": 2,
        "pair_same_second": 2,
    }


partition_lists = st.integers(2, 7).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(1, 4), min_size=n, max_size=n),
        st.lists(st.integers(1, 4), min_size=n, max_size=n),
    )
)


@settings(max_examples=200, deadline=None)
@given(partition_lists)
def test_hypothesis_agreement_with_brute_force(pair):
    raw_p, raw_q = pair
    p = Partition.from_labels(raw_p)
    q = Partition.from_labels(raw_q)
    num, den = brute_force_ari(p.assign, q.assign)
    if den == 0:
        with pytest.raises(DegenerateError):
            adjusted_rand(p, q)
    else:
        assert adjusted_rand(p, q) == pytest.approx(num / den, abs=1e-12)
