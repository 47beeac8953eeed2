"""Acceptance gate: every criterion below runs at its stated tolerance and
prints one pass line (visible with `pytest -s`).

The wine benchmark fixtures come from conftest: the 178x13 dataset is
standardized, clustered by average linkage, and cut into k=2..15 and
k=2..100 partition sets.
"""
from __future__ import annotations

import time

import numpy as np
import pytest

from cvibench import (
    DegenerateError,
    DistanceMatrix,
    CviValue,
    CviSpec,
    DataMatrix,
    Partition,
    adjusted_rand,
    cut_range,
    euclidean_distances,
    evaluate_suite,
    gurrutxaga_score,
    load_csv,
    mean_silhouette,
    new_goodness,
    point_biserial,
    select_best,
    standardize,
    upgma,
)
from cvibench.cli import main as cli_main
from oracles import brute_force_ari, naive_average_linkage

# Reference values for the wine benchmark (standardized, average linkage).
TABLE = {
    "calinski_harabasz": {"best": 29.9257, "k": 8, "ari": 0.7929,
                          "gurrutxaga": 1.0, "goodness": 1.0,
                          "vendramin_15": 0.9031, "vendramin_100": 0.7145},
    "point_biserial": {"best": 0.6832, "k": 12, "ari": 0.7755,
                       "gurrutxaga": 0.0, "goodness": 0.9780,
                       "vendramin_15": 0.9517, "vendramin_100": 0.9739},
    "mean_silhouette": {"best": 0.2719, "k": 8, "ari": 0.7929,
                        "gurrutxaga": 1.0, "goodness": 1.0,
                        "vendramin_15": 0.4990, "vendramin_100": -0.6686},
    "davies_bouldin": {"best": 0.6091, "k": 2, "ari": -0.0020,
                       "gurrutxaga": 0.0, "goodness": -0.00245,
                       "vendramin_15": -0.1015, "vendramin_100": 0.5754},
}


def _pass(number: int, text: str) -> None:
    print(f"[acceptance] criterion {number} ({text}): PASS")


def test_criterion_1_best_values_and_positions(wine_csv):
    started = time.monotonic()
    dataset = load_csv(wine_csv, 0, has_header=False)
    matrix = standardize(dataset.features)
    distances = euclidean_distances(matrix)
    report = evaluate_suite(dataset, cut_range(upgma(distances), 2, 15),
                            matrix=matrix, distances=distances)
    elapsed = time.monotonic() - started
    for name, expected in TABLE.items():
        summary = report.per_cvi[name]
        assert summary.best_value == pytest.approx(expected["best"], abs=0.005), name
        assert summary.best_k == expected["k"], name
    assert elapsed < 10.0
    _pass(1, f"best values and cluster counts, {elapsed:.2f}s")


def test_criterion_2_similarity_at_best(wine_report_15, wine_report_100):
    for name, expected in TABLE.items():
        got = wine_report_15.per_cvi[name].ari_at_best
        assert got == pytest.approx(expected["ari"], abs=0.003), name
    curve = [(row.k, row.ari) for row in wine_report_100.rows]
    best_k, best_ari = max(curve, key=lambda item: item[1])
    assert best_k == 8
    assert best_ari == pytest.approx(0.793, abs=0.003)
    _pass(2, "adjusted Rand at chosen partitions and curve maximum")


def test_criterion_3_goodness_ratio(wine_report_15):
    scores = {name: s.protocols["new_goodness"].value
              for name, s in wine_report_15.per_cvi.items()}
    assert scores["calinski_harabasz"] == 1.0
    assert scores["mean_silhouette"] == 1.0
    assert scores["point_biserial"] == pytest.approx(0.9780, abs=0.003)
    assert scores["davies_bouldin"] == pytest.approx(-0.00245, abs=0.002)
    _pass(3, "goodness ratios")


def test_criterion_4_protocol_booleans(wine_report_15):
    for name, expected in TABLE.items():
        summary = wine_report_15.per_cvi[name]
        assert summary.protocols["milligan_cooper"].value == 0.0, name
        assert summary.protocols["gurrutxaga"].value == expected["gurrutxaga"], name
    _pass(4, "milligan_cooper all fail, gurrutxaga split")


def test_criterion_5_correlation_convention(wine_report_15, wine_report_100):
    variant_names = ("pearson_raw", "spearman_raw", "pearson_oriented", "spearman_oriented")
    matching = set(variant_names)
    for report, column in ((wine_report_15, "vendramin_15"), (wine_report_100, "vendramin_100")):
        for name, expected in TABLE.items():
            variants = report.per_cvi[name].protocols["vendramin"].detail["variants"]
            matching &= {v for v in variant_names
                         if variants[v] == pytest.approx(expected[column], abs=0.02)}
    assert matching, "no correlation variant matches all eight reference values"
    # the convention recorded in the README: plain Pearson on raw values
    assert "pearson_raw" in matching
    _pass(5, f"correlation convention, matching variants: {sorted(matching)}")


def test_criterion_6_oracle_equivalence():
    started = time.monotonic()
    rng = np.random.default_rng(61)
    for _ in range(110):
        n = int(rng.integers(2, 9))
        d = DistanceMatrix(n, rng.random(n * (n - 1) // 2))
        tree = upgma(d)
        merges, heights = naive_average_linkage(d.to_square())
        assert [(m.left, m.right, m.size) for m in tree.merges] == merges
        assert np.allclose([m.height for m in tree.merges], heights, atol=1e-9)
    upgma_elapsed = time.monotonic() - started

    started = time.monotonic()
    rng = np.random.default_rng(62)
    compared = 0
    while compared < 520:
        n = int(rng.integers(2, 8))
        p = _random_partition(rng, n)
        q = _random_partition(rng, n)
        num, den = brute_force_ari(p.assign, q.assign)
        if den == 0:
            with pytest.raises(DegenerateError):
                adjusted_rand(p, q)
        else:
            assert adjusted_rand(p, q) == pytest.approx(num / den, abs=1e-12)
        compared += 1
    ari_elapsed = time.monotonic() - started

    assert upgma_elapsed < 5.0 and ari_elapsed < 5.0
    _pass(6, f"oracle equivalence, linkage {upgma_elapsed:.2f}s, pair counting {ari_elapsed:.2f}s")


def _random_partition(rng, n, k_lo=1, k_hi=None):
    k = int(rng.integers(k_lo, (k_hi or n) + 1))
    assign = np.concatenate([np.arange(1, k + 1), rng.integers(1, k + 1, size=n - k)])
    rng.shuffle(assign)
    return Partition(assign, k=k)


def test_criterion_7_invariants(wine_pipeline, wine_report_100):
    rng = np.random.default_rng(71)

    # silhouette and point-biserial stay inside [-1, 1]
    for _ in range(1000):
        n = int(rng.integers(4, 13))
        matrix = DataMatrix(rng.normal(size=(n, int(rng.integers(1, 4)))))
        part = _random_partition(rng, n, 2, n - 1)
        d = euclidean_distances(matrix)
        assert -1.0 <= mean_silhouette(d, part) <= 1.0
        assert -1.0 <= point_biserial(d, part) <= 1.0

    # adjusted Rand symmetry and label-permutation invariance
    for _ in range(200):
        n = int(rng.integers(3, 9))
        p = _random_partition(rng, n, 2, n - 1)
        q = _random_partition(rng, n, 2, n - 1)
        assert adjusted_rand(p, q) == adjusted_rand(q, p)
        labels = list(range(1, q.k + 1))
        rng.shuffle(labels)
        renamed = q.relabeled(dict(zip(range(1, q.k + 1), labels)))
        assert adjusted_rand(p, renamed) == adjusted_rand(p, q)

    # merge heights never decrease
    heights = [m.height for m in wine_pipeline["tree"].merges]
    assert all(b >= a - 1e-12 for a, b in zip(heights, heights[1:]))

    # cuts are nested: every k+1 cluster sits inside one k cluster
    cuts = {part.k: part for part in cut_range(wine_pipeline["tree"], 2, 100)}
    for k in range(2, 100):
        fine, coarse = cuts[k + 1], cuts[k]
        for label in range(1, fine.k + 1):
            assert len(set(coarse.assign[fine.members(label)].tolist())) == 1

    # the goodness ratio ignores monotone rescaling of the index values
    spec = CviSpec("probe", "max")
    for _ in range(100):
        raw = rng.normal(size=8)
        sims = rng.uniform(0.05, 1.0, size=8).tolist()
        values = [CviValue(spec, k + 2, v) for k, v in enumerate(raw)]
        warped = [CviValue(spec, k + 2, float(np.exp(2.0 * v + 3.0))) for k, v in enumerate(raw)]
        b0, b1 = select_best(values, "max"), select_best(warped, "max")
        assert b0 == b1
        assert new_goodness(b0, sims).value == new_goodness(b1, sims).value

    # bounded by 1, attaining it exactly when gurrutxaga succeeds
    for _ in range(300):
        sims = rng.uniform(-0.2, 1.0, size=int(rng.integers(2, 9)))
        if sims.max() <= 0:
            continue
        best = int(rng.integers(0, sims.size))
        ratio = new_goodness(best, sims.tolist()).value
        assert ratio <= 1.0
        assert (ratio == 1.0) == (gurrutxaga_score(best, sims.tolist()).value == 1.0)

    # and the wine run agrees on that equivalence
    for name, summary in wine_report_100.per_cvi.items():
        ratio = summary.protocols["new_goodness"].value
        success = summary.protocols["gurrutxaga"].value
        assert (ratio == 1.0) == (success == 1.0)

    _pass(7, "invariant suites")


def test_criterion_8_cli_determinism(wine_csv, tmp_path):
    outs = []
    for sub in ("first", "second"):
        out = tmp_path / sub
        code = cli_main(["evaluate", "--input", str(wine_csv), "--no-header",
                         "--label-col", "0", "--kmax", "15", "--output-dir", str(out)])
        assert code == 0
        outs.append(out)
    names = sorted(p.name for p in outs[0].iterdir())
    assert "report.json" in names and "partitions.csv" in names and "summary.csv" in names
    for name in names:
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes(), name
    _pass(8, "byte-identical report files across runs")
