"""Scoring of validity indices over a partition set with known ground truth.

Four protocols are implemented. Three grade only the index's chosen
partition: milligan_cooper (did it pick the right number of clusters),
gurrutxaga (did it pick the partition most similar to the reference), and
new_goodness (the similarity of the chosen partition divided by the best
similarity available in the set, a continuous score with maximum 1).
vendramin instead correlates the index values with the similarities across
all partitions. select_best and evaluate_suite tie everything together.
"""
from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .data import DataMatrix, DistanceMatrix, LabeledDataset, euclidean_distances
from .errors import DegenerateError
from .external_cvi import adjusted_rand
from .hierclust import PartitionSet
from .internal_cvi import CVI_SPECS, DEFAULT_CVI_ORDER, CviValue, compute_cvi, resolve_cvi_name

PROTOCOLS = ("milligan_cooper", "gurrutxaga", "vendramin", "new_goodness")


@dataclass(frozen=True)
class ProtocolScore:
    protocol: str
    value: float
    detail: dict = field(default_factory=dict)


def select_best(values: Sequence[CviValue], direction: str) -> int:
    """Index of the extremal value; ties go to the smallest k, then input order."""
    if not values:
        raise ValueError("cannot select from an empty sequence")
    if direction not in ("max", "min"):
        raise ValueError("direction must be 'max' or 'min'")
    for i, v in enumerate(values):
        if not np.isfinite(v.value):
            raise ValueError(f"non-finite value at position {i}")
    best = 0
    for i in range(1, len(values)):
        v, b = values[i], values[best]
        better = v.value > b.value if direction == "max" else v.value < b.value
        if better or (v.value == b.value and v.k < b.k):
            best = i
    return best


def milligan_cooper_score(best_k: int, n_classes: int) -> ProtocolScore:
    """Success iff the chosen cluster count equals the class count.

    The detail carries k_delta = best_k - n_classes, the signed size of the
    miss, for failure-breakdown tables.
    """
    if best_k < 1 or n_classes < 1:
        raise ValueError("best_k and n_classes must be >= 1")
    return ProtocolScore(
        "milligan_cooper",
        1.0 if best_k == n_classes else 0.0,
        {"best_k": best_k, "n_classes": n_classes, "k_delta": best_k - n_classes},
    )


def gurrutxaga_score(best_index: int, similarities: Sequence[float]) -> ProtocolScore:
    """Success iff the chosen partition is the most similar to the reference.

    Ties count as success: any partition attaining the maximum similarity is
    as good a pick as the argmax itself.
    """
    sims = np.asarray(similarities, dtype=np.float64)
    if sims.size == 0:
        raise ValueError("similarities must be non-empty")
    if not (0 <= best_index < sims.size):
        raise ValueError(f"best_index {best_index} out of range")
    top = float(sims.max())
    return ProtocolScore(
        "gurrutxaga",
        1.0 if sims[best_index] >= top else 0.0,
        {"similarity_at_best": float(sims[best_index]), "similarity_max": top},
    )


def vendramin_score(
    cvi_values: Sequence[float],
    similarities: Sequence[float],
    method: str = "pearson",
    direction: str = "max",
    ks: Sequence[int] | None = None,
) -> ProtocolScore:
    """Correlation between index values and similarities across all partitions.

    The score is the chosen method's correlation on raw values. Because the
    literature is split on rank vs linear correlation and on negating
    min-optimal indices, the detail always carries all four variants
    (pearson/spearman, raw/oriented) so a caller can compare conventions;
    "oriented" negates the values of a min-optimal index first.
    """
    v = np.asarray(cvi_values, dtype=np.float64)
    s = np.asarray(similarities, dtype=np.float64)
    if method not in ("pearson", "spearman"):
        raise ValueError("method must be 'pearson' or 'spearman'")
    if v.size != s.size or v.size < 3:
        raise ValueError("need at least 3 paired values")
    if np.all(v == v[0]) or np.all(s == s[0]):
        raise DegenerateError("correlation undefined for a constant input vector")
    pearson = _pearson(v, s)
    spearman = _pearson(_rank(v), _rank(s))
    sign = 1.0 if direction == "max" else -1.0
    variants = {
        "pearson_raw": pearson,
        "spearman_raw": spearman,
        "pearson_oriented": sign * pearson,
        "spearman_oriented": sign * spearman,
    }
    detail = {"method": method, "variants": variants}
    if ks is not None:
        detail["k_range"] = [int(min(ks)), int(max(ks))]
    return ProtocolScore("vendramin", variants[f"{method}_raw"], detail)


def new_goodness(best_index: int, similarities: Sequence[float]) -> ProtocolScore:
    """Similarity of the chosen partition over the best similarity in the set.

    Continuous with maximum 1 whatever the candidate set, so scores are
    comparable across datasets; 1 exactly when the choice attains the best
    available similarity. Undefined (degenerate) when no candidate beats
    zero similarity, because dividing by a non-positive maximum would flip
    the meaning of the ratio.
    """
    sims = np.asarray(similarities, dtype=np.float64)
    if sims.size == 0:
        raise ValueError("similarities must be non-empty")
    if not (0 <= best_index < sims.size):
        raise ValueError(f"best_index {best_index} out of range")
    top = float(sims.max())
    if top <= 0.0:
        raise DegenerateError("goodness ratio undefined: no partition beats zero similarity")
    return ProtocolScore(
        "new_goodness",
        float(sims[best_index]) / top,
        {"similarity_at_best": float(sims[best_index]), "similarity_max": top},
    )


def aggregate_goodness(values: Sequence[float]) -> dict:
    """Mean and median of goodness scores, for multi-dataset summaries."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("nothing to aggregate")
    return {"mean": statistics.fmean(vals), "median": statistics.median(vals)}


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    return float((xc @ yc) / np.sqrt((xc @ xc) * (yc @ yc)))


def _rank(x: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties sharing their average rank."""
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=np.float64)
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


@dataclass
class PartitionRow:
    """Per-partition slice of the report: k, index values, similarity."""

    index: int
    k: int
    ari: float
    values: dict
    skipped: dict


@dataclass
class CviSummary:
    """Per-index outcome: the chosen partition and its protocol scores."""

    name: str
    direction: str
    best_index: int | None
    best_k: int | None
    best_value: float | None
    ari_at_best: float | None
    protocols: dict
    protocol_errors: dict


@dataclass
class EvaluationReport:
    provenance: dict
    rows: list
    per_cvi: dict

    def as_dict(self) -> dict:
        return {
            "provenance": self.provenance,
            "partitions": [
                {
                    "index": r.index,
                    "k": r.k,
                    "adjusted_rand": r.ari,
                    "values": r.values,
                    "skipped": r.skipped,
                }
                for r in self.rows
            ],
            "indices": {
                name: {
                    "direction": s.direction,
                    "best_index": s.best_index,
                    "best_k": s.best_k,
                    "best_value": s.best_value,
                    "ari_at_best": s.ari_at_best,
                    "protocols": {
                        pname: {"value": score.value, "detail": score.detail}
                        for pname, score in s.protocols.items()
                    },
                    "protocol_errors": s.protocol_errors,
                }
                for name, s in self.per_cvi.items()
            },
        }


def evaluate_suite(
    dataset: LabeledDataset,
    partitions: PartitionSet,
    cvis: Sequence[str] | None = None,
    protocols: Sequence[str] | None = None,
    correlation: str = "pearson",
    matrix: DataMatrix | None = None,
    distances: DistanceMatrix | None = None,
    dataset_id: str = "",
) -> EvaluationReport:
    """Evaluate every requested index over every partition and score protocols.

    `matrix` should be the matrix the partitions were clustered on (defaults
    to the dataset's raw features); `distances` defaults to its Euclidean
    distances. Index evaluations that are undefined for a particular
    partition are recorded as skipped cells rather than aborting, and a
    protocol that cannot be computed is recorded under protocol_errors.
    """
    if partitions.n != dataset.n:
        raise ValueError("partitions and dataset disagree on the number of objects")
    cvi_names = [resolve_cvi_name(c) for c in (cvis if cvis is not None else DEFAULT_CVI_ORDER)]
    wanted = list(protocols) if protocols is not None else list(PROTOCOLS)
    for proto in wanted:
        if proto not in PROTOCOLS:
            raise ValueError(f"unknown protocol {proto!r}; known: {', '.join(PROTOCOLS)}")
    matrix = matrix if matrix is not None else dataset.features
    distances = distances if distances is not None else euclidean_distances(matrix)

    aris = [adjusted_rand(part, dataset.labels) for part in partitions]
    ks = partitions.ks

    cells: dict[str, list] = {name: [] for name in cvi_names}
    reasons: dict[str, dict] = {name: {} for name in cvi_names}
    for name in cvi_names:
        for i, part in enumerate(partitions):
            try:
                cells[name].append(compute_cvi(name, matrix, distances, part))
            except (DegenerateError, ValueError) as exc:
                cells[name].append(None)
                reasons[name][i] = str(exc)

    rows = [
        PartitionRow(
            index=i,
            k=ks[i],
            ari=aris[i],
            values={name: cells[name][i] for name in cvi_names},
            skipped={name: reasons[name][i] for name in cvi_names if i in reasons[name]},
        )
        for i in range(len(partitions))
    ]

    per_cvi: dict[str, CviSummary] = {}
    for name in cvi_names:
        spec = CVI_SPECS[name]
        usable = [
            (i, CviValue(spec, ks[i], cells[name][i]))
            for i in range(len(partitions))
            if cells[name][i] is not None
        ]
        scores: dict[str, ProtocolScore] = {}
        errors: dict[str, str] = {}
        if not usable:
            for proto in wanted:
                errors[proto] = "no computable index values"
            per_cvi[name] = CviSummary(name, spec.direction, None, None, None, None, scores, errors)
            continue

        local_best = select_best([cv for _, cv in usable], spec.direction)
        best_index = usable[local_best][0]
        best_value = usable[local_best][1].value

        for proto in wanted:
            try:
                if proto == "milligan_cooper":
                    scores[proto] = milligan_cooper_score(ks[best_index], dataset.n_classes)
                elif proto == "gurrutxaga":
                    scores[proto] = gurrutxaga_score(best_index, aris)
                elif proto == "vendramin":
                    scores[proto] = vendramin_score(
                        [cv.value for _, cv in usable],
                        [aris[i] for i, _ in usable],
                        method=correlation,
                        direction=spec.direction,
                        ks=[ks[i] for i, _ in usable],
                    )
                else:
                    scores[proto] = new_goodness(best_index, aris)
            except (DegenerateError, ValueError) as exc:
                errors[proto] = str(exc)

        per_cvi[name] = CviSummary(
            name=name,
            direction=spec.direction,
            best_index=best_index,
            best_k=ks[best_index],
            best_value=best_value,
            ari_at_best=aris[best_index],
            protocols=scores,
            protocol_errors=errors,
        )

    provenance = {
        "dataset_id": dataset_id,
        "n": dataset.n,
        "n_classes": dataset.n_classes,
        "algorithm": partitions.algorithm,
        "k_values": ks,
        "standardized": matrix.standardized,
        "cvis": cvi_names,
        "protocols": wanted,
        "correlation_method": correlation,
    }
    return EvaluationReport(provenance, rows, per_cvi)
