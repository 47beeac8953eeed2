"""Benchmark internal cluster validity indices against labeled datasets.

The pipeline: load or generate a labeled dataset, standardize it, cluster
with average linkage, cut the dendrogram into a range of partitions, score
each partition with internal validity indices and with the adjusted Rand
index against the reference classification, then grade each index under
five evaluation protocols, including the goodness ratio
(similarity of the chosen partition / best similarity available).
"""

from .data import (
    ConstantColumnWarning,
    DataMatrix,
    DistanceMatrix,
    LabeledDataset,
    euclidean_distances,
    generate_blobs,
    load_csv,
    standardize,
)
from .errors import ConfigError, CviBenchError, DataError, DegenerateError
from .evaluate import (
    PROTOCOLS,
    EvaluationReport,
    ProtocolScore,
    aggregate_goodness,
    evaluate_suite,
    gurrutxaga_score,
    milligan_cooper_score,
    new_goodness,
    select_best,
    vendramin_score,
)
from .external_cvi import ContingencyTable, SimilarityValue, adjusted_rand, adjusted_rand_detail
from .hierclust import Dendrogram, Merge, PartitionSet, cut_k, cut_range, read_partition_csv, upgma
from .internal_cvi import (
    CVI_SPECS,
    DEFAULT_CVI_ORDER,
    CviSpec,
    CviValue,
    calinski_harabasz,
    compute_cvi,
    davies_bouldin,
    mean_silhouette,
    point_biserial,
)
from .partition import Partition

__version__ = "0.1.0"

__all__ = [
    "CVI_SPECS",
    "DEFAULT_CVI_ORDER",
    "PROTOCOLS",
    "ConfigError",
    "ConstantColumnWarning",
    "ContingencyTable",
    "CviBenchError",
    "CviSpec",
    "CviValue",
    "DataError",
    "DataMatrix",
    "DegenerateError",
    "Dendrogram",
    "DistanceMatrix",
    "EvaluationReport",
    "LabeledDataset",
    "Merge",
    "Partition",
    "PartitionSet",
    "ProtocolScore",
    "SimilarityValue",
    "adjusted_rand",
    "adjusted_rand_detail",
    "aggregate_goodness",
    "calinski_harabasz",
    "compute_cvi",
    "cut_k",
    "cut_range",
    "davies_bouldin",
    "euclidean_distances",
    "evaluate_suite",
    "generate_blobs",
    "gurrutxaga_score",
    "load_csv",
    "mean_silhouette",
    "milligan_cooper_score",
    "new_goodness",
    "point_biserial",
    "read_partition_csv",
    "select_best",
    "standardize",
    "upgma",
    "vendramin_score",
]
