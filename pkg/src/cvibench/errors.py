"""Exception types shared across the package.

The CLI maps these onto exit codes (config 2, data 3, degenerate 4), so new
error conditions should subclass one of the three rather than raising bare
exceptions.
"""


class CviBenchError(Exception):
    """Base class for all package errors."""


class ConfigError(CviBenchError):
    """Invalid configuration or arguments (bad k range, unknown index name...)."""


class DataError(CviBenchError):
    """Unusable input data (missing file, unparseable cell, bad partition file)."""


class DegenerateError(CviBenchError):
    """An evaluation is mathematically undefined for this input.

    Raised instead of returning +/-inf or NaN: zero within-cluster scatter,
    coincident centroids, a constant correlation input, or a similarity
    denominator of zero. Callers decide whether to skip the cell or abort.
    """
