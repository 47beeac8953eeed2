from __future__ import annotations

import pytest
from sklearn.datasets import load_wine

from cvibench import cut_range, euclidean_distances, evaluate_suite, load_csv, standardize, upgma


@pytest.fixture(scope="session")
def wine_csv(tmp_path_factory):
    """The 178x13 wine dataset in its canonical layout: headerless, class first.

    Written from scikit-learn's bundled copy of the same data, with classes
    renumbered 1..3 as in the original file.
    """
    X, y = load_wine(return_X_y=True)
    path = tmp_path_factory.mktemp("wine") / "wine.data"
    lines = []
    for row, label in zip(X, y):
        lines.append(",".join([str(int(label) + 1)] + [repr(float(v)) for v in row]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def wine(wine_csv):
    return load_csv(wine_csv, 0, has_header=False)


@pytest.fixture(scope="session")
def wine_pipeline(wine):
    matrix = standardize(wine.features)
    distances = euclidean_distances(matrix)
    tree = upgma(distances)
    return {"dataset": wine, "matrix": matrix, "distances": distances, "tree": tree}


def _report(pipe, k_max):
    return evaluate_suite(
        pipe["dataset"],
        cut_range(pipe["tree"], 2, k_max),
        matrix=pipe["matrix"],
        distances=pipe["distances"],
        dataset_id="wine",
    )


@pytest.fixture(scope="session")
def wine_report_15(wine_pipeline):
    return _report(wine_pipeline, 15)


@pytest.fixture(scope="session")
def wine_report_100(wine_pipeline):
    return _report(wine_pipeline, 100)
