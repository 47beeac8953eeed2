"""Matplotlib renderings of the report figures, returned as PNG bytes.

Uses the Agg backend and strips the Software metadata key so identical
inputs produce byte-identical files.
"""
from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SAVE_OPTS = {"dpi": 110, "metadata": {"Software": None}, "format": "png"}
_DOT = {"color": "#cf222e", "zorder": 5, "s": 36}


def _to_float(values) -> np.ndarray:
    return np.array([np.nan if v is None else float(v) for v in values])


def _finish(fig) -> bytes:
    buf = io.BytesIO()
    fig.tight_layout()
    fig.savefig(buf, **_SAVE_OPTS)
    plt.close(fig)
    return buf.getvalue()


def render_ari_curve(ks, aris) -> bytes:
    """Similarity to the reference classification against cluster count."""
    a = _to_float(aris)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(ks, a, marker="o", markersize=3, color="#1f6feb")
    best = int(np.nanargmax(a))
    ax.scatter([ks[best]], [a[best]], **_DOT)
    ax.set_xlabel("number of clusters")
    ax.set_ylabel("adjusted Rand index")
    ax.grid(True, alpha=0.3)
    return _finish(fig)


def render_cvi_panels(ks, values_by_cvi: dict, best_by_cvi: dict) -> bytes:
    """One panel per index with the chosen (best) partition dotted."""
    names = list(values_by_cvi)
    cols = 2 if len(names) > 1 else 1
    rows = (len(names) + cols - 1) // cols
    fig, axes = plt.subplots(rows, cols, figsize=(5.4 * cols, 3.6 * rows), squeeze=False)
    for i, name in enumerate(names):
        ax = axes[i // cols][i % cols]
        ax.plot(ks, _to_float(values_by_cvi[name]), marker="o", markersize=3, color="#1f6feb")
        if best_by_cvi.get(name) is not None:
            bk, bv = best_by_cvi[name]
            ax.scatter([bk], [bv], **_DOT)
        ax.set_title(name)
        ax.set_xlabel("number of clusters")
        ax.grid(True, alpha=0.3)
    for j in range(len(names), rows * cols):
        axes[j // cols][j % cols].axis("off")
    return _finish(fig)


def render_correlation_sweep(kmax_values, corr_by_cvi: dict) -> bytes:
    """Value-similarity correlation per index as the k range widens."""
    fig, ax = plt.subplots(figsize=(6.8, 4.4))
    for name, corr in corr_by_cvi.items():
        ax.plot(kmax_values, _to_float(corr), marker="o", markersize=3, label=name)
    ax.set_xlabel("largest cluster count in the evaluation set")
    ax.set_ylabel("correlation with adjusted Rand index")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    return _finish(fig)
