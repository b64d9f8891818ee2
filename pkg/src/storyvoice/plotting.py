"""PNG figures for evaluation reports. matplotlib is imported on first use."""

from __future__ import annotations

from pathlib import Path


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_similarity(report, path) -> Path:
    plt = _pyplot()
    sims = [s.similarity for s in report.sentences]
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.bar(range(1, len(sims) + 1), sims, color="#4c72b0")
    ax.set_ylim(0, 1.05)
    ax.set_xlabel("sentence")
    ax.set_ylabel("normalized similarity")
    ax.set_title(f"BLEU {report.bleu:.3f}, {report.exact_matches}/{len(sims)} exact")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return Path(path)


def plot_polarity(report, path) -> Path:
    plt = _pyplot()
    labels = ["positive", "negative", "neutral"]
    values = [report.positive, report.negative, report.neutral]
    fig, ax = plt.subplots(figsize=(4, 3.2))
    ax.bar(labels, values, color=["#55a868", "#c44e52", "#8c8c8c"])
    ax.set_ylim(0, 100)
    ax.set_ylabel("% of words")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return Path(path)


def plot_frequencies(table, path, top: int = 20) -> Path:
    plt = _pyplot()
    rows = list(table)[:top]
    fig, ax = plt.subplots(figsize=(6, max(2.0, 0.3 * len(rows) + 1)))
    ax.barh([w for w, _ in reversed(rows)], [c for _, c in reversed(rows)], color="#4c72b0")
    ax.set_xlabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return Path(path)
