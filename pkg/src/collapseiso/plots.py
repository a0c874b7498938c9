"""Figure rendering for bench timings and conjecture-suite reports."""

from __future__ import annotations

from statistics import median
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def save_bench_plot(rows: Sequence[dict], path: str) -> str:
    """Median runtime per size, one line per family, log-log axes."""
    fig, ax = plt.subplots(figsize=(6, 4))
    families = sorted({r["family"] for r in rows})
    for fam in families:
        by_n: dict[int, list[float]] = {}
        for r in rows:
            if r["family"] == fam:
                by_n.setdefault(r["n"], []).append(r["seconds"])
        ns = sorted(by_n)
        ax.plot(ns, [median(by_n[n]) for n in ns], marker="o", label=fam)
    ax.set_xlabel("n")
    ax.set_ylabel("median seconds")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("isomorphism runtime by graph size")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def save_conjecture_plot(reports: Sequence, path: str) -> str:
    """Instances checked (bars) and counterexamples (markers) per conjecture."""
    fig, ax = plt.subplots(figsize=(6, 4))
    names = [f"{r.conjecture_id}:{r.name}" for r in reports]
    xs = range(len(reports))
    ax.bar(xs, [r.checked for r in reports], color="tab:blue", label="checked")
    cx = [len(r.counterexamples) for r in reports]
    ax.scatter(xs, cx, color="tab:red", zorder=3, label="counterexamples")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=30, ha="right")
    ax.set_ylabel("instances")
    ax.set_yscale("symlog")
    ax.legend()
    ax.set_title("conjecture sweep summary")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
