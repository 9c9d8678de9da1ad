"""Figure rendering for the CLI report paths.

Every CSV the CLI writes gets a companion PNG next to it: log-log timing
curves with fitted slopes for benchmarks, fidelity/loss traces for state
preparation runs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def fit_loglog_slope(cutoffs, seconds) -> float:
    x = np.log(np.asarray(cutoffs, dtype=float))
    y = np.log(np.asarray(seconds, dtype=float))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def bench_figure(results, out_path) -> None:
    """results: list of (gate_name, cutoffs, median_seconds)."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for name, cutoffs, seconds in results:
        slope = fit_loglog_slope(cutoffs, seconds)
        ax.loglog(cutoffs, seconds, "o-", label=f"{name} (slope {slope:.2f})")
    ax.set_xlabel("cutoff N")
    ax.set_ylabel("median wall time [s]")
    ax.set_title("gate tensor build time vs cutoff")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)


def trace_figure(fidelities, losses, out_path) -> None:
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 6), sharex=True)
    steps = np.arange(len(fidelities))
    ax1.plot(steps, fidelities)
    ax1.set_ylabel("fidelity")
    ax1.grid(alpha=0.3)
    ax2.semilogy(steps, 1.0 + np.asarray(losses) + 1e-16)
    ax2.set_ylabel("1 + loss")
    ax2.set_xlabel("step")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
