"""Matplotlib rendering for the report paths.

Figures are written next to the delimited outputs (never shown), with the
Agg backend and stripped metadata so repeated runs produce identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150
_SAVE_KWARGS = {"dpi": DPI, "metadata": {"Software": None}}


def save_trajectory_figure(traj, path, title: str | None = None) -> None:
    """State fan over time, with a log-scale energy panel when available."""
    panels = 2 if traj.lyapunov is not None else 1
    fig, axes = plt.subplots(panels, 1, figsize=(8, 3.2 * panels), sharex=True, squeeze=False)
    ax = axes[0][0]
    for i in range(traj.states.shape[1]):
        ax.plot(traj.times, traj.states[:, i], lw=0.8)
    ax.set_ylabel("infection probability")
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    if traj.lyapunov is not None:
        axv = axes[1][0]
        positive = np.maximum(traj.lyapunov, 1e-300)
        axv.semilogy(traj.times, positive, color="black")
        axv.set_ylabel("V(p - p*)")
        axv.set_xlabel("time")
    else:
        ax.set_xlabel("time")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def save_equilibrium_figure(report, path, title: str | None = None) -> None:
    """Endemic profile per node plus a histogram of the equilibrium values."""
    p = report.p_star
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 3.6))
    ax0.bar(np.arange(p.size), p, width=1.0, color="tab:red", edgecolor="none")
    ax0.set_xlabel("node")
    ax0.set_ylabel("equilibrium infection probability")
    if title:
        ax0.set_title(title)
    ax1.hist(p, bins=min(30, max(5, p.size // 3)), color="tab:blue")
    ax1.set_xlabel("equilibrium infection probability")
    ax1.set_ylabel("node count")
    ax1.set_title(report.classification)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
