"""Figure rendering for run reports.

Every function saves a PNG to the given path and returns that path.  The Agg
backend is selected up front so rendering works without a display.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .dynamics import Trajectory
from .spectral import SpectralReport


def plot_spectrum(eigenvalues, report: SpectralReport, path: str) -> str:
    """Scatter the full superoperator spectrum in the complex plane.

    Interior eigenvalues are drawn small, peripheral ones highlighted, with
    the unit circle and the interior-modulus circle for reference.
    """
    eigenvalues = np.asarray(list(eigenvalues), dtype=complex)
    peri = np.array([m.eigenvalue for m in report.peripheral], dtype=complex)
    fig, ax = plt.subplots(figsize=(5.5, 5.5), constrained_layout=True)
    phi = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(phi), np.sin(phi), color="0.75", lw=1, label="unit circle")
    r = report.interior_max_modulus
    if r > 0:
        ax.plot(r * np.cos(phi), r * np.sin(phi), color="0.85", lw=1, ls="--",
                label=f"interior max |$\\lambda$| = {r:.4f}")
    ax.scatter(eigenvalues.real, eigenvalues.imag, s=12, color="tab:blue",
               alpha=0.6, label="interior spectrum")
    if peri.size:
        ax.scatter(peri.real, peri.imag, s=70, marker="*", color="tab:red",
                   zorder=3, label="peripheral")
    ax.set_xlabel("Re $\\lambda$")
    ax.set_ylabel("Im $\\lambda$")
    ax.set_aspect("equal")
    ax.legend(loc="upper left", fontsize=8)
    ax.set_title("Superoperator spectrum")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_convergence(traj: Trajectory, records, interior_max_modulus: float,
                     path: str) -> str:
    """Distance to the comparison state and mutual information over time.

    Both panels are log-scale; the distance panel overlays the geometric
    envelope set by the interior spectral radius.
    """
    t = np.arange(len(traj.states))
    dist = np.maximum(traj.distance_to_limit, 1e-18)
    mi = np.maximum(np.array([r.mutual_info for r in records]), 1e-18)
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.5, 6), sharex=True,
                                   constrained_layout=True)
    ax1.semilogy(t, dist, color="tab:blue", label="distance to limit")
    if 0 < interior_max_modulus < 1 and dist[0] > 0:
        env = 10.0 * dist[0] * interior_max_modulus ** t
        ax1.semilogy(t, np.maximum(env, 1e-18), color="tab:orange", ls="--",
                     label="$10\\,r^t\\,d(0)$ envelope")
    ax1.set_ylabel("Frobenius distance")
    ax1.legend(fontsize=8)
    ax2.semilogy(t, mi, color="tab:green")
    ax2.set_ylabel("mutual information (nats)")
    ax2.set_xlabel("step t")
    fig.suptitle(f"N={traj.spec.n}, q={traj.spec.q:g}")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_distributions(traj: Trajectory, path: str) -> str:
    """Node occupation over time as a heatmap, with the final distribution."""
    n = traj.spec.n
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6),
                                   constrained_layout=True,
                                   gridspec_kw={"width_ratios": [2, 1]})
    img = ax1.imshow(traj.position_dist.T, aspect="auto", origin="lower",
                     interpolation="nearest", cmap="viridis")
    ax1.set_xlabel("step t")
    ax1.set_ylabel("node x")
    ax1.set_title("P(x, t)")
    fig.colorbar(img, ax=ax1, shrink=0.9)
    ax2.bar(np.arange(n), traj.position_dist[-1], color="tab:blue")
    ax2.set_xlabel("node x")
    ax2.set_ylabel("probability")
    ax2.set_title(f"final step t={len(traj.states) - 1}")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
