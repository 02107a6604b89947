"""Matplotlib rendering of sweep results and trajectories to image files.

Figures are rendered headless (Agg) next to the delimited output.  Layout
follows the shapes the sweeps describe: energy curves over the pulse,
scaling lines against 1/N^2, fidelity curves and heat maps, disorder
scatter.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import SweepResult
from .propagator import Trajectory


def render_trajectory(traj: Trajectory, path, title: str | None = None) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.2))
    n = traj.populations.shape[1]
    for j in range(n):
        ax.plot(traj.times, traj.populations[:, j], label=f"site {j + 1}")
    ax.set_xlabel("time t (units of 1/J)")
    ax.set_ylabel("population $|c_j(t)|^2$")
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(loc="center right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_gap_profile(result: SweepResult, path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ts = result.column("t")
    ax.plot(ts, result.column("energy_ground"), label=r"$\varepsilon_g(t)$")
    ax.plot(ts, result.column("energy_first"), label=r"$\varepsilon_1(t)$")
    ax.set_xlabel("time t (units of 1/J)")
    ax.set_ylabel("energy (units of J)")
    t_star = result.metadata.get("t_star")
    if t_star is not None:
        ax.axvline(t_star, color="gray", ls="--", lw=0.8)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_gap_vs_n(result: SweepResult, path) -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    mu0s = result.metadata["mu0_list"]
    rows = np.array(result.rows)
    for mu0 in mu0s:
        sel = rows[rows[:, 0] == mu0]
        ax.plot(sel[:, 2], sel[:, 3], "o", label=rf"$\mu_0={mu0:g}$")
        slope = result.metadata[f"slope_mu0_{mu0:g}"]
        intercept = result.metadata[f"intercept_mu0_{mu0:g}"]
        xs = np.linspace(0, sel[:, 2].max() * 1.05, 50)
        ax.plot(xs, slope * xs + intercept, "-", lw=0.8, color=ax.lines[-1].get_color())
    ax.set_xlabel(r"$1/N^2$")
    ax.set_ylabel(r"minimum gap $\Delta$ (units of J)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_gap_vs_alpha(result: SweepResult, path) -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    ax.plot(result.column("alpha_tau"), result.column("gap"), "o-")
    sat = result.metadata.get("saturation_gap")
    if sat is not None:
        ax.axhline(sat, color="gray", ls="--", lw=0.8,
                   label=f"bare-chain gap {sat:.4f}")
        ax.legend()
    ax.set_xlabel(r"pulse width $\alpha\tau$")
    ax.set_ylabel(r"gap $\Delta(\tau/2)$ (units of J)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_fidelity_vs_alpha(result: SweepResult, path) -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    ax.plot(result.column("alpha_tau"), result.column("fidelity"), "o-")
    ax.set_xlabel(r"pulse width $\alpha\tau$")
    ax.set_ylabel(r"transfer fidelity $|c_N(\tau)|^2$")
    ax.set_ylim(-0.02, 1.02)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_min_time(result: SweepResult, path) -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    ns = result.column("n_sites")
    ax.plot(ns, result.column("tau_min"), "o", label=r"$\tau_{min}$")
    a = result.metadata["fit_a"]
    b = result.metadata["fit_b"]
    c = result.metadata["fit_c"]
    xs = np.linspace(ns.min(), ns.max(), 100)
    ax.plot(xs, a * xs**2 + b * xs + c, "-", lw=1.0,
            label=f"quadratic fit ($R^2$={result.metadata['fit_r_squared']:.3f})")
    ax.set_xlabel("number of sites N")
    ax.set_ylabel(r"minimum transfer time $\tau_{min}$ (units of 1/J)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_fidelity_grid(result: SweepResult, path) -> None:
    mu_a = np.array(result.metadata["mu_a_list"])
    mu_b = np.array(result.metadata["mu_b_list"])
    grid = np.array(result.column("fidelity")).reshape(len(mu_a), len(mu_b))
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4.2))
    if np.array_equal(mu_a, mu_b):
        ax0.plot(mu_a, np.diag(grid), "o-")
    ax0.set_xlabel(r"$\mu_{A,max}=\mu_{B,max}$ (units of J)")
    ax0.set_ylabel(r"fidelity $|c_N(\tau)|^2$")
    mesh = ax1.pcolormesh(mu_b, mu_a, grid, shading="nearest", vmin=grid.min(), vmax=1.0)
    cs = ax1.contour(mu_b, mu_a, grid, levels=[0.9, 0.95, 0.99, 0.995],
                     colors="white", linewidths=0.7)
    ax1.clabel(cs, fontsize=7)
    ax1.set_xlabel(r"$\mu_{B,max}$ (units of J)")
    ax1.set_ylabel(r"$\mu_{A,max}$ (units of J)")
    fig.colorbar(mesh, ax=ax1)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_disorder(result: SweepResult, path) -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    rows = np.array(result.rows)
    markers = ("s", "o", "^", "v", "d")
    for k, delta in enumerate(result.metadata["delta_list"]):
        sel = rows[rows[:, 0] == delta]
        ax.plot(sel[:, 1], sel[:, 2], markers[k % len(markers)], ls="none",
                label=rf"$\delta={delta:g}$")
    ax.set_xlabel("sample index")
    ax.set_ylabel(r"transfer fidelity $|c_N(\tau)|^2$")
    ax.legend(loc="lower left")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_fidelity_sweep(result: SweepResult, path, xlabel: str = "value") -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    xs = result.column(result.columns[0])
    ys = result.column("fidelity")
    if "sample_index" in result.columns:
        ax.plot(xs, ys, "o", ls="none")
    else:
        ax.plot(xs, ys, "o-")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(r"transfer fidelity $|c_N(\tau)|^2$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


FIGURE_RENDERERS = {
    "2b": render_gap_profile,
    "3a": render_gap_vs_n,
    "3b": render_gap_vs_alpha,
    "4c": render_fidelity_vs_alpha,
    "5": render_min_time,
    "6": render_fidelity_grid,
    "7": render_disorder,
}
