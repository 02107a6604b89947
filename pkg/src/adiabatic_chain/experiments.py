"""Figure-level experiment harnesses: gap studies, fidelity sweeps, ensembles.

Every harness returns a SweepResult whose metadata records each parameter
needed to reproduce the rows bit-identically.  Sweep cells are independent;
the fidelity grid and disorder ensembles evaluate cells through a process
pool (capped by the ADIABATIC_CHAIN_THREADS environment variable, 0 or
unset meaning auto) and gather results in grid order, so output does not
depend on scheduling.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .model import ChainSpec, DisorderSpec, PulseSchedule, sample_disordered_couplings
from .propagator import basis_state, evolve, transfer_fidelity, Trajectory
from .spectral import instantaneous_gap, min_gap, spectrum_at, uniform_chain_gap

THREADS_ENV = "ADIABATIC_CHAIN_THREADS"

# Fig. 3(a) grids
GAP_SCALING_MU0 = (16.0, 20.0, 24.0)
GAP_SCALING_SITES = tuple(range(5, 11))
# Fig. 3(b) / 4(c) pulse-width grids (values of alpha*tau)
GAP_ALPHA_TAU_GRID = tuple(2.0 + 0.5 * k for k in range(21))
FIDELITY_ALPHA_TAU_GRID = tuple(3.0 + 0.25 * k for k in range(17))
# Fig. 6 peak-voltage grid
PEAK_GRID = tuple(float(v) for v in range(10, 26))
# Fig. 7 disorder ensemble
DISORDER_DELTAS = (0.1, 0.2, 0.3)
DISORDER_SAMPLES = 20
DEFAULT_SEED = 1


@dataclass(frozen=True)
class SweepResult:
    """Rows of a parameter sweep in grid order plus reproduction metadata."""

    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    metadata: dict
    created_at: str = ""

    def column(self, name: str) -> np.ndarray:
        return np.array([row[self.columns.index(name)] for row in self.rows])


@dataclass(frozen=True)
class QuadraticFit:
    """y = a x^2 + b x + c plus goodness-of-fit numbers."""

    a: float
    b: float
    c: float
    residual_rms: float
    r_squared: float

    def __call__(self, x):
        return self.a * np.asarray(x) ** 2 + self.b * np.asarray(x) + self.c


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def thread_budget() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw or raw == "0":
        return os.cpu_count() or 1
    n = int(raw)
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 0, got {raw}")
    return n


def _fidelity_cell(args) -> float:
    spec, schedule, n_steps = args
    return transfer_fidelity(spec, schedule, n_steps=n_steps)


def _parallel_fidelities(cells) -> list[float]:
    cells = list(cells)
    workers = min(thread_budget(), len(cells))
    if workers <= 1 or len(cells) < 8:
        return [_fidelity_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(cells) // (4 * workers))
        return list(pool.map(_fidelity_cell, cells, chunksize=chunk))


def sweep_steps(tau: float) -> int:
    """Step count used for sweep fidelities; dt = 0.025 matches the
    convergence reference point (2e4 steps at tau = 500)."""
    return max(20000, math.ceil(40.0 * tau))


def _search_steps(tau: float) -> int:
    # dt = 0.1 keeps the fidelity error ~1e-7, far below search tolerances
    return max(5000, math.ceil(10.0 * tau))


def fit_quadratic(points) -> QuadraticFit:
    """Ordinary least squares of y on {x^2, x, 1}."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 4:
        raise ValueError(f"need at least 4 points, got {len(pts)}")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if len(set(xs.tolist())) < 3:
        raise ValueError("rank-deficient design: need at least 3 distinct x")
    design = np.vstack([xs**2, xs, np.ones_like(xs)]).T
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = ys - design @ coef
    ss_res = float(np.dot(resid, resid))
    ss_tot = float(np.dot(ys - ys.mean(), ys - ys.mean()))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res < 1e-24 else 0.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return QuadraticFit(
        a=float(coef[0]), b=float(coef[1]), c=float(coef[2]),
        residual_rms=math.sqrt(ss_res / len(pts)), r_squared=r2,
    )


def _linear_fit(xs, ys) -> tuple[float, float, float]:
    """Least-squares line y = s x + b; returns (s, b, r_squared)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    design = np.vstack([xs, np.ones_like(xs)]).T
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = ys - design @ coef
    ss_res = float(np.dot(resid, resid))
    ss_tot = float(np.dot(ys - ys.mean(), ys - ys.mean()))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(coef[0]), float(coef[1]), r2


def gap_profile(spec: ChainSpec, schedule: PulseSchedule, n_grid: int = 1001) -> SweepResult:
    """Two lowest instantaneous energies and their gap across the pulse."""
    rows = []
    for t in np.linspace(0.0, schedule.tau, n_grid):
        sample = spectrum_at(spec, schedule, float(t))
        rows.append((float(t), float(sample.eigenvalues[0]),
                     float(sample.eigenvalues[1]), sample.gap))
    t_star, delta_min = min_gap(spec, schedule)
    meta = {
        "n_sites": spec.n_sites, "coupling": spec.coupling_nominal,
        "mu_a_max": schedule.mu_a_max, "mu_b_max": schedule.mu_b_max,
        "alpha_tau": schedule.alpha_tau, "tau": schedule.tau,
        "n_grid": n_grid, "t_star": t_star, "delta_min": delta_min,
    }
    return SweepResult(("t", "energy_ground", "energy_first", "gap"),
                       tuple(rows), meta, _now())


def gap_vs_n(mu0_list=GAP_SCALING_MU0, n_list=GAP_SCALING_SITES,
             alpha_tau: float = 5.0, tau: float = 500.0,
             coupling: float = 1.0) -> SweepResult:
    """Minimum gap against chain length for several peak voltages.

    Metadata carries, per mu0, the least-squares line of gap vs 1/N^2
    (slope/intercept/r_squared, for the linearity check) and the coefficient
    of the one-parameter proportionality law gap = k/N^2 (scaling_coeff,
    the quantity that scales as 1/mu0).
    """
    for n in n_list:
        if n < 3:
            raise ValueError(f"n_sites must be >= 3, got {n}")
    rows = []
    meta = {"alpha_tau": alpha_tau, "tau": tau, "coupling": coupling,
            "mu0_list": tuple(mu0_list), "n_list": tuple(int(n) for n in n_list)}
    for mu0 in mu0_list:
        if not mu0 > coupling:
            raise ValueError(f"need mu0 > J for the bound-state regime, got {mu0}")
        schedule = PulseSchedule.from_alpha_tau(mu0, mu0, alpha_tau, tau)
        xs, ys = [], []
        for n in n_list:
            spec = ChainSpec(int(n), coupling)
            _, delta = min_gap(spec, schedule)
            inv_n2 = 1.0 / n**2
            rows.append((float(mu0), float(n), inv_n2, delta))
            xs.append(inv_n2)
            ys.append(delta)
        slope, intercept, r2 = _linear_fit(xs, ys)
        xs_a, ys_a = np.array(xs), np.array(ys)
        k = float(np.dot(xs_a, ys_a) / np.dot(xs_a, xs_a))
        tag = f"mu0_{mu0:g}"
        meta[f"slope_{tag}"] = slope
        meta[f"intercept_{tag}"] = intercept
        meta[f"r_squared_{tag}"] = r2
        meta[f"scaling_coeff_{tag}"] = k
    return SweepResult(("mu0", "n_sites", "inv_n_squared", "gap"),
                       tuple(rows), meta, _now())


def gap_vs_alpha(spec: ChainSpec, mu0: float = 20.0,
                 alpha_tau_list=GAP_ALPHA_TAU_GRID, tau: float = 500.0) -> SweepResult:
    """Avoided-crossing gap at t = tau/2 against the pulse width alpha*tau.

    The gap grows with alpha and saturates at the bare-chain value
    2J[cos(pi/(N+1)) - cos(2pi/(N+1))] once the two pulses stop overlapping.
    """
    rows = []
    for at in alpha_tau_list:
        schedule = PulseSchedule.from_alpha_tau(mu0, mu0, float(at), tau)
        rows.append((float(at), instantaneous_gap(spec, schedule, 0.5 * tau)))
    meta = {
        "n_sites": spec.n_sites, "coupling": spec.coupling_nominal,
        "mu0": mu0, "tau": tau, "alpha_tau_list": tuple(float(a) for a in alpha_tau_list),
        "saturation_gap": uniform_chain_gap(spec.n_sites, spec.coupling_nominal),
    }
    return SweepResult(("alpha_tau", "gap"), tuple(rows), meta, _now())


def population_trace(spec: ChainSpec, schedule: PulseSchedule,
                     n_steps: int | None = None,
                     record_every: int | None = None) -> Trajectory:
    """Site populations over time starting from the occupied first site."""
    if n_steps is None:
        n_steps = sweep_steps(schedule.tau)
    return evolve(spec, schedule, basis_state(spec.n_sites, 0),
                  n_steps=n_steps, record_every=record_every)


def fidelity_vs_alpha(spec: ChainSpec, mu0: float = 20.0, tau: float = 500.0,
                      alpha_tau_list=FIDELITY_ALPHA_TAU_GRID,
                      n_steps: int | None = None) -> SweepResult:
    """Transfer fidelity against the pulse width alpha*tau."""
    if n_steps is None:
        n_steps = sweep_steps(tau)
    cells = [(spec, PulseSchedule.from_alpha_tau(mu0, mu0, float(at), tau), n_steps)
             for at in alpha_tau_list]
    fids = _parallel_fidelities(cells)
    rows = tuple((float(at), f) for at, f in zip(alpha_tau_list, fids))
    meta = {
        "n_sites": spec.n_sites, "coupling": spec.coupling_nominal, "mu0": mu0,
        "tau": tau, "n_steps": n_steps,
        "alpha_tau_list": tuple(float(a) for a in alpha_tau_list),
    }
    return SweepResult(("alpha_tau", "fidelity"), rows, meta, _now())


def _first_passing_tau(n_sites: int, mu0: float, alpha_tau: float, target: float,
                       coupling: float, tau_start: float, tau_cap: float,
                       scan_growth: float, rel_tol: float) -> tuple[float, float]:
    """Smallest tau on a geometric scan grid reaching the target fidelity,
    refined by bisection inside the bracketing cell.

    F(tau) is locally non-monotone (interference ripples around the
    adiabatic plateau), so the result is an upper bound on the true minimum
    within the scan resolution.
    """
    def fid(tau):
        schedule = PulseSchedule.from_alpha_tau(mu0, mu0, alpha_tau, tau)
        return transfer_fidelity(ChainSpec(n_sites, coupling), schedule,
                                 n_steps=_search_steps(tau))

    prev = 0.0
    tau = tau_start
    while True:
        if fid(tau) >= target:
            break
        prev = tau
        tau *= scan_growth
        if tau > tau_cap:
            raise RuntimeError(
                f"no tau <= {tau_cap:g} reaches fidelity {target} at N={n_sites}, mu0={mu0}"
            )
    lo, hi = prev, tau
    while (hi - lo) / hi > rel_tol:
        mid = 0.5 * (lo + hi)
        if fid(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi, fid(hi)


def min_time_for_fidelity(n_list=GAP_SCALING_SITES, mu0: float = 20.0,
                          alpha_tau: float = 5.0, target: float = 0.995,
                          coupling: float = 1.0, tau_start: float = 50.0,
                          tau_cap: float = 1e6, scan_growth: float = 1.025,
                          rel_tol: float = 0.01) -> tuple[SweepResult, QuadraticFit]:
    """Smallest evolution time reaching the target fidelity, per chain length,
    with a quadratic fit of tau_min(N)."""
    if not 0.0 < target < 1.0:
        raise ValueError(f"target must lie in (0, 1), got {target}")
    rows = []
    for n in n_list:
        tau_min, f_at = _first_passing_tau(int(n), mu0, alpha_tau, target, coupling,
                                           tau_start, tau_cap, scan_growth, rel_tol)
        rows.append((float(n), tau_min, f_at))
    fit = fit_quadratic([(row[0], row[1]) for row in rows])
    meta = {
        "mu0": mu0, "alpha_tau": alpha_tau, "target": target, "coupling": coupling,
        "n_list": tuple(int(n) for n in n_list),
        "tau_start": tau_start, "tau_cap": tau_cap,
        "scan_growth": scan_growth, "rel_tol": rel_tol,
        "fit_a": fit.a, "fit_b": fit.b, "fit_c": fit.c,
        "fit_residual_rms": fit.residual_rms, "fit_r_squared": fit.r_squared,
    }
    return SweepResult(("n_sites", "tau_min", "fidelity_at_tau_min"),
                       tuple(rows), meta, _now()), fit


def fidelity_grid(mu_a_list=PEAK_GRID, mu_b_list=PEAK_GRID, n_sites: int = 5,
                  tau: float = 1000.0, alpha_tau: float = 5.0,
                  coupling: float = 1.0, n_steps: int | None = None) -> SweepResult:
    """Transfer fidelity over the (mu_a_max, mu_b_max) peak-voltage grid."""
    if n_steps is None:
        n_steps = sweep_steps(tau)
    spec = ChainSpec(n_sites, coupling)
    cells = [(spec, PulseSchedule.from_alpha_tau(float(ma), float(mb), alpha_tau, tau), n_steps)
             for ma in mu_a_list for mb in mu_b_list]
    fids = _parallel_fidelities(cells)
    rows = []
    k = 0
    for ma in mu_a_list:
        for mb in mu_b_list:
            rows.append((float(ma), float(mb), fids[k]))
            k += 1
    meta = {
        "n_sites": n_sites, "coupling": coupling, "tau": tau,
        "alpha_tau": alpha_tau, "n_steps": n_steps,
        "mu_a_list": tuple(float(m) for m in mu_a_list),
        "mu_b_list": tuple(float(m) for m in mu_b_list),
    }
    return SweepResult(("mu_a_max", "mu_b_max", "fidelity"), tuple(rows), meta, _now())


def disorder_ensemble(spec: ChainSpec, schedule: PulseSchedule,
                      delta_list=DISORDER_DELTAS, n_samples: int = DISORDER_SAMPLES,
                      seed: int = DEFAULT_SEED, n_steps: int | None = None) -> SweepResult:
    """Per-sample transfer fidelities under quenched bond disorder.

    Couplings for sample i are keyed by (seed, i) only, so the same index
    reuses the same unit draws across delta values (common random numbers).
    Per-delta min/mean/max summaries land in the metadata.
    """
    if n_steps is None:
        n_steps = sweep_steps(schedule.tau)
    cells = []
    for delta in delta_list:
        disorder = DisorderSpec(delta=float(delta), seed=seed, n_samples=n_samples)
        for i in range(n_samples):
            bonds = sample_disordered_couplings(spec, disorder, i)
            cells.append((spec.with_bonds(bonds), schedule, n_steps))
    fids = _parallel_fidelities(cells)
    rows = []
    meta = {
        "n_sites": spec.n_sites, "coupling": spec.coupling_nominal,
        "mu_a_max": schedule.mu_a_max, "mu_b_max": schedule.mu_b_max,
        "alpha_tau": schedule.alpha_tau, "tau": schedule.tau,
        "delta_list": tuple(float(d) for d in delta_list),
        "n_samples": n_samples, "seed": seed, "n_steps": n_steps,
    }
    k = 0
    for delta in delta_list:
        block = fids[k:k + n_samples]
        for i, f in enumerate(block):
            rows.append((float(delta), float(i), f))
        tag = f"delta_{delta:g}"
        meta[f"min_{tag}"] = min(block)
        meta[f"mean_{tag}"] = sum(block) / len(block)
        meta[f"max_{tag}"] = max(block)
        k += n_samples
    return SweepResult(("delta", "sample_index", "fidelity"), tuple(rows), meta, _now())
