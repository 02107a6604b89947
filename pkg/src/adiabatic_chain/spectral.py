"""Instantaneous eigenanalysis of the chain Hamiltonian.

Full sorted spectra, the ground/first-excited gap and its minimum over the
pulse, the analytic end-well bound state, and the finite-difference
adiabaticity ratio that controls how slowly the pulses must change.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .model import ChainSpec, PulseSchedule, hamiltonian_tridiag

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SpectrumSample:
    """Sorted eigendecomposition of H(t) at one instant.

    eigenvalues ascending; eigenvectors[:, k] belongs to eigenvalues[k],
    orthonormal and gauge-fixed (largest-magnitude component positive).
    """

    t: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    gap: float

    def __post_init__(self):
        self.eigenvalues.flags.writeable = False
        self.eigenvectors.flags.writeable = False

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def ground_state(self) -> np.ndarray:
        return self.eigenvectors[:, 0]

    @property
    def first_excited(self) -> np.ndarray:
        return self.eigenvectors[:, 1]


def _fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Flip eigenvector signs so the largest-magnitude component is positive."""
    lead = np.take_along_axis(
        vectors, np.abs(vectors).argmax(axis=0)[None, :], axis=0
    )[0]
    return vectors * np.where(lead < 0, -1.0, 1.0)


def eigensystem(diag: np.ndarray, offdiag: np.ndarray, t: float = 0.0) -> SpectrumSample:
    """Sorted eigendecomposition of a real symmetric tridiagonal matrix."""
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    if diag.size < 2 or offdiag.size != diag.size - 1:
        raise ValueError("need N >= 2 with N-1 off-diagonal entries")
    if not (np.isfinite(diag).all() and np.isfinite(offdiag).all()):
        raise ValueError("matrix entries must be finite")
    vals, vecs = eigh_tridiagonal(diag, offdiag)
    vecs = _fix_gauge(vecs)
    return SpectrumSample(
        t=float(t),
        eigenvalues=vals,
        eigenvectors=vecs,
        gap=float(vals[1] - vals[0]),
    )


def spectrum_at(spec: ChainSpec, schedule: PulseSchedule, t: float) -> SpectrumSample:
    """Eigendecomposition of H(t) for the given chain and pulses."""
    diag, offdiag = hamiltonian_tridiag(spec, schedule, t)
    return eigensystem(diag, offdiag, t=t)


def instantaneous_gap(spec: ChainSpec, schedule: PulseSchedule, t: float) -> float:
    """Energy gap between the two lowest instantaneous eigenvalues at time t."""
    return spectrum_at(spec, schedule, t).gap


def min_gap(spec: ChainSpec, schedule: PulseSchedule, n_grid: int = 2001) -> tuple[float, float]:
    """Minimum of the instantaneous gap over [0, tau].

    Scans a uniform n_grid time grid, then refines between the bracketing
    grid neighbors by golden-section search down to a bracket width of
    1e-6 * tau.  Returns (t_star, delta_min).
    """
    if n_grid < 3:
        raise ValueError(f"n_grid must be >= 3, got {n_grid}")
    tau = schedule.tau
    ts = np.linspace(0.0, tau, n_grid)
    gaps = np.array([instantaneous_gap(spec, schedule, t) for t in ts])
    k = int(gaps.argmin())
    lo = ts[max(k - 1, 0)]
    hi = ts[min(k + 1, n_grid - 1)]

    # golden-section: gap(t) is smooth; unimodal on the bracketing interval
    tol = 1e-6 * tau
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc = instantaneous_gap(spec, schedule, c)
    fd = instantaneous_gap(spec, schedule, d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = instantaneous_gap(spec, schedule, c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = instantaneous_gap(spec, schedule, d)
    t_star = 0.5 * (a + b)
    delta = instantaneous_gap(spec, schedule, t_star)
    # keep the best point seen in case the refined midpoint is not it
    best = min((delta, t_star), (fc, c), (fd, d), (gaps[k], ts[k]))
    return best[1], best[0]


def bound_state_ground(spec: ChainSpec, mu0: float, mirrored: bool = False) -> np.ndarray:
    """Analytic ground state of the chain with one deep end well.

    Amplitudes sqrt(1 - zeta^2) * zeta^(j-1) with zeta = J/mu0 (reversed when
    mirrored), renormalized over the N sites; the semi-infinite form carries
    a finite-size correction of order zeta^(2N).
    """
    if not mu0 > spec.coupling_nominal:
        raise ValueError(
            f"bound-state regime requires mu0 > J, got mu0={mu0}, J={spec.coupling_nominal}"
        )
    zeta = spec.coupling_nominal / mu0
    j = np.arange(spec.n_sites)
    amps = np.sqrt(1.0 - zeta**2) * zeta**j
    if mirrored:
        amps = amps[::-1]
    return amps / np.linalg.norm(amps)


def adiabaticity_ratio(spec: ChainSpec, schedule: PulseSchedule, t: float,
                       fd_step: float | None = None) -> float:
    """|<d/dt psi_g | psi_1>| / (e_1 - e_g) at time t.

    The ground-state derivative is a central finite difference of the
    gauge-fixed eigenvector, with signs made continuous against the center
    sample.  Adiabatic evolution requires this ratio to stay well below 1.
    """
    tau = schedule.tau
    if not 0.0 < t < tau:
        raise ValueError(f"t must lie strictly inside (0, tau), got {t}")
    if fd_step is None:
        fd_step = tau / 1e5
    if not 0.0 < fd_step < tau:
        raise ValueError(f"fd_step must lie in (0, tau), got {fd_step}")

    center = spectrum_at(spec, schedule, t)
    if center.gap < 1e-12:
        raise ValueError(f"gap below 1e-12 at t={t}; ratio undefined")

    g0 = center.ground_state
    g_minus = spectrum_at(spec, schedule, t - fd_step).ground_state
    g_plus = spectrum_at(spec, schedule, t + fd_step).ground_state
    if np.dot(g_minus, g0) < 0:
        g_minus = -g_minus
    if np.dot(g_plus, g0) < 0:
        g_plus = -g_plus

    dg = (g_plus - g_minus) / (2.0 * fd_step)
    return float(abs(np.dot(dg, center.first_excited)) / center.gap)


def uniform_chain_gap(n_sites: int, coupling: float = 1.0) -> float:
    """Gap of the bare open chain: 2J(cos(pi/(N+1)) - cos(2pi/(N+1)))."""
    return 2.0 * coupling * (
        np.cos(np.pi / (n_sites + 1)) - np.cos(2.0 * np.pi / (n_sites + 1))
    )
