"""Chain geometry, gate pulses and Hamiltonian assembly.

The physical system is an open N-site tight-binding chain with hopping
amplitude -J_j on bond j and time-dependent on-site energies on the two
end sites only, controlled by Gaussian gate pulses.  All energies are in
units of the nominal coupling J, times in units of 1/J (hbar = 1).
"""

from dataclasses import dataclass, field
import math

import numpy as np


@dataclass(frozen=True)
class ChainSpec:
    """Chain length and bond couplings (uniform unless stated otherwise)."""

    n_sites: int
    coupling_nominal: float = 1.0
    bond_couplings: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"n_sites must be >= 2, got {self.n_sites}")
        if not (self.coupling_nominal > 0 and math.isfinite(self.coupling_nominal)):
            raise ValueError(f"coupling_nominal must be positive, got {self.coupling_nominal}")
        if self.bond_couplings is None:
            object.__setattr__(
                self, "bond_couplings",
                (float(self.coupling_nominal),) * (self.n_sites - 1),
            )
        else:
            bonds = tuple(float(j) for j in self.bond_couplings)
            if len(bonds) != self.n_sites - 1:
                raise ValueError(
                    f"expected {self.n_sites - 1} bond couplings, got {len(bonds)}"
                )
            if not all(j > 0 and math.isfinite(j) for j in bonds):
                raise ValueError("all bond couplings must be strictly positive")
            object.__setattr__(self, "bond_couplings", bonds)

    @property
    def is_uniform(self) -> bool:
        return all(j == self.coupling_nominal for j in self.bond_couplings)

    def with_bonds(self, bond_couplings) -> "ChainSpec":
        """Copy of this spec with the given per-bond couplings."""
        return ChainSpec(self.n_sites, self.coupling_nominal, tuple(bond_couplings))


@dataclass(frozen=True)
class PulseSchedule:
    """Gaussian gate pulses on the two end sites.

    The stored peaks are positive magnitudes; the applied on-site energies
    are negative (potential wells).  pulse_a peaks at t = 0, pulse_b at
    t = tau.  alpha is an absolute inverse time; use from_alpha_tau to
    construct from the dimensionless product alpha*tau.
    """

    mu_a_max: float
    mu_b_max: float
    alpha: float
    tau: float

    def __post_init__(self):
        for name in ("mu_a_max", "mu_b_max", "alpha", "tau"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.mu_a_max < 0 or self.mu_b_max < 0:
            raise ValueError("pulse peaks must be >= 0")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.tau <= 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")

    @classmethod
    def from_alpha_tau(cls, mu_a_max: float, mu_b_max: float,
                       alpha_tau: float, tau: float) -> "PulseSchedule":
        """Build a schedule from the dimensionless pulse width alpha*tau."""
        if tau <= 0:
            raise ValueError(f"tau must be > 0, got {tau}")
        return cls(mu_a_max, mu_b_max, alpha_tau / tau, tau)

    @property
    def alpha_tau(self) -> float:
        return self.alpha * self.tau

    @property
    def is_symmetric(self) -> bool:
        return self.mu_a_max == self.mu_b_max

    def reversed(self) -> "PulseSchedule":
        """Time-reversed schedule: the pulse roles of the two ends swap."""
        return PulseSchedule(self.mu_b_max, self.mu_a_max, self.alpha, self.tau)


def symmetric_schedule(mu0: float, alpha_tau: float, tau: float) -> PulseSchedule:
    """Schedule with equal peaks mu0 on both ends, width alpha = alpha_tau/tau."""
    return PulseSchedule.from_alpha_tau(mu0, mu0, alpha_tau, tau)


def pulse_a(schedule: PulseSchedule, t):
    """On-site energy of site 1: -mu_a_max * exp(-alpha^2 t^2 / 2).

    Accepts scalar or ndarray t.
    """
    return -schedule.mu_a_max * np.exp(-0.5 * (schedule.alpha * np.asarray(t, dtype=float)) ** 2)


def pulse_b(schedule: PulseSchedule, t):
    """On-site energy of site N: same Gaussian centered at t = tau."""
    dt = np.asarray(t, dtype=float) - schedule.tau
    return -schedule.mu_b_max * np.exp(-0.5 * (schedule.alpha * dt) ** 2)


def hamiltonian_tridiag(spec: ChainSpec, schedule: PulseSchedule, t: float):
    """Diagonal and off-diagonal of H(t) in tridiagonal storage.

    Returns (diag, offdiag) with diag[0] = pulse_a(t), diag[-1] = pulse_b(t),
    zeros elsewhere, and offdiag[j] = -J_j.
    """
    diag = np.zeros(spec.n_sites)
    diag[0] = pulse_a(schedule, t)
    diag[-1] = pulse_b(schedule, t)
    offdiag = -np.asarray(spec.bond_couplings, dtype=float)
    return diag, offdiag


def hamiltonian_at(spec: ChainSpec, schedule: PulseSchedule, t: float) -> np.ndarray:
    """Dense N x N matrix of H(t); exactly symmetric by construction."""
    diag, offdiag = hamiltonian_tridiag(spec, schedule, t)
    h = np.diag(diag)
    n = spec.n_sites
    idx = np.arange(n - 1)
    h[idx, idx + 1] = offdiag
    h[idx + 1, idx] = offdiag
    return h


@dataclass(frozen=True)
class DisorderSpec:
    """Quenched bond disorder: J_j = J * (1 - delta * eps_j), eps_j ~ U(0,1).

    Sampling is deterministic given (seed, sample_index, n_sites); couplings
    are drawn once per run and held constant during the evolution.
    """

    delta: float
    seed: int
    n_samples: int = 1

    def __post_init__(self):
        if not (0.0 <= self.delta < 1.0):
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")


def disorder_unit_draws(disorder: DisorderSpec, sample_index: int, n_draws: int) -> np.ndarray:
    """n_draws iid uniforms on the open interval (0,1), keyed by (seed, sample_index)."""
    ss = np.random.SeedSequence([int(disorder.seed), int(sample_index)])
    rng = np.random.default_rng(ss)
    eps = rng.random(n_draws)
    # random() samples [0,1); redraw the measure-zero exact zeros to keep (0,1) open
    while True:
        zero = eps == 0.0
        if not zero.any():
            return eps
        eps[zero] = rng.random(int(zero.sum()))


def sample_disordered_couplings(spec: ChainSpec, disorder: DisorderSpec,
                                sample_index: int) -> tuple[float, ...]:
    """One quenched realization of the N-1 bond couplings.

    Each J_j = J * (1 - delta * eps_j) lies in ((1-delta) J, J]; delta >= 1
    is rejected at DisorderSpec construction so couplings stay positive.
    """
    if not (0 <= sample_index < disorder.n_samples):
        raise ValueError(
            f"sample_index {sample_index} outside [0, {disorder.n_samples})"
        )
    eps = disorder_unit_draws(disorder, sample_index, spec.n_sites - 1)
    bonds = spec.coupling_nominal * (1.0 - disorder.delta * eps)
    return tuple(float(b) for b in bonds)
