"""Adiabatic quantum state transfer through a gate-driven tight-binding chain."""

from .model import (
    ChainSpec,
    DisorderSpec,
    PulseSchedule,
    hamiltonian_at,
    hamiltonian_tridiag,
    pulse_a,
    pulse_b,
    sample_disordered_couplings,
    symmetric_schedule,
)
from .propagator import (
    Trajectory,
    basis_state,
    convergence_check,
    default_step_count,
    evolve,
    fidelity_of,
    transfer_fidelity,
)
from .spectral import (
    SpectrumSample,
    adiabaticity_ratio,
    bound_state_ground,
    eigensystem,
    instantaneous_gap,
    min_gap,
    spectrum_at,
    uniform_chain_gap,
)

__version__ = "0.1.0"

__all__ = [
    "ChainSpec",
    "DisorderSpec",
    "PulseSchedule",
    "SpectrumSample",
    "Trajectory",
    "adiabaticity_ratio",
    "basis_state",
    "bound_state_ground",
    "convergence_check",
    "default_step_count",
    "eigensystem",
    "evolve",
    "fidelity_of",
    "hamiltonian_at",
    "hamiltonian_tridiag",
    "instantaneous_gap",
    "min_gap",
    "pulse_a",
    "pulse_b",
    "sample_disordered_couplings",
    "spectrum_at",
    "symmetric_schedule",
    "transfer_fidelity",
    "uniform_chain_gap",
]
