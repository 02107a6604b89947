import math

import numpy as np
import pytest

from adiabatic_chain.model import (
    ChainSpec,
    DisorderSpec,
    PulseSchedule,
    disorder_unit_draws,
    hamiltonian_at,
    hamiltonian_tridiag,
    pulse_a,
    pulse_b,
    sample_disordered_couplings,
    symmetric_schedule,
)

SCHED = symmetric_schedule(20.0, 5.0, 500.0)


class TestPulses:
    def test_pulse_a_peak_value(self):
        assert pulse_a(SCHED, 0.0) == -20.0

    def test_pulse_a_tail_value(self):
        # direct scalar evaluation: -mu0 * exp(-(alpha*tau)^2 / 2) at t = tau
        expected = -20.0 * math.exp(-(5.0**2) / 2.0)
        got = pulse_a(SCHED, 500.0)
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(-7.453e-5, abs=1e-8)

    def test_pulse_a_zero_peak(self):
        sched = PulseSchedule(0.0, 20.0, 0.01, 500.0)
        for t in (0.0, 123.4, 500.0):
            assert pulse_a(sched, t) == 0.0

    def test_pulse_b_peak_and_tail(self):
        assert pulse_b(SCHED, 500.0) == -20.0
        assert pulse_b(SCHED, 0.0) == pytest.approx(-20.0 * math.exp(-12.5), rel=1e-12)

    def test_symmetric_schedule_reflection(self):
        for t in (0.0, 1.0 / 3.0, 77.7, 250.0, 431.9, 500.0):
            a = pulse_a(SCHED, SCHED.tau - t)
            b = pulse_b(SCHED, t)
            assert b == pytest.approx(a, rel=1e-12, abs=1e-300)

    def test_pulse_bounds(self):
        ts = np.linspace(-100.0, 600.0, 401)
        for sched in (SCHED, PulseSchedule(3.0, 17.0, 0.02, 400.0)):
            va = pulse_a(sched, ts)
            vb = pulse_b(sched, ts)
            assert np.all(va <= 0.0) and np.all(va >= -sched.mu_a_max)
            assert np.all(vb <= 0.0) and np.all(vb >= -sched.mu_b_max)

    def test_alpha_tau_helper(self):
        sched = PulseSchedule.from_alpha_tau(20.0, 10.0, 4.0, 800.0)
        assert sched.alpha == pytest.approx(0.005)
        assert sched.alpha_tau == pytest.approx(4.0)
        assert not sched.is_symmetric
        rev = sched.reversed()
        assert (rev.mu_a_max, rev.mu_b_max) == (10.0, 20.0)

    def test_schedule_validation(self):
        with pytest.raises(ValueError):
            PulseSchedule(-1.0, 20.0, 0.01, 500.0)
        with pytest.raises(ValueError):
            PulseSchedule(20.0, 20.0, 0.0, 500.0)
        with pytest.raises(ValueError):
            PulseSchedule(20.0, 20.0, 0.01, -5.0)
        with pytest.raises(ValueError):
            PulseSchedule(float("nan"), 20.0, 0.01, 500.0)
        with pytest.raises(ValueError):
            PulseSchedule.from_alpha_tau(20.0, 20.0, 5.0, 0.0)


class TestHamiltonian:
    def test_free_chain_limit(self):
        # both pulses negligible midway through a wide-separation schedule
        sched = symmetric_schedule(20.0, 40.0, 500.0)
        h = hamiltonian_at(ChainSpec(3), sched, 250.0)
        assert np.allclose(np.diag(h), 0.0, atol=1e-12)
        assert h[0, 1] == h[1, 0] == -1.0
        assert h[1, 2] == h[2, 1] == -1.0

    def test_midpoint_mirror_symmetry_exact(self):
        h = hamiltonian_at(ChainSpec(5), SCHED, 250.0)
        assert h[0, 0] == h[4, 4]

    def test_start_of_pulse_values(self):
        h = hamiltonian_at(ChainSpec(5), SCHED, 0.0)
        assert h[0, 0] == -20.0
        assert h[4, 4] == pytest.approx(-20.0 * math.exp(-12.5), rel=1e-12)
        off = np.diag(h, 1)
        assert np.all(off == -1.0)

    def test_tridiagonal_structure(self):
        spec = ChainSpec(7, 1.3, (0.9, 1.1, 1.0, 1.3, 0.8, 1.2))
        for t in np.linspace(0.0, 500.0, 17):
            h = hamiltonian_at(spec, SCHED, float(t))
            assert np.array_equal(h, h.T)
            beyond = h - np.diag(np.diag(h)) - np.diag(np.diag(h, 1), 1) - np.diag(np.diag(h, -1), -1)
            assert np.all(beyond == 0.0)
            assert np.allclose(np.diag(h, 1), [-j for j in spec.bond_couplings])

    def test_persymmetric_at_midpoint(self):
        h = hamiltonian_at(ChainSpec(6), SCHED, SCHED.tau / 2)
        assert np.allclose(h, h[::-1, ::-1].T, atol=0.0)

    def test_tridiag_matches_dense(self):
        spec = ChainSpec(4)
        diag, off = hamiltonian_tridiag(spec, SCHED, 100.0)
        h = hamiltonian_at(spec, SCHED, 100.0)
        assert np.array_equal(np.diag(h), diag)
        assert np.array_equal(np.diag(h, 1), off)

    def test_chain_spec_validation(self):
        with pytest.raises(ValueError):
            ChainSpec(1)
        with pytest.raises(ValueError):
            ChainSpec(5, -1.0)
        with pytest.raises(ValueError):
            ChainSpec(5, 1.0, (1.0, 1.0, 1.0))  # wrong length
        with pytest.raises(ValueError):
            ChainSpec(5, 1.0, (1.0, 0.0, 1.0, 1.0))
        spec = ChainSpec(5)
        assert spec.bond_couplings == (1.0, 1.0, 1.0, 1.0)
        assert spec.is_uniform


class TestDisorder:
    def test_zero_disorder_is_exact(self):
        spec = ChainSpec(5, 1.0)
        disorder = DisorderSpec(delta=0.0, seed=7, n_samples=3)
        assert sample_disordered_couplings(spec, disorder, 1) == (1.0, 1.0, 1.0, 1.0)

    def test_interval_bounds(self):
        # Fig 7 draws couplings from ((1-delta) J, J)
        spec = ChainSpec(9, 2.0)
        disorder = DisorderSpec(delta=0.3, seed=123, n_samples=50)
        for i in range(50):
            bonds = np.array(sample_disordered_couplings(spec, disorder, i))
            assert np.all(bonds > 0.7 * 2.0)
            assert np.all(bonds < 2.0)

    def test_deterministic_per_seed_and_index(self):
        spec = ChainSpec(6)
        disorder = DisorderSpec(delta=0.2, seed=99, n_samples=4)
        a = sample_disordered_couplings(spec, disorder, 2)
        b = sample_disordered_couplings(spec, disorder, 2)
        assert a == b
        c = sample_disordered_couplings(spec, disorder, 3)
        assert a != c
        other_seed = DisorderSpec(delta=0.2, seed=100, n_samples=4)
        assert a != sample_disordered_couplings(spec, other_seed, 2)

    def test_uniform_source_mean(self):
        disorder = DisorderSpec(delta=0.5, seed=2024, n_samples=1)
        draws = disorder_unit_draws(disorder, 0, 20000)
        assert abs(draws.mean() - 0.5) < 0.01
        assert np.all(draws > 0.0) and np.all(draws < 1.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            DisorderSpec(delta=1.0, seed=1, n_samples=1)
        with pytest.raises(ValueError):
            DisorderSpec(delta=-0.1, seed=1, n_samples=1)
        with pytest.raises(ValueError):
            DisorderSpec(delta=0.1, seed=1, n_samples=0)
        with pytest.raises(ValueError):
            DisorderSpec(delta=0.1, seed=-1, n_samples=1)
        disorder = DisorderSpec(delta=0.1, seed=1, n_samples=2)
        with pytest.raises(ValueError):
            sample_disordered_couplings(ChainSpec(5), disorder, 2)
