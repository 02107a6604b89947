import numpy as np
import pytest

from adiabatic_chain.model import ChainSpec, PulseSchedule, hamiltonian_tridiag, symmetric_schedule
from adiabatic_chain.spectral import (
    adiabaticity_ratio,
    bound_state_ground,
    eigensystem,
    instantaneous_gap,
    min_gap,
    spectrum_at,
    uniform_chain_gap,
)

SPEC5 = ChainSpec(5)
SCHED = symmetric_schedule(20.0, 5.0, 500.0)


def char_poly_eigenvalues(diag, offdiag):
    """Brute-force oracle: roots of the characteristic polynomial built from
    the leading-minor determinant recurrence."""
    p_prev = np.array([1.0])
    p_curr = np.array([-1.0, diag[0]])
    for k in range(1, len(diag)):
        term = np.polymul([-1.0, diag[k]], p_curr)
        p_next = np.polysub(term, offdiag[k - 1] ** 2 * p_prev)
        p_prev, p_curr = p_curr, p_next
    return np.sort(np.roots(p_curr).real)


class TestEigensystem:
    def test_two_site_by_hand(self):
        sample = eigensystem(np.zeros(2), np.array([-1.0]))
        assert sample.eigenvalues == pytest.approx([-1.0, 1.0], abs=1e-14)
        assert sample.gap == pytest.approx(2.0, abs=1e-14)

    def test_uniform_five_site_closed_form(self):
        # open-chain spectrum -2J cos(k pi / (N+1)), cross-checked against the
        # characteristic-polynomial root finder
        diag = np.zeros(5)
        off = -np.ones(4)
        sample = eigensystem(diag, off)
        closed_form = np.sort([-2.0 * np.cos(k * np.pi / 6.0) for k in range(1, 6)])
        assert sample.eigenvalues == pytest.approx(closed_form, abs=1e-12)
        assert sample.eigenvalues == pytest.approx(char_poly_eigenvalues(diag, off), abs=1e-9)

    def test_uniform_five_site_gap_constant(self):
        sample = eigensystem(np.zeros(5), -np.ones(4))
        assert sample.gap == pytest.approx(0.7320508, abs=1e-6)
        assert sample.gap == pytest.approx(uniform_chain_gap(5), abs=1e-12)

    def test_gauge_fixing_deterministic(self):
        diag = np.array([-3.0, 1.0, 0.5, 2.0])
        off = np.array([-1.0, -0.5, -1.5])
        sample = eigensystem(diag, off)
        for k in range(4):
            v = sample.eigenvectors[:, k]
            assert v[np.abs(v).argmax()] > 0

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            eigensystem(np.array([0.0, np.nan]), np.array([-1.0]))
        with pytest.raises(ValueError):
            eigensystem(np.array([0.0, np.inf, 0.0]), np.array([-1.0, -1.0]))

    def test_randomized_residuals_and_orthonormality(self):
        rng = np.random.default_rng(8)
        for _ in range(300):
            n = int(rng.integers(2, 13))
            diag = rng.uniform(-25.0, 25.0, n)
            off = rng.uniform(-2.0, 0.0, n - 1)
            off[off == 0.0] = -1e-12
            sample = eigensystem(diag, off)
            h = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
            scale = np.abs(sample.eigenvalues).max()
            for k in range(n):
                resid = np.linalg.norm(h @ sample.eigenvectors[:, k]
                                       - sample.eigenvalues[k] * sample.eigenvectors[:, k])
                assert resid <= 1e-10 * (scale + abs(sample.eigenvalues[k]))
            gram = sample.eigenvectors.T @ sample.eigenvectors
            assert np.abs(gram - np.eye(n)).max() <= 1e-10
            assert np.all(np.diff(sample.eigenvalues) >= 0)
            assert sample.eigenvalues.sum() == pytest.approx(
                diag.sum(), rel=1e-9, abs=1e-9)


class TestGap:
    def test_flat_gap_without_pulses(self):
        sched = PulseSchedule(0.0, 0.0, 0.01, 500.0)
        for t in (0.0, 123.0, 250.0, 499.0):
            assert instantaneous_gap(SPEC5, sched, t) == pytest.approx(
                uniform_chain_gap(5), abs=1e-12)

    def test_avoided_crossing_suppresses_gap(self):
        assert instantaneous_gap(SPEC5, SCHED, 250.0) < instantaneous_gap(SPEC5, SCHED, 0.0)

    def test_time_reflection_symmetry(self):
        for t in (10.0, 100.0, 222.2):
            g1 = instantaneous_gap(SPEC5, SCHED, t)
            g2 = instantaneous_gap(SPEC5, SCHED, SCHED.tau - t)
            assert abs(g1 - g2) <= 1e-10
            s1 = spectrum_at(SPEC5, SCHED, t)
            s2 = spectrum_at(SPEC5, SCHED, SCHED.tau - t)
            assert np.abs(s1.eigenvalues - s2.eigenvalues).max() <= 1e-10

    def test_min_gap_at_midpoint(self):
        t_star, delta_min = min_gap(SPEC5, SCHED)
        assert abs(t_star - 250.0) <= 500.0 / 1000.0
        assert 0.0 < delta_min < uniform_chain_gap(5)

    def test_min_gap_flat_schedule(self):
        sched = PulseSchedule(0.0, 0.0, 0.01, 500.0)
        _, delta_min = min_gap(SPEC5, sched)
        assert delta_min == pytest.approx(uniform_chain_gap(5), abs=1e-12)

    def test_min_gap_positive_everywhere(self):
        for n in (4, 6, 9):
            for mu0 in (12.0, 20.0):
                _, delta_min = min_gap(ChainSpec(n), symmetric_schedule(mu0, 5.0, 500.0))
                assert delta_min > 0.0

    def test_min_gap_two_site(self):
        sched = PulseSchedule(0.0, 0.0, 0.01, 500.0)
        _, delta_min = min_gap(ChainSpec(2), sched)
        assert delta_min == pytest.approx(2.0, abs=1e-12)

    def test_min_gap_decreases_with_n(self):
        gaps = [min_gap(ChainSpec(n), SCHED)[1] for n in range(5, 11)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_min_gap_grid_validation(self):
        with pytest.raises(ValueError):
            min_gap(SPEC5, SCHED, n_grid=2)


class TestBoundState:
    def test_first_site_weight(self):
        state = bound_state_ground(SPEC5, 20.0)
        assert abs(state[0]) ** 2 == pytest.approx(0.9975, abs=1e-4)

    def test_mirrored_is_reversed(self):
        fwd = bound_state_ground(SPEC5, 20.0)
        rev = bound_state_ground(SPEC5, 20.0, mirrored=True)
        assert np.array_equal(rev, fwd[::-1])

    def test_overlap_with_numerical_ground(self):
        # ground state of the chain with a single deep end well
        diag = np.zeros(5)
        diag[0] = -20.0
        sample = eigensystem(diag, -np.ones(4))
        overlap = abs(np.dot(bound_state_ground(SPEC5, 20.0), sample.ground_state)) ** 2
        assert overlap >= 0.9999

    def test_unit_norm(self):
        for n, mu0 in ((3, 5.0), (5, 20.0), (12, 2.0)):
            state = bound_state_ground(ChainSpec(n), mu0)
            assert np.linalg.norm(state) == pytest.approx(1.0, abs=1e-14)

    def test_rejects_shallow_well(self):
        with pytest.raises(ValueError):
            bound_state_ground(SPEC5, 1.0)
        with pytest.raises(ValueError):
            bound_state_ground(SPEC5, 0.5)


class TestAdiabaticityRatio:
    def test_static_hamiltonian_gives_zero(self):
        sched = PulseSchedule(20.0, 20.0, 1e-12, 500.0)
        assert adiabaticity_ratio(SPEC5, sched, 250.0) < 1e-9

    def test_slow_pulse_is_adiabatic_fast_is_not(self):
        ts = np.linspace(5.0, 495.0, 99)
        slow = max(adiabaticity_ratio(SPEC5, SCHED, float(t)) for t in ts)
        fast_sched = symmetric_schedule(20.0, 4.0, 500.0)
        fast = max(adiabaticity_ratio(SPEC5, fast_sched, float(t)) for t in ts)
        assert slow < 0.1
        assert fast > 10.0 * slow

    def test_gauge_independent_of_time_mirror(self):
        for t in (100.0, 200.0):
            r1 = adiabaticity_ratio(SPEC5, SCHED, t)
            r2 = adiabaticity_ratio(SPEC5, SCHED, SCHED.tau - t)
            assert r1 == pytest.approx(r2, rel=1e-6)

    def test_fd_step_converged(self):
        r1 = adiabaticity_ratio(SPEC5, SCHED, 200.0, fd_step=500.0 / 1e5)
        r2 = adiabaticity_ratio(SPEC5, SCHED, 200.0, fd_step=500.0 / 2e5)
        assert r1 == pytest.approx(r2, rel=1e-5)

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            adiabaticity_ratio(SPEC5, SCHED, 0.0)
        with pytest.raises(ValueError):
            adiabaticity_ratio(SPEC5, SCHED, 500.0)
        with pytest.raises(ValueError):
            adiabaticity_ratio(SPEC5, SCHED, 250.0, fd_step=600.0)
