from fractions import Fraction

import numpy as np
import pytest

from walklab.classical import (PersistentParams, classical_limit_evolve,
                               combined_density, combined_density_diffusion_check,
                               diffusion_evolve, persistent_step,
                               persistent_two_step, persistent_two_step_check)
from walklab.bessel import bessel_i_scaled_array
from walklab.ctqw import CtqwParams, ctqw_evolve
from walklab.dtqw import DtqwParams, dtqw_evolve, initial_symmetric_entangled
from walklab.lattice import (ChiralProbabilityField, ProbabilityField,
                             ScalarWaveField, density)

GAMMA = 0.125


def fraction_two_step_oracle(n_sites, alpha_frac, start_site=0):
    """Exact rational arithmetic double step from a point source."""
    beta = 1 - alpha_frac
    p_r = [Fraction(0)] * n_sites
    p_l = [Fraction(0)] * n_sites
    p_r[(start_site + n_sites // 2) % n_sites] = Fraction(1)
    for _ in range(2):
        new_r = [alpha_frac * p_r[(i - 1) % n_sites] + beta * p_l[(i - 1) % n_sites]
                 for i in range(n_sites)]
        new_l = [alpha_frac * p_l[(i + 1) % n_sites] + beta * p_r[(i + 1) % n_sites]
                 for i in range(n_sites)]
        p_r, p_l = new_r, new_l
    return p_r, p_l


class TestPersistentStep:
    def test_ballistic_right(self):
        p = ChiralProbabilityField.delta(16, chirality="R")
        out = persistent_step(p, 1.0)
        assert out.p_r[out.index_of(1)] == 1.0
        assert out.total() == 1.0

    def test_always_flip(self):
        p = ChiralProbabilityField.delta(16, chirality="R")
        out = persistent_step(p, 0.0)
        assert out.p_l[out.index_of(-1)] == 1.0

    def test_balanced_coin_measurement_analog(self):
        # alpha = cos^2(theta) at theta = pi/4
        p = ChiralProbabilityField.delta(16, chirality="R")
        out = persistent_step(p, np.cos(np.pi / 4) ** 2)
        assert out.p_r[out.index_of(1)] == pytest.approx(0.5, abs=1e-15)
        assert out.p_l[out.index_of(-1)] == pytest.approx(0.5, abs=1e-15)

    def test_conservation_and_positivity_long_run(self):
        # float64 rounding accumulates to ~5e-13 over 1e4 steps
        p = ChiralProbabilityField.delta(64)
        for _ in range(10_000):
            p = persistent_step(p, 0.3)
        assert abs(p.total() - 1.0) <= 1e-12
        assert min(p.p_r.min(), p.p_l.min()) >= 0.0

    def test_alpha_out_of_range(self):
        with pytest.raises(ValueError):
            persistent_step(ChiralProbabilityField.delta(8), 1.5)
        with pytest.raises(ValueError):
            PersistentParams(-0.1, 8)

    def test_beta_derived(self):
        assert PersistentParams(0.3, 8).beta == 0.7


class TestTwoStepIdentity:
    @pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 0.99, 1.0])
    def test_defect_is_roundoff(self, alpha):
        rng = np.random.default_rng(4)
        raw_r = rng.random(32)
        raw_l = rng.random(32)
        total = raw_r.sum() + raw_l.sum()
        p = ChiralProbabilityField(raw_r / total, raw_l / total)
        assert persistent_two_step_check(p, alpha) <= 1e-14

    def test_exact_rational_oracle(self):
        n = 8
        p = ChiralProbabilityField.delta(n, chirality="R")
        direct = persistent_two_step(p, 0.5)
        oracle_r, oracle_l = fraction_two_step_oracle(n, Fraction(1, 2))
        assert np.abs(direct.p_r - np.array([float(v) for v in oracle_r])).max() <= 1e-15
        assert np.abs(direct.p_l - np.array([float(v) for v in oracle_l])).max() <= 1e-15

    def test_pure_flip_case(self):
        p = ChiralProbabilityField.delta(16, chirality="R")
        assert persistent_two_step_check(p, 0.0) <= 1e-15


class TestClassicalLimit:
    def test_zero_time_identity(self):
        p = ChiralProbabilityField.delta(32)
        out = classical_limit_evolve(p, GAMMA, 0.0)
        assert np.abs(out.p_r - p.p_r).max() < 1e-14

    def test_uniform_is_stationary(self):
        n = 32
        p = ChiralProbabilityField(np.full(n, 0.5 / n), np.full(n, 0.5 / n))
        out = classical_limit_evolve(p, GAMMA, 15.0)
        assert np.abs(out.p_r - p.p_r).max() < 1e-14
        assert np.abs(out.p_l - p.p_l).max() < 1e-14

    def test_matches_small_step_persistent_walk(self):
        n = 64
        t = 20.0
        dt = 1e-3
        alpha = 2 * GAMMA * dt
        exact = classical_limit_evolve(ChiralProbabilityField.delta(n), GAMMA, t)
        walked = ChiralProbabilityField.delta(n)
        for _ in range(int(round(t / dt))):
            walked = persistent_step(walked, alpha)
        l1 = np.sum(np.abs(walked.p_r - exact.p_r)) + np.sum(np.abs(walked.p_l - exact.p_l))
        assert l1 <= 1e-3

    def test_conservation_and_positivity(self):
        out = classical_limit_evolve(ChiralProbabilityField.delta(128), GAMMA, 100.0)
        assert abs(out.total() - 1.0) <= 1e-12
        assert min(out.p_r.min(), out.p_l.min()) >= 0.0

    def test_odd_ring_rejected(self):
        odd = ChiralProbabilityField(np.full(9, 0.5 / 9), np.full(9, 0.5 / 9))
        with pytest.raises(ValueError):
            classical_limit_evolve(odd, GAMMA, 1.0)


class TestCombinedDensityDiffusion:
    def test_zero_time_defect_vanishes(self):
        p = ChiralProbabilityField.delta(32)
        assert combined_density_diffusion_check(p, GAMMA, 0.0) <= 1e-14

    def test_uniform_start_stationary(self):
        n = 32
        p = ChiralProbabilityField(np.full(n, 0.5 / n), np.full(n, 0.5 / n))
        assert combined_density_diffusion_check(p, GAMMA, 25.0) <= 1e-14

    def test_point_source_defect_and_kernel(self):
        n = 128
        t = 40.0  # 2*gamma*t = 10
        p = ChiralProbabilityField.delta(n, chirality="R")
        assert combined_density_diffusion_check(p, GAMMA, t) <= 1e-10
        combined = combined_density(classical_limit_evolve(p, GAMMA, t))
        kernel = bessel_i_scaled_array(n // 2, 2 * GAMMA * t)[:n]
        assert np.abs(combined.values - kernel).max() <= 1e-10

    def test_diffusion_from_point_source_matches_kernel(self):
        n = 128
        t = 40.0
        out = diffusion_evolve(ProbabilityField.delta(n), GAMMA, t)
        kernel = bessel_i_scaled_array(n // 2, 2 * GAMMA * t)[:n]
        assert np.abs(out.values - kernel).max() <= 1e-10


class TestSpreadingScales:
    def test_diffusion_variance_grows_linearly(self):
        n = 256
        for t in (10.0, 40.0, 100.0):
            out = diffusion_evolve(ProbabilityField.delta(n), GAMMA, t)
            pos = out.positions
            var = float(np.sum(pos ** 2 * out.values) - np.sum(pos * out.values) ** 2)
            assert abs(var - 2 * GAMMA * t) <= 1e-8

    def test_quantum_deviation_grows_ballistically(self):
        # standard deviation slope within 2% of c/sqrt(2) for both walks
        n = 512
        cos_theta = 0.25
        theta = np.arccos(cos_theta)
        taus = np.arange(20, 401, 20)
        state = initial_symmetric_entangled(n)
        sigmas = []
        prev_tau = 0
        for tau in taus:
            state = dtqw_evolve(state, DtqwParams(theta, n, int(tau - prev_tau)))
            prev_tau = tau
            rho = density(state)
            pos = rho.positions
            var = float(np.sum(pos ** 2 * rho.values) - np.sum(pos * rho.values) ** 2)
            sigmas.append(np.sqrt(var))
        slope = np.polyfit(taus, sigmas, 1)[0]
        assert abs(slope / (cos_theta / np.sqrt(2)) - 1.0) <= 0.02

        times = np.array([50.0, 100.0, 150.0, 200.0])
        sigmas = []
        for t in times:
            rho = density(ctqw_evolve(ScalarWaveField.delta(n),
                                      CtqwParams(GAMMA, t, n)))
            pos = rho.positions
            var = float(np.sum(pos ** 2 * rho.values) - np.sum(pos * rho.values) ** 2)
            sigmas.append(np.sqrt(var))
        slope = np.polyfit(times, sigmas, 1)[0]
        assert abs(slope / (2 * GAMMA / np.sqrt(2)) - 1.0) <= 0.02
