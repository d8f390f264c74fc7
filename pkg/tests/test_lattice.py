import numpy as np
import pytest

from walklab.lattice import (ChiralProbabilityField, MomentumGrid, ProbabilityField,
                             ScalarWaveField, SpinorField, WraparoundRiskWarning,
                             check_window, density, dft_ring, idft_ring,
                             l1_distance, site_coordinates)


def naive_dft(amps):
    """O(N^2) reference transform, written independently of the fast path."""
    amps = np.asarray(amps, dtype=complex)
    n = amps.size
    ks = MomentumGrid(n).values
    coords = site_coordinates(n)
    kernel = np.exp(-1j * np.outer(ks, coords)) / np.sqrt(n)
    return kernel @ amps


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


class TestMomentumGrid:
    def test_values_in_range(self):
        grid = MomentumGrid(16)
        assert grid.values[0] == -np.pi
        assert np.all(grid.values < np.pi)
        assert np.allclose(np.diff(grid.values), 2 * np.pi / 16)

    def test_bad_size(self):
        with pytest.raises(ValueError):
            MomentumGrid(0)


class TestDft:
    def test_delta_transforms_to_uniform(self):
        n = 16
        amps = np.zeros(n, complex)
        amps[n // 2] = 1.0  # coordinate n = 0
        phi = dft_ring(amps)
        assert np.abs(phi - 1.0 / np.sqrt(n)).max() < 1e-14

    def test_plane_wave_concentrates(self):
        n = 32
        k0 = MomentumGrid(n).values[20]
        coords = site_coordinates(n)
        amps = np.exp(1j * k0 * coords) / np.sqrt(n)
        phi = dft_ring(amps)
        expected = np.zeros(n, complex)
        expected[20] = 1.0
        assert np.abs(phi - expected).max() < 1e-13

    @pytest.mark.parametrize("n", [8, 64, 512])
    def test_round_trip(self, n):
        v = random_state(n, seed=n)
        assert np.abs(idft_ring(dft_ring(v)) - v).max() < 1e-13

    def test_round_trip_odd(self):
        v = random_state(7, seed=7)
        assert np.abs(idft_ring(dft_ring(v)) - v).max() < 1e-13

    @pytest.mark.parametrize("n", [8, 64, 512])
    def test_parseval(self, n):
        v = random_state(n, seed=100 + n)
        assert abs(np.linalg.norm(dft_ring(v)) - np.linalg.norm(v)) < 1e-13

    @pytest.mark.parametrize("n", [7, 8, 15, 32, 64])
    def test_matches_naive_transform(self, n):
        v = random_state(n, seed=200 + n)
        assert np.abs(dft_ring(v) - naive_dft(v)).max() < 1e-12


class TestDensity:
    def test_normalized_state_sums_to_one(self):
        f = ScalarWaveField(random_state(64, seed=3))
        assert abs(density(f).total() - 1.0) < 1e-13

    def test_symmetric_entangled_density(self):
        from walklab.dtqw import initial_symmetric_entangled
        f = initial_symmetric_entangled(16)
        rho = density(f)
        assert rho.values[rho.index_of(0)] == pytest.approx(0.5, abs=1e-15)
        assert rho.values[rho.index_of(1)] == pytest.approx(0.25, abs=1e-15)
        assert rho.values[rho.index_of(-1)] == pytest.approx(0.25, abs=1e-15)

    def test_phase_is_ignored(self):
        amps = np.zeros(16, complex)
        f = ScalarWaveField.delta(16, n=3)
        f = ScalarWaveField(f.amps * 1j)
        rho = density(f)
        assert rho.values[rho.index_of(3)] == 1.0
        assert rho.total() == 1.0

    def test_unnormalized_total_matches_norm(self):
        v = 3.0 * random_state(32, seed=9)
        f = ScalarWaveField(v)
        assert abs(density(f).total() - f.norm() ** 2) < 1e-12

    def test_never_negative(self):
        f = SpinorField(random_state(16, seed=1), random_state(16, seed=2))
        assert density(f).values.min() >= 0.0


class TestL1Distance:
    def test_identity_is_zero(self):
        p = ProbabilityField.delta(16)
        assert l1_distance(p, p) == 0.0

    def test_disjoint_deltas(self):
        p = ProbabilityField.delta(16, n=0)
        q = ProbabilityField.delta(16, n=1)
        assert l1_distance(p, q) == 2.0

    def test_deterministic_evolutions_agree(self):
        from walklab.ctqw import CtqwParams, ctqw_evolve
        params = CtqwParams(0.125, 30.0, 256)
        a = density(ctqw_evolve(ScalarWaveField.delta(256), params))
        b = density(ctqw_evolve(ScalarWaveField.delta(256), params))
        assert l1_distance(a, b) <= 1e-12

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            l1_distance(ProbabilityField.delta(16), ProbabilityField.delta(8))

    def test_chiral_compares_both_channels(self):
        p = ChiralProbabilityField.delta(8, chirality="R")
        q = ChiralProbabilityField.delta(8, chirality="L")
        assert l1_distance(p, q) == 2.0


class TestFieldValidation:
    def test_rejects_nan(self):
        amps = np.zeros(8, complex)
        amps[0] = np.nan
        with pytest.raises(ValueError):
            ScalarWaveField(amps)

    def test_spinor_needs_even_ring(self):
        with pytest.raises(ValueError):
            SpinorField(np.zeros(7, complex), np.zeros(7, complex))

    def test_probability_rejects_large_negative(self):
        with pytest.raises(ValueError):
            ProbabilityField(np.array([1.0, -1e-3]))

    def test_probability_clamps_roundoff_negative(self):
        p = ProbabilityField(np.array([1.0, -1e-15]))
        assert p.values[1] == 0.0

    def test_index_of_wraps(self):
        f = ScalarWaveField.delta(16)
        assert f.index_of(0) == 8
        assert f.index_of(-8) == 0
        assert f.index_of(8) == 0


class TestWindowGuard:
    def test_passes_when_large_enough(self):
        assert check_window(256, 0.25, 100.0)

    def test_warns_when_too_small(self):
        with pytest.warns(WraparoundRiskWarning):
            ok = check_window(64, 0.25, 1000.0)
        assert not ok
