"""Continuous-time quantum walk and the two-component limit system.

All continuous-time evolution is spectral: transform to the momentum
grid, multiply by the exact phase, transform back.  No time stepping
anywhere, so norm conservation and the closed-form comparisons hold to
roundoff.  Global phases such as e^{-2i gamma t} are kept explicitly in
the analytic formulas so comparisons are amplitude-exact; phase errors
would otherwise hide in density-only checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j, bessel_j_array
from .lattice import (MomentumGrid, ScalarWaveField, SpinorField, check_window,
                      dft_ring, idft_ring)


_I_POWERS = np.array([1.0, 1.0j, -1.0, -1.0j])  # i^n, indexed by n mod 4


@dataclass(frozen=True)
class CtqwParams:
    """Hopping rate gamma (1/time), elapsed time, ring size."""

    gamma: float
    time: float
    n_sites: int

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma <= 0.0:
            raise ValueError("gamma must be positive")
        if not np.isfinite(self.time) or self.time < 0.0:
            raise ValueError("time must be nonnegative")
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")


@dataclass(frozen=True)
class ChiralPair:
    """Co- and counter-rotating components of a limit-system state.

    Recombination e^{+2i gamma t} plus + e^{-2i gamma t} minus restores
    the source state.
    """

    plus: SpinorField
    minus: SpinorField


def ctqw_evolve(state: ScalarWaveField, params: CtqwParams,
                lap_sign: int = 1) -> ScalarWaveField:
    """Exact spectral evolution of i d/dt psi = -gamma [psi(n+1) - 2 psi + psi(n-1)].

    Each momentum component picks up e^{-i E(k) t} with
    E(k) = 2 gamma (1 - cos k).  ``lap_sign=-1`` flips the sign of the
    coupling, which is the equation obeyed by the counter-rotating
    chiral component.
    """
    if state.n_sites != params.n_sites:
        raise ValueError("state size does not match params.n_sites")
    if lap_sign not in (1, -1):
        raise ValueError("lap_sign must be +1 or -1")
    if params.time == 0.0:
        return state
    check_window(params.n_sites, 2.0 * params.gamma, params.time)
    k = MomentumGrid(params.n_sites).values
    energy = lap_sign * 2.0 * params.gamma * (1.0 - np.cos(k))
    phi = dft_ring(state.amps) * np.exp(-1j * energy * params.time)
    return ScalarWaveField(idft_ring(phi))


def ctqw_evolve_rk4(state: ScalarWaveField, params: CtqwParams,
                    dt: float = 0.005) -> ScalarWaveField:
    """Classical fourth-order time stepping of the same equation.

    Cross-check only; the spectral path is the production one.  The
    default step keeps norm drift below 1e-10 over desk-scale runs.
    """
    if state.n_sites != params.n_sites:
        raise ValueError("state size does not match params.n_sites")
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    check_window(params.n_sites, 2.0 * params.gamma, params.time)
    gamma = params.gamma

    def rhs(psi):
        return 1j * gamma * (np.roll(psi, 1) - 2.0 * psi + np.roll(psi, -1))

    steps = int(np.ceil(params.time / dt))
    psi = state.amps.copy()
    for step in range(steps):
        h = min(dt, params.time - step * dt)
        k1 = rhs(psi)
        k2 = rhs(psi + 0.5 * h * k1)
        k3 = rhs(psi + 0.5 * h * k2)
        k4 = rhs(psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return ScalarWaveField(psi)


def ctqw_analytic(n: int, params: CtqwParams) -> complex:
    """Infinite-lattice amplitude e^{-2i gamma t} i^n J_n(2 gamma t) from a point source."""
    z = 2.0 * params.gamma * params.time
    return complex(np.exp(-2j * params.gamma * params.time)
                   * (1j ** (n % 4)) * bessel_j(n, z))


def ctqw_analytic_field(params: CtqwParams) -> ScalarWaveField:
    """ctqw_analytic evaluated on the whole ring (no wraparound folding)."""
    n_sites = params.n_sites
    half = n_sites // 2
    z = 2.0 * params.gamma * params.time
    js = bessel_j_array(half, z)[:n_sites]
    n = np.arange(n_sites) - half
    amps = np.exp(-2j * params.gamma * params.time) * _I_POWERS[np.mod(n, 4)] * js
    return ScalarWaveField(amps)


def limit_pair_evolve(state: SpinorField, params: CtqwParams) -> SpinorField:
    """Exact spectral evolution of the two-component limit system

    i d/dt psi_R(n) = -gamma [psi_L(n) + psi_L(n-2)]
    i d/dt psi_L(n) = -gamma [psi_R(n) + psi_R(n+2)]

    whose momentum-space generator is -2 gamma cos k (sigma_x cos k +
    sigma_y sin k); the matrix exponential is closed-form because the
    generator squares to a multiple of the identity.
    """
    if state.n_sites != params.n_sites:
        raise ValueError("state size does not match params.n_sites")
    if params.time == 0.0:
        return state
    check_window(params.n_sites, 2.0 * params.gamma, params.time)
    k = MomentumGrid(params.n_sites).values
    phi_r, phi_l = dft_ring(state.psi_r), dft_ring(state.psi_l)
    a = 2.0 * params.gamma * params.time * np.cos(k)
    cos_a, sin_a = np.cos(a), np.sin(a)
    off = np.exp(-1j * k)  # upper-right entry of (n . sigma) at momentum k
    out_r = cos_a * phi_r + 1j * sin_a * off * phi_l
    out_l = cos_a * phi_l + 1j * sin_a * np.conj(off) * phi_r
    return SpinorField(idft_ring(out_r), idft_ring(out_l))


def chiral_decompose(state: SpinorField, gamma: float, t: float) -> ChiralPair:
    """Split a limit-system state into independently evolving components.

    plus_R(n)  = (1/2) e^{-2i gamma t} [psi_R(n) + psi_L(n-1)]
    plus_L(n)  = (1/2) e^{-2i gamma t} [psi_L(n) + psi_R(n+1)]
    minus_R(n) = (1/2) e^{+2i gamma t} [psi_R(n) - psi_L(n-1)]
    minus_L(n) = (1/2) e^{+2i gamma t} [psi_L(n) - psi_R(n+1)]

    Each component obeys the single-field wave equation with opposite
    coupling signs, so the limit dynamics is two independent copies of
    the continuous-time walk.
    """
    pl_back = np.roll(state.psi_l, 1)    # psi_L(n-1)
    pr_fwd = np.roll(state.psi_r, -1)    # psi_R(n+1)
    rot = np.exp(-2j * gamma * t)
    plus = SpinorField(0.5 * rot * (state.psi_r + pl_back),
                       0.5 * rot * (state.psi_l + pr_fwd))
    minus = SpinorField(0.5 * np.conj(rot) * (state.psi_r - pl_back),
                        0.5 * np.conj(rot) * (state.psi_l - pr_fwd))
    return ChiralPair(plus, minus)


def chiral_recombine(pair: ChiralPair, gamma: float, t: float) -> SpinorField:
    """Inverse of chiral_decompose at the same (gamma, t)."""
    rot = np.exp(2j * gamma * t)
    psi_r = rot * pair.plus.psi_r + np.conj(rot) * pair.minus.psi_r
    psi_l = rot * pair.plus.psi_l + np.conj(rot) * pair.minus.psi_l
    return SpinorField(psi_r, psi_l)


def limit_analytic(n: int, params: CtqwParams) -> tuple[complex, complex]:
    """Closed-form limit-system amplitudes from the symmetric two-site start.

    psi_R(n, t) = (1/2) i^n [J_n(2 gamma t) - i J_{n-1}(2 gamma t)]
    psi_L(n, t) = (1/2) i^n [J_n(2 gamma t) + i J_{n+1}(2 gamma t)]
    """
    z = 2.0 * params.gamma * params.time
    phase = 0.5 * (1j ** (n % 4))
    psi_r = phase * (bessel_j(n, z) - 1j * bessel_j(n - 1, z))
    psi_l = phase * (bessel_j(n, z) + 1j * bessel_j(n + 1, z))
    return complex(psi_r), complex(psi_l)


def limit_analytic_field(params: CtqwParams) -> SpinorField:
    """limit_analytic evaluated on the whole ring."""
    n_sites = params.n_sites
    half = n_sites // 2
    z = 2.0 * params.gamma * params.time
    js = bessel_j_array(half + 1, z)
    n = np.arange(n_sites) - half
    j_n = js[n + half + 1]
    j_nm1 = js[n + half]
    j_np1 = js[n + half + 2]
    phase = 0.5 * _I_POWERS[np.mod(n, 4)]
    return SpinorField(phase * (j_n - 1j * j_nm1), phase * (j_n + 1j * j_np1))
