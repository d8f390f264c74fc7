"""Classical lattice walks evolved deterministically (master-equation style).

The persistent random walk keeps its step direction with probability
alpha and flips with beta = 1 - alpha.  Its alpha -> 0 continuous-time
limit is the chiral rate system

    d/dt p_R(n) = -2 gamma p_R(n) + gamma [p_L(n-2) + p_L(n)]
    d/dt p_L(n) = -2 gamma p_L(n) + gamma [p_R(n+2) + p_R(n)]

and the shifted combination p(n) = p_R(n) + p_L(n-1) then obeys the
discretized diffusion equation.  No Monte Carlo anywhere: everything is
probability vectors under exact spectral evolution, so tolerances stay
at roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import ChiralProbabilityField, MomentumGrid, ProbabilityField, \
    dft_ring, idft_ring


@dataclass(frozen=True)
class PersistentParams:
    """Persistence probability alpha in [0, 1]; beta = 1 - alpha is derived."""

    alpha: float
    n_sites: int

    def __post_init__(self):
        if not np.isfinite(self.alpha) or not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.n_sites < 2 or self.n_sites % 2 != 0:
            raise ValueError("n_sites must be a positive even integer")

    @property
    def beta(self) -> float:
        return 1.0 - self.alpha


def persistent_step(p: ChiralProbabilityField, alpha: float) -> ChiralProbabilityField:
    """One step of the persistent random walk:

    p_R(n, tau+1) = alpha p_R(n-1, tau) + beta p_L(n-1, tau)
    p_L(n, tau+1) = alpha p_L(n+1, tau) + beta p_R(n+1, tau)

    Total probability is conserved exactly; entries stay nonnegative.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    beta = 1.0 - alpha
    new_r = np.roll(alpha * p.p_r + beta * p.p_l, 1)
    new_l = np.roll(alpha * p.p_l + beta * p.p_r, -1)
    return ChiralProbabilityField(new_r, new_l)


def persistent_two_step(p: ChiralProbabilityField, alpha: float) -> ChiralProbabilityField:
    """Direct double-step formula obtained by iterating the walk once:

    p_R(n, tau+2) = a^2 p_R(n-2) + a b [p_L(n-2) + p_L(n)] + b^2 p_R(n)
    p_L(n, tau+2) = a^2 p_L(n+2) + a b [p_R(n+2) + p_R(n)] + b^2 p_L(n)
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    beta = 1.0 - alpha
    a2, ab, b2 = alpha * alpha, alpha * beta, beta * beta
    new_r = a2 * np.roll(p.p_r, 2) + ab * (np.roll(p.p_l, 2) + p.p_l) + b2 * p.p_r
    new_l = a2 * np.roll(p.p_l, -2) + ab * (np.roll(p.p_r, -2) + p.p_r) + b2 * p.p_l
    return ChiralProbabilityField(new_r, new_l)


def persistent_two_step_check(p: ChiralProbabilityField, alpha: float) -> float:
    """L1 defect between two single steps and the direct double-step formula.

    Algebraic identity; the defect is pure roundoff (<= 1e-14).
    """
    twice = persistent_step(persistent_step(p, alpha), alpha)
    direct = persistent_two_step(p, alpha)
    return float(np.sum(np.abs(twice.p_r - direct.p_r))
                 + np.sum(np.abs(twice.p_l - direct.p_l)))


def classical_limit_evolve(p: ChiralProbabilityField, gamma: float,
                           t: float) -> ChiralProbabilityField:
    """Exact spectral solution of the chiral rate system on the ring.

    The generator is cyclic-banded and diagonalizes on the Fourier basis:
    per momentum k it is -2 gamma I plus an off-diagonal block whose
    square is (2 gamma cos k)^2 I, so the matrix exponential is
    cosh/sinh in closed form.  Probability is conserved and positivity
    preserved (the generator is a master-equation rate matrix).
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if p.n_sites % 2 != 0:
        raise ValueError("the rate system couples n with n +- 2 and needs "
                         "an even ring")
    if t == 0.0:
        return p
    n_sites = p.n_sites
    k = MomentumGrid(n_sites).values
    f_r = dft_ring(p.p_r.astype(complex))
    f_l = dft_ring(p.p_l.astype(complex))
    mu = 2.0 * gamma * np.abs(np.cos(k))
    g_rl = gamma * (1.0 + np.exp(-2j * k))   # coupling p_L -> p_R
    g_lr = gamma * (1.0 + np.exp(2j * k))    # coupling p_R -> p_L
    ch = np.cosh(mu * t)
    # sinh(mu t)/mu; the mu = 0 momenta have vanishing coupling anyway
    ratio = np.where(mu > 0.0, np.sinh(mu * t) / np.where(mu > 0.0, mu, 1.0), t)
    decay = np.exp(-2.0 * gamma * t)
    out_r = decay * (ch * f_r + ratio * g_rl * f_l)
    out_l = decay * (ch * f_l + ratio * g_lr * f_r)
    return ChiralProbabilityField(np.real(idft_ring(out_r)), np.real(idft_ring(out_l)))


def combined_density(p: ChiralProbabilityField) -> ProbabilityField:
    """The diffusion-equation combination p(n) = p_R(n) + p_L(n-1)."""
    return ProbabilityField(p.p_r + np.roll(p.p_l, 1))


def diffusion_evolve(p: ProbabilityField, gamma: float, t: float) -> ProbabilityField:
    """Exact spectral solution of d/dt p = gamma [p(n+1) - 2 p(n) + p(n-1)]."""
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return p
    k = MomentumGrid(p.n_sites).values
    decay = np.exp(-2.0 * gamma * (1.0 - np.cos(k)) * t)
    out = idft_ring(decay * dft_ring(p.values.astype(complex)))
    return ProbabilityField(np.real(out))


def combined_density_diffusion_check(p: ChiralProbabilityField, gamma: float,
                                     t: float) -> float:
    """L1 defect between the combined density of the evolved chiral system
    and the diffusion evolution of the combined initial density.

    The combination turns the chiral rate system into the diffusion
    equation exactly, so the defect is pure roundoff (<= 1e-10 contract).
    """
    evolved = classical_limit_evolve(p, gamma, t)
    via_chiral = combined_density(evolved)
    via_diffusion = diffusion_evolve(combined_density(p), gamma, t)
    return float(np.sum(np.abs(via_chiral.values - via_diffusion.values)))
