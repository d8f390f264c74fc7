"""Quantitative study of the flip-point limit of the discrete walk.

Writing the coin angle as theta = pi/2 - delta, the double-step operator
of the walk collapses (to first order in delta) onto the exponential of
a single momentum-dependent generator.  Taking delta -> 0 with
tau * delta -> 2 gamma t then turns tau walk steps into continuous-time
evolution under

    H(k) = -2 gamma cos k (sigma_x cos k + sigma_y sin k)

up to the exact global phase exp(-i tau pi/2).  This module measures the
collapse order, the convergence rate of the full limit, and the spectral
equivalence between the walk and the coinless even/odd-bond construction.

Conventions pinned here:
  - tau is always even and delta is derived as 2*gamma*t/tau exactly, so
    the global phase (-i)^tau is unambiguous (+-1).
  - Scan errors compare full complex states including that phase; testing
    the phase is free, comparing phase-invariantly would hide errors.
  - The even/odd bond Hamiltonians exponentiate blockwise in closed form
    (each 2x2 block has eigenvalues 0 and 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ctqw import CtqwParams, limit_pair_evolve
from .dtqw import DtqwParams, MomentumOperator2, dtqw_evolve, momentum_propagator
from .lattice import MomentumGrid, SpinorField
from .pauli import axis_matrix


@dataclass(frozen=True)
class ScanEntry:
    delta: float
    tau: int
    state_error: float


@dataclass(frozen=True)
class LimitScanResult:
    """Per-tau state errors of the limit approximation and the log-log slope."""

    entries: tuple[ScanEntry, ...]
    fitted_slope: float


@dataclass(frozen=True)
class LatticeHamiltonian:
    """Real cyclic-banded Hamiltonian matrix on the ring."""

    n_sites: int
    matrix: np.ndarray


def _collapsed_double_step(k: float, delta: float) -> np.ndarray:
    """exp[i 2 delta cos k (sigma_x cos k + sigma_y sin k)] in closed form."""
    a = 2.0 * delta * np.cos(k)
    axis = axis_matrix(np.cos(k), np.sin(k))
    return np.cos(a) * np.eye(2, dtype=complex) + 1j * np.sin(a) * axis


def bch_residual(k: float, delta: float) -> float:
    """Frobenius distance between U(k, pi/2 - delta)^2 and its first-order collapse.

    Returns || U^2 + exp[i 2 delta cos k (sigma_x cos k + sigma_y sin k)] ||_F;
    the plus sign absorbs the (-i)^2 = -1 of the two coin flips.  The
    residual is O(delta^2), and exactly zero at delta = 0 where the
    double step is -I for every k.
    """
    if not 0.0 <= delta <= 0.5:
        raise ValueError("delta must lie in [0, 0.5]")
    u = momentum_propagator(k, np.pi / 2 - delta).matrix
    return float(np.linalg.norm(u @ u + _collapsed_double_step(k, delta)))


def bch_order_fit(deltas, k_grid_points: int = 32) -> tuple[np.ndarray, float]:
    """Mean residual over a momentum grid per delta, plus the log-log slope."""
    ks = MomentumGrid(k_grid_points).values
    means = np.array([np.mean([bch_residual(k, d) for k in ks]) for d in deltas])
    slope = float(np.polyfit(np.log(deltas), np.log(means), 1)[0])
    return means, slope


def limit_hamiltonian(k: float, gamma: float) -> MomentumOperator2:
    """H(k) = -2 gamma cos k (sigma_x cos k + sigma_y sin k); eigenvalues +-2 gamma cos k."""
    matrix = -2.0 * gamma * np.cos(k) * axis_matrix(np.cos(k), np.sin(k))
    return MomentumOperator2(k, matrix)


def limit_propagator(k: float, gamma: float, t: float, tau: int) -> MomentumOperator2:
    """exp(-i Phi) exp(-i H(k) t) with the exact global phase Phi = tau pi/2."""
    if tau % 2 != 0 or tau < 0:
        raise ValueError("tau must be a nonnegative even integer")
    phase = -1.0 if tau % 4 == 2 else 1.0
    a = 2.0 * gamma * t * np.cos(k)  # exp(-iHt) = cos(a) I + i sin(a) (axis)
    axis = axis_matrix(np.cos(k), np.sin(k))
    matrix = phase * (np.cos(a) * np.eye(2, dtype=complex) + 1j * np.sin(a) * axis)
    return MomentumOperator2(k, matrix)


def convergence_scan(gamma: float, t: float, tau_list, initial: SpinorField) -> LimitScanResult:
    """Error of tau walk steps at theta = pi/2 - 2*gamma*t/tau against the limit.

    For each tau the coin angle is derived so that tau * delta = 2 gamma t
    holds exactly.  The error is the 2-norm of the full complex state
    difference, including the (-i)^tau phase on the limit side; it decays
    like delta (slope 1 on the log-log fit).
    """
    taus = [int(tau) for tau in tau_list]
    if not taus:
        raise ValueError("tau_list must be non-empty")
    for tau in taus:
        if tau <= 0 or tau % 2 != 0:
            raise ValueError(f"every tau must be a positive even integer, got {tau}")
    n_sites = initial.n_sites
    target = limit_pair_evolve(initial, CtqwParams(gamma, t, n_sites)) if t > 0 \
        else initial
    entries = []
    for tau in taus:
        delta = 2.0 * gamma * t / tau
        if delta >= np.pi / 2:
            raise ValueError(f"tau = {tau} too small: derived delta >= pi/2")
        theta = np.pi / 2 - delta
        walked = dtqw_evolve(initial, DtqwParams(theta, n_sites, tau))
        phase = -1.0 if tau % 4 == 2 else 1.0
        diff_r = walked.psi_r - phase * target.psi_r
        diff_l = walked.psi_l - phase * target.psi_l
        err = float(np.sqrt(np.sum(np.abs(diff_r) ** 2) + np.sum(np.abs(diff_l) ** 2)))
        entries.append(ScanEntry(delta, tau, err))
    deltas = np.array([e.delta for e in entries])
    errors = np.maximum([e.state_error for e in entries], 1e-300)
    if len(entries) > 1 and np.all(deltas > 0.0):
        slope = float(np.polyfit(np.log(deltas), np.log(errors), 1)[0])
    else:
        slope = float("nan")  # t = 0 gives delta = 0 for every tau
    return LimitScanResult(tuple(entries), slope)


def lattice_laplacian(n_sites: int) -> LatticeHamiltonian:
    """H with 2 on the diagonal and -1 on the cyclic off-diagonals; row sums 0."""
    h = np.zeros((n_sites, n_sites))
    for n in range(n_sites):
        h[n, n] = 2.0
        h[n, (n + 1) % n_sites] = -1.0
        h[n, (n - 1) % n_sites] = -1.0
    return LatticeHamiltonian(n_sites, h)


def even_odd_split(n_sites: int) -> tuple[LatticeHamiltonian, LatticeHamiltonian]:
    """Split the ring Laplacian into block-diagonal even- and odd-bond parts.

    The even part couples site pairs (2j, 2j+1), the odd part pairs
    (2j+1, 2j+2); each 2x2 block is [[1, -1], [-1, 1]] and the two parts
    sum to the full Laplacian exactly (all entries are 0, +-1).
    """
    if n_sites < 2 or n_sites % 2 != 0:
        raise ValueError("n_sites must be a positive even integer")
    h_even = np.zeros((n_sites, n_sites))
    h_odd = np.zeros((n_sites, n_sites))
    for n in range(n_sites):
        h_even[n, n] = 1.0
        h_odd[n, n] = 1.0
        if n % 2 == 0:
            h_even[n, (n + 1) % n_sites] = -1.0
            h_odd[n, (n - 1) % n_sites] = -1.0
        else:
            h_even[n, (n - 1) % n_sites] = -1.0
            h_odd[n, (n + 1) % n_sites] = -1.0
    return (LatticeHamiltonian(n_sites, h_even), LatticeHamiltonian(n_sites, h_odd))


def _bond_block_exp(theta: float) -> np.ndarray:
    """exp(i theta [[1, -1], [-1, 1]]): projector split, eigenvalues {1, e^{2 i theta}}."""
    e = np.exp(2j * theta)
    return 0.5 * np.array([[1.0 + e, 1.0 - e], [1.0 - e, 1.0 + e]])


def coinless_propagator(theta1: float, theta2: float, n_sites: int) -> np.ndarray:
    """Unitary exp(i theta2 H_odd) exp(i theta1 H_even) on the scalar ring.

    Both exponentials are assembled blockwise in closed form, so the
    result is exact up to roundoff.
    """
    if n_sites < 2 or n_sites % 2 != 0:
        raise ValueError("n_sites must be a positive even integer")
    u_even = np.zeros((n_sites, n_sites), dtype=complex)
    u_odd = np.zeros((n_sites, n_sites), dtype=complex)
    block_even = _bond_block_exp(theta1)
    block_odd = _bond_block_exp(theta2)
    for j in range(0, n_sites, 2):
        pair = (j, j + 1)
        for a in range(2):
            for b in range(2):
                u_even[pair[a], pair[b]] = block_even[a, b]
        pair = (j + 1, (j + 2) % n_sites)
        for a in range(2):
            for b in range(2):
                u_odd[pair[a], pair[b]] = block_odd[a, b]
    return u_odd @ u_even


def spectral_matching_distance(vals_a: np.ndarray, vals_b: np.ndarray) -> float:
    """Best-match distance between two unit-modulus spectra up to one global phase.

    Sort both multisets by phase; for points on a circle the optimal
    assignment is a cyclic shift, and for each shift the optimal rotation
    has a closed form, so the global optimum is found by direct search.
    The residual norm is computed per matched pair to keep full precision.
    """
    if vals_a.size != vals_b.size:
        raise ValueError("spectra must have equal size")
    a = vals_a[np.argsort(np.angle(vals_a))]
    b = vals_b[np.argsort(np.angle(vals_b))]
    best = np.inf
    for shift in range(a.size):
        rolled = np.roll(b, shift)
        corr = np.vdot(a, rolled)  # sum conj(a) * rolled
        rot = np.conj(corr) / abs(corr) if abs(corr) > 0 else 1.0
        dist = float(np.linalg.norm(a - rot * rolled))
        best = min(best, dist)
    return best


def coinless_spectral_equivalence(theta: float, n_sites: int) -> float:
    """Spectral distance between the coinless walk and the coined walk.

    Diagonalizes coinless_propagator(theta - pi/2, pi/2) on an n_sites
    ring, collects the coined walk's momentum-propagator eigenvalues over
    the n_sites/2-point dual grid, and returns their matching distance
    after removing one common global phase.
    """
    if n_sites < 4 or n_sites % 2 != 0:
        raise ValueError("n_sites must be an even integer >= 4")
    coinless = np.linalg.eigvals(coinless_propagator(theta - np.pi / 2, np.pi / 2, n_sites))
    ks = MomentumGrid(n_sites // 2).values
    coined = np.concatenate(
        [np.linalg.eigvals(momentum_propagator(k, theta).matrix) for k in ks])
    return spectral_matching_distance(coinless, coined)
