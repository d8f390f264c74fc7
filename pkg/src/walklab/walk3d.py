"""Three-dimensional walk automaton in momentum space, plus the 3D wave evolution.

A four-component amplitude walks on a cubic lattice; its momentum-space
step is a product of conditional displacements and a coin rotation.  Two
operator orderings are implemented:

  naive:     U = D_x(k_x) D_y(k_y) D_z(k_z) C(theta)
  symmetric: U = D_x(k_x/2) D_y(k_y/2) D_z(k_z) D_y(k_y/2) D_x(k_x/2) C(theta)

with D_a(phi) = exp(-i phi sigma_z x sigma_a) and C(theta) =
exp(-i theta sigma_x x I).  At theta = pi/2 the symmetric (palindromic)
ordering gives U^2 = -I exactly for every k, so a continuous-time limit
exists; the naive ordering leaves an O(1) defect and has none.  The
limiting generator is

    H = -2 gamma (a sigma_x x I + b . sigma_y x sigma_vec)

with a = cos^2 k_x cos^2 k_y cos^2 k_z and the b components listed in
``limit_coefficients_3d``; its eigenvalues are +-2 gamma cos k_x cos k_y
cos k_z, each doubly degenerate.  All 3D work is per-k 4x4 algebra plus
the spectral scalar evolution; there is no real-space 3D stepping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .lattice import check_window
from .pauli import ID2, ID4, SIGMA_X, SIGMA_Y, SIGMA_Z, involution_exp

ORDERINGS = ("naive", "symmetric")
NO_LIMIT_DEFECT_THRESHOLD = 0.1
_BRANCH_MARGIN = 1e-9

ZX = np.kron(SIGMA_Z, SIGMA_X)
ZY = np.kron(SIGMA_Z, SIGMA_Y)
ZZ = np.kron(SIGMA_Z, SIGMA_Z)
XI = np.kron(SIGMA_X, ID2)
YX = np.kron(SIGMA_Y, SIGMA_X)
YY = np.kron(SIGMA_Y, SIGMA_Y)
YZ = np.kron(SIGMA_Y, SIGMA_Z)


class NoContinuousTimeLimitError(ValueError):
    """The requested ordering has no continuous-time limit at this momentum."""


@dataclass(frozen=True)
class MomentumOperator4:
    """A 4x4 complex matrix attached to one 3D momentum."""

    k: tuple[float, float, float]
    matrix: np.ndarray


@dataclass(frozen=True)
class Scalar3DField:
    """One complex amplitude per site of a periodic cubic lattice."""

    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", np.asarray(self.amps, dtype=complex))
        if self.amps.ndim != 3:
            raise ValueError("amps must be a 3-d array")
        if any(d < 2 or d % 2 != 0 for d in self.amps.shape):
            raise ValueError("every axis must have a positive even size")
        if not np.all(np.isfinite(self.amps)):
            raise ValueError("amps contains NaN or Inf")

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.amps.shape

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    @classmethod
    def delta(cls, dims: tuple[int, int, int]) -> "Scalar3DField":
        amps = np.zeros(dims, complex)
        amps[dims[0] // 2, dims[1] // 2, dims[2] // 2] = 1.0
        return cls(amps)


def _check_ordering(ordering: str) -> None:
    if ordering not in ORDERINGS:
        raise ValueError(f"ordering must be one of {ORDERINGS}, got {ordering!r}")


def propagator_3d(k: tuple[float, float, float], theta: float,
                  ordering: str) -> MomentumOperator4:
    """Single-step 4x4 propagator; every factor exponentiates in closed form."""
    _check_ordering(ordering)
    kx, ky, kz = k
    coin = involution_exp(XI, theta)
    if ordering == "naive":
        matrix = (involution_exp(ZX, kx) @ involution_exp(ZY, ky)
                  @ involution_exp(ZZ, kz) @ coin)
    else:
        matrix = (involution_exp(ZX, kx / 2) @ involution_exp(ZY, ky / 2)
                  @ involution_exp(ZZ, kz) @ involution_exp(ZY, ky / 2)
                  @ involution_exp(ZX, kx / 2) @ coin)
    return MomentumOperator4((kx, ky, kz), matrix)


def zeroth_order_defect(k: tuple[float, float, float], ordering: str) -> float:
    """|| U(k, pi/2)^2 + I ||_F.

    Zero for every k under the symmetric ordering (the displacement
    palindrome cancels against its conjugate), generically O(1) for the
    naive one; a nonzero value means the double step cannot collapse and
    no continuous-time limit exists there.
    """
    u = propagator_3d(k, np.pi / 2, ordering).matrix
    return float(np.linalg.norm(u @ u + ID4))


def limit_coefficients_3d(k: tuple[float, float, float]) -> tuple[float, np.ndarray]:
    """Coefficients (a, b) of the limiting generator at momentum k."""
    kx, ky, kz = k
    cx, cy, cz = np.cos(kx), np.cos(ky), np.cos(kz)
    sx, sy, sz = np.sin(kx), np.sin(ky), np.sin(kz)
    a = cx * cx * cy * cy * cz * cz
    b = np.array([sx * cx * cy * cy * cz * cz,
                  cx * sy * cy * cz * cz,
                  cx * cy * sz * cz])
    return float(a), b


def limit_hamiltonian_3d(k: tuple[float, float, float], gamma: float) -> MomentumOperator4:
    """H = -2 gamma (a XI + b_x YX + b_y YY + b_z YZ); Hermitian, traceless.

    The four generators pairwise anticommute and square to I, so the
    eigenvalues are +-2 gamma sqrt(a^2 + |b|^2) = +-2 gamma cos k_x
    cos k_y cos k_z, each doubly degenerate.
    """
    a, b = limit_coefficients_3d(k)
    matrix = -2.0 * gamma * (a * XI + b[0] * YX + b[1] * YY + b[2] * YZ)
    return MomentumOperator4(tuple(k), matrix)


def effective_generator_3d(k: tuple[float, float, float], delta: float,
                           ordering: str, gamma: float) -> MomentumOperator4:
    """Numerically extracted generator H_eff = (i gamma / delta) log(-U^2).

    U is taken at theta = pi/2 - delta; the principal matrix logarithm
    uses the Schur form of the unitary -U^2 with eigenphases in
    (-pi, pi].  Eigenvalues on the negative real axis are rejected
    (branch ambiguity), and the naive ordering is rejected wherever its
    zeroth-order defect exceeds 0.1, since (i gamma/delta) log(-U^2)
    diverges there.
    """
    _check_ordering(ordering)
    if not 0.0 < delta <= 0.3:
        raise ValueError("delta must lie in (0, 0.3]")
    if ordering == "naive":
        defect = zeroth_order_defect(k, ordering)
        if defect > NO_LIMIT_DEFECT_THRESHOLD:
            raise NoContinuousTimeLimitError(
                f"no continuous-time limit: naive ordering has zeroth-order "
                f"defect {defect:.3g} > {NO_LIMIT_DEFECT_THRESHOLD} at k = {k}")
    u = propagator_3d(k, np.pi / 2 - delta, ordering).matrix
    minus_u_sq = -(u @ u)
    tri, vec = schur(minus_u_sq, output="complex")
    phases = np.angle(np.diag(tri))
    if np.max(np.abs(phases)) > np.pi - _BRANCH_MARGIN:
        raise ValueError("matrix log branch ambiguity: -U^2 has an eigenvalue "
                         "on the negative real axis")
    log_m = vec @ np.diag(1j * phases) @ vec.conj().T
    h_eff = (1j * gamma / delta) * log_m
    h_eff = 0.5 * (h_eff + h_eff.conj().T)
    return MomentumOperator4(tuple(k), h_eff)


def ctqw3d_evolve(state: Scalar3DField, gamma: float, t: float) -> Scalar3DField:
    """Exact spectral evolution of the 3D wave equation

    i d/dt psi(n) = -(gamma/4) sum over the 8 diagonal neighbors psi(n + d),

    whose dispersion is E(k) = -2 gamma cos k_x cos k_y cos k_z.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return state
    for axis_size in state.dims:
        check_window(axis_size, 2.0 * gamma, t)
    freqs = [2.0 * np.pi * np.fft.fftfreq(d) for d in state.dims]
    kx, ky, kz = np.meshgrid(*freqs, indexing="ij")
    energy = -2.0 * gamma * np.cos(kx) * np.cos(ky) * np.cos(kz)
    out = np.fft.ifftn(np.exp(-1j * energy * t) * np.fft.fftn(state.amps))
    return Scalar3DField(out)
