"""Shared field types, ring Fourier transforms, and distance metrics.

Every field lives on a periodic ring whose storage index i maps to the
lattice coordinate n = i - n_sites//2, so the middle of the array is the
origin.  Evolving in momentum space on this ring is exact up to roundoff,
which keeps downstream tolerances tight.

The discrete Fourier transform is unitary (1/sqrt(N) both ways) and uses
the centered momentum grid k_m = 2*pi*m/N - pi, m = 0..N-1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

WINDOW_MARGIN = 80
NEGATIVITY_TOL = 1e-14


class WraparoundRiskWarning(UserWarning):
    """A run is long enough for the walk's support to wrap around the ring."""


def check_window(n_sites: int, speed: float, duration: float) -> bool:
    """Ring-size guard: require n_sites >= 2*ceil(speed*duration) + 80.

    Support grows one site per step for the discrete walk and decays
    superexponentially beyond the light cone for the continuous ones, so
    this margin keeps wraparound below roundoff.  Returns True when the
    guard holds; otherwise emits ``WraparoundRiskWarning`` and returns
    False.
    """
    if duration == 0:
        return True  # nothing propagates
    needed = 2 * int(np.ceil(abs(speed) * duration)) + WINDOW_MARGIN
    if n_sites >= needed:
        return True
    warnings.warn(
        f"ring of {n_sites} sites risks wraparound "
        f"(need >= {needed} for speed {speed:g} over duration {duration:g})",
        WraparoundRiskWarning,
        stacklevel=3,
    )
    return False


def site_coordinates(n_sites: int) -> np.ndarray:
    """Lattice coordinates n for storage indices 0..n_sites-1."""
    return np.arange(n_sites) - n_sites // 2


def _require_finite(arr: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains NaN or Inf")


@dataclass(frozen=True)
class SpinorField:
    """Two complex amplitudes (psi_R, psi_L) per site on a periodic ring."""

    psi_r: np.ndarray
    psi_l: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "psi_r", np.asarray(self.psi_r, dtype=complex))
        object.__setattr__(self, "psi_l", np.asarray(self.psi_l, dtype=complex))
        if self.psi_r.shape != self.psi_l.shape or self.psi_r.ndim != 1:
            raise ValueError("psi_r and psi_l must be 1-d arrays of equal length")
        if self.n_sites < 2 or self.n_sites % 2 != 0:
            raise ValueError("spinor fields need an even number of sites "
                             "(the limit dynamics couples two sublattices)")
        _require_finite(self.psi_r, "psi_r")
        _require_finite(self.psi_l, "psi_l")

    @property
    def n_sites(self) -> int:
        return self.psi_r.size

    @property
    def positions(self) -> np.ndarray:
        return site_coordinates(self.n_sites)

    def index_of(self, n: int) -> int:
        return (n + self.n_sites // 2) % self.n_sites

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.psi_r) ** 2)
                             + np.sum(np.abs(self.psi_l) ** 2)))

    @classmethod
    def zero(cls, n_sites: int) -> "SpinorField":
        return cls(np.zeros(n_sites, complex), np.zeros(n_sites, complex))

    @classmethod
    def delta(cls, n_sites: int, n: int = 0, chirality: str = "R") -> "SpinorField":
        """Unit amplitude on a single site, in the R or L component."""
        f = cls.zero(n_sites)
        if chirality == "R":
            f.psi_r[f.index_of(n)] = 1.0
        elif chirality == "L":
            f.psi_l[f.index_of(n)] = 1.0
        else:
            raise ValueError("chirality must be 'R' or 'L'")
        return f


@dataclass(frozen=True)
class ScalarWaveField:
    """One complex amplitude per site on a periodic ring."""

    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", np.asarray(self.amps, dtype=complex))
        if self.amps.ndim != 1 or self.amps.size < 1:
            raise ValueError("amps must be a non-empty 1-d array")
        _require_finite(self.amps, "amps")

    @property
    def n_sites(self) -> int:
        return self.amps.size

    @property
    def positions(self) -> np.ndarray:
        return site_coordinates(self.n_sites)

    def index_of(self, n: int) -> int:
        return (n + self.n_sites // 2) % self.n_sites

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    @classmethod
    def delta(cls, n_sites: int, n: int = 0) -> "ScalarWaveField":
        amps = np.zeros(n_sites, complex)
        amps[(n + n_sites // 2) % n_sites] = 1.0
        return cls(amps)


@dataclass(frozen=True)
class ProbabilityField:
    """One nonnegative real per site.

    Entries may dip to -1e-14 from roundoff; they are clamped to zero on
    construction, anything more negative is rejected.
    """

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("values must be a non-empty 1-d array")
        _require_finite(vals, "values")
        if np.min(vals) < -NEGATIVITY_TOL:
            raise ValueError(f"negative probability {np.min(vals):g} "
                             f"below tolerance -{NEGATIVITY_TOL:g}")
        object.__setattr__(self, "values", np.maximum(vals, 0.0))

    @property
    def n_sites(self) -> int:
        return self.values.size

    @property
    def positions(self) -> np.ndarray:
        return site_coordinates(self.n_sites)

    def index_of(self, n: int) -> int:
        return (n + self.n_sites // 2) % self.n_sites

    def total(self) -> float:
        return float(np.sum(self.values))

    @classmethod
    def delta(cls, n_sites: int, n: int = 0) -> "ProbabilityField":
        vals = np.zeros(n_sites)
        vals[(n + n_sites // 2) % n_sites] = 1.0
        return cls(vals)


@dataclass(frozen=True)
class ChiralProbabilityField:
    """Per-site probability split over the two chirality channels."""

    p_r: np.ndarray
    p_l: np.ndarray

    def __post_init__(self):
        pr = np.asarray(self.p_r, dtype=float)
        pl = np.asarray(self.p_l, dtype=float)
        if pr.shape != pl.shape or pr.ndim != 1:
            raise ValueError("p_r and p_l must be 1-d arrays of equal length")
        _require_finite(pr, "p_r")
        _require_finite(pl, "p_l")
        if min(np.min(pr), np.min(pl)) < -NEGATIVITY_TOL:
            raise ValueError("negative probability below tolerance")
        object.__setattr__(self, "p_r", np.maximum(pr, 0.0))
        object.__setattr__(self, "p_l", np.maximum(pl, 0.0))

    @property
    def n_sites(self) -> int:
        return self.p_r.size

    @property
    def positions(self) -> np.ndarray:
        return site_coordinates(self.n_sites)

    def index_of(self, n: int) -> int:
        return (n + self.n_sites // 2) % self.n_sites

    def total(self) -> float:
        return float(np.sum(self.p_r) + np.sum(self.p_l))

    def site_density(self) -> ProbabilityField:
        return ProbabilityField(self.p_r + self.p_l)

    @classmethod
    def delta(cls, n_sites: int, n: int = 0, chirality: str = "R") -> "ChiralProbabilityField":
        pr = np.zeros(n_sites)
        pl = np.zeros(n_sites)
        target = pr if chirality == "R" else pl
        target[(n + n_sites // 2) % n_sites] = 1.0
        return cls(pr, pl)


@dataclass(frozen=True)
class MomentumGrid:
    """Dual grid k_m = 2*pi*m/N - pi, m = 0..N-1, spacing 2*pi/N."""

    n_sites: int
    values: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")
        ks = 2.0 * np.pi * np.arange(self.n_sites) / self.n_sites - np.pi
        object.__setattr__(self, "values", ks)


def dft_ring(amps: np.ndarray) -> np.ndarray:
    """Unitary DFT from centered site index to the centered momentum grid.

    phi_m = (1/sqrt(N)) * sum_n psi(n) exp(-i k_m n) with n = index - N//2
    and k_m = 2*pi*m/N - pi.  Accepts any 1-d complex array; the FFT
    backs the O(N log N) fast path, the phase bookkeeping keeps the
    centering exact.
    """
    a = np.asarray(amps, dtype=complex)
    n = a.size
    c = n // 2
    if n % 2 == 0:
        # phases reduce to exact +-1 patterns on an even ring
        alt_j = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        alt_m = alt_j * (1.0 if c % 2 == 0 else -1.0)
        return alt_m * np.fft.fft(a * alt_j) / np.sqrt(n)
    alt_j = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    m = np.arange(n)
    post = np.exp(2j * np.pi * m * c / n) * (1.0 if c % 2 == 0 else -1.0)
    return post * np.fft.fft(a * alt_j) / np.sqrt(n)


def idft_ring(phi: np.ndarray) -> np.ndarray:
    """Inverse of dft_ring: psi(n) = (1/sqrt(N)) sum_m phi_m exp(+i k_m n)."""
    p = np.asarray(phi, dtype=complex)
    n = p.size
    c = n // 2
    if n % 2 == 0:
        alt_j = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        alt_m = alt_j * (1.0 if c % 2 == 0 else -1.0)
        return alt_j * np.sqrt(n) * np.fft.ifft(p * alt_m)
    alt_j = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    m = np.arange(n)
    x = p * np.exp(-2j * np.pi * m * c / n) * (1.0 if c % 2 == 0 else -1.0)
    return alt_j * np.sqrt(n) * np.fft.ifft(x)


def density(state: SpinorField | ScalarWaveField) -> ProbabilityField:
    """Per-site probability density; sums to the squared norm of the input."""
    if isinstance(state, SpinorField):
        vals = np.abs(state.psi_r) ** 2 + np.abs(state.psi_l) ** 2
    elif isinstance(state, ScalarWaveField):
        vals = np.abs(state.amps) ** 2
    else:
        raise TypeError(f"cannot take density of {type(state).__name__}")
    return ProbabilityField(vals)


def l1_distance(p, q) -> float:
    """Sum of absolute per-site differences; chiral fields compare both channels."""
    if isinstance(p, ProbabilityField) and isinstance(q, ProbabilityField):
        if p.n_sites != q.n_sites:
            raise ValueError("size mismatch in l1_distance")
        return float(np.sum(np.abs(p.values - q.values)))
    if isinstance(p, ChiralProbabilityField) and isinstance(q, ChiralProbabilityField):
        if p.n_sites != q.n_sites:
            raise ValueError("size mismatch in l1_distance")
        return float(np.sum(np.abs(p.p_r - q.p_r)) + np.sum(np.abs(p.p_l - q.p_l)))
    raise TypeError("l1_distance expects two probability fields of the same kind")
