"""Long-time probability densities of the walks and empirical comparisons.

The continuous-time walk spreads into an arcsine-law density

    P(x, t) = 1 / (pi sqrt((2 gamma t)^2 - x^2)),   |x| < 2 gamma t

and the discrete-time walk into

    P(x, tau) = sin(theta) / (pi (1 - x^2/tau^2) sqrt((cos(theta) tau)^2 - x^2))

on |x| < cos(theta) tau.  Sites map to the continuum as x = n (unit
lattice spacing).  Both are interior asymptotics: the simulated density
oscillates about them with O(1) relative amplitude, so the empirical
comparison bins whole site cells at a fixed count of bins across the
interior (a fixed resolution in x/(c t), the variable the limit lives
in) and excludes the caustic region near +-c t where the density
diverges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .lattice import ProbabilityField

DEFAULT_INTERIOR_FRACTION = 0.9
DEFAULT_N_BINS = 24

KIND_CTQW = "ctqw-arcsine"
KIND_DTQW = "dtqw-konno"


@dataclass(frozen=True)
class WeakLimitDensity:
    """Analytic long-time density with support (-speed*time, +speed*time)."""

    kind: str
    speed: float
    time: float
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in (KIND_CTQW, KIND_DTQW):
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.time <= 0.0:
            raise ValueError("time must be positive")
        if self.kind == KIND_DTQW and self.theta is None:
            raise ValueError("the discrete-walk density needs theta")

    @classmethod
    def ctqw(cls, gamma: float, time: float) -> "WeakLimitDensity":
        return cls(KIND_CTQW, 2.0 * gamma, time)

    @classmethod
    def dtqw(cls, theta: float, tau: float) -> "WeakLimitDensity":
        if not 0.0 < theta < np.pi / 2:
            raise ValueError("theta must lie in (0, pi/2)")
        return cls(KIND_DTQW, float(np.cos(theta)), tau, theta)

    @property
    def support_radius(self) -> float:
        return self.speed * self.time

    def __call__(self, x: float) -> float:
        r = self.support_radius
        if abs(x) > r:
            return 0.0
        if abs(x) == r:
            return math.inf  # boundary sentinel: the density diverges here
        if self.kind == KIND_CTQW:
            return 1.0 / (math.pi * math.sqrt(r * r - x * x))
        konno_weight = 1.0 - (x / self.time) ** 2
        return math.sin(self.theta) / (math.pi * konno_weight * math.sqrt(r * r - x * x))

    def substituted(self, u: float) -> float:
        """Integrand after x = r sin(u); regular at the support endpoints."""
        if self.kind == KIND_CTQW:
            return 1.0 / math.pi
        c = self.speed
        return math.sin(self.theta) / (math.pi * (1.0 - (c * math.sin(u)) ** 2))


def ctqw_weak_density(x: float, gamma: float, t: float) -> float:
    if t <= 0.0:
        raise ValueError("t must be positive")
    return WeakLimitDensity.ctqw(gamma, t)(x)


def dtqw_weak_density(x: float, theta: float, tau: float) -> float:
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    return WeakLimitDensity.dtqw(theta, tau)(x)


def normalization_integral(dens: WeakLimitDensity) -> float:
    """Total analytic mass via the endpoint-regularizing substitution x = r sin(u)."""
    val, _ = quad(dens.substituted, -np.pi / 2, np.pi / 2, limit=200)
    return float(val)


def mass_within(dens: WeakLimitDensity, x_max: float) -> float:
    """Analytic mass of |x| <= x_max, same substitution."""
    r = dens.support_radius
    u_max = math.asin(min(1.0, x_max / r))
    val, _ = quad(dens.substituted, -u_max, u_max, limit=200)
    return float(val)


@dataclass(frozen=True)
class DensityComparison:
    distance: float
    excluded_mass: float
    bin_width: int


def empirical_density_compare(simulated: ProbabilityField,
                              analytic: WeakLimitDensity,
                              interior_fraction: float = DEFAULT_INTERIOR_FRACTION,
                              n_bins: int = DEFAULT_N_BINS) -> DensityComparison:
    """L1 distance between binned simulated mass and the analytic mass per bin.

    Bins are groups of whole site cells [n - 1/2, n + 1/2] covering the
    interior |x| <= interior_fraction * c * t, n_bins of them, so the
    comparison has fixed resolution in the rescaled variable the weak
    limit describes.  The analytic mass of the excluded caustic region is
    reported separately.
    """
    if not 0.0 < interior_fraction < 1.0:
        raise ValueError("interior_fraction must lie in (0, 1)")
    if n_bins < 1:
        raise ValueError("n_bins must be positive")
    positions = simulated.positions
    limit = interior_fraction * analytic.support_radius
    inside = np.where(np.abs(positions) <= limit)[0]
    if inside.size == 0:
        raise ValueError("interior region contains no sites")
    first, last = int(inside[0]), int(inside[-1])
    count = last - first + 1
    width = max(1, count // n_bins)
    usable = count // width
    dist = 0.0
    for b in range(usable):
        lo = first + b * width
        hi = lo + width
        sim_mass = float(np.sum(simulated.values[lo:hi]))
        x_lo = positions[lo] - 0.5
        x_hi = positions[hi - 1] + 0.5
        ana_mass, _ = quad(analytic, x_lo, x_hi, limit=200)
        dist += abs(sim_mass - ana_mass)
    excluded = normalization_integral(analytic) - mass_within(analytic, limit)
    return DensityComparison(float(dist), float(excluded), width)


def time_averaged_density(d1: ProbabilityField, d2: ProbabilityField) -> ProbabilityField:
    """Mean of two consecutive-step densities.

    The discrete walk populates alternating sublattices; averaging two
    consecutive steps removes the parity oscillation the weak limit does
    not describe.
    """
    if d1.n_sites != d2.n_sites:
        raise ValueError("size mismatch")
    return ProbabilityField(0.5 * (d1.values + d2.values))
