"""Regular and modified Bessel functions of integer order.

Both families are evaluated by Miller's backward recurrence: run

    f_{j-1} = (2j/x) f_j - f_{j+1}        (regular J)
    f_{j-1} = (2j/x) f_j + f_{j+1}        (modified I)

downward from the seed index n_start = n_max + 20 + ceil(1.2*x) with an
arbitrary tiny start value, then fix the overall scale with

    J_0(x) + 2 * sum_{k>=1} J_{2k}(x) = 1
    e^{-x} * [I_0(x) + 2 * sum_{k>=1} I_k(x)] = 1.

The downward direction is the stable one for both recurrences, and the
seed offset gives ~1e-13 accuracy over the supported range |n| <= 1e6,
0 <= x <= 1e6.  Intermediate values are rescaled whenever they exceed
1e250, so small x never overflows.

The modified family is returned in the exponentially scaled form
e^{-x} I_n(x) by ``bessel_i_scaled``; ``bessel_i`` multiplies the scale
back in and saturates to inf once e^x overflows float64 (x > ~709).
"""

from __future__ import annotations

import numpy as np

N_LIMIT = 10 ** 6
X_LIMIT = 1.0e6
_RESCALE = 1e250
_SEED = 1e-30


def _validate(n: int, x: float) -> None:
    if abs(int(n)) > N_LIMIT:
        raise ValueError(f"order |n| = {abs(n)} exceeds limit {N_LIMIT}")
    if not np.isfinite(x) or x < 0.0 or x > X_LIMIT:
        raise ValueError(f"argument x = {x!r} outside [0, {X_LIMIT:g}]")


def _miller_table(n_max: int, x: float, modified: bool) -> np.ndarray:
    """Table t[0..n_max] of J_n(x), or of e^{-x} I_n(x) when modified."""
    table = np.zeros(n_max + 1)
    if x == 0.0:
        table[0] = 1.0
        return table
    n_start = n_max + 20 + int(np.ceil(1.2 * x))
    sign = 1.0 if modified else -1.0
    f_next = 0.0
    f_curr = _SEED
    norm = 0.0
    if modified or n_start % 2 == 0:
        norm += 2.0 * f_curr
    for j in range(n_start, 0, -1):
        f_prev = (2.0 * j / x) * f_curr + sign * f_next
        f_next = f_curr
        f_curr = f_prev
        idx = j - 1
        if idx <= n_max:
            table[idx] = f_curr
        if idx == 0:
            norm += f_curr
        elif modified or idx % 2 == 0:
            norm += 2.0 * f_curr
        if abs(f_curr) > _RESCALE:
            f_curr /= _RESCALE
            f_next /= _RESCALE
            norm /= _RESCALE
            table /= _RESCALE
    return table / norm


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for integer n (either sign); J_{-n}(x) = (-1)^n J_n(x)."""
    _validate(n, x)
    m = abs(int(n))
    val = _miller_table(m, x, modified=False)[m]
    if n < 0 and m % 2 == 1:
        val = -val
    return float(val)


def bessel_j_array(n_max: int, x: float) -> np.ndarray:
    """J_n(x) for n = -n_max..n_max; entry i holds order i - n_max.

    One recurrence pass fills the whole table, which is what the analytic
    lattice solutions need.
    """
    _validate(n_max, x)
    table = _miller_table(n_max, x, modified=False)
    neg = table[1:][::-1].copy()
    orders = np.arange(n_max, 0, -1)
    neg[orders % 2 == 1] *= -1.0
    return np.concatenate([neg, table])


def bessel_i_scaled(n: int, x: float) -> float:
    """e^{-x} I_n(x); I_{-n}(x) = I_n(x)."""
    _validate(n, x)
    m = abs(int(n))
    return float(_miller_table(m, x, modified=True)[m])


def bessel_i_scaled_array(n_max: int, x: float) -> np.ndarray:
    """e^{-x} I_n(x) for n = -n_max..n_max; entry i holds order i - n_max."""
    _validate(n_max, x)
    table = _miller_table(n_max, x, modified=True)
    return np.concatenate([table[1:][::-1], table])


def bessel_i(n: int, x: float) -> float:
    """I_n(x); saturates to inf where e^x overflows float64."""
    scaled = bessel_i_scaled(n, x)
    with np.errstate(over="ignore"):
        return float(scaled * np.exp(x))
