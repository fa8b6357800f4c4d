"""Bessel functions J0/J1, the entropy summand and two zeta constants.

The Bessel routines take scalars or numpy arrays.  Three regimes are used:

* ``|x| <= 2``      ascending power series (no cancellation to speak of)
* ``2 < |x| <= 25`` Miller backward recurrence normalised by
  ``J0 + 2*sum(J_2k) = 1``
* ``|x| > 25``      Hankel asymptotic expansion in amplitude/phase form

A pure power series is not used past ``|x| = 2`` because its alternating
terms grow like ``exp(|x|)/|x|`` and swamp the 1e-14 absolute target.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError

SERIES_MAX = 2.0
ASYMPTOTIC_MIN = 25.0
_ASYMPTOTIC_TERMS = 30
_SERIES_TERMS = 30
_RESCALE = 1e200

ZETA = {
    3: 1.2020569031595942854,
    5: 1.0369277551433699263,
}


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy and effort controls for the semi-infinite Bessel integral."""

    abs_tol: float = 1e-10
    panel_order: int = 20
    max_panels: int = 200_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.panel_order < 4:
            raise DomainError(f"panel_order must be >= 4, got {self.panel_order}")
        if self.max_panels < 1:
            raise DomainError(f"max_panels must be >= 1, got {self.max_panels}")


def _as_checked_array(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Bessel functions require finite arguments")
    return arr


def _series(order, x):
    # sum_k (-x^2/4)^k / (k! (k+order)!) * (x/2)^order
    q = -0.25 * x * x
    term = np.ones_like(x) / math.factorial(order)
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + order))
        total += term
    return total * (0.5 * x) ** order


def _miller(x, orders):
    """Backward recurrence for x > 0; returns {n: J_n(x)} for n in ``orders``."""
    start = 2 * int(math.ceil((float(np.max(x)) + 40.0) / 2.0))
    j_next = np.zeros_like(x)
    j_cur = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    kept = {}
    for k in range(start, 0, -1):
        # j_cur holds J_k (unnormalised); step down to J_{k-1}
        if k in orders:
            kept[k] = j_cur.copy()
        if k % 2 == 0:
            norm += 2.0 * j_cur
        j_prev = (2.0 * k / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        big = np.abs(j_cur) > _RESCALE
        if np.any(big):
            scale = np.where(big, 1.0 / _RESCALE, 1.0)
            j_cur = j_cur * scale
            j_next = j_next * scale
            norm = norm * scale
            for n in kept:
                kept[n] = kept[n] * scale
    kept[0] = j_cur
    norm += j_cur
    return {n: kept[n] / norm for n in orders}


def _asymptotic(order, x):
    mu = 4.0 * order * order
    p = np.ones_like(x)
    q = np.zeros_like(x)
    coeff = 1.0
    inv = 1.0 / x
    power = np.ones_like(x)
    for k in range(1, _ASYMPTOTIC_TERMS + 1):
        coeff *= (mu - (2 * k - 1) ** 2) / (k * 8.0)
        power = power * inv
        term = coeff * power
        # a_k / x^k enters P for even k and Q for odd k, with alternating signs
        if k % 2 == 0:
            p += term if (k // 2) % 2 == 0 else -term
        else:
            q += term if ((k - 1) // 2) % 2 == 0 else -term
    phase = (0.5 * order + 0.25) * math.pi
    c, s = math.cos(phase), math.sin(phase)
    cos_x, sin_x = np.cos(x), np.sin(x)
    cos_chi = cos_x * c + sin_x * s
    sin_chi = sin_x * c - cos_x * s
    return np.sqrt(2.0 / (math.pi * x)) * (p * cos_chi - q * sin_chi)


def _bessel_orders(x, orders):
    """J_n(|x|) for every n in ``orders`` (all orders share one recurrence)."""
    ax = np.abs(x)
    out = {n: np.empty_like(ax) for n in orders}
    small = ax <= SERIES_MAX
    large = ax > ASYMPTOTIC_MIN
    mid = ~(small | large)
    for n in orders:
        if np.any(small):
            out[n][small] = _series(n, ax[small])
        if np.any(large):
            out[n][large] = _asymptotic(n, ax[large])
    if np.any(mid):
        vals = _miller(ax[mid], set(orders))
        for n in orders:
            out[n][mid] = vals[n]
    return out


def _odd(vals, x):
    return np.where(x < 0, -vals, vals)


def _finish(arr, scalar):
    return float(arr) if scalar else arr


def bessel_j0(x):
    """Bessel function of the first kind of order zero."""
    arr = _as_checked_array(x)
    scalar = arr.ndim == 0
    vals = _bessel_orders(np.atleast_1d(arr), (0,))[0]
    return _finish(vals[0] if scalar else vals, scalar)


def bessel_j1(x):
    """Bessel function of the first kind of order one (odd in x)."""
    arr = _as_checked_array(x)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr)
    vals = _odd(_bessel_orders(flat, (1,))[1], flat)
    return _finish(vals[0] if scalar else vals, scalar)


def bessel_j0_j1(x):
    """Return ``(J0(x), J1(x))`` for an array, sharing one evaluation."""
    flat = np.atleast_1d(_as_checked_array(x))
    vals = _bessel_orders(flat, (0, 1))
    return vals[0], _odd(vals[1], flat)


def _bessel_jn(n, x):
    # Integer order n >= 0 through the same machinery; used by tests.
    flat = np.atleast_1d(_as_checked_array(x))
    vals = _bessel_orders(flat, tuple(range(n + 1)))[n]
    if n % 2:
        vals = _odd(vals, flat)
    return vals


def entropy_term(p, tol=1e-12):
    """Return ``-p*log2(p)`` with the continuous value 0 at ``p = 0``.

    Inputs within ``tol`` outside [0, 1] are clamped; anything further out
    raises :class:`DomainError`.
    """
    p = float(p)
    if not (-tol <= p <= 1.0 + tol):
        raise DomainError(f"probability {p!r} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    if p == 0.0:
        return 0.0
    return -p * math.log2(p)


def zeta_constant(s):
    """Riemann zeta at the odd integers used by the coupling expansions."""
    try:
        return ZETA[s]
    except KeyError:
        raise DomainError(f"zeta({s}) is not provided; supported: {sorted(ZETA)}") from None
