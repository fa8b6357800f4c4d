"""Thermodynamic-limit quantities of the half-filled chain.

The double occupancy is the U-derivative of the Lieb-Wu ground-state energy
per site,

    w(U) = int_0^inf J0(t) J1(t) / (1 + cosh(U t / 2)) dt,

and everything else here (entropy, symmetry, expansions) is built on it.
"""

from enum import Enum
import math

import numpy as np

from .errors import ConvergenceError, DomainError
from .special import QuadratureSpec, bessel_j0_j1, entropy_term, zeta_constant

SMALL_U = 1e-3
STRONG_MIN_U = 8.0
WEAK_MAX_U = 1.0


class SeriesRegime(str, Enum):
    STRONG = "strong_coupling"
    WEAK = "weak_coupling"


def _j1_zeros(start, count):
    """Zeros number ``start+1 .. start+count`` of J1 (McMahon guess + Newton)."""
    m = np.arange(start + 1, start + count + 1, dtype=float)
    beta = (m + 0.25) * math.pi
    z = beta - 3.0 / (8.0 * beta) + 36.0 / (384.0 * beta**3)
    for _ in range(3):
        j0, j1 = bessel_j0_j1(z)
        z = z - j1 / (j0 - j1 / z)
    return z


def _integrand(t, U):
    j0, j1 = bessel_j0_j1(t)
    # 1 / (1 + cosh y) written to stay finite for large y
    e = np.exp(-0.5 * U * t)
    return j0 * j1 * 2.0 * e / (1.0 + e) ** 2


def _tail_bound(t, U):
    # |J0 J1| <= ~1/t for t past the first zero, 1/(1+cosh y) <= 2 exp(-y)
    return 4.0 * math.exp(-0.5 * U * t) / (U * t)


def _breakpoints(U):
    """Panel edges: consecutive zeros of J1, subdivided to resolve the decay scale 2/U."""
    max_width = 4.0 / U
    left = 0.0
    zero_index = 0
    while True:
        zeros = _j1_zeros(zero_index, 64)
        zero_index += 64
        for right in zeros:
            pieces = max(1, int(math.ceil((right - left) / max_width)))
            yield from np.linspace(left, right, pieces + 1)[1:].tolist()
            left = right


def _positive_integral(U, spec, chunk=512):
    nodes, weights = np.polynomial.legendre.leggauss(spec.panel_order)
    edges = _breakpoints(U)
    sums = []
    left = 0.0
    while True:
        b = np.fromiter((next(edges) for _ in range(chunk)), dtype=float, count=chunk)
        a = np.concatenate([[left], b[:-1]])
        left = b[-1]
        half = 0.5 * (b - a)
        t = (0.5 * (a + b))[:, None] + half[:, None] * nodes[None, :]
        panel = half * (_integrand(t.ravel(), U).reshape(t.shape) @ weights)
        tails = 4.0 * np.exp(-0.5 * U * b) / (U * b)
        done = np.flatnonzero((np.abs(panel) < spec.abs_tol) & (tails < spec.abs_tol))
        stop = done[0] + 1 if done.size else panel.size
        if len(sums) + stop > spec.max_panels:
            keep = spec.max_panels - len(sums)
            sums.extend(panel[:keep].tolist())
            raise ConvergenceError(
                f"quadrature did not converge within {spec.max_panels} panels (U={U})",
                partial=math.fsum(sums),
                error=_tail_bound(b[keep - 1], U) if keep > 0 else math.inf,
            )
        sums.extend(panel[:stop].tolist())
        if done.size:
            return math.fsum(sums)


def double_occupancy_integral(U, spec=None):
    """Double occupancy ``<n_up n_dn>`` of the infinite half-filled chain.

    Negative couplings use ``w(-U) = 1/2 - w(U)``; for ``|U| < 1e-3`` the
    weak-coupling series is returned (its error there is ~1e-15).
    """
    spec = spec or QuadratureSpec()
    U = float(U)
    if not math.isfinite(U):
        raise DomainError(f"coupling must be finite, got {U}")
    if U < 0:
        return 0.5 - double_occupancy_integral(-U, spec)
    if U < SMALL_U:
        return _weak_w(U)
    return _positive_integral(U, spec)


def half_filling_entropy(w):
    """Local entropy of a paramagnetic half-filled state with double occupancy w."""
    u = 0.5 - w
    return 2.0 * entropy_term(w) + 2.0 * entropy_term(u)


def local_entanglement_half_filling(U, spec=None):
    """Single-site von Neumann entropy (bits) of the half-filled ground state."""
    return half_filling_entropy(double_occupancy_integral(U, spec))


def _strong_w(U):
    return (4.0 * math.log(2.0) / U**2
            - 27.0 * zeta_constant(3) / U**4
            + 375.0 * zeta_constant(5) / U**6)


def _weak_w(U):
    return (0.25
            - 7.0 * zeta_constant(3) * U / (8.0 * math.pi**3)
            - 93.0 * zeta_constant(5) * U**3 / (2**9 * math.pi**5))


def _check_window(U, regime):
    regime = SeriesRegime(regime)
    if regime is SeriesRegime.STRONG and not U >= STRONG_MIN_U:
        raise DomainError(f"strong-coupling series needs U >= {STRONG_MIN_U}, got {U}")
    if regime is SeriesRegime.WEAK and not abs(U) <= WEAK_MAX_U:
        raise DomainError(f"weak-coupling series needs |U| <= {WEAK_MAX_U}, got {U}")
    return regime


def series_double_occupancy(U, regime):
    """Truncated large-U or small-U expansion of the half-filling double occupancy."""
    U = float(U)
    regime = _check_window(U, regime)
    return _strong_w(U) if regime is SeriesRegime.STRONG else _weak_w(U)


def series_entanglement(U, regime):
    """Truncated expansions of the half-filling entropy, as printed.

    strong: ``1 + 16 ln(U) / U^2``
    weak:   ``2 - (1/ln 2) * (7 zeta(3) U / (2 pi^3))^2``
    """
    U = float(U)
    regime = _check_window(U, regime)
    if regime is SeriesRegime.STRONG:
        return 1.0 + 16.0 * math.log(U) / U**2
    x = 7.0 * zeta_constant(3) * U / (2.0 * math.pi**3)
    return 2.0 - x * x / math.log(2.0)


def series_entanglement_from_w(U, regime):
    """Entropy obtained by inserting the truncated w expansion into the exact w -> E_v map."""
    return half_filling_entropy(series_double_occupancy(U, regime))
