"""Single-site reduced density matrix and its von Neumann entropy.

Charge and S^z conservation force the one-site density matrix to be
diagonal in the local basis |0>, |up>, |dn>, |updn>, so it is stored as the
four populations only.
"""

from dataclasses import dataclass, astuple
import math

from .errors import DomainError
from .special import entropy_term

POPULATION_TOL = 1e-9


@dataclass(frozen=True)
class LocalDensityMatrix:
    z: float
    u_plus: float
    u_minus: float
    w: float

    def __post_init__(self):
        for name, value in zip(("z", "u_plus", "u_minus", "w"), astuple(self)):
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"population {name}={value!r} outside [0, 1]")
        total = self.z + self.u_plus + self.u_minus + self.w
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"populations sum to {total!r}, not 1")

    def as_tuple(self):
        return astuple(self)


def populations(w, n_up, n_dn):
    """Local populations from the double occupancy and the two spin densities.

    Violations larger than 1e-9 mean an upstream bug and raise
    :class:`DomainError`; smaller ones are clamped away.
    """
    w, n_up, n_dn = float(w), float(n_up), float(n_dn)
    tol = POPULATION_TOL
    if w < -tol or w > min(n_up, n_dn) + tol or n_up + n_dn - w > 1.0 + tol:
        raise DomainError(f"inconsistent populations: w={w}, n_up={n_up}, n_dn={n_dn}")
    vals = [1.0 - n_up - n_dn + w, n_up - w, n_dn - w, w]
    vals = [min(max(v, 0.0), 1.0) for v in vals]
    total = math.fsum(vals)
    vals = [v / total for v in vals]
    # push residual rounding onto the largest entry so the sum is 1 exactly-ish
    big = max(range(4), key=lambda i: vals[i])
    vals[big] = 1.0 - math.fsum(v for i, v in enumerate(vals) if i != big)
    return LocalDensityMatrix(*vals)


def von_neumann_entropy(rho):
    """Entropy in bits of a diagonal one-site density matrix."""
    return math.fsum(entropy_term(p) for p in rho.as_tuple())


def infinite_u_filling_curve(n):
    """Entropy of the infinitely repulsive chain at filling ``0 <= n <= 1``.

    No site is doubly occupied, so the populations are ``1-n, n/2, n/2, 0``.
    """
    n = float(n)
    if not 0.0 <= n <= 1.0:
        raise DomainError(f"filling {n} outside [0, 1]; use E(n) = E(2 - n) above half filling")
    return entropy_term(1.0 - n) + 2.0 * entropy_term(0.5 * n)
