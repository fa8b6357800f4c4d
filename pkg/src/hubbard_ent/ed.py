"""Exact diagonalization of the periodic Hubbard ring in fixed (N_up, N_dn) sectors.

Basis states are pairs of bit masks (bit j set = orbital at site j occupied).
Fermionic order: all up orbitals in site order, then all down orbitals, so a
hop c+_i c_j only picks up the parity of same-spin orbitals strictly between
i and j.  The ring-closing bond therefore carries (-1)^(N_sigma - 1).
"""

from dataclasses import dataclass
from itertools import combinations
import math

import numpy as np
import scipy.linalg

from .entanglement import LocalDensityMatrix
from .errors import CapacityError, DegenerateStateError, DomainError

MAX_SITES = 8
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class SectorBasis:
    L: int
    n_up: int
    n_dn: int
    states: tuple

    def __len__(self):
        return len(self.states)

    def index(self):
        return {s: i for i, s in enumerate(self.states)}


@dataclass
class SectorState:
    basis: SectorBasis
    energy: float
    amplitudes: np.ndarray
    degeneracy_flag: bool
    gap: float = math.inf


def _masks(L, n):
    return [sum(1 << j for j in occ) for occ in combinations(range(L), n)]


def build_basis(L, n_up, n_dn):
    if L > MAX_SITES:
        raise CapacityError(f"dense ED is limited to L <= {MAX_SITES}, got {L}")
    if not (0 <= n_up <= L and 0 <= n_dn <= L):
        raise DomainError(f"invalid occupation ({n_up}, {n_dn}) for L={L}")
    ups = sorted(_masks(L, n_up))
    dns = sorted(_masks(L, n_dn))
    return SectorBasis(L, n_up, n_dn, tuple((u, d) for u in ups for d in dns))


def _hop(mask, i, j):
    """Apply c+_i c_j to a single-species mask; return (sign, new_mask) or None."""
    if not (mask >> j) & 1 or ((mask >> i) & 1 and i != j):
        return None
    lo, hi = min(i, j), max(i, j)
    between = (mask >> (lo + 1)) & ((1 << (hi - lo - 1)) - 1) if hi - lo > 1 else 0
    sign = -1 if bin(between).count("1") % 2 else 1
    return sign, (mask & ~(1 << j)) | (1 << i)


def _bonds(L):
    if L == 1:
        return []
    if L == 2:
        # a two-site ring has one bond appearing twice in the periodic sum
        return [(0, 1), (1, 0)]
    return [(j, (j + 1) % L) for j in range(L)]


def build_hamiltonian(basis, U):
    """Dense real symmetric sector Hamiltonian -sum(c+_i c_j + h.c.) + U sum n_up n_dn."""
    L = basis.L
    index = basis.index()
    dim = len(basis)
    H = np.zeros((dim, dim))
    bonds = _bonds(L)
    for col, (up, dn) in enumerate(basis.states):
        H[col, col] = U * bin(up & dn).count("1")
        for a, b in bonds:
            for i, j in ((a, b), (b, a)):
                hopped = _hop(up, i, j)
                if hopped is not None:
                    sign, new = hopped
                    H[index[(new, dn)], col] -= sign
                hopped = _hop(dn, i, j)
                if hopped is not None:
                    sign, new = hopped
                    H[index[(up, new)], col] -= sign
    return H


def ground_state(H, basis=None):
    """Lowest eigenpair of a dense symmetric matrix."""
    H = np.asarray(H, dtype=float)
    if H.shape == (1, 1):
        return SectorState(basis, float(H[0, 0]), np.ones(1), False)
    try:
        vals, vecs = scipy.linalg.eigh(H, subset_by_index=[0, 1])
    except scipy.linalg.LinAlgError as exc:
        raise ArithmeticError(f"eigensolver failed: {exc}") from exc
    vec = vecs[:, 0]
    # fix the global sign so results are reproducible
    pivot = np.argmax(np.abs(vec))
    vec = vec * np.sign(vec[pivot])
    gap = float(vals[1] - vals[0])
    return SectorState(basis, float(vals[0]), vec, gap < DEGENERACY_TOL, gap)


def solve_sector(L, n_up, n_dn, U):
    basis = build_basis(L, n_up, n_dn)
    return ground_state(build_hamiltonian(basis, U), basis)


def site_double_occupancy(state):
    """``<n_j,up n_j,dn>`` for every site j."""
    L = state.basis.L
    probs = state.amplitudes ** 2
    out = np.zeros(L)
    for p, (up, dn) in zip(probs, state.basis.states):
        both = up & dn
        for j in range(L):
            if (both >> j) & 1:
                out[j] += p
    return out


def measure_double_occupancy(state):
    return float(site_double_occupancy(state).mean())


def reduced_density_matrix(state, site=0):
    """Full 4x4 one-site reduced density matrix in the basis |0>, |up>, |dn>, |updn>.

    Off-diagonal entries are accumulated honestly from pairs of basis states
    that agree away from ``site``; they vanish because such pairs differ in
    particle number or S^z and never share a sector.  The fermionic sign of
    moving the site operators to the front squares away on the diagonal and
    is irrelevant for entries that vanish.
    """
    rho = np.zeros((4, 4))
    bit = 1 << site
    groups = {}
    for amp, (up, dn) in zip(state.amplitudes, state.basis.states):
        local = ((up >> site) & 1) + 2 * ((dn >> site) & 1)
        rest = (up & ~bit, dn & ~bit)
        groups.setdefault(rest, []).append((local, amp))
    for members in groups.values():
        for a, amp_a in members:
            for b, amp_b in members:
                rho[a, b] += amp_a * amp_b
    return rho


def measure_local(state, site=0):
    """Diagonal one-site density matrix of a nondegenerate ground state."""
    if state.degeneracy_flag:
        raise DegenerateStateError(
            f"ground state is degenerate (gap {state.gap:.2e}); populations are ambiguous")
    rho = reduced_density_matrix(state, site)
    off = rho - np.diag(np.diag(rho))
    if np.max(np.abs(off)) > 1e-12:
        raise ArithmeticError("one-site density matrix has off-diagonal weight")
    z, u_plus, u_minus, w = np.diag(rho)
    total = z + u_plus + u_minus + w
    return LocalDensityMatrix(z / total, u_plus / total, u_minus / total, w / total)
