"""Lieb-Wu equations for finite periodic Hubbard rings.

For N electrons of which M have spin down on L sites the charge rapidities
k_j and spin rapidities lam_a satisfy

    k_j L - sum_a theta_1(lam_a - sin k_j)                     = 2 pi I_j
    sum_j theta_1(lam_a - sin k_j) - sum_b theta_2(lam_a - lam_b) = 2 pi J_a

with theta_n(x) = 2 atan(4 x / (n U)).  The energy is -2 sum_j cos k_j.
Sectors with U < 0, N > L or M > N - M are reduced to the directly solvable
region by particle-hole and spin-flip maps (:func:`map_sector`).
"""

from dataclasses import dataclass, field, replace
import logging
import math

import numpy as np

from .entanglement import LocalDensityMatrix, populations
from .errors import ConvergenceError, DomainError, SingularJacobianError

log = logging.getLogger(__name__)

FREE_U = 1e-8
CONTINUATION_ANCHOR = 16.0


@dataclass(frozen=True)
class ModelSector:
    L: int
    N: int
    M: int
    U: float

    def __post_init__(self):
        L, N, M = self.L, self.N, self.M
        if L < 1:
            raise DomainError(f"need at least one site, got L={L}")
        if not 0 <= M <= N <= 2 * L or N - M > L or M > L:
            raise DomainError(f"invalid sector L={L}, N={N}, M={M}")
        if not math.isfinite(self.U):
            raise DomainError(f"coupling must be finite, got {self.U}")

    @property
    def n_up(self):
        return (self.N - self.M) / self.L

    @property
    def n_dn(self):
        return self.M / self.L

    @property
    def filling(self):
        return self.N / self.L

    @property
    def magnetization(self):
        return (self.N - 2 * self.M) / (2 * self.L)

    @property
    def directly_solvable(self):
        return self.U >= 0 and self.N <= self.L and self.M <= self.N - self.M

    def with_U(self, U):
        return replace(self, U=float(U))


@dataclass(frozen=True)
class QuantumNumbers:
    I: np.ndarray
    J: np.ndarray


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-12
    max_iter: int = 200
    anchor_U: float = CONTINUATION_ANCHOR
    max_continuation_steps: int = 400


@dataclass
class BetheRoots:
    sector: ModelSector
    k: np.ndarray
    lam: np.ndarray
    quantum_numbers: QuantumNumbers
    residual_norm: float
    iterations: int
    continuation_steps: int = 0


@dataclass(frozen=True)
class SectorMap:
    """Reduction of a sector to the directly solvable region.

    ``E(original) = energy_offset + E(sector)``; ``steps`` names the maps
    applied in order and :meth:`pull_back` carries local populations of the
    reduced sector back to the original one.
    """

    original: ModelSector
    sector: ModelSector
    energy_offset: float
    steps: tuple = field(default_factory=tuple)

    def pull_back(self, rho):
        z, up, dn, w = rho.as_tuple()
        for step in reversed(self.steps):
            if step == "spin_flip":
                z, up, dn, w = z, dn, up, w
            elif step == "particle_hole":
                z, up, dn, w = w, dn, up, z
            elif step == "down_hole":
                z, up, dn, w = dn, w, z, up
        return LocalDensityMatrix(z, up, dn, w)


def _consecutive(count, integer, shift):
    # symmetric about zero when the parity class allows it, else moved by ``shift``
    values = np.arange(count, dtype=float) - 0.5 * (count - 1)
    if (count % 2 == 1) != integer:
        values += shift
    return values


def ground_quantum_numbers(sector):
    """Consecutive quantum numbers of the lowest highest-weight state with M down spins.

    I_j are integers when M is even and half-odd otherwise; J_a are integers
    when N - M is odd and half-odd otherwise.  A set whose parity class
    forbids a symmetric choice is moved off centre by 1/2: I upwards, J
    downwards, so the spin part partly compensates the charge momentum.
    """
    N, M = sector.N, sector.M
    return QuantumNumbers(
        I=_consecutive(N, integer=(M % 2 == 0), shift=0.5),
        J=_consecutive(M, integer=((N - M) % 2 == 1), shift=-0.5),
    )


def theta(n, x, U):
    """Scattering phase ``2 atan(4 x / (n U))``."""
    return 2.0 * np.arctan(4.0 * np.asarray(x) / (n * U))


def _dtheta(n, x, U):
    nu = n * U
    return 8.0 * nu / (nu * nu + 16.0 * x * x)


def residuals(k, lam, qn, L, U):
    """Left minus right hand sides of both equation sets, stacked."""
    s = np.sin(k)
    d1 = lam[None, :] - s[:, None]                  # (N, M)
    t1 = theta(1, d1, U)
    charge = k * L - t1.sum(axis=1) - 2.0 * math.pi * qn.I
    t2 = theta(2, lam[:, None] - lam[None, :], U)
    spin = t1.sum(axis=0) - t2.sum(axis=1) - 2.0 * math.pi * qn.J
    return np.concatenate([charge, spin])


def jacobian(k, lam, L, U):
    N, M = k.size, lam.size
    s, c = np.sin(k), np.cos(k)
    g1 = _dtheta(1, lam[None, :] - s[:, None], U)   # (N, M)
    g2 = _dtheta(2, lam[:, None] - lam[None, :], U)
    np.fill_diagonal(g2, 0.0)
    jac = np.zeros((N + M, N + M))
    jac[:N, :N] = np.diag(L + c * g1.sum(axis=1))
    jac[:N, N:] = -g1
    jac[N:, :N] = -(g1 * c[:, None]).T
    jac[N:, N:] = np.diag(g1.sum(axis=0) - g2.sum(axis=1)) + g2
    return jac


def _initial_guess(qn, L, U):
    k = 2.0 * math.pi * qn.I / L
    M = qn.J.size
    lam = np.tan(math.pi * qn.J / (M + 1)) * (U / 4.0 + 1.0)
    return k, lam


def _newton(k, lam, qn, L, U, opts):
    N = k.size
    x = np.concatenate([k, lam])
    f = residuals(x[:N], x[N:], qn, L, U)
    norm = np.max(np.abs(f)) if f.size else 0.0
    for it in range(opts.max_iter):
        if norm <= opts.tol:
            return x[:N], x[N:], norm, it
        jac = jacobian(x[:N], x[N:], L, U)
        try:
            dx = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            raise SingularJacobianError(
                "Jacobian singular; retry with continuation in U", partial=x, error=norm) from None
        if not np.all(np.isfinite(dx)):
            raise SingularJacobianError(
                "Jacobian singular; retry with continuation in U", partial=x, error=norm)
        step = 1.0
        while True:
            trial = x + step * dx
            f_trial = residuals(trial[:N], trial[N:], qn, L, U)
            norm_trial = np.max(np.abs(f_trial))
            if norm_trial < norm:
                break
            step *= 0.5
            if step < 1e-10:
                raise ConvergenceError(
                    f"line search stalled at residual {norm:.3e}", partial=x, error=norm)
        x, f, norm = trial, f_trial, norm_trial
    if norm <= opts.tol:
        return x[:N], x[N:], norm, opts.max_iter
    raise ConvergenceError(
        f"no convergence in {opts.max_iter} iterations (residual {norm:.3e})", partial=x, error=norm)


def _continue(sector, qn, opts):
    """Walk U geometrically from a large anchor to the target, warm-starting."""
    L, target = sector.L, sector.U
    U = max(opts.anchor_U, 4.0 * target)
    k, lam = _initial_guess(qn, L, U)
    k, lam, _, _ = _newton(k, lam, qn, L, U, opts)
    ratio = 0.7
    steps = 0
    while U != target:
        steps += 1
        if steps > opts.max_continuation_steps:
            raise ConvergenceError(f"continuation to U={target} exhausted its step budget",
                                   partial=np.concatenate([k, lam]))
        U_next = max(U * ratio, target)
        try:
            # spin rapidities scale roughly like U; rescale as predictor
            k1, lam1, _, _ = _newton(k, lam * (U_next / U), qn, L, U_next, opts)
        except ConvergenceError:
            ratio = math.sqrt(ratio)
            if ratio > 0.999:
                raise
            continue
        k, lam, U = k1, lam1, U_next
        ratio = max(ratio * ratio, 0.5) if ratio > 0.7 else ratio
    return k, lam, steps


def solve_ground_state(sector, opts=None, guess=None):
    """Solve the Lieb-Wu equations for the ground state of a solvable sector.

    ``guess`` may be a previously converged :class:`BetheRoots` (warm start).
    Falls back to continuation in U from a strong-coupling anchor when the
    direct Newton iteration fails.
    """
    opts = opts or SolverOptions()
    if not sector.directly_solvable:
        raise DomainError(f"sector {sector} must be reduced with map_sector first")
    qn = ground_quantum_numbers(sector)
    L, U = sector.L, sector.U
    if U < FREE_U:
        k = 2.0 * math.pi * qn.I / L
        lam = np.zeros(qn.J.size)
        return BetheRoots(sector, k, lam, qn, 0.0, 0)
    if guess is not None:
        k0, lam0 = guess.k.copy(), guess.lam * (U / guess.sector.U)
    else:
        k0, lam0 = _initial_guess(qn, L, U)
    steps = 0
    try:
        k, lam, norm, iters = _newton(k0, lam0, qn, L, U, opts)
    except ConvergenceError as exc:
        log.debug("direct Newton failed for %s (%s); continuing from anchor", sector, exc)
        k, lam, steps = _continue(sector, qn, opts)
        k, lam, norm, iters = _newton(k, lam, qn, L, U, opts)
    return BetheRoots(sector, k, lam, qn, float(norm), iters, steps)


def ground_energy(roots):
    return -2.0 * math.fsum(np.cos(roots.k))


def map_sector(sector):
    """Reduce any sector to U >= 0, N <= L, M <= N - M.

    Applied in order: spin-down particle-hole map for U < 0,
    ``E(Nu, Nd; U) = Nu U + E(Nu, L - Nd; -U)``; full particle-hole map for
    N > L, ``E(Nu, Nd; U) = -(L - N) U + E(L - Nu, L - Nd; U)``; spin flip.
    The particle-hole maps need a bipartite ring (even L).
    """
    L, U = sector.L, sector.U
    n_up, n_dn = sector.N - sector.M, sector.M
    offset = 0.0
    steps = []
    if U < 0:
        offset += n_up * U
        n_dn = L - n_dn
        U = -U
        steps.append("down_hole")
    if n_up + n_dn > L:
        offset += -(L - n_up - n_dn) * U
        n_up, n_dn = L - n_up, L - n_dn
        steps.append("particle_hole")
    if n_dn > n_up:
        n_up, n_dn = n_dn, n_up
        steps.append("spin_flip")
    if L % 2 and set(steps) - {"spin_flip"}:
        raise DomainError(f"particle-hole maps need even L; sector {sector} is not reachable")
    mapped = ModelSector(L, n_up + n_dn, n_dn, U)
    return SectorMap(sector, mapped, offset, tuple(steps))


def _open_shell(sector):
    qn = ground_quantum_numbers(sector)
    return bool(qn.I.sum() or qn.J.sum())


def _lowest_multiplet(sector, opts, guess):
    """Lowest energy in a solvable sector over the highest-weight states it contains.

    Sector (N, M) holds the S^z descendants of every multiplet with M' <= M
    down spins.  For open-shell fillings the lowest one can have M' = M - 1
    (a triplet), so both are solved and the lower energy wins.  Closed-shell
    configurations (both quantum-number sets symmetric) skip the check.
    """
    best = None
    for m in (sector.M, sector.M - 1):
        if m < 0 or (m < sector.M and not _open_shell(sector)):
            break
        candidate = replace(sector, M=m)
        warm = guess if guess is not None and guess.lam.size == m else None
        roots = solve_ground_state(candidate, opts, warm)
        energy = ground_energy(roots)
        if best is None or energy < best[0] - 1e-12:
            best = (energy, roots)
    return best


def sector_energy(sector, opts=None, guess=None):
    """Ground energy of any sector, plus the reduced-sector roots used."""
    smap = map_sector(sector)
    if smap.sector.N == 0:
        return smap.energy_offset, None
    energy, roots = _lowest_multiplet(smap.sector, opts, guess)
    return smap.energy_offset + energy, roots


def double_occupancy_hf(sector, h=None, opts=None, guess=None):
    """Double occupancy from a central difference of E_0(U) / L in U.

    At U = 0 the first-order (Wick) value ``n_up * n_dn`` is returned.
    """
    if abs(sector.U) < FREE_U:
        return sector.n_up * sector.n_dn
    if h is None:
        h = 1e-4 * max(1.0, abs(sector.U))
    e_plus, roots = sector_energy(sector.with_U(sector.U + h), opts, guess)
    e_minus, _ = sector_energy(sector.with_U(sector.U - h), opts, roots)
    return (e_plus - e_minus) / (2.0 * sector.L * h)


def local_state(sector, h=None, opts=None):
    """Energy and one-site populations of the ground state of ``sector``."""
    smap = map_sector(sector)
    reduced = smap.sector
    if reduced.N == 0:
        rho = LocalDensityMatrix(1.0, 0.0, 0.0, 0.0)
        return smap.energy_offset, smap.pull_back(rho)
    energy, roots = _lowest_multiplet(reduced, opts, None)
    w = double_occupancy_hf(reduced, h, opts, guess=roots)
    # double occupancy is shared by all members of a spin multiplet
    rho = populations(w, reduced.n_up, reduced.n_dn)
    return smap.energy_offset + energy, smap.pull_back(rho)


def charge_gap(L, U, opts=None):
    """``E(L+1) + E(L-1) - 2 E(L)`` with each sector at its lowest-spin M."""
    if not U > 0:
        raise DomainError(f"charge gap needs U > 0, got {U}")
    if L % 2:
        raise DomainError(f"charge gap needs even L, got {L}")
    energies = {}
    for N in (L - 1, L, L + 1):
        energies[N], _ = sector_energy(ModelSector(L, N, N // 2, float(U)), opts)
    return energies[L + 1] + energies[L - 1] - 2.0 * energies[L]
