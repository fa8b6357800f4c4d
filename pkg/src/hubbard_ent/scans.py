"""Parameter sweeps over coupling, filling and magnetization.

Every sweep returns a list of :class:`ScanRecord` in grid order.  A point
that fails numerically is kept with NaN observables and a status string, so
a long sweep is never lost to one bad point.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import math

from . import bethe, ed
from .entanglement import infinite_u_filling_curve, von_neumann_entropy
from .errors import CapacityError, ConvergenceError, DegenerateStateError, DomainError
from .half_filling import (
    STRONG_MIN_U,
    WEAK_MAX_U,
    SeriesRegime,
    double_occupancy_integral,
    half_filling_entropy,
    series_double_occupancy,
)

METHODS = ("integral", "bethe", "ed", "series")
NUMERICAL_ERRORS = (ConvergenceError, DegenerateStateError, DomainError, CapacityError, ArithmeticError)


@dataclass(frozen=True)
class ScanRecord:
    parameter: float
    energy_per_site: float
    w: float
    E_v: float
    method: str
    status: str = "ok"

    @property
    def ok(self):
        return self.status == "ok"


def _failed(parameter, method, exc):
    return ScanRecord(parameter, math.nan, math.nan, math.nan, method,
                      f"error: {type(exc).__name__}: {exc}")


def _map(func, items, workers):
    if workers is None or workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _sector_record(parameter, sector, method, quad=None, opts=None):
    """Record for a finite-ring sector via Bethe ansatz or ED."""
    try:
        if method == "bethe":
            energy, rho = bethe.local_state(sector, opts=opts)
        elif method == "ed":
            state = ed.solve_sector(sector.L, sector.N - sector.M, sector.M, sector.U)
            energy, rho = state.energy, ed.measure_local(state)
        else:
            raise DomainError(f"unknown sector method {method!r}")
    except NUMERICAL_ERRORS as exc:
        return _failed(parameter, method, exc)
    return ScanRecord(parameter, energy / sector.L, rho.w, von_neumann_entropy(rho), method)


def _coupling_point(args):
    L, U, method, quad, opts = args
    if method == "integral":
        try:
            w = double_occupancy_integral(U, quad)
        except NUMERICAL_ERRORS as exc:
            return _failed(U, method, exc)
        # the energy integral itself is not evaluated
        return ScanRecord(U, math.nan, w, half_filling_entropy(w), method)
    if method == "series":
        a = abs(U)
        if a >= STRONG_MIN_U:
            w = series_double_occupancy(a, SeriesRegime.STRONG)
        elif a <= WEAK_MAX_U:
            w = series_double_occupancy(a, SeriesRegime.WEAK)
        else:
            return ScanRecord(U, math.nan, math.nan, math.nan, method,
                              "skipped: outside series windows")
        if U < 0:
            w = 0.5 - w
        return ScanRecord(U, math.nan, w, half_filling_entropy(w), method)
    if L % 2:
        return _failed(U, method, DomainError(f"half filling at zero field needs even L, got {L}"))
    return _sector_record(U, bethe.ModelSector(L, L, L // 2, float(U)), method, quad, opts)


def scan_coupling(L, U_grid, methods=("integral",), quad=None, opts=None, workers=None):
    """Half-filled, zero-field observables along a coupling grid.

    One record per (grid point, method), grid order outermost.
    """
    for m in methods:
        if m not in METHODS:
            raise DomainError(f"unknown method {m!r}; choose from {METHODS}")
    items = [(L, float(U), m, quad, opts) for U in U_grid for m in methods]
    return _map(_coupling_point, items, workers)


def _filling_point(args):
    L, U, N, opts = args
    n = N / L
    if math.isinf(U):
        if U < 0:
            return _failed(n, "series", DomainError("only U = +inf has a closed form"))
        # no double occupancy at or below half filling
        return ScanRecord(n, math.nan, 0.0, infinite_u_filling_curve(n), "series")
    return _sector_record(n, bethe.ModelSector(L, N, N // 2, float(U)), "bethe", opts=opts)


def scan_filling(L, U, N_grid=None, opts=None, workers=None):
    """Zero-field entropy versus filling n = N / L for even N (spin singlets).

    Points with N > L reuse the computation at 2L - N, so the mirror
    symmetry E_v(n) = E_v(2 - n) holds exactly.  ``U = inf`` selects the
    closed-form infinite-coupling curve.
    """
    U = float(U)
    if U < 0:
        raise DomainError(f"filling scans need U >= 0, got {U}")
    if L % 2:
        raise DomainError(f"filling scans need even L (singlet grid), got {L}")
    if N_grid is None:
        N_grid = range(2, 2 * L - 1, 2)
    N_grid = list(N_grid)
    for N in N_grid:
        if N % 2 or not 0 < N < 2 * L:
            raise DomainError(f"filling grid needs even 0 < N < 2L, got N={N}")
    base = sorted({min(N, 2 * L - N) for N in N_grid})
    computed = dict(zip(base, _map(_filling_point, [(L, U, N, opts) for N in base], workers)))
    records = []
    for N in N_grid:
        if N <= L:
            records.append(computed[N])
            continue
        src = computed[2 * L - N]
        n = N / L
        if not src.ok:
            records.append(ScanRecord(n, math.nan, math.nan, math.nan, src.method, src.status))
            continue
        energy = math.nan
        if not math.isinf(U):
            # E(N) = -(L - N) U + E(2L - N); z and w trade places
            energy = (-(L - N) * U + src.energy_per_site * L) / L
        # w here is z of the mirror state, 1 - n' + w'
        w = 1.0 - (2.0 - n) + src.w
        records.append(ScanRecord(n, energy, w, src.E_v, src.method))
    return records


def _magnetization_point(args):
    L, N, M, U, opts = args
    sector = bethe.ModelSector(L, N, M, float(U))
    return _sector_record(sector.magnetization, sector, "bethe", opts=opts)


def scan_magnetization(L, N, U, M_grid=None, opts=None, workers=None):
    """Entropy versus magnetization m_z = (N - 2M) / (2L), ordered by m_z."""
    U = float(U)
    if U < 0:
        raise DomainError(f"magnetization scans need U >= 0, got {U}")
    if not 0 < N <= L:
        raise DomainError(f"need 0 < N <= L, got N={N}, L={L}")
    if M_grid is None:
        M_grid = range(0, N // 2 + 1)
    M_grid = sorted(set(M_grid), reverse=True)
    for M in M_grid:
        if not 0 <= M <= N // 2:
            raise DomainError(f"M={M} outside [0, N/2]")
    return _map(_magnetization_point, [(L, N, M, U, opts) for M in M_grid], workers)


def derivative_jump_at_half_filling(L, U, opts=None):
    """One-sided slopes dE_v/dn at n = 1 from the singlet fillings N = L, L-2, L-4.

    Second-order one-sided differences; the right slope uses the mirrored
    points and is therefore exactly the negative of the left one.
    """
    if L % 2 or L < 6:
        raise DomainError(f"need even L >= 6, got {L}")
    if U < 0:
        raise DomainError(f"need U >= 0, got {U}")
    recs = scan_filling(L, U, [L - 4, L - 2, L, L + 2, L + 4], opts=opts)
    for r in recs:
        if not r.ok:
            raise ConvergenceError(f"filling point n={r.parameter} failed: {r.status}")
    e = [r.E_v for r in recs]
    dn = 2.0 / L
    left = (3.0 * e[2] - 4.0 * e[1] + e[0]) / (2.0 * dn)
    right = (-3.0 * e[2] + 4.0 * e[3] - e[4]) / (2.0 * dn)
    return left, right


def jump_versus_coupling(L, U_grid, opts=None):
    """Rows ``(U, left slope, charge gap)`` for the dE_v/dn-versus-U view."""
    rows = []
    for U in U_grid:
        left, _ = derivative_jump_at_half_filling(L, U, opts)
        gap = bethe.charge_gap(L, U, opts) if U > 0 else 0.0
        rows.append((float(U), left, gap))
    return rows
