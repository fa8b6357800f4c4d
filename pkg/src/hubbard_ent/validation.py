"""Oracle-equivalence and invariant checks behind ``hubbard-ent validate``."""

from dataclasses import dataclass

from . import bethe, ed
from .entanglement import von_neumann_entropy
from .half_filling import (
    SeriesRegime,
    double_occupancy_integral,
    local_entanglement_half_filling,
    series_double_occupancy,
)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def _check(name, value, tol):
    return Check(name, bool(value <= tol), f"{value:.3e} <= {tol:.0e}")


def _ed_vs_bethe(L, n_up, n_dn, U):
    sector = bethe.ModelSector(L, n_up + n_dn, n_dn, U)
    state = ed.solve_sector(L, n_up, n_dn, U)
    e_bethe, _ = bethe.sector_energy(sector)
    checks = [_check(f"energy L={L} ({n_up},{n_dn}) U={U:g}", abs(e_bethe - state.energy), 1e-8)]
    if not state.degeneracy_flag:
        _, rho = bethe.local_state(sector)
        rho_ed = ed.measure_local(state)
        checks.append(_check(f"w L={L} ({n_up},{n_dn}) U={U:g}", abs(rho.w - rho_ed.w), 1e-5))
        checks.append(_check(
            f"E_v L={L} ({n_up},{n_dn}) U={U:g}",
            abs(von_neumann_entropy(rho) - von_neumann_entropy(rho_ed)), 1e-4))
    return checks


def quick_suite():
    checks = []
    for U in (1.0, 2.0, 4.0, 8.0):
        checks += _ed_vs_bethe(6, 3, 3, U)
        checks += _ed_vs_bethe(4, 1, 1, U)
    checks += _ed_vs_bethe(4, 2, 2, -4.0)
    checks.append(_check("w(0) = 1/4", abs(double_occupancy_integral(0.0) - 0.25), 1e-8))
    odd = max(abs(local_entanglement_half_filling(U) - local_entanglement_half_filling(-U))
              for U in (0.5, 1.0, 2.0, 4.0, 8.0))
    checks.append(_check("E_v(U) = E_v(-U)", odd, 1e-10))
    return checks


def full_suite():
    checks = quick_suite()
    for U in (1.0, 2.0, 4.0, 8.0, -1.0, -2.0, -4.0, -8.0):
        _, rho = bethe.local_state(bethe.ModelSector(70, 70, 35, U))
        w_int = double_occupancy_integral(U)
        checks.append(_check(f"L=70 Bethe vs integral w, U={U:g}", abs(rho.w - w_int), 5e-3))
    for U, tol in ((20.0, 1e-6), (40.0, 1e-8)):
        diff = abs(double_occupancy_integral(U) - series_double_occupancy(U, SeriesRegime.STRONG))
        checks.append(_check(f"strong series U={U:g}", diff, tol))
    for U in (0.1, 0.25, 0.5):
        diff = abs(double_occupancy_integral(U) - series_double_occupancy(U, SeriesRegime.WEAK))
        checks.append(_check(f"weak series U={U:g}", diff, 1e-4))
    gap = bethe.charge_gap(6, 4.0)
    e = {N: ed.solve_sector(6, N - N // 2, N // 2, 4.0).energy for N in (5, 6, 7)}
    checks.append(_check("charge gap L=6 U=4 vs ED", abs(gap - (e[7] + e[5] - 2 * e[6])), 1e-8))
    return checks


SUITES = {"quick": quick_suite, "full": full_suite}


def run_suite(name):
    return SUITES[name]()


def summarize(checks):
    failed = [c.name for c in checks if not c.passed]
    return {"total": len(checks), "passed": len(checks) - len(failed), "failed": failed,
            "ok": not failed}
