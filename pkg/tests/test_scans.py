from dataclasses import astuple
import math

import numpy as np
import pytest

from hubbard_ent import ed, scans
from hubbard_ent.entanglement import infinite_u_filling_curve
from hubbard_ent.errors import DomainError


def test_coupling_examples():
    (rec,) = scans.scan_coupling(70, [0.0], ("integral",))
    assert rec.w == pytest.approx(0.25, abs=1e-12) and rec.E_v == pytest.approx(2.0, abs=1e-12)
    a, b = scans.scan_coupling(70, [-4.0, 4.0], ("integral",))
    assert abs(a.E_v - b.E_v) <= 1e-10


def test_coupling_bethe_vs_integral():
    recs = scans.scan_coupling(70, [4.0, -4.0], ("integral", "bethe"))
    for integral, bethe in zip(recs[::2], recs[1::2]):
        assert (integral.method, bethe.method) == ("integral", "bethe")
        assert abs(integral.w - bethe.w) <= 5e-3


def test_coupling_records_failures():
    recs = scans.scan_coupling(10, [2.0], ("ed", "series"))
    assert recs[0].status.startswith("error: CapacityError")
    assert math.isnan(recs[0].E_v)
    assert recs[1].status.startswith("skipped")
    with pytest.raises(DomainError):
        scans.scan_coupling(6, [1.0], ("magic",))


@pytest.mark.parametrize("L", [4, 6])
def test_bethe_and_ed_records_agree(L):
    recs = scans.scan_coupling(L, [1.0, 2.0, 4.0, -2.0], ("bethe", "ed"))
    for b, e in zip(recs[::2], recs[1::2]):
        if b.ok and e.ok:
            assert abs(b.E_v - e.E_v) <= 1e-4
            assert b.energy_per_site == pytest.approx(e.energy_per_site, abs=1e-8)


def bits(records):
    return [tuple(v.hex() if isinstance(v, float) else v for v in astuple(r)) for r in records]


def test_deterministic_and_parallel_equal():
    grid = [-2.0, 1.0, 3.0]
    first = bits(scans.scan_coupling(6, grid, ("integral", "bethe")))
    assert first == bits(scans.scan_coupling(6, grid, ("integral", "bethe")))
    assert first == bits(scans.scan_coupling(6, grid, ("integral", "bethe"), workers=2))


def test_filling_infinite_coupling():
    recs = scans.scan_filling(60, math.inf)
    best = max(recs, key=lambda r: r.E_v)
    assert best.parameter == pytest.approx(2 / 3, abs=1e-12)
    assert best.E_v == pytest.approx(math.log2(3), abs=1e-12)
    for r in recs:
        n = min(r.parameter, 2 - r.parameter)
        assert r.E_v == pytest.approx(infinite_u_filling_curve(n), abs=1e-14)


def test_filling_mirror_and_half_filling_point():
    L, U = 12, 4.0
    recs = scans.scan_filling(L, U)
    by_n = {round(r.parameter * L): r for r in recs}
    for N, r in by_n.items():
        if N != L:
            assert r.E_v == by_n[2 * L - N].E_v
    (half,) = scans.scan_coupling(L, [U], ("bethe",))
    assert abs(by_n[L].E_v - half.E_v) <= 1e-10


def test_filling_mirror_populations():
    # above half filling w is the empty-site probability of the mirror state
    L, U = 6, 3.0
    recs = {round(r.parameter * L): r for r in scans.scan_filling(L, U)}
    state = ed.solve_sector(L, 4, 4, U)
    assert recs[8].w == pytest.approx(ed.measure_double_occupancy(state), abs=1e-5)


def test_filling_domain():
    with pytest.raises(DomainError):
        scans.scan_filling(61, 4.0)
    with pytest.raises(DomainError):
        scans.scan_filling(6, -1.0)
    with pytest.raises(DomainError):
        scans.scan_filling(6, 1.0, [3])


def test_magnetization_examples():
    L = 12
    recs = scans.scan_magnetization(L, L, 4.0)
    mz = [r.parameter for r in recs]
    assert mz == sorted(mz) and mz[0] == 0.0 and mz[-1] == 0.5
    assert recs[-1].E_v <= 1e-10
    (zero_field,) = scans.scan_coupling(L, [4.0], ("bethe",))
    assert recs[0].E_v == zero_field.E_v
    assert all(a.E_v >= b.E_v for a, b in zip(recs, recs[1:]))


def test_magnetization_decreases_with_coupling():
    L = 12
    curves = [scans.scan_magnetization(L, L, U) for U in (2.0, 4.0, 8.0)]
    for points in zip(*curves):
        if points[0].parameter < 0.5:
            assert points[0].E_v > points[1].E_v > points[2].E_v


def test_magnetization_domain():
    with pytest.raises(DomainError):
        scans.scan_magnetization(6, 0, 1.0)
    with pytest.raises(DomainError):
        scans.scan_magnetization(6, 6, 1.0, [4])


def test_derivative_jump():
    left, right = scans.derivative_jump_at_half_filling(20, 4.0)
    assert abs(left + right) <= 1e-10
    # the maximum sits below n = 1, so E_v falls into the half-filled point
    assert left < 0
    free_left, _ = scans.derivative_jump_at_half_filling(20, 0.0)
    assert abs(free_left) < 0.05 * abs(left)
    with pytest.raises(DomainError):
        scans.derivative_jump_at_half_filling(5, 1.0)


def test_jump_versus_coupling_rows():
    rows = scans.jump_versus_coupling(12, [0.0, 2.0])
    assert rows[0][2] == 0.0 and rows[1][2] > 0
    assert np.isfinite([r[1] for r in rows]).all()
