import math

import pytest

from besseline import DomainError, GridSpec, InequalityId, compute_cnun, reproduce_tables, verify_inequality
from besseline.verification import (
    default_grid,
    explore_conjecture,
    logspace,
    predicted_slope,
    probe_conjecture_optimality,
)
from besseline import Params

I = InequalityId
TABLE_XS = [0.5, 5, 10, 25, 50, 100, 250]


def test_logspace_endpoints():
    xs = logspace(1e-3, 50.0, 40)
    assert len(xs) == 40 and xs[0] == 1e-3 and xs[-1] == 50.0
    assert all(b > a for a, b in zip(xs, xs[1:]))


@pytest.mark.parametrize("kw", [{"nus": ()}, {"nus": (1,), "xs": (1.0, 1.0)}, {"nus": (1,), "xs": (0.0, 1.0)}])
def test_grid_validation(kw):
    with pytest.raises(DomainError):
        GridSpec(**kw)


def test_grid_refined_and_default():
    g = GridSpec((1.0,), xs=(1.0, 4.0))
    assert g.refined().xs == (1.0, 2.0, 4.0)
    assert default_grid("BK1").ns == (-1.0, 0.0, 0.5, 0.9)
    assert default_grid("BI2").ns == (-0.5, 0.0, 0.5, 0.9)
    assert default_grid().size == 7 * 4 * 4 * 40


def test_bk3_example_grid():
    grid = GridSpec((0.0, 1.0, 3.0), (0.0, 0.5), (0.0,), tuple(logspace(1e-2, 50, 30)))
    rep = verify_inequality(I.BK3, grid)
    assert rep.points_checked == 180
    assert rep.ok and rep.min_margin > 0


def test_bk2_tight_at_zero_example():
    rep = verify_inequality(I.BK2, GridSpec((2.0,), (0.5,), (0.0,), (1e-3, 1.0, 50.0)))
    p, ratio = rep.tightness[0]
    assert p.x == 1e-3
    assert abs(ratio - 1) < 0.05


def test_bi1_tight_at_infinity_example():
    rep = verify_inequality(I.BI1, GridSpec((0.0,), (0.0,), (0.0,), (1.0, 50.0)))
    p, ratio = rep.tightness[-1]
    assert p.x == 50.0
    assert 0.95 < ratio < 1.0


@pytest.mark.parametrize("ineq,nu,n,g", [
    (I.BK3, 1.0, 1.0, 0.0), (I.BI2, -0.5, 0.0, 0.0), (I.BI3, -0.75, 0.5, 0.0),
])
def test_harness_soundness_on_equality_cases(ineq, nu, n, g):
    rep = verify_inequality(ineq, GridSpec((nu,), (n,), (g,), (0.5, 1.0, 5.0, 20.0)))
    assert rep.points_checked == 4 and rep.ok
    assert abs(rep.min_margin) <= 1e-9
    assert all(r.status == "equality" for r in rep.records)


def test_reversed_points_are_not_violations():
    rep = verify_inequality(I.BK3, GridSpec((0.5,), (1.5,), (0.0,), (0.5, 2.0, 8.0)))
    assert rep.points_checked == 3 and rep.ok
    assert all(r.status == "reversed" for r in rep.records)


def test_known_bad_predicate_is_reported():
    rep = verify_inequality(I.LEM_A1, GridSpec((1.0,), (0.9,), (0.0,), (0.1, 1.0, 5.0)))
    assert len(rep.violations) == 3


def test_violation_set_stable_under_refinement():
    grid = GridSpec((1.0, 5.0), (0.0, 0.9), (0.0,), tuple(logspace(1e-3, 50, 12)))
    for ineq in (I.BK1, I.LEM_A1, I.BI3):
        coarse = verify_inequality(ineq, grid)
        fine = verify_inequality(ineq, grid.refined())
        key = lambda rep: {(v.params.nu, v.params.n) for v in rep.violations}
        assert key(coarse) == key(fine)


def test_threads_give_identical_reports():
    grid = GridSpec((0.0, 2.5), (0.0, 0.5), (0.25, 0.5), tuple(logspace(1e-2, 30, 8)))
    a = verify_inequality(I.BK4, grid, threads=1)
    b = verify_inequality(I.BK4, grid, threads=4)
    assert [r.margin for r in a.records] == [r.margin for r in b.records]


def test_slope_fit_agrees_with_prediction():
    xs = (100.0, 200.0, 400.0)
    for ineq, nu, n in [(I.BK3, 1.0, 0.0), (I.BI3, 1.0, 0.0), (I.BI2, 2.0, 0.5), (I.BK1, 3.0, 0.0)]:
        rep = verify_inequality(ineq, GridSpec((nu,), (n,), (0.0,), xs))
        ratio = rep.tightness[-1][1]
        pred = predicted_slope(ineq, Params(nu, n, 0.0, xs[-1]))
        assert (ratio - 1) * xs[-1] == pytest.approx(pred, rel=0.05)
        assert not rep.notes


def test_flagged_points_are_kept():
    rep = verify_inequality(I.BI1, GridSpec((0.0,), (0.0,), (0.0,), (1.0, 900.0)))
    assert rep.flagged and rep.points_checked + len(rep.flagged) == 2


# --- C_{nu,n} ----------------------------------------------------------------------

def test_cnun_examples_and_cap():
    vals = []
    for nu, expected in [(0, 1.266), (1, 1.682), (3, 2.285), (5, 2.754), (10, 3.670)]:
        r = compute_cnun(float(nu), 0.0)
        assert abs(r.c_value - expected) <= 2e-3
        assert 0 < r.c_value < r.upper_cap == 2 * (nu + 1)
        vals.append(r.c_value)
    assert vals == sorted(vals) and len(set(vals)) == 5


def test_cnun_ratio_at_argmax():
    from besseline import bessel_i, integral_i
    r = compute_cnun(2.0, 0.5)
    x = r.argmax_x
    g = x ** 2.0 / bessel_i(2.5, x).value * integral_i(Params(2.0, 0.5, 0.0, x), 1e-12).value
    assert g == pytest.approx(r.c_value, rel=1e-9)


def test_cnun_domain():
    with pytest.raises(DomainError):
        compute_cnun(-1.0, 0.0)


# --- tables ------------------------------------------------------------------------

def test_table_examples():
    rows = {(r.nu, r.x): r for r in reproduce_tables([1.0, 2.5, 10.0], [0.5, 100.0, 250.0])}
    assert round(rows[(1.0, 0.5)].relerr_L, 4) == 0.4948
    assert round(rows[(10.0, 250.0)].relerr_U, 4) == 1.4119
    assert round(rows[(2.5, 100.0)].relerr_L, 4) == 0.0396


def test_relerr_upper_rises_then_falls():
    for nu in (1.0, 2.5, 5.0, 7.5, 10.0):
        col = [r.relerr_U for r in reproduce_tables([nu], TABLE_XS)]
        peak = col.index(max(col))
        assert 0 < peak < len(col) - 1
        assert all(a < b for a, b in zip(col[:peak], col[1:peak + 1]))
        assert all(a > b for a, b in zip(col[peak:], col[peak + 1:]))


def test_relerr_lower_decreases_in_x():
    for nu in (1.0, 5.0, 10.0):
        col = [r.relerr_L for r in reproduce_tables([nu], TABLE_XS)]
        assert col == sorted(col, reverse=True)


# --- conjecture --------------------------------------------------------------------

def test_conjecture_report_is_exploratory():
    rep = explore_conjecture(4.0, 0.0)
    assert rep.exploratory and rep.points_checked == 20
    assert "EXPLORATORY" in rep.summary()
    assert rep.ok


def test_conjecture_equality_case():
    rep = explore_conjecture(2.0, 1.0, [0.5, 2.0, 10.0])
    assert rep.ok and abs(rep.min_margin) <= 1e-9


def test_conjecture_probe_finds_negative():
    rep = probe_conjecture_optimality(4.0, 0.0)
    assert rep.violations


def test_conjecture_domain():
    with pytest.raises(DomainError):
        explore_conjecture(1.0, 0.0)
