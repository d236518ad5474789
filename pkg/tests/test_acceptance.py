"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest (lines are collected into the terminal summary) or directly
with ``python tests/test_acceptance.py``. Criteria known to be red are marked
``xfail(strict=True)``; the README explains each one.
"""
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from besseline import (  # noqa: E402
    GridSpec,
    InequalityId,
    Params,
    bessel_i,
    bessel_k,
    bound_value,
    compute_cnun,
    integral_i,
    integral_k,
    reproduce_tables,
    verify_inequality,
)
from besseline.bounds import INEQUALITIES, check_domain  # noqa: E402
from besseline.quadrature import (  # noqa: E402
    i_integral_tilt_one,
    k_integral_shift_one,
    k_integral_tilt_one,
)
from besseline.verification import (  # noqa: E402
    default_grid,
    explore_conjecture,
    logspace,
    probe_conjecture_optimality,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = {}

I = InequalityId

CNUN_PUBLISHED = {(0.0, 0.0): 1.266, (1.0, 0.0): 1.682, (3.0, 0.0): 2.285,
                  (5.0, 0.0): 2.754, (10.0, 0.0): 3.670}

TABLE_NUS = [1.0, 2.5, 5.0, 7.5, 10.0]
TABLE_XS = [0.5, 5.0, 10.0, 25.0, 50.0, 100.0, 250.0]
TABLE_L = [
    [0.4948, 0.2359, 0.1076, 0.0409, 0.0202, 0.0101, 0.0040],
    [0.7981, 0.6245, 0.3692, 0.1539, 0.0784, 0.0396, 0.0159],
    [0.8994, 0.8321, 0.6414, 0.3130, 0.1678, 0.0869, 0.0355],
    [0.9330, 0.8996, 0.7822, 0.4407, 0.2482, 0.1318, 0.0547],
    [0.9498, 0.9302, 0.8562, 0.5426, 0.3205, 0.1745, 0.0735],
]
TABLE_U = [
    [0.0051, 0.2038, 0.1973, 0.1034, 0.0558, 0.0290, 0.0118],
    [0.0094, 0.7325, 1.1405, 1.1517, 0.7143, 0.3967, 0.1689],
    [0.0049, 0.4995, 1.5977, 2.0626, 1.4411, 0.8462, 0.3721],
    [0.0039, 0.4100, 1.6473, 3.4230, 2.7983, 1.7750, 0.8169],
    [0.0032, 0.3379, 1.4876, 4.5026, 4.2818, 2.9312, 1.4119],
]

CERTIFIED = [I.BK1, I.BK2, I.BK3, I.BK4, I.BK5, I.BK6, I.BI1, I.BI2, I.BI3, I.BI4, I.BI5,
             I.BI7, I.BI8, I.DOB22_L, I.DOB22_U, I.LEM_A1, I.LEM_A2, I.SEGURA_RATIO,
             I.NASELL_RATIO]

# fixed before looking at any result
TIGHT_NUS = (0.0, 1.0, 2.0)
TIGHT_NS = (0.0, 0.5)
TIGHT_GAMMAS = (0.0, 0.25)


def report(num, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title} -- {detail}"
    ACCEPTANCE_LINES[num] = line
    print(line)
    return ok


# ---------------------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    worst = 0.0
    parts = []
    for (nu, n), pub in CNUN_PUBLISHED.items():
        r = compute_cnun(nu, n)
        worst = max(worst, abs(r.c_value - pub))
        parts.append(f"C_{nu:g},{n:g}={r.c_value:.4f}")
    dt = time.perf_counter() - t0
    ok = worst <= 2e-3 and dt < 10.0
    return report(1, "C_nu,n constants", ok, f"{', '.join(parts)}; max |diff| {worst:.1e}; {dt:.2f}s")


def criterion_2():
    t0 = time.perf_counter()
    rows = {(r.nu, r.x): r for r in reproduce_tables(TABLE_NUS, TABLE_XS)}
    bad = []
    for i, nu in enumerate(TABLE_NUS):
        for j, x in enumerate(TABLE_XS):
            r = rows[(nu, x)]
            if abs(r.relerr_L - TABLE_L[i][j]) > 1e-3:
                bad.append(f"L({nu:g},{x:g})={r.relerr_L:.4f}/{TABLE_L[i][j]}")
            if abs(r.relerr_U - TABLE_U[i][j]) > 1e-3:
                bad.append(f"U({nu:g},{x:g})={r.relerr_U:.4f}/{TABLE_U[i][j]}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30.0
    detail = f"{70 - len(bad)}/70 entries within 1e-3; {dt:.2f}s"
    if bad:
        detail += "; mismatches: " + ", ".join(bad)
    return report(2, "relative-error tables", ok, detail)


def criterion_3():
    r = np.random.default_rng(2024)
    nus = r.uniform(0.55, 8.0, 20).tolist()
    xs = np.exp(r.uniform(math.log(0.01), math.log(60.0), 20)).tolist()
    worst = 0.0
    for nu, x in zip(nus, xs):
        pairs = [
            (integral_i(Params(nu, 0.0, 1.0, x)).value, i_integral_tilt_one(nu, x).value),
            (integral_k(Params(nu, 0.0, 1.0, x)).value, k_integral_tilt_one(nu, x).value),
            (integral_k(Params(nu, 1.0, 0.0, x)).value, k_integral_shift_one(nu, x).value),
        ]
        for q, c in pairs:
            worst = max(worst, abs(q - c) / abs(c))
    return report(3, "closed-form oracles", worst <= 1e-10,
                  f"20 points x 3 forms, max relative difference {worst:.1e}")


def criterion_4():
    t0 = time.perf_counter()
    bad = []
    flagged = 0
    total = 0
    for ineq in CERTIFIED:
        rep = verify_inequality(ineq, default_grid(ineq))
        total += rep.points_checked
        flagged += len(rep.flagged)
        if rep.violations:
            combos = sorted({(v.params.nu, v.params.n) for v in rep.violations})
            bad.append(f"{ineq.value}: {len(rep.violations)} at (nu,n)={combos}")
    dt = time.perf_counter() - t0
    ok = not bad and not flagged and dt < 300.0
    detail = f"{len(CERTIFIED)} ids, {total} points, {flagged} flagged, {dt:.1f}s"
    detail += "; violations: " + "; ".join(bad) if bad else "; no violations"
    return report(4, "default-grid certification", ok, detail)


def criterion_5():
    cases = [(I.BK3, nu, 1.0, 0.0) for nu in (-0.25, 0.0, 1.0, 2.5)]
    cases += [(ineq, -(n + 1) / 2, n, 0.0) for ineq in (I.BI2, I.BI3) for n in (-0.5, 0.0, 0.5, 0.9)]
    cases += [(ineq, -0.5, 1.0, g) for ineq in (I.BK4, I.BK6) for g in (0.25, 0.5, 0.9)]
    worst = 0.0
    for ineq, nu, n, g in cases:
        for x in (0.5, 1.0, 5.0, 20.0):
            p = Params(nu, n, g, x)
            assert check_domain(ineq, p) == "equality"
            b = bound_value(ineq, p).value
            q = p.replace(**INEQUALITIES[ineq].target)
            t = (integral_k if INEQUALITIES[ineq].family == "K" else integral_i)(q, 1e-12).value
            worst = max(worst, abs(b - t) / abs(t))
    return report(5, "equality cases", worst <= 1e-9,
                  f"{len(cases) * 4} points, max relative gap {worst:.1e}")


def _ratios(ineq):
    grid = GridSpec(TIGHT_NUS, TIGHT_NS, TIGHT_GAMMAS, (1e-3, 10.0, 50.0))
    rep = verify_inequality(ineq, grid)
    by = {}
    for r in rep.records:
        if r.status == "holds" and r.target:
            p = r.params
            by.setdefault((p.nu, p.n, p.gamma), {})[p.x] = r.bound / r.target
    return by


def criterion_6():
    bad = []
    checked = 0
    for ineq, info in INEQUALITIES.items():
        if not info.tight_at_infinity or ineq is I.CONJ_BK100:
            continue
        by = _ratios(ineq)
        for key, rs in by.items():
            if 10.0 not in rs or 50.0 not in rs:
                continue
            checked += 1
            r10, r50 = rs[10.0], rs[50.0]
            if not (abs(r50 - 1) <= 0.1 and abs(r50 - 1) < abs(r10 - 1)):
                bad.append(f"{ineq.value}{key}: r(10)={r10:.4f} r(50)={r50:.4f}")
        if ineq in (I.BK2, I.BI3):
            for key, rs in by.items():
                if 1e-3 not in rs or not info.tight_at_zero(Params(*key, 1.0), None):
                    continue
                checked += 1
                if abs(rs[1e-3] - 1) > 0.05:
                    bad.append(f"{ineq.value}{key}: r(1e-3)={rs[1e-3]:.4g}")
    detail = f"{checked} checks, {len(bad)} outside tolerance"
    if bad:
        detail += ": " + "; ".join(bad)
    return report(6, "tightness", not bad, detail)


def criterion_7():
    rng = np.random.default_rng(7)
    size = 1000
    nus = rng.uniform(1.0, 10.0, size)
    xs = np.exp(rng.uniform(math.log(0.1), math.log(100.0), size))
    fails = {}

    def fail(name):
        fails[name] = fails.get(name, 0) + 1

    for nu, x in zip(nus.tolist(), xs.tolist()):
        i_m, i_0, i_p = (bessel_i(nu + d, x, scaled=True).value for d in (-1, 0, 1))
        k_m, k_0, k_p = (bessel_k(nu + d, x, scaled=True).value for d in (-1, 0, 1))
        if abs(i_p - i_m + 2 * nu / x * i_0) > 1e-10 * i_m:
            fail("I recurrence")
        if abs(k_p - k_m - 2 * nu / x * k_0) > 1e-10 * k_p:
            fail("K recurrence")
        h = 1e-5 * x
        fd_i = (bessel_i(nu, x + h, scaled=True).value * math.exp(h) / (x + h) ** nu
                - bessel_i(nu, x - h, scaled=True).value * math.exp(-h) / (x - h) ** nu) / (2 * h)
        if abs(fd_i - i_p / x ** nu) > 1e-6 * i_p / x ** nu:
            fail("I derivative")
        fd_k = (bessel_k(nu, x + h, scaled=True).value * math.exp(-h) / (x + h) ** nu
                - bessel_k(nu, x - h, scaled=True).value * math.exp(h) / (x - h) ** nu) / (2 * h)
        if abs(fd_k + k_p / x ** nu) > 1e-6 * k_p / x ** nu:
            fail("K derivative")
        if bessel_k(-nu, x, scaled=True).value != k_0:
            fail("K parity")
        if not (i_0 < i_m and k_0 >= k_m):
            fail("monotonicity")
        if x < 700:
            if not math.isclose(bessel_i(nu, x).value, i_0 * math.exp(x), rel_tol=1e-13):
                fail("scaled/unscaled")
    for nu in (0.0, 0.25, 0.5, 0.75):
        a = (4 * nu * nu - 1) / 800.0
        if not math.isclose(bessel_i(nu, 100.0, scaled=True).value, (1 - a) / math.sqrt(200 * math.pi), rel_tol=1e-3):
            fail("I asymptotic")
        if not math.isclose(bessel_k(nu, 100.0, scaled=True).value, (1 + a) * math.sqrt(math.pi / 200), rel_tol=1e-3):
            fail("K asymptotic")
    for nu in (1.0, 2.0, 3.5):
        x = 1e-4
        if not math.isclose(bessel_i(nu, x).value, (x / 2) ** nu / math.gamma(nu + 1), rel_tol=1e-3):
            fail("I small x")
        if not math.isclose(bessel_k(nu, x).value, math.gamma(nu) / 2 * (2 / x) ** nu, rel_tol=1e-3):
            fail("K small x")
    detail = f"{size} random points x 7 properties plus asymptotic spot checks"
    detail += "; failures: " + repr(fails) if fails else "; all hold"
    return report(7, "special-function properties", not fails, detail)


CONJ_CASES = [(4.0, 0.0), (3.0, 0.5), (2.5, 0.0)]


def criterion_8():
    harness_ok = True
    parts = []
    all_positive = True
    all_probed = True
    for nu, n in CONJ_CASES:
        rep = explore_conjecture(nu, n, logspace(0.1, 50.0, 20))
        probe = probe_conjecture_optimality(nu, n, 0.1)
        harness_ok &= not rep.flagged and not probe.flagged and rep.points_checked == 20
        all_positive &= rep.ok and rep.min_margin > 0
        all_probed &= bool(probe.violations)
        first = min((v.params.x for v in probe.violations), default=math.nan)
        parts.append(f"({nu:g},{n:g}): min margin {rep.min_margin:.2e}, probe negative from x={first:.3g}")
    ok = harness_ok and all_positive and all_probed
    return report(8, "conjecture exploration (EXPLORATORY)", ok, "; ".join(parts)), harness_ok


# ---------------------------------------------------------------------------

def test_criterion_1_cnun():
    assert criterion_1()


@pytest.mark.xfail(strict=True, reason="upper relative errors for nu=2.5 differ from the reference row; see README")
def test_criterion_2_tables():
    assert criterion_2()


def test_criterion_3_closed_forms():
    assert criterion_3()


@pytest.mark.xfail(strict=True, reason="LEM_A1 fails inside its hypotheses for n > 1/2; see README")
def test_criterion_4_certification():
    assert criterion_4()


def test_criterion_5_equality():
    assert criterion_5()


@pytest.mark.xfail(strict=True, reason="finite-x tightness proxy misses for BI2/BI3/DOB22_U; "
                                       "BK2 small-x claim needs nu + n > 2; see README")
def test_criterion_6_tightness():
    assert criterion_6()


def test_criterion_7_special_functions():
    assert criterion_7()


def test_criterion_8_conjecture():
    # the conjecture's status is reported, only harness errors fail the suite
    _, harness_ok = criterion_8()
    assert harness_ok


if __name__ == "__main__":
    results = [criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(),
               criterion_6(), criterion_7(), criterion_8()[0]]
    sys.exit(0 if all(results) else 1)
