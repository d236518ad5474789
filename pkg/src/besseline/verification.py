"""Grid certification of the bounds, the C_{nu,n} supremum and table reproduction.

A point is a violation only when its relative margin is more negative than
``-(tol + numerical error)``, so quadrature noise is never reported as a
counterexample. Points where an evaluation fails are flagged, not dropped.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np

from ._core import EPS, kernels
from ._types import EvalResult, Params
from .bounds import (INEQUALITIES, BoundSide, InequalityId, bound_value, check_domain,
                     cnun_cap, conjecture_alpha, conjecture_margins, corollary_terms,
                     relerr_majorant)
from .errors import ConvergenceError, DomainError
from .quadrature import integral_i, integral_i_sweep, integral_k_scaled, integral_k_sweep

log = logging.getLogger(__name__)

__all__ = [
    "GridSpec",
    "Violation",
    "PointRecord",
    "VerificationReport",
    "CnunResult",
    "TableRow",
    "default_grid",
    "verify_inequality",
    "compute_cnun",
    "reproduce_tables",
    "explore_conjecture",
    "probe_conjecture_optimality",
    "predicted_slope",
]

DEFAULT_TOL = 1e-9
QUAD_TOL = 1e-12


def logspace(lo: float, hi: float, num: int) -> list[float]:
    return [float(v) for v in np.geomspace(lo, hi, num)]


@dataclass(frozen=True)
class GridSpec:
    """Cartesian product of parameter values; ``xs`` must be strictly increasing."""

    nus: tuple[float, ...]
    ns: tuple[float, ...] = (0.0,)
    gammas: tuple[float, ...] = (0.0,)
    xs: tuple[float, ...] = tuple(logspace(1e-3, 50.0, 40))

    def __post_init__(self):
        for name in ("nus", "ns", "gammas", "xs"):
            vals = tuple(float(v) for v in getattr(self, name))
            if not vals:
                raise DomainError(f"grid field {name} is empty", f"{name} nonempty")
            object.__setattr__(self, name, vals)
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise DomainError("grid xs must be strictly increasing", "xs increasing")
        if self.xs[0] <= 0.0:
            raise DomainError("grid xs must be positive", "x > 0")

    def refined(self) -> GridSpec:
        """Same grid with a midpoint (geometric) inserted between consecutive xs."""
        xs = [self.xs[0]]
        for a, b in zip(self.xs, self.xs[1:]):
            xs += [math.sqrt(a * b), b]
        return GridSpec(self.nus, self.ns, self.gammas, tuple(xs))

    @property
    def size(self) -> int:
        return len(self.nus) * len(self.ns) * len(self.gammas) * len(self.xs)


_I_SIDE_NS = (-0.5, 0.0, 0.5, 0.9)
_K_SIDE_NS = (-1.0, 0.0, 0.5, 0.9)
_DEFAULT_NUS = (-0.25, 0.0, 0.5, 1.0, 2.5, 5.0, 10.0)
_DEFAULT_GAMMAS = (0.0, 0.25, 0.5, 0.9)


def default_grid(ineq: InequalityId | str | None = None, num_x: int = 40) -> GridSpec:
    """The standard sweep; n values depend on which integral family ``ineq`` uses."""
    ns = _I_SIDE_NS
    if ineq is not None:
        info = INEQUALITIES[_as_id(ineq)]
        if info.family == "K" or info.id in (InequalityId.LEM_A1, InequalityId.LEM_A2,
                                              InequalityId.SEGURA_RATIO):
            ns = _K_SIDE_NS
    return GridSpec(_DEFAULT_NUS, ns, _DEFAULT_GAMMAS, tuple(logspace(1e-3, 50.0, num_x)))


def _as_id(ineq) -> InequalityId:
    return InequalityId.parse(ineq) if isinstance(ineq, str) else InequalityId(ineq)


@dataclass(frozen=True)
class Violation:
    params: Params
    margin: float


@dataclass(frozen=True)
class PointRecord:
    params: Params
    status: str  # holds / equality / reversed / flagged
    target: float
    bound: float
    margin: float
    error: float  # relative numerical error attached to the margin
    note: str = ""


@dataclass
class VerificationReport:
    inequality: InequalityId
    points_checked: int = 0
    violations: list[Violation] = field(default_factory=list)
    min_margin: float = math.inf
    tightness: list[tuple[Params, float]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    flagged: list[tuple[Params, str]] = field(default_factory=list)
    records: list[PointRecord] = field(default_factory=list)
    exploratory: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        tag = "EXPLORATORY " if self.exploratory else ""
        return (f"{tag}{self.inequality.value}: {self.points_checked} points, "
                f"{len(self.violations)} violations, {len(self.flagged)} flagged, "
                f"min margin {self.min_margin:.3e}")


# ---------------------------------------------------------------------------
# target values
# ---------------------------------------------------------------------------

def _target_shape(ineq: InequalityId, p: Params) -> tuple[str, float, float]:
    """(family, n, gamma) of the quantity the bound of ``ineq`` is compared to."""
    info = INEQUALITIES[ineq]
    n = info.target.get("n", p.n)
    g = p.gamma if info.uses_gamma else 0.0
    return info.family, n, g


class _SweepCache:
    """Memoises integral sweeps keyed on (family, nu, n, gamma, xs)."""

    def __init__(self):
        self._store = {}

    def get(self, family: str, nu: float, n: float, gamma: float, xs: tuple[float, ...]):
        key = (family, nu, n, gamma, xs)
        if key not in self._store:
            fn = integral_k_sweep if family == "K" else integral_i_sweep
            self._store[key] = fn(nu, n, gamma, xs, QUAD_TOL)
        return self._store[key]


def _relative_margin(side: BoundSide, status: str, target: EvalResult,
                     bound: EvalResult) -> tuple[float, float]:
    """Signed relative margin in the inequality's favourable direction and its error."""
    scale = abs(target.value)
    if scale == 0.0:
        scale = abs(bound.value) or 1.0
    diff = bound.value - target.value if side is BoundSide.UPPER else target.value - bound.value
    if status == "reversed":
        diff = -diff
    err = (target.abs_error_bound + bound.abs_error_bound) / scale
    return diff / scale, err


def _predicate_margin(ineq: InequalityId, p: Params) -> tuple[float, float]:
    r = bound_value(ineq, p)
    if ineq is InequalityId.LEM_A1:
        # normalise by the size of the terms (scaled K avoids underflow)
        mu = p.nu + p.n
        scale = (2.0 * abs(mu - 2.0) * kernels.bessel_k_scaled(mu, p.x)[0]
                 + abs(2.0 * p.nu + p.n - 2.0) * kernels.bessel_k_scaled(mu - 1.0, p.x)[0]
                 + abs(2.0 - p.n) * kernels.bessel_k_scaled(mu - 3.0, p.x)[0]) * math.exp(-p.x)
        if scale == 0.0 or not math.isfinite(scale):
            return r.value, r.abs_error_bound
        return r.value / scale, r.abs_error_bound / scale
    return r.value, r.abs_error_bound


# ---------------------------------------------------------------------------
# asymptotic 1/x coefficients
# ---------------------------------------------------------------------------

def predicted_slope(ineq: InequalityId, p: Params) -> Optional[float]:
    """Predicted a in bound/integral = 1 + a/x + O(x^-2) as x -> infinity.

    Available for the untilted bounds with a single-exponential expansion:
    BK1, BK2, BK3, BI1, BI2, BI3. Returns None otherwise.
    """
    nu, n = p.nu, p.n
    mu = nu + n

    def k_coef(s):
        return (4.0 * s * s - 1.0) / 8.0

    def i_coef(s):
        return -(4.0 * s * s - 1.0) / 8.0

    if ineq in (InequalityId.BK1, InequalityId.BK2, InequalityId.BK3):
        c_int = (4.0 * mu * mu - 8.0 * nu - 5.0) / 8.0
        if ineq is InequalityId.BK1:
            c_b = k_coef(mu - 2.0)
        elif ineq is InequalityId.BK3:
            c_b = k_coef(mu - 1.0)
        else:
            d = 2.0 * nu + n - 1.0
            c_b = (2.0 * (mu - 1.0) * k_coef(mu - 1.0) - (n - 1.0) * k_coef(mu - 3.0)) / d
        return c_b - c_int
    if ineq in (InequalityId.BI1, InequalityId.BI2, InequalityId.BI3):
        if ineq is InequalityId.BI1:
            mu = nu
        c_int = (nu + 0.5) - (4.0 * mu * mu - 1.0) / 8.0
        if ineq is InequalityId.BI1:
            c_b = i_coef(nu)
        elif ineq is InequalityId.BI2:
            c_b = i_coef(mu + 1.0)
        else:
            d = n + 1.0
            c_b = (2.0 * (mu + 1.0) * i_coef(mu + 1.0) - (2.0 * nu + n + 1.0) * i_coef(mu + 3.0)) / d
        return c_b - c_int
    return None


def _fit_slope(points: Sequence[tuple[float, float]]) -> Optional[float]:
    """Fit r - 1 = a/x + b/x^2 through the two largest-x points; return a."""
    if len(points) < 2:
        return None
    (x1, r1), (x2, r2) = points[-2], points[-1]
    return ((r2 - 1.0) * x2 * x2 - (r1 - 1.0) * x1 * x1) / (x2 - x1)


# ---------------------------------------------------------------------------
# verify_inequality
# ---------------------------------------------------------------------------

def _combos(ineq: InequalityId, grid: GridSpec):
    info = INEQUALITIES[ineq]
    ns = grid.ns if info.uses_n else (0.0,)
    gammas = grid.gammas if info.uses_gamma else (0.0,)
    seen = []
    for nu, n, g in product(grid.nus, ns, gammas):
        if (nu, n, g) not in seen:
            seen.append((nu, n, g))
    return seen


def _thread_count(threads: Optional[int]) -> int:
    cap = os.environ.get("BESSELINE_THREADS")
    n = threads if threads is not None else 1
    if cap:
        try:
            n = min(n if threads is not None else int(cap), int(cap))
        except ValueError:
            log.warning("ignoring non-integer BESSELINE_THREADS=%r", cap)
    return max(1, n)


def _check_combo(ineq: InequalityId, nu: float, n: float, g: float, xs: tuple[float, ...],
                 tol: float, c: Optional[float], cache: _SweepCache):
    info = INEQUALITIES[ineq]
    admissible = []
    for x in xs:
        p = Params(nu, n, g, x)
        try:
            status = check_domain(ineq, p, c)
        except DomainError:
            continue
        admissible.append((p, status))
    if not admissible:
        return []

    records = []
    targets = None
    if info.family in ("K", "I"):
        fam, tn, tg = _target_shape(ineq, admissible[0][0])
        try:
            targets = cache.get(fam, nu, tn, tg, tuple(p.x for p, _ in admissible))
        except (ConvergenceError, OverflowError, DomainError) as exc:
            return [PointRecord(p, "flagged", math.nan, math.nan, math.nan, math.inf, str(exc))
                    for p, _ in admissible]

    for idx, (p, status) in enumerate(admissible):
        try:
            if info.side is BoundSide.PREDICATE:
                margin, err = _predicate_margin(ineq, p)
                records.append(PointRecord(p, status, math.nan, math.nan, margin, err))
                continue
            if info.family == "F" or info.family == "R":
                terms = corollary_terms(p.nu, p.x)
                if info.family == "R":
                    worst = max(terms.relerr_lower, terms.relerr_upper)
                    maj = relerr_majorant(p.nu, p.x)
                    target = EvalResult(worst, worst * 1e-12 + terms.value_relerr * 4.0)
                    bnd = EvalResult(maj, 8.0 * EPS * maj)
                else:
                    f = terms.value
                    target = EvalResult(f, f * terms.value_relerr)
                    b = terms.lower if ineq is InequalityId.DOB22_L else terms.upper
                    bnd = EvalResult(b, 1e-14 * abs(b))
            else:
                target = targets[idx]
                bnd = bound_value(ineq, p, c)
            margin, err = _relative_margin(info.side, status, target, bnd)
            records.append(PointRecord(p, status, target.value, bnd.value, margin, err))
        except (ConvergenceError, OverflowError, DomainError, ZeroDivisionError) as exc:
            records.append(PointRecord(p, "flagged", math.nan, math.nan, math.nan, math.inf, str(exc)))
    return records


def verify_inequality(ineq: InequalityId | str, grid: Optional[GridSpec] = None,
                      tol: float = DEFAULT_TOL, *, cnun: Optional[dict] = None,
                      threads: Optional[int] = None) -> VerificationReport:
    """Check ``ineq`` at every admissible point of ``grid``.

    ``cnun`` maps (nu, n) to C_{nu,n} for BI7/BI8; missing entries are computed
    with :func:`compute_cnun`. Equality points count as violations when their
    margin is not zero within tolerance.
    """
    ineq = _as_id(ineq)
    info = INEQUALITIES[ineq]
    grid = grid or default_grid(ineq)
    report = VerificationReport(ineq)
    cache = _SweepCache()
    combos = _combos(ineq, grid)
    cvals = {}
    if info.uses_c:
        cnun = dict(cnun or {})
        for nu, n, _ in combos:
            if (nu, n) not in cnun:
                try:
                    cnun[(nu, n)] = compute_cnun(nu, n).c_value
                except DomainError:
                    cnun[(nu, n)] = None
        cvals = cnun

    def run(combo):
        nu, n, g = combo
        c = cvals.get((nu, n)) if info.uses_c else None
        if info.uses_c and c is None:
            return []
        return _check_combo(ineq, nu, n, g, grid.xs, tol, c, cache)

    nthreads = _thread_count(threads)
    if nthreads > 1:
        with ThreadPoolExecutor(nthreads) as pool:
            results = list(pool.map(run, combos))
    else:
        results = [run(combo) for combo in combos]

    slope_notes = []
    for combo, recs in zip(combos, results):
        good = [r for r in recs if r.status != "flagged"]
        for r in recs:
            report.records.append(r)
            if r.status == "flagged":
                report.flagged.append((r.params, r.note))
                continue
            report.points_checked += 1
            threshold = tol + r.error
            if r.status == "equality":
                bad = abs(r.margin) > threshold
                report.min_margin = min(report.min_margin, -abs(r.margin))
            else:
                bad = r.margin < -threshold
                report.min_margin = min(report.min_margin, r.margin)
            if bad:
                report.violations.append(Violation(r.params, r.margin))
        if info.side is BoundSide.PREDICATE or not good:
            continue
        ratio = [(r.params, r.bound / r.target) for r in good if r.target]
        if ratio:
            report.tightness.append(ratio[0])
            if len(ratio) > 1:
                report.tightness.append(ratio[-1])
        pts = [(p.x, q) for p, q in ratio]
        pred = predicted_slope(ineq, good[-1].params)
        if pred is not None and good[-1].params.gamma == 0.0 and len(pts) >= 2 and pts[-1][0] >= 10.0:
            fit = _fit_slope(pts)
            if fit is not None and abs(fit - pred) > 0.2 * max(abs(pred), 1e-3):
                slope_notes.append(f"nu={combo[0]}, n={combo[1]}: fitted 1/x coefficient "
                                   f"{fit:.4g} vs predicted {pred:.4g}")
    if slope_notes:
        report.notes.append("1/x coefficient disagrees with asymptotics by more than 20%: "
                            + "; ".join(slope_notes))
    if info.uses_c:
        report.notes.append("C_{nu,n} values: " + ", ".join(
            f"({nu:g},{n:g})={c:.6g}" for (nu, n), c in sorted(cvals.items()) if c is not None))
    if report.points_checked == 0:
        report.min_margin = math.nan
        report.notes.append("no admissible grid points")
    return report


# ---------------------------------------------------------------------------
# C_{nu,n}
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CnunResult:
    nu: float
    n: float
    c_value: float
    argmax_x: float
    upper_cap: float
    warnings: tuple[str, ...] = ()


def _golden_max(f, a: float, b: float, xtol: float, max_iter: int = 200) -> tuple[float, float]:
    """Maximise a unimodal f on [a, b] until (b - a)/x < xtol."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if (b - a) <= xtol * 0.5 * (a + b):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def compute_cnun(nu: float, n: float, x_lo: float = 1e-3, x_hi: float = 200.0,
                 num: int = 400) -> CnunResult:
    """sup_x x^nu / I_{nu+n}(x) * int_0^x I_{nu+n}(t)/t^nu dt.

    A log-grid scan brackets the maximum, then golden-section search refines
    the argmax to |dx|/x < 1e-8.
    """
    if not n > -1.0:
        raise DomainError(f"C_(nu,n) needs n > -1, got {n}", "n > -1")
    if not nu > -0.5 * (n + 1.0):
        raise DomainError(f"C_(nu,n) needs nu > -(n+1)/2, got nu={nu}", "nu > -(n+1)/2")
    mu = nu + n
    xs = logspace(x_lo, x_hi, num)
    ints = integral_i_sweep(nu, n, 0.0, xs, QUAD_TOL)

    def ratio(x, j):
        # integral / (I_mu(x) x^-nu) with I scaled to keep e^x out of the way
        iscaled = kernels.bessel_i_scaled(mu, x)[0]
        return j * math.exp(nu * math.log(x) - x) / iscaled

    g = [ratio(x, r.value) for x, r in zip(xs, ints)]
    i = int(np.argmax(g))
    warnings = []
    if i == 0 or i == len(xs) - 1:
        warnings.append(f"maximum at grid endpoint x={xs[i]:.6g}; reporting grid maximum")
        return CnunResult(nu, n, g[i], xs[i], cnun_cap(nu, n), tuple(warnings))

    def gx(x):
        return ratio(x, integral_i(Params(nu, n, 0.0, x), 1e-13).value)

    xbest, gbest = _golden_max(gx, xs[i - 1], xs[i + 1], 1e-8)
    if gbest < g[i]:
        warnings.append("refinement did not improve on the grid maximum")
        xbest, gbest = xs[i], g[i]
    return CnunResult(nu, n, gbest, xbest, cnun_cap(nu, n), tuple(warnings))


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    nu: float
    x: float
    relerr_L: float
    relerr_U: float


def reproduce_tables(nus: Iterable[float], xs: Iterable[float]) -> list[TableRow]:
    """Relative errors |F - L|/F and |U - F|/F of the hypergeometric sandwich."""
    xs = list(xs)
    rows = []
    for nu in nus:
        for x in xs:
            t = corollary_terms(float(nu), float(x))
            rows.append(TableRow(float(nu), float(x), t.relerr_lower, t.relerr_upper))
    return rows


# ---------------------------------------------------------------------------
# conjecture
# ---------------------------------------------------------------------------

def explore_conjecture(nu: float, n: float, grid_x: Optional[Sequence[float]] = None,
                       beta: Optional[float] = None) -> VerificationReport:
    """Margins of the conjectured lower bound and of its derivative test.

    The report is EXPLORATORY: negative margins are listed as violations of
    the conjecture at that beta, never as failures of a proven result. Each
    record's ``margin`` is the bound margin; the derivative margin is in
    ``note``.
    """
    alpha = conjecture_alpha(nu, n)
    b = alpha if beta is None else float(beta)
    xs = list(grid_x) if grid_x is not None else logspace(0.1, 50.0, 20)
    report = VerificationReport(InequalityId.CONJ_BK100, exploratory=True)
    report.notes.append(f"EXPLORATORY: alpha={alpha:.12g}, beta={b:.12g}")
    equality = n == 1.0
    for x in xs:
        p = Params(nu, n, 0.0, x)
        try:
            m_bound, m_deriv = conjecture_margins(nu, n, x, beta=b)
            err = 1e-11
        except (ConvergenceError, OverflowError) as exc:
            report.flagged.append((p, str(exc)))
            continue
        report.points_checked += 1
        status = "equality" if equality else "holds"
        report.records.append(PointRecord(p, status, math.nan, math.nan, m_bound, err,
                                          f"deriv_margin={m_deriv:.10g}"))
        worst = min(m_bound, m_deriv) if not equality else -max(abs(m_bound), abs(m_deriv))
        report.min_margin = min(report.min_margin, worst)
        if equality:
            if abs(m_bound) > DEFAULT_TOL + err:
                report.violations.append(Violation(p, m_bound))
        elif worst < -(DEFAULT_TOL + err):
            report.violations.append(Violation(p, worst))
    return report


def probe_conjecture_optimality(nu: float, n: float, offset: float = 0.1,
                                grid_x: Optional[Sequence[float]] = None) -> VerificationReport:
    """Run :func:`explore_conjecture` with beta = alpha - offset on a wide grid.

    The conjecture asserts alpha is best possible, so some point should show
    a negative margin; the negative points are the report's violations.
    """
    xs = grid_x if grid_x is not None else logspace(0.1, 2000.0, 60)
    rep = explore_conjecture(nu, n, xs, beta=conjecture_alpha(nu, n) - offset)
    rep.notes.append(f"optimality probe with offset {offset}")
    return rep
