"""Adaptive quadrature for the two integral families

    J_I(x) = int_0^x exp(-gamma t) I_{nu+n}(t) / t^nu dt
    J_K(x) = int_x^inf exp(gamma t) K_{nu+n}(t) / t^nu dt

plus the closed forms used to cross-check them.

Integrands are assembled from scaled Bessel values and a single exponential
factor, so nothing overflows before the final result does. Panels use a
15-point Gauss-Kronrod rule (compiled kernel when available) driven by global
adaptive bisection.
"""
from __future__ import annotations

import heapq
import math
from typing import Callable, Sequence

from ._core import EPS, kernels
from ._types import EvalResult, Params
from .errors import ConvergenceError, DomainError
from .special import bessel_i, bessel_k, hyp1f2, rgamma

__all__ = [
    "DEFAULT_REL_TOL",
    "integral_i",
    "integral_k",
    "integral_i_sweep",
    "integral_k_sweep",
    "integral_k_scaled",
    "closed_form_antiderivatives",
    "i_antiderivative",
    "k_antiderivative",
    "i_integral_tilt_one",
    "k_integral_tilt_one",
    "i_integral_shift_one",
    "k_integral_shift_one",
    "brute_force_integral",
]

DEFAULT_REL_TOL = 1e-10
MAX_PANELS = 4000
_SQRT_HALF_PI = math.sqrt(0.5 * math.pi)


def _check_tol(rel_tol: float) -> None:
    if not 1e-14 <= rel_tol <= 1e-3:
        raise DomainError(f"rel_tol must lie in [1e-14, 1e-3], got {rel_tol}", "1e-14 <= rel_tol <= 1e-3")


def _breakpoints(a: float, b: float) -> list[float]:
    # geometric spacing resolves integrands that vary on the scale of t
    if a > 0.0 and b / a > 4.0:
        pts = [a]
        t = 4.0 * a
        while t < b:
            pts.append(t)
            t *= 4.0
        pts.append(b)
        if len(pts) > 2 and (pts[-1] - pts[-2]) < 0.25 * (pts[-2] - pts[-3]):
            del pts[-2]
        return pts
    return [a, b]


def _adaptive(panel: Callable[[float, float], tuple], a: float, b: float, rel_tol: float,
              abs_tol: float = 0.0) -> tuple[float, float]:
    """Global adaptive GK15 on [a, b]; returns (value, error bound)."""
    if b <= a:
        return 0.0, 0.0
    heap = []
    pts = _breakpoints(a, b)
    for lo, hi in zip(pts, pts[1:]):
        r, e, _ = panel(lo, hi)
        heap.append((-e, lo, hi, r))
    heapq.heapify(heap)
    total = math.fsum(item[3] for item in heap)
    err = sum(-item[0] for item in heap)
    while True:
        if not math.isfinite(total) or not math.isfinite(err):
            raise ConvergenceError("integrand produced a non-finite value",
                                   EvalResult(total, math.inf))
        if err <= max(rel_tol * abs(total), abs_tol):
            # running sums drift; confirm with exact sums before returning
            total = math.fsum(item[3] for item in heap)
            err = math.fsum(-item[0] for item in heap)
            if err <= max(rel_tol * abs(total), abs_tol):
                return total, err
        if len(heap) >= MAX_PANELS:
            raise ConvergenceError(f"adaptive quadrature hit {MAX_PANELS} panels on [{a}, {b}]",
                                   EvalResult(total, err))
        neg_e, lo, hi, r = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise ConvergenceError("panel width reached machine resolution", EvalResult(total, err))
        r1, e1, _ = panel(lo, mid)
        r2, e2, _ = panel(mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, r1))
        heapq.heappush(heap, (-e2, mid, hi, r2))
        total += r1 + r2 - r
        err += e1 + e2 + neg_e


# ---------------------------------------------------------------------------
# I-family
# ---------------------------------------------------------------------------

def _i_head(nu: float, order: float, gamma: float, delta: float) -> tuple[float, float]:
    """Termwise integral of the integrand's power series over [0, delta].

    The integrand is sum_{k,j} (t/2)^{order+2k} / (k! Gamma(order+k+1))
    * (-gamma t)^j / j! * t^{-nu}; each monomial t^{n+2k+j} integrates exactly.
    """
    n = order - nu
    q = 0.25 * delta * delta
    pre = math.exp((n + 1.0) * math.log(delta) - order * math.log(2.0))
    gd = -gamma * delta
    total = 0.0
    tabs = 0.0
    a_k = 1.0
    for k in range(60):
        if k:
            a_k *= q / k
        ak = a_k * rgamma(order + k + 1.0)
        g_j = 1.0
        row = 0.0
        row_abs = 0.0
        for j in range(400):
            if j:
                g_j *= gd / j
            term = ak * g_j / (n + 1.0 + 2 * k + j)
            row += term
            row_abs += abs(term)
            if j > abs(gd) and abs(term) <= 1e-18 * row_abs:
                break
        total += row
        tabs += row_abs
        if abs(row_abs) <= 1e-18 * tabs and k > 1:
            break
    return pre * total, pre * tabs * 40.0 * EPS + abs(pre * total) * 4.0 * EPS


def _i_panel(nu, order, gamma, shift):
    def panel(lo, hi):
        return kernels.gk15_i(lo, hi, nu, order, gamma, shift)
    return panel


def _i_shift(c: float, lo: float, hi: float) -> float:
    # makes exp(c t - shift) <= 1 on the panel
    return max(c * lo, c * hi)


def integral_i_sweep(nu: float, n: float, gamma: float, xs: Sequence[float],
                     rel_tol: float = DEFAULT_REL_TOL) -> list[EvalResult]:
    """J_I at every point of the strictly increasing sequence ``xs``.

    Pieces between consecutive points are integrated once and accumulated.
    """
    _check_tol(rel_tol)
    xs = [float(x) for x in xs]
    if not xs:
        return []
    for name, v in (("nu", nu), ("n", n), ("gamma", gamma)):
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite", f"{name} finite")
    if not n > -1.0:
        raise DomainError(f"I-family integral diverges at 0 for n={n}", "n > -1")
    if not xs[0] > 0.0:
        raise DomainError("x must be positive", "x > 0")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise DomainError("xs must be strictly increasing", "xs increasing")
    order = nu + n
    c = 1.0 - gamma
    delta = 1e-2 * min(xs[0], 1.0)
    head, head_err = _i_head(nu, order, gamma, delta)
    # pieces carry true (unshifted) values; an exponent above ~709 overflows
    out = []
    acc = [head]
    acc_err = head_err
    lo = delta
    for x in xs:
        s = _i_shift(c, lo, x)
        if s > 705.0:
            raise OverflowError(f"I-family integral at x={x} exceeds the floating range")
        piece, perr = _adaptive(_i_panel(nu, order, gamma, s), lo, x, 0.5 * rel_tol)
        f = math.exp(s)
        acc.append(piece * f)
        acc_err += perr * f
        value = math.fsum(acc)
        if math.isinf(value):
            raise OverflowError(f"I-family integral at x={x} exceeds the floating range")
        out.append(EvalResult(value, acc_err + 2.0 * EPS * abs(value)))
        lo = x
    return out


def integral_i(params: Params, rel_tol: float = DEFAULT_REL_TOL) -> EvalResult:
    """int_0^x exp(-gamma t) I_{nu+n}(t) / t^nu dt, requires n > -1."""
    return integral_i_sweep(params.nu, params.n, params.gamma, [params.x], rel_tol)[0]


# ---------------------------------------------------------------------------
# K-family
# ---------------------------------------------------------------------------

def _k_tail_bound(nu: float, order: float, c: float, x: float, t: float) -> float:
    """Bound on int_t^inf exp(-c (u - x)) e^u K_order(u) u^-nu du, for c > 0.

    sqrt(u) e^u K_mu(u) is monotone in u and tends to sqrt(pi/2), so it is
    bounded on [t, inf) by the larger of its value at t and the limit.
    """
    a = max(kernels.bessel_k_scaled(order, t)[0] * math.sqrt(t), _SQRT_HALF_PI)
    p = -nu - 0.5
    rate = c - max(p, 0.0) / t
    if rate <= 0.0:
        return math.inf
    return a * math.exp(-c * (t - x) + p * math.log(t)) / rate


def _k_tail_asymptotic(nu: float, order: float, t: float) -> tuple[float, float]:
    """int_t^inf e^u K_order(u) u^-nu du for the untilted case, nu > 1/2.

    Integrates the large-argument expansion termwise. For real argument the
    remainder after l >= |order| - 1/2 terms is bounded by the first omitted
    term, so the returned error is rigorous.
    """
    mu2 = 4.0 * order * order
    coef = _SQRT_HALF_PI
    total = 0.0
    kmin = max(0, int(math.ceil(abs(order) - 0.5)))
    for k in range(200):
        term = coef * math.exp((0.5 - nu - k) * math.log(t)) / (nu - 0.5 + k)
        if k > kmin and abs(term) <= 1e-17 * abs(total):
            return total, abs(term) + 4.0 * EPS * abs(total)
        total += term
        coef *= (mu2 - (2 * k + 1) ** 2) / (8.0 * (k + 1))
    return total, abs(term) + 4.0 * EPS * abs(total)


def _k_panel(nu, order, gamma, shift):
    def panel(lo, hi):
        return kernels.gk15_k(lo, hi, nu, order, gamma, shift)
    return panel


def _k_from(nu: float, order: float, gamma: float, x: float, rel_tol: float) -> tuple[float, float]:
    """J_K(x) in units of exp(-(1 - gamma) x): returns (scaled value, error)."""
    c = 1.0 - gamma
    panel = _k_panel(nu, order, gamma, c * x)
    if c == 0.0:
        t_end = max(4.0 * x, x + 40.0, 2.0 * order * order + 40.0)
        body, berr = _adaptive(panel, x, t_end, 0.5 * rel_tol)
        tail, terr = _k_tail_asymptotic(nu, order, t_end)
        return body + tail, berr + terr
    t_end = x + max(40.0, 40.0 / c)
    p = -nu - 0.5
    if p > 0.0:
        t_end = max(t_end, 2.0 * p / c)
    body, berr = _adaptive(panel, x, t_end, 0.5 * rel_tol)
    while _k_tail_bound(nu, order, c, x, t_end) > 0.25 * rel_tol * abs(body):
        t_new = x + 2.0 * (t_end - x)
        extra, eerr = _adaptive(panel, t_end, t_new, 0.5 * rel_tol, abs_tol=0.25 * rel_tol * abs(body))
        body += extra
        berr += eerr
        t_end = t_new
        if t_end > 1e8:
            raise ConvergenceError("K-family tail did not fall below tolerance",
                                   EvalResult(body, math.inf))
    # one extra doubling as a safety margin; the remainder is then bounded
    t_new = x + 2.0 * (t_end - x)
    extra, eerr = _adaptive(panel, t_end, t_new, 0.5 * rel_tol, abs_tol=0.25 * rel_tol * abs(body))
    body += extra
    berr += eerr + _k_tail_bound(nu, order, c, x, t_new)
    return body, berr


def _check_k(nu, n, gamma):
    for name, v in (("nu", nu), ("n", n), ("gamma", gamma)):
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite", f"{name} finite")
    if gamma > 1.0:
        raise DomainError(f"K-family integral diverges for gamma={gamma}", "gamma < 1")
    if gamma == 1.0 and not nu > 0.5:
        raise DomainError("K-family integral with gamma = 1 needs nu > 1/2", "gamma < 1 or nu > 1/2")


def integral_k_sweep(nu: float, n: float, gamma: float, xs: Sequence[float],
                     rel_tol: float = DEFAULT_REL_TOL) -> list[EvalResult]:
    """J_K at every point of the strictly increasing sequence ``xs``."""
    _check_tol(rel_tol)
    _check_k(nu, n, gamma)
    xs = [float(x) for x in xs]
    if not xs:
        return []
    if not xs[0] > 0.0:
        raise DomainError("x must be positive", "x > 0")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise DomainError("xs must be strictly increasing", "xs increasing")
    order = nu + n
    c = 1.0 - gamma
    tail, terr = _k_from(nu, order, gamma, xs[-1], rel_tol)
    # accumulate true values from the right; each piece is exp(-c lo) times
    # its shifted integral
    acc = [tail * math.exp(-c * xs[-1])]
    acc_err = terr * math.exp(-c * xs[-1])
    out = [EvalResult(acc[0], acc_err + 2.0 * EPS * abs(acc[0]))]
    for lo, hi in zip(reversed(xs[:-1]), reversed(xs[1:])):
        piece, perr = _adaptive(_k_panel(nu, order, gamma, c * lo), lo, hi, 0.5 * rel_tol)
        f = math.exp(-c * lo)
        acc.append(piece * f)
        acc_err += perr * f
        value = math.fsum(acc)
        if math.isinf(value):
            raise OverflowError(f"K-family integral at x={lo} exceeds the floating range")
        out.append(EvalResult(value, acc_err + 2.0 * EPS * abs(value)))
    out.reverse()
    return out


def integral_k(params: Params, rel_tol: float = DEFAULT_REL_TOL) -> EvalResult:
    """int_x^inf exp(gamma t) K_{nu+n}(t) / t^nu dt, requires gamma < 1.

    gamma = 1 is accepted when nu > 1/2, where the integrand still decays
    algebraically.
    """
    return integral_k_sweep(params.nu, params.n, params.gamma, [params.x], rel_tol)[0]


def integral_k_scaled(params: Params, rel_tol: float = DEFAULT_REL_TOL) -> EvalResult:
    """exp((1 - gamma) x) times the K-family integral; never underflows."""
    _check_tol(rel_tol)
    _check_k(params.nu, params.n, params.gamma)
    v, err = _k_from(params.nu, params.order, params.gamma, params.x, rel_tol)
    return EvalResult(v, err + 2.0 * EPS * abs(v))


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def _prod_err(*pairs: tuple[float, float]) -> float:
    """Relative error of a product given (value, abs_err) factors."""
    return sum(e / abs(v) for v, e in pairs if v != 0.0)


def i_antiderivative(nu: float, x: float) -> EvalResult:
    """int_0^x I_nu(t) / t^nu dt via 1F2(1/2; 3/2, nu+1; x^2/4), nu > -1."""
    if not nu > -1.0:
        raise DomainError(f"antiderivative of I_nu/t^nu needs nu > -1, got {nu}", "nu > -1")
    if x < 0.0:
        raise DomainError("x must be >= 0", "x >= 0")
    if x == 0.0:
        return EvalResult(0.0, 0.0)
    f = hyp1f2(0.5, 1.5, nu + 1.0, 0.25 * x * x)
    pre = x * math.pow(2.0, -nu) * rgamma(nu + 1.0)
    v = pre * f.value
    return EvalResult(v, abs(v) * (f.abs_error_bound / abs(f.value) + (abs(nu) + 12.0) * EPS))


def k_antiderivative(nu: float, x: float) -> EvalResult:
    """Antiderivative G(x) of K_nu(t) / t^nu built from two 1F2 series.

    Defined for non-integer nu away from 1/2, 3/2, 5/2, ...; for nu < 1/2 it
    satisfies G(0) = 0, so G(x) = int_0^x K_nu(t) / t^nu dt. Only differences
    of G are meaningful in general.
    """
    if not x > 0.0:
        raise DomainError("x must be positive", "x > 0")
    if nu == math.floor(nu):
        raise DomainError(f"closed form needs non-integer nu, got {nu}", "nu not an integer")
    if nu - 0.5 == math.floor(nu - 0.5) and nu >= 0.5:
        raise DomainError(f"closed form is singular at nu={nu}", "nu not in {1/2, 3/2, 5/2, ...}")
    z = 0.25 * x * x
    f1 = hyp1f2(0.5 - nu, 1.5 - nu, 1.0 - nu, z)
    f2 = hyp1f2(0.5, 1.5, nu + 1.0, z)
    t1 = math.exp(nu * math.log(4.0) - 2.0 * nu * math.log(x)) / (2.0 * nu - 1.0) * rgamma(1.0 - nu) * f1.value
    t2 = rgamma(nu + 1.0) * f2.value
    pre = -math.pi * x * math.pow(2.0, -nu - 1.0) / kernels.sinpi(nu)
    v = pre * (t1 + t2)
    gerr = (abs(nu) + 12.0) * EPS
    err = abs(pre) * (abs(t1) * (_prod_err((f1.value, f1.abs_error_bound)) + gerr)
                      + abs(t2) * (_prod_err((f2.value, f2.abs_error_bound)) + gerr))
    return EvalResult(v, err + 4.0 * EPS * abs(v))


def i_integral_tilt_one(nu: float, x: float) -> EvalResult:
    """int_0^x e^-t I_nu(t) / t^nu dt in closed form; nu not in {1/2, 0, -1, ...}."""
    if nu == 0.5 or (nu <= 0.0 and nu == math.floor(nu)):
        raise DomainError(f"closed form excludes nu={nu}", "nu not in {1/2, 0, -1, -2, ...}")
    a = bessel_i(nu, x, scaled=True)
    b = bessel_i(nu - 1.0, x, scaled=True)
    d = 2.0 * nu - 1.0
    c0 = math.pow(2.0, 1.0 - nu) * rgamma(nu) / d
    w = math.exp((1.0 - nu) * math.log(x)) / d
    v = c0 - w * (a.value + b.value)
    err = abs(c0) * (abs(nu) + 12.0) * EPS + abs(w) * (a.abs_error_bound + b.abs_error_bound) \
        + 4.0 * EPS * (abs(c0) + abs(w * (a.value + b.value)))
    return EvalResult(v, err)


def k_integral_tilt_one(nu: float, x: float) -> EvalResult:
    """int_x^inf e^t K_nu(t) / t^nu dt in closed form; nu > 1/2."""
    if not nu > 0.5:
        raise DomainError(f"closed form needs nu > 1/2, got {nu}", "nu > 1/2")
    a = bessel_k(nu, x, scaled=True)
    b = bessel_k(nu - 1.0, x, scaled=True)
    w = math.exp((1.0 - nu) * math.log(x)) / (2.0 * nu - 1.0)
    v = w * (a.value + b.value)
    return EvalResult(v, abs(w) * (a.abs_error_bound + b.abs_error_bound) + 4.0 * EPS * abs(v))


def i_integral_shift_one(nu: float, x: float) -> EvalResult:
    """int_0^x I_{nu+1}(t) / t^nu dt = I_nu(x)/x^nu - 1/(2^nu Gamma(nu+1)), nu > -1."""
    if not nu > -1.0:
        raise DomainError(f"closed form needs nu > -1, got {nu}", "nu > -1")
    a = bessel_i(nu, x)
    xp = math.pow(x, -nu)
    lim = math.pow(2.0, -nu) * rgamma(nu + 1.0)
    v = a.value * xp - lim
    return EvalResult(v, a.abs_error_bound * xp + 8.0 * EPS * (abs(a.value * xp) + abs(lim)))


def k_integral_shift_one(nu: float, x: float) -> EvalResult:
    """int_x^inf K_{nu+1}(t) / t^nu dt = K_nu(x) / x^nu."""
    a = bessel_k(nu, x)
    xp = math.pow(x, -nu)
    v = a.value * xp
    return EvalResult(v, a.abs_error_bound * xp + 2.0 * EPS * abs(v))


def closed_form_antiderivatives(params: Params, family: str = "I") -> EvalResult:
    """Untilted closed form for the n = 0 integrals.

    ``family="I"`` gives int_0^x I_nu/t^nu; ``family="K"`` gives the K
    antiderivative G(x) (see :func:`k_antiderivative`). ``gamma`` and ``n``
    must be zero.
    """
    if params.gamma != 0.0 or params.n != 0.0:
        raise DomainError("closed forms cover gamma = 0 and n = 0 only", "gamma = 0 and n = 0")
    if family.upper() == "I":
        return i_antiderivative(params.nu, params.x)
    if family.upper() == "K":
        return k_antiderivative(params.nu, params.x)
    raise ValueError(f"family must be 'I' or 'K', got {family!r}")


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def _simpson_richardson(f: Callable[[float], float], a: float, b: float, tol: float,
                        max_level: int = 22) -> tuple[float, float]:
    n = 16
    h = (b - a) / n
    ends = f(a) + f(b)
    odd = math.fsum(f(a + i * h) for i in range(1, n, 2))
    even = math.fsum(f(a + i * h) for i in range(2, n, 2))
    s_prev = h / 3.0 * (ends + 4.0 * odd + 2.0 * even)
    r_prev = None
    for _ in range(max_level):
        even += odd
        n *= 2
        h = (b - a) / n
        odd = math.fsum(f(a + i * h) for i in range(1, n, 2))
        s = h / 3.0 * (ends + 4.0 * odd + 2.0 * even)
        r = s + (s - s_prev) / 15.0
        if r_prev is not None and abs(r - r_prev) <= tol * abs(r):
            return r, abs(r - r_prev)
        s_prev, r_prev = s, r
    raise ConvergenceError("composite Simpson did not reach tolerance", EvalResult(r_prev, math.inf))


def brute_force_integral(family: str, params: Params, tol: float = 1e-12) -> EvalResult:
    """Composite Simpson with Richardson doubling, for testing.

    Slow by design: it shares nothing with the adaptive path except the
    Bessel evaluations. The I-family needs n >= 0 (bounded integrand); the
    K-family is truncated where the analytic tail bound drops below tol/4.
    """
    nu, n, gamma, x = params.nu, params.n, params.gamma, params.x
    order = nu + n
    if family.upper() == "I":
        if n < 0.0:
            raise DomainError("brute force needs a bounded integrand, n >= 0", "n >= 0")
        if n == 0.0:
            f0 = math.pow(2.0, -order) * rgamma(order + 1.0)
        else:
            f0 = 0.0

        def f(t):
            if t == 0.0:
                return f0
            return math.exp(-gamma * t) * bessel_i(order, t).value * math.pow(t, -nu)

        # split near zero where t^n has a derivative singularity
        cut = min(x, 1.0) * 1e-3 if 0.0 < n < 2.0 else 0.0
        total, err = _simpson_richardson(f, cut, x, tol)
        if cut:
            head, herr = _i_head(nu, order, gamma, cut)
            total += head
            err += herr
        return EvalResult(total, err)
    if family.upper() == "K":
        _check_k(nu, n, gamma)
        c = 1.0 - gamma
        if c == 0.0:
            raise DomainError("brute force K-family needs gamma < 1", "gamma < 1")

        def g(t):
            return math.exp(-c * (t - x)) * bessel_k(order, t, scaled=True).value * math.pow(t, -nu)

        t_end = x + 10.0
        while True:
            body, _ = _simpson_richardson(g, x, t_end, tol)
            if _k_tail_bound(nu, order, c, x, t_end) <= 0.25 * tol * abs(body):
                break
            t_end = x + 2.0 * (t_end - x)
        f = math.exp(-c * x)
        return EvalResult(body * f, tol * abs(body) * f)
    raise ValueError(f"family must be 'I' or 'K', got {family!r}")
