"""Closed-form bounds for the Bessel integral families, with their hypotheses.

Each :class:`InequalityId` carries a :class:`InequalityInfo` describing which
side of the integral the bound sits on, the hypotheses under which it holds,
the parameter sets where it becomes an equality and those where it reverses.
:func:`bound_value` evaluates the bound expression after checking those
hypotheses.

Notation: ``mu = nu + n`` is the Bessel order inside the integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from ._core import EPS, kernels
from ._types import EvalResult, Params
from .errors import DomainError
from .quadrature import integral_i
from .special import bessel_i, bessel_k, log_hyp1f2, rgamma

__all__ = [
    "InequalityId",
    "InequalityInfo",
    "BoundSide",
    "INEQUALITIES",
    "bound_value",
    "check_domain",
    "cnun_cap",
    "conjecture_alpha",
    "conjecture_alpha_prime",
    "lemma_predicates",
    "relerr_majorant",
    "corollary_terms",
    "CorollaryTerms",
    "conjecture_margins",
]

DENOM_GUARD = 1e-12


class InequalityId(str, Enum):
    BK1 = "BK1"
    BK3 = "BK3"
    BK2 = "BK2"
    BK4 = "BK4"
    BK6 = "BK6"
    BK5 = "BK5"
    BK_GammaLower = "BK_GammaLower"
    BI1 = "BI1"
    BI2 = "BI2"
    BI3 = "BI3"
    BI4 = "BI4"
    BI5 = "BI5"
    BI7 = "BI7"
    BI8 = "BI8"
    DOB22_L = "DOB22_L"
    DOB22_U = "DOB22_U"
    LEM_A1 = "LEM_A1"
    LEM_A2 = "LEM_A2"
    CONJ_BK100 = "CONJ_BK100"
    SEGURA_RATIO = "SEGURA_RATIO"
    NASELL_RATIO = "NASELL_RATIO"
    RELERR_MAJORANT = "RELERR_MAJORANT"

    @classmethod
    def parse(cls, text: str) -> InequalityId:
        for member in cls:
            if member.value.lower() == text.strip().lower():
                return member
        raise ValueError(f"unknown inequality {text!r}")


class BoundSide(str, Enum):
    LOWER = "lower"
    UPPER = "upper"
    PREDICATE = "predicate"  # margin of a standalone inequality, > 0 when it holds


Pred = Callable[[Params, float], bool]


@dataclass(frozen=True)
class InequalityInfo:
    id: InequalityId
    side: BoundSide
    family: Optional[str]  # "K", "I", "F" or None for predicates
    hypotheses: tuple[tuple[str, Pred], ...]
    uses_n: bool = True
    uses_gamma: bool = False
    uses_c: bool = False
    equality: Optional[Pred] = None
    equality_cases: str = ""
    reversal: Optional[Pred] = None
    tight_at_infinity: bool = False
    tight_at_zero: Optional[Pred] = None
    description: str = ""
    # order shift and tilt of the integral this bound is compared against
    target: dict = field(default_factory=dict)


def _sqrt2(n: float) -> float:
    return math.sqrt(2.0 * (1.0 - n))


_N_LT_1 = ("n < 1", lambda p, c: p.n < 1.0)
_N_GT_M1 = ("n > -1", lambda p, c: p.n > -1.0)
_GAMMA_01 = ("0 < gamma < 1", lambda p, c: 0.0 < p.gamma < 1.0)
_NU_GT_M1 = ("nu > -1", lambda p, c: p.nu > -1.0)
_NU_BI = ("nu > -(n+1)/2", lambda p, c: p.nu > -0.5 * (p.n + 1.0))
_NU_BK1 = ("nu > 5/2 - 2n", lambda p, c: p.nu > 2.5 - 2.0 * p.n)
_NU_BK2 = ("nu > (1-n)/2", lambda p, c: p.nu > 0.5 * (1.0 - p.n))
_NU_BK4 = ("nu >= 1/2 - n", lambda p, c: p.nu >= 0.5 - p.n)
_NU_HALF = ("nu > 1/2", lambda p, c: p.nu > 0.5)


def _eq_bk4(p, c):
    return p.n == 1.0 and p.nu == -0.5 and 0.0 < p.gamma < 1.0


def _rev_bk4(p, c):
    return p.n > 1.0 and p.nu <= 0.5 - p.n and 0.0 < p.gamma < 1.0


def _eq_bi(p, c):
    return p.n > -1.0 and p.nu == -0.5 * (p.n + 1.0)


def _tight0_bk2(p, c):
    return p.nu > 1.0 - p.n


_TABLE = [
    InequalityInfo(InequalityId.BK1, BoundSide.LOWER, "K", (_N_LT_1, _NU_BK1),
                   tight_at_infinity=True,
                   description="int_x^inf K_mu/t^nu > K_{mu-2}(x)/x^nu"),
    InequalityInfo(InequalityId.BK3, BoundSide.UPPER, "K", (_N_LT_1,),
                   equality=lambda p, c: p.n == 1.0, equality_cases="n = 1",
                   reversal=lambda p, c: p.n > 1.0, tight_at_infinity=True,
                   description="int_x^inf K_mu/t^nu < K_{mu-1}(x)/x^nu"),
    InequalityInfo(InequalityId.BK2, BoundSide.UPPER, "K", (_N_LT_1, _NU_BK2),
                   tight_at_infinity=True, tight_at_zero=_tight0_bk2,
                   description="int_x^inf K_mu/t^nu < two-term K_{mu-1}, K_{mu-3} combination"),
    InequalityInfo(InequalityId.BK4, BoundSide.UPPER, "K", (_GAMMA_01, _N_LT_1, _NU_BK4),
                   uses_gamma=True, equality=_eq_bk4, equality_cases="n = 1 and nu = -1/2",
                   reversal=_rev_bk4, tight_at_infinity=True,
                   description="tilted K integral < e^{gamma x}/(1-gamma) times untilted integral"),
    InequalityInfo(InequalityId.BK6, BoundSide.UPPER, "K", (_GAMMA_01, _N_LT_1, _NU_BK4),
                   uses_gamma=True, equality=_eq_bk4, equality_cases="n = 1 and nu = -1/2",
                   reversal=_rev_bk4, tight_at_infinity=True,
                   description="tilted K integral < e^{gamma x}/(1-gamma) K_{mu-1}(x)/x^nu"),
    InequalityInfo(InequalityId.BK5, BoundSide.UPPER, "K", (_GAMMA_01, _N_LT_1, _NU_BK2),
                   uses_gamma=True, tight_at_infinity=True,
                   description="tilted K integral < e^{gamma x}/(1-gamma) times the BK2 bound"),
    InequalityInfo(InequalityId.BK_GammaLower, BoundSide.LOWER, "K",
                   (("gamma > 0", lambda p, c: p.gamma > 0.0), _N_LT_1, _NU_BK1),
                   uses_gamma=True,
                   description="tilted K integral > e^{gamma x} K_{mu-2}(x)/x^nu"),
    InequalityInfo(InequalityId.BI1, BoundSide.LOWER, "I", (_NU_GT_M1,), uses_n=False,
                   tight_at_infinity=True, target={"n": 0.0},
                   description="int_0^x I_nu/t^nu > I_nu(x)/x^nu - 1/(2^nu Gamma(nu+1))"),
    InequalityInfo(InequalityId.BI2, BoundSide.LOWER, "I", (_N_GT_M1, _NU_BI),
                   equality=_eq_bi, equality_cases="nu = -(n+1)/2", tight_at_infinity=True,
                   description="int_0^x I_mu/t^nu > I_{mu+1}(x)/x^nu"),
    InequalityInfo(InequalityId.BI3, BoundSide.UPPER, "I", (_N_GT_M1, _NU_BI),
                   equality=_eq_bi, equality_cases="nu = -(n+1)/2", tight_at_infinity=True,
                   tight_at_zero=lambda p, c: True,
                   description="int_0^x I_mu/t^nu < two-term I_{mu+1}, I_{mu+3} combination"),
    InequalityInfo(InequalityId.BI4, BoundSide.LOWER, "I", (_GAMMA_01, _NU_GT_M1), uses_n=False,
                   uses_gamma=True, tight_at_infinity=True, target={"n": 0.0},
                   description="tilted I integral > bound through the untilted integral"),
    InequalityInfo(InequalityId.BI5, BoundSide.LOWER, "I", (_GAMMA_01, _NU_GT_M1), uses_n=False,
                   uses_gamma=True, tight_at_infinity=True, target={"n": 0.0},
                   description="tilted I integral > (e^{-gamma x} I_nu(x)/x^nu - 1/(2^nu Gamma(nu+1)))/(1-gamma)"),
    InequalityInfo(InequalityId.BI7, BoundSide.UPPER, "I",
                   (_N_GT_M1, _NU_BI, ("0 < gamma < 1/C", lambda p, c: 0.0 < p.gamma < 1.0 / c)),
                   uses_gamma=True, uses_c=True,
                   description="tilted I integral < e^{-gamma x}/(1 - C gamma) times untilted integral"),
    InequalityInfo(InequalityId.BI8, BoundSide.UPPER, "I",
                   (_N_GT_M1, _NU_BI, ("0 < gamma < 1/C", lambda p, c: 0.0 < p.gamma < 1.0 / c)),
                   uses_gamma=True, uses_c=True,
                   description="tilted I integral < e^{-gamma x}/(1 - C gamma) times the BI3 bound"),
    InequalityInfo(InequalityId.DOB22_L, BoundSide.LOWER, "F", (_NU_HALF,), uses_n=False,
                   tight_at_infinity=True, description="I_nu(x) < F_nu(x)"),
    InequalityInfo(InequalityId.DOB22_U, BoundSide.UPPER, "F", (_NU_HALF,), uses_n=False,
                   tight_at_infinity=True, tight_at_zero=lambda p, c: True,
                   description="F_nu(x) < 2 nu I_nu(x) - (2 nu - 1) I_{nu+2}(x)"),
    InequalityInfo(InequalityId.LEM_A1, BoundSide.PREDICATE, None, (_N_LT_1, _NU_BK1),
                   description="2(mu-2)K_mu - (2nu+n-2)K_{mu-1} + (2-n)K_{mu-3} > 0"),
    InequalityInfo(InequalityId.LEM_A2, BoundSide.PREDICATE, None,
                   (_N_LT_1, ("nu > 1 - 3n/2", lambda p, c: p.nu > 1.0 - 1.5 * p.n),
                    ("x >= 2(nu+n)", lambda p, c: p.x >= 2.0 * (p.nu + p.n))),
                   description="rational lower bound for a K ratio, for x beyond 2(nu+n)"),
    InequalityInfo(InequalityId.CONJ_BK100, BoundSide.LOWER, "K",
                   (_N_LT_1, ("nu >= 1 - n + sqrt(2(1-n))",
                              lambda p, c: p.n < 1.0 and p.nu >= 1.0 - p.n + _sqrt2(p.n))),
                   equality=lambda p, c: p.n == 1.0, equality_cases="n = 1",
                   tight_at_infinity=True,
                   description="conjectured: int_x^inf K_mu/t^nu > K_{mu-alpha}(x)/x^nu"),
    InequalityInfo(InequalityId.SEGURA_RATIO, BoundSide.PREDICATE, None,
                   (("nu > 3/2 - n", lambda p, c: p.nu > 1.5 - p.n),),
                   description="K_{mu-2}/K_{mu-1} > x/(mu - 3/2 + sqrt(x^2 + (mu-3/2)^2))"),
    InequalityInfo(InequalityId.NASELL_RATIO, BoundSide.PREDICATE, None, (_NU_GT_M1,), uses_n=False,
                   description="I_{nu+1}/I_nu > x/(2(nu+1) + x)"),
    InequalityInfo(InequalityId.RELERR_MAJORANT, BoundSide.UPPER, "R", (_NU_HALF,), uses_n=False,
                   description="common majorant of the relative errors of the F_nu(x) bounds"),
]

INEQUALITIES: dict[InequalityId, InequalityInfo] = {info.id: info for info in _TABLE}


def cnun_cap(nu: float, n: float) -> float:
    """The a-priori upper bound 2(nu + n + 1) on C_{nu,n}."""
    return 2.0 * (nu + n + 1.0)


def check_domain(ineq: InequalityId, p: Params, c: Optional[float] = None) -> str:
    """Classify ``p`` as 'holds', 'equality' or 'reversed'; raise DomainError otherwise."""
    info = INEQUALITIES[InequalityId(ineq)]
    if info.uses_c and c is None:
        c = cnun_cap(p.nu, p.n)
    if info.equality is not None and info.equality(p, c):
        return "equality"
    if info.reversal is not None and info.reversal(p, c):
        return "reversed"
    for text, pred in info.hypotheses:
        if not pred(p, c):
            raise DomainError(f"{info.id.value}: hypothesis '{text}' fails at "
                              f"nu={p.nu}, n={p.n}, gamma={p.gamma}, x={p.x}", text)
    return "holds"


def _guard(d: float, what: str) -> float:
    if abs(d) < DENOM_GUARD:
        raise DomainError(f"coefficient denominator {what} = {d:.3g} is too close to zero",
                          f"|{what}| >= {DENOM_GUARD}")
    return d


class _Terms:
    """Accumulate sum coef_i * f_i with a running absolute error bound."""

    def __init__(self):
        self.parts = []
        self.err = 0.0

    def add(self, coef: float, r: EvalResult) -> None:
        self.parts.append(coef * r.value)
        self.err += abs(coef) * r.abs_error_bound + 2.0 * EPS * abs(coef * r.value)

    def result(self, factor: float = 1.0) -> EvalResult:
        v = math.fsum(self.parts)
        err = self.err + 2.0 * EPS * abs(v)
        return EvalResult(factor * v, abs(factor) * err + 2.0 * EPS * abs(factor * v))


def _kx(s: float, p: Params) -> EvalResult:
    """K_s(x) / x^nu."""
    k = bessel_k(s, p.x)
    f = math.pow(p.x, -p.nu)
    return EvalResult(k.value * f, k.abs_error_bound * f + EPS * abs(k.value * f))


def _ix(s: float, p: Params) -> EvalResult:
    """I_s(x) / x^nu."""
    i = bessel_i(s, p.x)
    f = math.pow(p.x, -p.nu)
    return EvalResult(i.value * f, i.abs_error_bound * f + EPS * abs(i.value * f))


def _i_limit(nu: float) -> float:
    """lim_{t -> 0} I_nu(t)/t^nu = 1/(2^nu Gamma(nu+1))."""
    return math.pow(2.0, -nu) * rgamma(nu + 1.0)


def _bk2_terms(p: Params) -> _Terms:
    mu = p.nu + p.n
    d = _guard(2.0 * p.nu + p.n - 1.0, "2nu+n-1")
    t = _Terms()
    t.add(2.0 * (mu - 1.0) / d, _kx(mu - 1.0, p))
    t.add(-(p.n - 1.0) / d, _kx(mu - 3.0, p))
    return t


def _bi3_terms(p: Params) -> _Terms:
    mu = p.nu + p.n
    d = _guard(p.n + 1.0, "n+1")
    t = _Terms()
    t.add(2.0 * (mu + 1.0) / d, _ix(mu + 1.0, p))
    t.add(-(2.0 * p.nu + p.n + 1.0) / d, _ix(mu + 3.0, p))
    return t


def _untilted_k(p: Params) -> EvalResult:
    from .quadrature import integral_k
    return integral_k(p.replace(gamma=0.0), rel_tol=1e-12)


def _untilted_i(p: Params, n: float) -> EvalResult:
    return integral_i(p.replace(gamma=0.0, n=n), rel_tol=1e-12)


def _scale(r: EvalResult, factor: float) -> EvalResult:
    v = r.value * factor
    return EvalResult(v, abs(factor) * r.abs_error_bound + 4.0 * EPS * abs(v))


def conjecture_alpha(nu: float, n: float) -> float:
    """alpha_{nu,n} = nu + n - sqrt((nu+n)^2 - 2 nu - 1).

    Accepts the conjecture's domain (n < 1, nu >= 1 - n + sqrt(2(1-n))) and the
    equality case n = 1, nu >= -1/2 where it reduces to nu + 1 - |nu|.
    """
    _alpha_domain(nu, n)
    return nu + n - math.sqrt(_alpha_radicand(nu, n))


def conjecture_alpha_prime(nu: float, n: float) -> float:
    """The companion root alpha' = nu + n + sqrt((nu+n)^2 - 2 nu - 1)."""
    _alpha_domain(nu, n)
    return nu + n + math.sqrt(_alpha_radicand(nu, n))


def _alpha_radicand(nu, n):
    mu = nu + n
    # zero on the domain boundary; clamp rounding noise
    return max(mu * mu - 2.0 * nu - 1.0, 0.0)


def _alpha_domain(nu, n):
    if n == 1.0:
        return
    if not n < 1.0:
        raise DomainError(f"alpha needs n < 1 (or n = 1), got n={n}", "n < 1")
    lo = 1.0 - n + _sqrt2(n)
    if nu < lo * (1.0 - 4.0 * EPS):
        raise DomainError(f"alpha needs nu >= 1 - n + sqrt(2(1-n)) = {lo:.12g}, got {nu}",
                          "nu >= 1 - n + sqrt(2(1-n))")


def relerr_majorant(nu: float, x: float) -> float:
    """(2nu-1)(4(nu+1)(nu+2) + (4nu+6)x) / ((2(nu+1)+x)(2(nu+2)+x)), valid for x >= 0."""
    if not nu > 0.5:
        raise DomainError(f"majorant needs nu > 1/2, got {nu}", "nu > 1/2")
    if x < 0.0:
        raise DomainError("majorant needs x >= 0", "x >= 0")
    num = (2.0 * nu - 1.0) * (4.0 * (nu + 1.0) * (nu + 2.0) + (4.0 * nu + 6.0) * x)
    return num / ((2.0 * (nu + 1.0) + x) * (2.0 * (nu + 2.0) + x))


@dataclass(frozen=True)
class CorollaryTerms:
    """L, F, U of the hypergeometric sandwich, all multiplied by exp(-x)."""

    nu: float
    x: float
    lower: float
    value: float
    upper: float
    value_relerr: float

    @property
    def relerr_lower(self) -> float:
        return abs(self.value - self.lower) / self.value

    @property
    def relerr_upper(self) -> float:
        return abs(self.upper - self.value) / self.value


def corollary_terms(nu: float, x: float) -> CorollaryTerms:
    """Scaled L_nu, F_nu, U_nu with F_nu(x) = x^nu/(2^{nu-1}Gamma(nu)) 1F2(1/2; 3/2, nu; x^2/4)."""
    if not nu > 0.5:
        raise DomainError(f"corollary needs nu > 1/2, got {nu}", "nu > 1/2")
    if not x > 0.0:
        raise DomainError("x must be positive", "x > 0")
    logf, frel = log_hyp1f2(0.5, 1.5, nu, 0.25 * x * x)
    log_pre = nu * math.log(x) - (nu - 1.0) * math.log(2.0) - math.lgamma(nu)
    log_total = log_pre + logf - x
    f = math.exp(log_total)
    frel += EPS * (abs(log_total) + 20.0)
    i0 = kernels.bessel_i_scaled(nu, x)[0]
    i2 = kernels.bessel_i_scaled(nu + 2.0, x)[0]
    return CorollaryTerms(nu, x, i0, f, 2.0 * nu * i0 - (2.0 * nu - 1.0) * i2, frel)


def bound_value(ineq: InequalityId | str, p: Params, c: Optional[float] = None) -> EvalResult:
    """Evaluate the bound expression of ``ineq`` at ``p``.

    ``c`` is C_{nu,n} for BI7/BI8 and defaults to the cap 2(nu+n+1), which is
    always admissible but less sharp. Predicates (LEM_A*, *_RATIO) return
    their margin. DOB22_L/DOB22_U return L_nu(x) and U_nu(x) themselves.
    """
    ineq = InequalityId.parse(ineq) if isinstance(ineq, str) else ineq
    info = INEQUALITIES[ineq]
    if info.uses_c and c is None:
        c = cnun_cap(p.nu, p.n)
    check_domain(ineq, p, c)
    nu, n, g, x = p.nu, p.n, p.gamma, p.x
    mu = nu + n
    I = InequalityId

    if ineq is I.BK1:
        return _kx(mu - 2.0, p)
    if ineq is I.BK3:
        return _kx(mu - 1.0, p)
    if ineq is I.BK2:
        return _bk2_terms(p).result()
    if ineq is I.BK4:
        return _scale(_untilted_k(p), math.exp(g * x) / (1.0 - g))
    if ineq is I.BK6:
        return _scale(_kx(mu - 1.0, p), math.exp(g * x) / (1.0 - g))
    if ineq is I.BK5:
        return _bk2_terms(p).result(math.exp(g * x) / (1.0 - g))
    if ineq is I.BK_GammaLower:
        return _scale(_kx(mu - 2.0, p), math.exp(g * x))
    if ineq is I.CONJ_BK100:
        return _kx(mu - conjecture_alpha(nu, n), p)

    if ineq is I.BI1:
        t = _Terms()
        t.add(1.0, _ix(nu, p))
        t.add(-1.0, EvalResult(_i_limit(nu), 8.0 * EPS * _i_limit(nu)))
        return t.result()
    if ineq is I.BI2:
        return _ix(mu + 1.0, p)
    if ineq is I.BI3:
        return _bi3_terms(p).result()
    if ineq is I.BI4:
        eg = math.exp(-g * x)
        t = _Terms()
        t.add(eg, _untilted_i(p, 0.0))
        t.add(-(1.0 - eg), EvalResult(_i_limit(nu), 8.0 * EPS * _i_limit(nu)))
        return t.result(1.0 / (1.0 - g))
    if ineq is I.BI5:
        t = _Terms()
        t.add(math.exp(-g * x), _ix(nu, p))
        t.add(-1.0, EvalResult(_i_limit(nu), 8.0 * EPS * _i_limit(nu)))
        return t.result(1.0 / (1.0 - g))
    if ineq is I.BI7:
        d = _guard(1.0 - c * g, "1-C*gamma")
        return _scale(_untilted_i(p, n), math.exp(-g * x) / d)
    if ineq is I.BI8:
        d = _guard(1.0 - c * g, "1-C*gamma")
        return _bi3_terms(p).result(math.exp(-g * x) / d)

    if ineq is I.DOB22_L:
        return bessel_i(nu, x)
    if ineq is I.DOB22_U:
        t = _Terms()
        t.add(2.0 * nu, bessel_i(nu, x))
        t.add(-(2.0 * nu - 1.0), bessel_i(nu + 2.0, x))
        return t.result()
    if ineq is I.RELERR_MAJORANT:
        v = relerr_majorant(nu, x)
        return EvalResult(v, 8.0 * EPS * v)
    return lemma_predicates(ineq, p)


def lemma_predicates(ineq: InequalityId | str, p: Params) -> EvalResult:
    """LHS - RHS of a standalone inequality (positive when it holds)."""
    ineq = InequalityId.parse(ineq) if isinstance(ineq, str) else ineq
    if ineq not in (InequalityId.LEM_A1, InequalityId.LEM_A2,
                    InequalityId.SEGURA_RATIO, InequalityId.NASELL_RATIO):
        raise ValueError(f"{ineq.value} is not a lemma predicate")
    check_domain(ineq, p)
    nu, n, x = p.nu, p.n, p.x
    mu = nu + n
    if ineq is InequalityId.LEM_A1:
        t = _Terms()
        t.add(2.0 * (mu - 2.0), bessel_k(mu, x))
        t.add(-(2.0 * nu + n - 2.0), bessel_k(mu - 1.0, x))
        t.add(2.0 - n, bessel_k(mu - 3.0, x))
        return t.result()
    if ineq is InequalityId.LEM_A2:
        h = mu - 0.5
        lhs = x / (h + math.hypot(x, h))
        rhs = (x - 2.0 * mu) / (x - (2.0 - n))
        return EvalResult(lhs - rhs, 8.0 * EPS * (abs(lhs) + abs(rhs)))
    if ineq is InequalityId.SEGURA_RATIO:
        a = bessel_k(mu - 2.0, x, scaled=True)
        b = bessel_k(mu - 1.0, x, scaled=True)
        h = mu - 1.5
        ratio = a.value / b.value
        rhs = x / (h + math.hypot(x, h))
        err = abs(ratio) * (a.rel_error_bound + b.rel_error_bound) + 8.0 * EPS * (abs(ratio) + abs(rhs))
        return EvalResult(ratio - rhs, err)
    a = bessel_i(nu + 1.0, x, scaled=True)
    b = bessel_i(nu, x, scaled=True)
    ratio = a.value / b.value
    rhs = x / (2.0 * (nu + 1.0) + x)
    err = abs(ratio) * (a.rel_error_bound + b.rel_error_bound) + 8.0 * EPS * (abs(ratio) + abs(rhs))
    return EvalResult(ratio - rhs, err)


def conjecture_margins(nu: float, n: float, x: float, beta: Optional[float] = None,
                       integral: Optional[EvalResult] = None) -> tuple[float, float]:
    """Relative margins of the conjectured lower bound and of its derivative test.

    Returns ``(m_bound, m_deriv)`` with
    m_bound = (J(x) - K_{mu-beta}(x)/x^nu) / J(x) and
    m_deriv = (d/dx[K_{mu-beta}(x)/x^nu] + K_mu(x)/x^nu) / (K_mu(x)/x^nu).
    ``beta`` defaults to alpha_{nu,n}. ``integral``, if given, must be the
    scaled value exp(x) J(x) from :func:`~besseline.quadrature.integral_k_scaled`.
    """
    if beta is None:
        beta = conjecture_alpha(nu, n)
    p = Params(nu, n, 0.0, x)
    mu = nu + n
    s = mu - beta
    if integral is None:
        from .quadrature import integral_k_scaled
        integral = integral_k_scaled(p, rel_tol=1e-12)
    ks = kernels.bessel_k_scaled(s, x)[0]
    ks1 = kernels.bessel_k_scaled(s + 1.0, x)[0]
    kmu = kernels.bessel_k_scaled(mu, x)[0]
    # integral is exp(x) J(x); every term shares exp(-x), and x^-nu cancels
    m_bound = 1.0 - ks * math.pow(x, -nu) / integral.value
    deriv = -ks1 + (s - nu) / x * ks
    m_deriv = (deriv + kmu) / kmu
    return m_bound, m_deriv
