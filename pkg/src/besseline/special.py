"""Gamma, modified Bessel functions and the 1F2 series for real arguments.

Every function returns an :class:`EvalResult` whose ``abs_error_bound`` is a
conservative estimate of the absolute error. Unscaled Bessel values that do
not fit in a double raise :class:`OverflowError`; use ``scaled=True``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ._core import EPS, kernels
from ._types import EvalResult
from .errors import ConvergenceError, DomainError

__all__ = [
    "gamma",
    "rgamma",
    "bessel_i",
    "bessel_k",
    "Hyp1F2Params",
    "hyp1f2",
    "log_hyp1f2",
]


def _is_nonpositive_int(u: float) -> bool:
    return u <= 0.0 and u == math.floor(u)


def _check_finite(**kw):
    for name, v in kw.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v}", f"{name} finite")


def gamma(u: float) -> EvalResult:
    """Gamma function; raises DomainError at the poles 0, -1, -2, ..."""
    _check_finite(u=u)
    if _is_nonpositive_int(u):
        raise DomainError(f"gamma has a pole at u={u}", "u not a non-positive integer")
    v = kernels.gamma(u)
    if math.isinf(v):
        raise OverflowError(f"gamma({u}) exceeds the floating range")
    # each reduction step and the reflection add a couple of roundings
    steps = abs(u) + 10.0
    return EvalResult(v, abs(v) * EPS * steps)


def rgamma(u: float) -> float:
    """1/Gamma(u) as a plain float, exactly zero at the poles."""
    return kernels.rgamma(u)


def _bessel(fn, sign, nu, x, scaled, name):
    _check_finite(nu=nu, x=x)
    if not x > 0.0:
        raise DomainError(f"{name} needs x > 0, got {x}", "x > 0")
    v, rel = fn(nu, x)
    if math.isnan(v) or math.isnan(rel):
        raise ConvergenceError(f"{name}({nu}, {x}) did not converge")
    if math.isinf(v):
        raise OverflowError(f"{name}({nu}, {x}) exceeds the floating range even when scaled")
    if not scaled:
        f = math.exp(sign * x) if sign * x < 709.0 else math.inf
        v = v * f
        if math.isinf(v):
            raise OverflowError(f"{name}({nu}, {x}) overflows; request the scaled value")
        rel += 2.0 * EPS * (1.0 + x)
    return EvalResult(v, abs(v) * rel)


def bessel_i(nu: float, x: float, scaled: bool = False) -> EvalResult:
    """I_nu(x), or exp(-x) I_nu(x) when ``scaled``."""
    return _bessel(kernels.bessel_i_scaled, 1.0, nu, x, scaled, "bessel_i")


def bessel_k(nu: float, x: float, scaled: bool = False) -> EvalResult:
    """K_nu(x), or exp(x) K_nu(x) when ``scaled``. Uses K_{-nu} = K_nu."""
    return _bessel(kernels.bessel_k_scaled, -1.0, nu, x, scaled, "bessel_k")


@dataclass(frozen=True)
class Hyp1F2Params:
    a1: float
    b1: float
    b2: float
    z: float

    def __post_init__(self):
        _check_finite(a1=self.a1, b1=self.b1, b2=self.b2, z=self.z)
        for name in ("b1", "b2"):
            if _is_nonpositive_int(getattr(self, name)):
                raise DomainError(f"{name} is a non-positive integer", f"{name} not in {{0, -1, -2, ...}}")
        if self.z < 0.0:
            raise DomainError(f"z must be >= 0, got {self.z}", "z >= 0")


def _hyp1f2_raw(p: Hyp1F2Params):
    s, log_scale, sabs, tail, nterms = kernels.hyp1f2_sum(p.a1, p.b1, p.b2, p.z)
    # truncation tail plus rounding: each term carries about k ulps from the
    # running product of ratios
    err = tail + EPS * (2.0 * abs(s) + abs(nterms) * sabs)
    if nterms < 0:
        est = EvalResult(s * math.exp(log_scale) if log_scale < 700 else math.inf, math.inf)
        raise ConvergenceError("1F2 series hit the iteration cap", est)
    return s, log_scale, err


def hyp1f2(a1: float, b1: float, b2: float, z: float) -> EvalResult:
    """Generalized hypergeometric 1F2(a1; b1, b2; z) for z >= 0.

    >>> round(hyp1f2(0.5, 1.5, 2.0, 0.0).value, 12)
    1.0
    """
    p = Hyp1F2Params(a1, b1, b2, z)
    s, log_scale, err = _hyp1f2_raw(p)
    if log_scale:
        f = math.exp(log_scale)
        s *= f
        err *= f
        if math.isinf(s):
            raise OverflowError("1F2 value exceeds the floating range; use log_hyp1f2")
    return EvalResult(s, err)


def log_hyp1f2(a1: float, b1: float, b2: float, z: float) -> tuple[float, float]:
    """Return ``(log|F|, relerr)`` for 1F2(a1; b1, b2; z), free of overflow."""
    p = Hyp1F2Params(a1, b1, b2, z)
    s, log_scale, err = _hyp1f2_raw(p)
    if s == 0.0:
        raise DomainError("1F2 sum is zero; logarithm undefined", "F != 0")
    return math.log(abs(s)) + log_scale, err / abs(s)
