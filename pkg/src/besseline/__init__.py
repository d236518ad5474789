"""Modified Bessel integrals, closed-form bounds for them, and grid checks."""

__version__ = "0.1.0"

from ._core import BACKEND
from ._types import EvalResult, Params
from .errors import ConvergenceError, DomainError
from .special import bessel_i, bessel_k, gamma, hyp1f2
from .quadrature import integral_i, integral_k
from .bounds import InequalityId, bound_value, conjecture_alpha, relerr_majorant
from .verification import GridSpec, compute_cnun, reproduce_tables, verify_inequality

__all__ = [
    "BACKEND",
    "EvalResult",
    "Params",
    "ConvergenceError",
    "DomainError",
    "bessel_i",
    "bessel_k",
    "gamma",
    "hyp1f2",
    "integral_i",
    "integral_k",
    "InequalityId",
    "bound_value",
    "conjecture_alpha",
    "relerr_majorant",
    "GridSpec",
    "compute_cnun",
    "reproduce_tables",
    "verify_inequality",
]
