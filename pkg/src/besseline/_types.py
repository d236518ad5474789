from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class EvalResult:
    """A computed value with a conservative bound on its absolute error."""

    value: float
    abs_error_bound: float

    @property
    def rel_error_bound(self) -> float:
        if self.value == 0.0:
            return math.inf
        return self.abs_error_bound / abs(self.value)

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class Params:
    """Point in parameter space: order ``nu``, shift ``n``, tilt ``gamma``, endpoint ``x``."""

    nu: float
    n: float = 0.0
    gamma: float = 0.0
    x: float = 1.0

    def __post_init__(self):
        for name in ("nu", "n", "gamma", "x"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite", f"{name} finite")
        if not self.x > 0.0:
            raise DomainError(f"x must be positive, got {self.x}", "x > 0")

    @property
    def order(self) -> float:
        """The Bessel order nu + n appearing in both integral families."""
        return self.nu + self.n

    def replace(self, **changes) -> Params:
        fields = {"nu": self.nu, "n": self.n, "gamma": self.gamma, "x": self.x}
        fields.update(changes)
        return Params(**fields)

    def as_dict(self) -> dict:
        return {"nu": self.nu, "n": self.n, "gamma": self.gamma, "x": self.x}
