"""Model parameters and error types shared across the package."""

from __future__ import annotations

import math
from dataclasses import dataclass


class AdmissibilityError(ValueError):
    """Raised when a parameter tuple violates the admissible ranges."""


class ExplosionError(ArithmeticError):
    """Raised when a moment is requested past its explosion time."""


class OutOfRangeError(ValueError):
    """Raised when an argument lies outside the region where a formula applies."""


class UnsupportedError(ValueError):
    """Raised when a closed form is requested for parameters it does not cover."""


@dataclass(frozen=True)
class ModelParams:
    """Continuous affine stochastic volatility model.

    dX = -(a + V)/2 dt + rho sqrt(V) dW1 + sqrt(a + (1 - rho^2) V) dW2
    dV = (b + beta V) dt + sqrt(alpha V) dW1

    Heston with (kappa, theta, sigma) is a=0, b=kappa*theta, beta=-kappa,
    alpha=sigma^2.
    """

    a: float = 0.0
    b: float = 0.0
    alpha: float = 1.0
    beta: float = 0.0
    rho: float = 0.0
    v0: float = 1.0
    x0: float = 0.0

    def __post_init__(self) -> None:
        for name in ("a", "b", "alpha", "beta", "rho", "v0", "x0"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise AdmissibilityError(f"{name} must be a finite real number")
            object.__setattr__(self, name, float(value))
        if self.a < 0:
            raise AdmissibilityError("a must be nonnegative")
        if self.b < 0:
            raise AdmissibilityError("b must be nonnegative")
        if self.alpha <= 0:
            raise AdmissibilityError("alpha must be positive")
        if abs(self.rho) > 1:
            raise AdmissibilityError("rho must lie in [-1,1]")
        if self.v0 <= 0:
            raise AdmissibilityError("v0 must be positive")

    @classmethod
    def heston(cls, kappa: float, theta: float, sigma: float, rho: float,
               v0: float) -> "ModelParams":
        return cls(a=0.0, b=kappa * theta, alpha=sigma * sigma, beta=-kappa,
                   rho=rho, v0=v0)

    @property
    def sqrt_alpha(self) -> float:
        return math.sqrt(self.alpha)
