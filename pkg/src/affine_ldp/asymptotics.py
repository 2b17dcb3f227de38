"""Large-maturity option decay rates and the limiting implied-volatility smile."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .limit import LimitCgf, Region, rate
from .params import ModelParams, OutOfRangeError, UnsupportedError

# relative slack allowed on Lambda*(Lambda* - x) before the sqrt
_RADICAND_TOL = 1e-12


class OptionKind(enum.Enum):
    PUT = "PUT"
    CALL = "CALL"
    COVERED_CALL = "COVERED_CALL"


@dataclass(frozen=True)
class OptionAsymptote:
    """lim t^-1 log of the option value struck at exp(x t).

    ``bound_violated`` marks exponents above the trivial price bounds
    (put <= exp(x t), call <= 1), which the rate formula as published gives on the
    non-steep wings.
    """

    x: float
    kind: OptionKind
    exponent: float
    regime: str
    bound_violated: bool = False


@dataclass(frozen=True)
class SmilePoint:
    x: float
    var_inf: float
    selector: int
    region: Region
    svi_var: float | None = None

    @property
    def vol_inf(self) -> float:
        return math.sqrt(self.var_inf)


@dataclass(frozen=True)
class SviParams:
    omega1: float
    omega2: float
    rho: float


def bs_rate(x: float, sigma: float) -> float:
    """Black-Scholes rate function (x + sigma^2/2)^2 / (2 sigma^2)."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    s2 = sigma * sigma
    return (x + 0.5 * s2) ** 2 / (2.0 * s2)


def bs_option_asymptotes(x: float, sigma: float, kind: OptionKind) -> float:
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    s2 = sigma * sigma
    if kind is OptionKind.PUT:
        return x - bs_rate(x, sigma) if x <= -0.5 * s2 else x
    if kind is OptionKind.CALL:
        return x - bs_rate(x, sigma) if x >= 0.5 * s2 else 0.0
    if x <= -1.5 * s2:
        return 2.0 * x + s2
    if x <= 0.5 * s2:
        return x - bs_rate(x, sigma)
    return 0.0


def option_asymptote(x: float, L: LimitCgf, kind: OptionKind) -> OptionAsymptote:
    """Decay rate of put, call and covered-call prices struck at exp(x t)."""
    if kind is OptionKind.PUT:
        if x <= L.dlam0_plus:
            exponent, regime = x - rate(x, L).value, "rate"
        else:
            exponent, regime = x - L.lam0_plus, "forward"
        return OptionAsymptote(x, kind, exponent, regime, exponent > x)
    if kind is OptionKind.CALL:
        if x >= L.dlam1_minus:
            exponent, regime = x - rate(x, L).value, "rate"
        else:
            exponent, regime = -L.lam1_minus, "spot"
        return OptionAsymptote(x, kind, exponent, regime, exponent > 0.0)
    if not (L.dlam0_plus <= x <= L.dlam1_minus):
        raise OutOfRangeError(
            f"covered call rate needs x in [{L.dlam0_plus}, {L.dlam1_minus}], got {x}")
    exponent = x - rate(x, L).value
    return OptionAsymptote(x, kind, exponent, "rate", False)


def _sgn(v: float) -> int:
    return 1 if v >= 0 else -1


def smile_selector(x: float, L: LimitCgf) -> int:
    """Sign of the square-root term in the limiting implied variance (+-2).

    Each threshold is assigned to its outer wing; there the root term either
    vanishes or the wing carries the same sign as the centre, so the smile is
    continuous either way.
    """
    if x <= L.dlam0_plus:
        return 2 * _sgn(L.chi0)
    if x >= L.dlam1_minus:
        return 2 * _sgn(L.chi1)
    return 2


def implied_variance_from_rate(x: float, lam_star: float, selector: int) -> float:
    """Root of lam_star = bs_rate(x, sigma) in sigma^2, picked by ``selector``.

    2(2L - x + I sqrt(L(L - x))) rewritten as 2(sqrt(L) +- sqrt(L - x))^2,
    with the minus branch as 2 x^2 / (sqrt(L) + sqrt(L - x))^2.
    """
    gap = lam_star - x
    scale = 1.0 + abs(lam_star) + abs(x)
    if lam_star < -_RADICAND_TOL * scale or gap < -_RADICAND_TOL * scale:
        raise ArithmeticError(f"negative radicand at x={x}: rate={lam_star}")
    if math.isinf(lam_star):
        return math.inf if selector > 0 else 0.0
    root_l = math.sqrt(max(lam_star, 0.0))
    root_g = math.sqrt(max(gap, 0.0))
    if selector > 0:
        return 2.0 * (root_l + root_g) ** 2
    total = root_l + root_g
    return 0.0 if total == 0.0 else 2.0 * x * x / (total * total)


def _svi_applies(p: ModelParams) -> bool:
    return p.a == 0.0 and p.b > 0.0 and abs(p.rho) < 1.0


def implied_var_infinity(x: float, L: LimitCgf) -> SmilePoint:
    """Limit of the implied variance along strikes exp(x t)."""
    p = L.params
    ev = rate(x, L)
    selector = smile_selector(x, L)
    if p.b == 0.0:
        var = -2.0 * x if x < -0.5 * p.a else p.a
        return SmilePoint(x, var, selector, ev.region)
    var = implied_variance_from_rate(x, ev.value, selector)
    svi = None
    if ev.region is Region.CONVEX and _svi_applies(p):
        svi = svi_variance(x, svi_params(p))
    return SmilePoint(x, var, selector, ev.region, svi)


def svi_variance(x: float, s: SviParams) -> float:
    w = s.omega2 * x + s.rho
    return 0.5 * s.omega1 * (1.0 + s.omega2 * s.rho * x
                             + math.sqrt(w * w + 1.0 - s.rho * s.rho))


def svi_params(p: ModelParams) -> SviParams:
    """SVI parameters reproducing the Heston limiting smile."""
    if p.a != 0.0:
        raise UnsupportedError("SVI mapping requires a = 0")
    if p.b <= 0.0:
        raise UnsupportedError("SVI mapping requires b > 0")
    if abs(p.rho) >= 1.0:
        raise UnsupportedError("SVI mapping requires |rho| < 1; see svi_flat_extreme_rho")
    sa = p.sqrt_alpha
    one_m = 1.0 - p.rho * p.rho
    lead = 2.0 * p.beta + p.rho * sa
    c = p.alpha * one_m
    root = math.sqrt(lead * lead + c)
    # root + lead loses digits when lead << 0
    bracket = root + lead if lead >= 0 else c / (root - lead)
    omega1 = 4.0 * p.b / c * bracket
    return SviParams(omega1, sa / p.b, p.rho)


def _require_heston_b(p: ModelParams) -> None:
    if p.a != 0.0 or p.b <= 0.0:
        raise OutOfRangeError("wing formulas need a = 0 and b > 0")


def svi_wing_right(x: float, L: LimitCgf) -> float:
    p = L.params
    _require_heston_b(p)
    if not (L.chi1 > 0 and x > L.dlam1_minus):
        raise OutOfRangeError("right wing needs chi(1) > 0 and x > Lambda'_-(1)")
    lam1 = math.sqrt(2.0 * p.b * L.chi1)
    return 2.0 * x + 4.0 * lam1 / p.alpha * (lam1 + math.sqrt(lam1 * lam1 + p.alpha * x))


def svi_wing_left(x: float, L: LimitCgf) -> float:
    """Limiting implied variance for x < Lambda'_+(0) when chi(0) > 0."""
    p = L.params
    _require_heston_b(p)
    if not (L.chi0 > 0 and x < L.dlam0_plus):
        raise OutOfRangeError("left wing needs chi(0) > 0 and x < Lambda'_+(0)")
    lam0 = math.sqrt(2.0 * p.b * L.chi0)
    # the wing rate is the constant lam0^2/alpha; solving the smile quadratic
    # with it gives sqrt(lam0^2 - alpha x)
    radicand = lam0 * lam0 - p.alpha * x
    if radicand < 0:
        raise ArithmeticError(f"negative radicand {radicand} on the left wing")
    return -2.0 * x + 4.0 * lam0 / p.alpha * (lam0 + math.sqrt(radicand))


def svi_flat_extreme_rho(x: float, p: ModelParams) -> float:
    """Limiting smile at rho = +-1: linear in x, then zero."""
    sa = p.sqrt_alpha
    if abs(p.rho) != 1.0 or p.a != 0.0 or not (2.0 * p.beta + p.rho * sa < 0):
        raise UnsupportedError("needs |rho| = 1, a = 0 and 2 beta + rho sqrt(alpha) < 0")
    level = p.b + p.rho * x * sa
    if level <= 0:
        return 0.0
    return -2.0 * level / (2.0 * p.beta + p.rho * sa)
