"""Limiting cumulant generating function and its Fenchel-Legendre transform.

``Lambda(u) = lim t^-1 log E[exp(u X_t)]`` is smooth and strictly convex on
the interior of its domain but, depending on the signs of chi(0) and chi(1),
need not be steep at 0 or 1.  The rate function then picks up affine wings,
and the one-sided limits at 0 and 1 (which differ from the pointwise values
Lambda(0) = Lambda(1) = 0) decide where they start.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._numerics import bisect_to_precision
from .mgf import DomainClass, chi, classify, critical_moments, gamma_sq
from .params import ModelParams, OutOfRangeError

__all__ = [
    "DomainClass", "LimitCgf", "RateEval", "Region",
    "boundary_limits", "classify", "limit_cgf", "limit_cgf_array",
    "limit_cgf_derivative", "rate", "rate_oracle", "rate_share", "u_star",
]

_INSET = 1e-9
_ORACLE_TRUNCATION = 50.0


class Region(enum.Enum):
    CONVEX = "CONVEX"
    AFFINE_RIGHT = "AFFINE_RIGHT"
    AFFINE_LEFT = "AFFINE_LEFT"


@dataclass(frozen=True)
class LimitCgf:
    """Limiting CGF for one parameter set: domain [dom_lo, dom_hi] and the
    one-sided limits of Lambda and Lambda' at 0 and 1."""

    params: ModelParams
    domain_class: DomainClass
    dom_lo: float
    dom_hi: float
    lam0_plus: float
    lam1_minus: float
    dlam0_plus: float
    dlam1_minus: float

    @property
    def chi0(self) -> float:
        return chi(0.0, self.params)

    @property
    def chi1(self) -> float:
        return chi(1.0, self.params)

    @property
    def slope_lo(self) -> float:
        """Limit of Lambda' at the left end of the domain (-inf when steep)."""
        return _end_slope(self, self.dom_lo, -1.0)

    @property
    def slope_hi(self) -> float:
        """Limit of Lambda' at the right end of the domain (+inf when steep)."""
        return _end_slope(self, self.dom_hi, 1.0)

    @property
    def convex_range(self) -> tuple[float, float]:
        """The open interval Lambda'(interior of the domain)."""
        return self.slope_lo, self.slope_hi


def _end_slope(L: LimitCgf, end: float, side: float) -> float:
    p = L.params
    if end == 0.0 and side < 0:
        return L.dlam0_plus
    if end == 1.0 and side > 0:
        return L.dlam1_minus
    if math.isfinite(end):
        # a critical moment: gamma vanishes there, steep unless b = 0
        if p.b > 0:
            return side * math.inf
        return p.a * (end - 0.5)
    if p.a > 0:
        return side * math.inf
    # |rho| = 1 and an unbounded side: gamma'(u) -> 0
    return -p.b * p.rho / p.sqrt_alpha


def _end_value(L: LimitCgf, end: float) -> float:
    if end == 0.0:
        return L.lam0_plus
    if end == 1.0:
        return L.lam1_minus
    return _formula(end, L.params)


def boundary_limits(p: ModelParams) -> LimitCgf:
    """Build the LimitCgf: effective domain and the four one-sided limits."""
    cls = classify(p)
    cm = critical_moments(p)
    lo = cm.u_minus if cls in (DomainClass.IA, DomainClass.IB) else 0.0
    hi = cm.u_plus if cls in (DomainClass.IA, DomainClass.IIA) else 1.0

    a, b, alpha = p.a, p.b, p.alpha
    chi0, chi1 = chi(0.0, p), chi(1.0, p)
    lam0 = -b / alpha * (chi0 + abs(chi0))
    lam1 = -b / alpha * (chi1 + abs(chi1))
    if chi0 != 0:
        dlam0 = ((chi1 - chi0) * lam0 - 0.5 * b) / abs(chi0) - 0.5 * a
    elif b == 0:
        dlam0 = -0.5 * a
    else:
        dlam0 = -math.inf
    if chi1 != 0:
        dlam1 = ((chi1 - chi0) * lam1 + 0.5 * b) / abs(chi1) + 0.5 * a
    elif b == 0:
        dlam1 = 0.5 * a
    else:
        dlam1 = math.inf
    return LimitCgf(p, cls, lo, hi, lam0, lam1, dlam0, dlam1)


def _gamma(u: float, p: ModelParams) -> float:
    return math.sqrt(max(gamma_sq(u, p), 0.0))


def _chi_plus_gamma(u: float, p: ModelParams) -> float:
    c = chi(u, p)
    g = _gamma(u, p)
    if c < 0.0 and g - c > 0.0:
        # chi + gamma cancels for chi < 0; gamma^2 - chi^2 = alpha u (1 - u)
        return p.alpha * u * (1.0 - u) / (g - c)
    return c + g


def _formula(u: float, p: ModelParams) -> float:
    return -p.b / p.alpha * _chi_plus_gamma(u, p) + 0.5 * p.a * u * (u - 1.0)


def limit_cgf(u: float, L: LimitCgf) -> float:
    """Lambda(u): exactly 0 at u in {0, 1}, +inf outside the domain."""
    if u == 0.0 or u == 1.0:
        return 0.0
    if not (L.dom_lo <= u <= L.dom_hi):
        return math.inf
    return _formula(u, L.params)


def limit_cgf_array(u: np.ndarray, L: LimitCgf) -> np.ndarray:
    """Vectorised limit_cgf."""
    p = L.params
    u = np.asarray(u, dtype=float)
    c = p.beta + u * p.rho * p.sqrt_alpha
    g = np.sqrt(np.maximum(c * c + p.alpha * u * (1.0 - u), 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        stable = np.where((c < 0) & (g - c > 0), p.alpha * u * (1.0 - u) / (g - c), c + g)
    out = -p.b / p.alpha * stable + 0.5 * p.a * u * (u - 1.0)
    out = np.where((u >= L.dom_lo) & (u <= L.dom_hi), out, np.inf)
    return np.where((u == 0.0) | (u == 1.0), 0.0, out)


def limit_cgf_derivative(u: float, L: LimitCgf) -> float:
    """Lambda'(u) on the interior of the domain."""
    p = L.params
    if not (L.dom_lo < u < L.dom_hi):
        raise OutOfRangeError(f"u={u} is not interior to [{L.dom_lo}, {L.dom_hi}]")
    if p.b == 0.0:
        return p.a * (u - 0.5)
    g = _gamma(u, p)
    if g == 0.0:
        raise OutOfRangeError(f"gamma vanishes at u={u}")
    sa = p.sqrt_alpha
    dgamma = (chi(u, p) * p.rho * sa + 0.5 * p.alpha * (1.0 - 2.0 * u)) / g
    return -p.b / p.alpha * (p.rho * sa + dgamma) + 0.5 * p.a * (2.0 * u - 1.0)


def _u_star_closed(x: float, p: ModelParams) -> float:
    a, b, beta, rho = p.a, p.b, p.beta, p.rho
    sa = p.sqrt_alpha
    if abs(rho) < 1.0:
        one_m = 1.0 - rho * rho
        px = b * rho + x * sa
        xi = math.sqrt((2 * rho * beta + sa) ** 2 + 4 * beta * beta * one_m)
        # hypot keeps px / sqrt(px^2 + b^2 (1 - rho^2)) finite for tiny b
        ratio = px / math.hypot(px, b * math.sqrt(one_m)) if px != 0.0 else 0.0
        return (2 * rho * beta + sa + ratio * xi) / (2 * one_m * sa)
    px = b * rho + x * sa
    return 0.25 * (b - 2 * beta * x) / (2 * beta + rho * sa) \
        * (4 * b * beta + rho * (b + 2 * beta * x) * sa) / (px * px)


def _u_star_bisect(x: float, L: LimitCgf) -> float:
    lo, hi = L.dom_lo, L.dom_hi
    mid_dom = 0.5 * (max(lo, -1.0) + min(hi, 2.0))

    def g(u: float) -> float:
        try:
            return limit_cgf_derivative(u, L) - x
        except OutOfRangeError:
            # gamma rounded to zero next to a critical moment: the slope is
            # infinite there since b > 0 on this path
            return math.inf if u > mid_dom else -math.inf
    if math.isfinite(lo):
        lo = lo + _INSET * max(1.0, abs(lo))
    else:
        lo = -1.0
        while g(lo) > 0:
            lo *= 2.0
    if math.isfinite(hi):
        hi = hi - _INSET * max(1.0, abs(hi))
    else:
        hi = 2.0
        while g(hi) < 0:
            hi *= 2.0
    # the inset may leave x just outside Lambda'([lo, hi]); walk the ends out,
    # and if x is still not bracketed u_x is the domain end to working precision
    for _ in range(1100):
        if g(lo) <= 0:
            break
        nxt = 0.5 * (lo + L.dom_lo)
        if nxt == lo or nxt == L.dom_lo:
            return L.dom_lo
        lo = nxt
    for _ in range(1100):
        if g(hi) >= 0:
            break
        nxt = 0.5 * (hi + L.dom_hi)
        if nxt == hi or nxt == L.dom_hi:
            return L.dom_hi
        hi = nxt
    return bisect_to_precision(g, lo, hi)


def u_star(x: float, L: LimitCgf) -> float:
    """The unique u in the domain interior with Lambda'(u) = x.

    Closed form when a = 0 (including the |rho| = 1 limit), bracketed
    bisection otherwise.
    """
    lo, hi = L.convex_range
    if not (lo < x < hi):
        raise OutOfRangeError(f"x={x} is outside Lambda'(D) = ({lo}, {hi})")
    p = L.params
    if p.a == 0.0 and p.b > 0.0:
        return _u_star_closed(x, p)
    return _u_star_bisect(x, L)


@dataclass(frozen=True)
class RateEval:
    x: float
    value: float
    u_star: float | None
    region: Region


def rate(x: float, L: LimitCgf) -> RateEval:
    """Lambda*(x): Legendre form on Lambda'(D°), affine wings outside it."""
    lo, hi = L.convex_range
    if lo < x < hi:
        u = min(max(u_star(x, L), L.dom_lo), L.dom_hi)
        # one-sided value: the pointwise Lambda(0) = Lambda(1) = 0 never enters
        return RateEval(x, x * u - _formula(u, L.params), u, Region.CONVEX)
    if x >= hi:
        if not math.isfinite(L.dom_hi):
            return RateEval(x, math.inf, None, Region.AFFINE_RIGHT)
        return RateEval(x, x * L.dom_hi - _end_value(L, L.dom_hi), None, Region.AFFINE_RIGHT)
    if not math.isfinite(L.dom_lo):
        return RateEval(x, math.inf, None, Region.AFFINE_LEFT)
    return RateEval(x, x * L.dom_lo - _end_value(L, L.dom_lo), None, Region.AFFINE_LEFT)


def rate_share(x: float, L: LimitCgf) -> float:
    """Rate function under the share measure: Lambda*(x) - x."""
    return rate(x, L).value - x


def _golden_max(fn, lo: float, hi: float, tol: float = 1e-13) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = fn(c), fn(d)
    while hi - lo > tol * max(1.0, abs(lo) + abs(hi)):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = fn(d)
    u = 0.5 * (lo + hi)
    return u, fn(u)


def oracle_grid(L: LimitCgf, n_grid: int) -> np.ndarray:
    lo = L.dom_lo + _INSET if math.isfinite(L.dom_lo) else -_ORACLE_TRUNCATION
    hi = L.dom_hi - _INSET if math.isfinite(L.dom_hi) else _ORACLE_TRUNCATION
    return np.linspace(lo, hi, n_grid)


def rate_oracle(x: float, L: LimitCgf, n_grid: int = 100_000,
                _grid: tuple[np.ndarray, np.ndarray] | None = None) -> float:
    """Brute-force sup of u x - Lambda(u) over a grid, then golden refinement.

    Uses only the formula for Lambda, never Lambda' or its inverse.
    """
    if n_grid < 1000:
        raise ValueError("n_grid must be at least 1000")
    if _grid is None:
        u = oracle_grid(L, n_grid)
        lam = limit_cgf_array(u, L)
    else:
        u, lam = _grid
    vals = u * x - lam
    i = int(np.argmax(vals))
    best = float(vals[i])
    j0, j1 = max(i - 1, 0), min(i + 1, len(u) - 1)
    if j1 > j0:
        _, refined = _golden_max(lambda s: s * x - limit_cgf(s, L), float(u[j0]), float(u[j1]))
        best = max(best, refined)
    # u = 0 and u = 1 always lie in the domain with Lambda = 0
    return max(best, 0.0, x)
