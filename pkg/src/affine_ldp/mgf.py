"""Finite-horizon moment generating function of the affine model.

Everything here is a scalar, pure function of ``(u, t, params)``.  The
closed forms involve ``gamma(u) = sqrt(gamma_sq(u))`` which turns imaginary
outside the critical moments; all formulas are written in terms of
``gamma_sq`` through the even functions ``cosh(sqrt(s))`` and
``sinh(sqrt(s))/sqrt(s)`` so that both branches join analytically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ._numerics import bisect_to_precision
from .params import ExplosionError, ModelParams

# below this |s| = |gamma^2 t^2 / 4| the two-term series replace cosh/sinhc
_SERIES_CUTOFF = 2.5e-13
_LOG2 = math.log(2.0)
_ROOT_INSET = 1e-12


class DomainClass(enum.Enum):
    """Regime of the limiting domain, from the signs of chi(0) and chi(1)."""

    IA = "IA"
    IB = "IB"
    IIA = "IIA"
    IIB = "IIB"


def classify(p: ModelParams) -> DomainClass:
    """Regime from the signs of chi(0)=beta and chi(1)=beta+rho*sqrt(alpha).

    Exact zeros fall in the nonpositive branch.
    """
    chi0 = chi(0.0, p)
    chi1 = chi(1.0, p)
    if chi0 <= 0:
        return DomainClass.IA if chi1 <= 0 else DomainClass.IB
    return DomainClass.IIA if chi1 <= 0 else DomainClass.IIB


def chi(u: float, p: ModelParams) -> float:
    return p.beta + u * p.rho * p.sqrt_alpha


def gamma_sq(u: float, p: ModelParams) -> float:
    """chi(u)^2 + alpha u (1-u); negative outside [u_-, u_+]."""
    c = chi(u, p)
    return c * c + p.alpha * u * (1.0 - u)


def _cosh_sinhc(s: float) -> tuple[float, float]:
    """(cosh(sqrt(s)), sinh(sqrt(s))/sqrt(s)) continued to s < 0."""
    if abs(s) < _SERIES_CUTOFF:
        return 1.0 + 0.5 * s, 1.0 + s / 6.0
    if s > 0:
        r = math.sqrt(s)
        return math.cosh(r), math.sinh(r) / r
    r = math.sqrt(-s)
    return math.cos(r), math.sin(r) / r


def _hyperbolic_parts(u: float, p: ModelParams, g: float) -> tuple[float, float]:
    """Accurate (1 - chi/g, 1 + chi/g) for gamma = g > 0.

    The one that suffers cancellation is rewritten with
    g^2 - chi^2 = alpha u (1-u).
    """
    c = chi(u, p)
    q = p.alpha * u * (1.0 - u)
    if c > 0:
        return q / (g * (g + c)), 1.0 + c / g
    if c < 0:
        return 1.0 - c / g, q / (g * (g - c))
    return 1.0, 1.0


def _use_hyperbolic(gsq: float, t: float) -> bool:
    return gsq > 0 and gsq * t * t / 4.0 >= 1e-6


def f_t(u: float, t: float, p: ModelParams) -> float:
    """cosh(gamma t/2) - chi/gamma sinh(gamma t/2), continued to gamma^2 < 0.

    Overflows to +-inf for very large gamma t.
    """
    gsq = gamma_sq(u, p)
    if _use_hyperbolic(gsq, t):
        g = math.sqrt(gsq)
        r = 0.5 * g * t
        minus, plus = _hyperbolic_parts(u, p, g)
        if r > 700.0:
            if minus == 0:
                return 0.0
            return math.copysign(math.inf, minus)
        return 0.5 * (math.exp(r) * minus + math.exp(-r) * plus)
    ch, shc = _cosh_sinhc(gsq * t * t / 4.0)
    return ch - chi(u, p) * 0.5 * t * shc


def _f_sign(u: float, t: float, p: ModelParams) -> float:
    """A positive multiple of f_t(u); safe from overflow."""
    gsq = gamma_sq(u, p)
    if _use_hyperbolic(gsq, t):
        g = math.sqrt(gsq)
        r = 0.5 * g * t
        minus, plus = _hyperbolic_parts(u, p, g)
        return minus + math.exp(-2.0 * r) * plus
    return f_t(u, t, p)


def _log_f(u: float, t: float, p: ModelParams) -> float:
    """log f_t(u), assuming f_t(u) > 0."""
    gsq = gamma_sq(u, p)
    if _use_hyperbolic(gsq, t):
        g = math.sqrt(gsq)
        r = 0.5 * g * t
        minus, plus = _hyperbolic_parts(u, p, g)
        return r - _LOG2 + math.log(minus + math.exp(-2.0 * r) * plus)
    return math.log(f_t(u, t, p))


def explosion_time(u: float, p: ModelParams) -> float:
    """First t > 0 with f_t(u) = 0, or inf when f_t(u) never vanishes."""
    if 0.0 <= u <= 1.0:
        return math.inf
    c = chi(u, p)
    gsq = gamma_sq(u, p)
    if gsq > 0:
        g = math.sqrt(gsq)
        # outside [0,1], alpha u(1-u) < 0 so chi^2 > gamma^2
        if c <= 0:
            return math.inf
        y = g / c
        if y < 0.5:
            return 2.0 * math.atanh(y) / g
        # 2 atanh(g/c)/g = log((c+g)/(c-g))/g with c-g = alpha u(u-1)/(c+g)
        return math.log((c + g) ** 2 / (p.alpha * u * (u - 1.0))) / g
    if gsq == 0:
        return 2.0 / c if c > 0 else math.inf
    h = math.sqrt(-gsq)
    return 2.0 * math.atan2(h, c) / h


def psi_t(u: float, t: float, p: ModelParams) -> float:
    """Coefficient of v0 in Lambda_t(u); solves the Riccati equation.

    Raises ExplosionError if the moment has exploded by time t.
    """
    if u * (u - 1.0) == 0.0 or t == 0.0:
        return 0.0
    if explosion_time(u, p) <= t:
        raise ExplosionError(f"E[exp({u} X_t)] is infinite at t={t}")
    gsq = gamma_sq(u, p)
    if _use_hyperbolic(gsq, t):
        g = math.sqrt(gsq)
        e = math.exp(-g * t)
        minus, plus = _hyperbolic_parts(u, p, g)
        return u * (u - 1.0) * (1.0 - e) / (g * (minus + e * plus))
    _, shc = _cosh_sinhc(gsq * t * t / 4.0)
    return u * (u - 1.0) * 0.5 * t * shc / f_t(u, t, p)


def riccati_rhs(u: float, w: float, p: ModelParams) -> float:
    """R(u, w), the right-hand side of d psi/dt = R(u, psi)."""
    return (0.5 * u * (u - 1.0) + 0.5 * p.alpha * w * w
            + u * w * p.rho * p.sqrt_alpha + p.beta * w)


def lambda_t(u: float, t: float, p: ModelParams) -> float:
    """log E[exp(u X_t)] with X_0 = 0; math.inf once the moment has exploded."""
    if u * (u - 1.0) == 0.0 or t == 0.0:
        return 0.0
    if explosion_time(u, p) <= t:
        return math.inf
    gsq = gamma_sq(u, p)
    c = chi(u, p)
    if _use_hyperbolic(gsq, t):
        g = math.sqrt(gsq)
        r = 0.5 * g * t
        minus, plus = _hyperbolic_parts(u, p, g)
        # chi t/2 + log f = (chi+g) t/2 - log 2 + log(minus + e^{-2r} plus)
        c_plus_g = c + g if c >= 0 else p.alpha * u * (1.0 - u) / (g - c)
        drift = 0.5 * c_plus_g * t - _LOG2 + math.log(minus + math.exp(-2.0 * r) * plus)
    else:
        drift = 0.5 * c * t + _log_f(u, t, p)
    heston = -2.0 * p.b / p.alpha * drift + psi_t(u, t, p) * p.v0
    return heston + 0.5 * p.a * u * (u - 1.0) * t


@dataclass(frozen=True)
class CriticalMoments:
    u_minus: float
    u_plus: float


def critical_moments(p: ModelParams) -> CriticalMoments:
    """Zeros of gamma_sq bounding the moments finite for all t.

    Infinite values appear only when |rho| = 1.
    """
    sa = p.sqrt_alpha
    beta, rho = p.beta, p.rho
    lead = 2.0 * beta * rho + sa
    one_m_rho2 = 1.0 - rho * rho
    if abs(rho) < 1.0 and one_m_rho2 > 0.0:
        disc = math.sqrt(lead * lead + 4.0 * beta * beta * one_m_rho2)
        denom = 2.0 * sa * one_m_rho2
        # product of roots is -beta^2/(alpha(1-rho^2)); pick the stable one
        if lead >= 0:
            u_plus = (lead + disc) / denom
            u_minus = -2.0 * beta * beta / (sa * (lead + disc))
        else:
            u_minus = (lead - disc) / denom
            u_plus = 2.0 * beta * beta / (sa * (disc - lead))
        return CriticalMoments(u_minus, u_plus)
    if lead == 0:
        return CriticalMoments(-math.inf, math.inf)
    edge = -beta * beta / (sa * lead)
    if lead > 0:
        return CriticalMoments(edge, math.inf)
    return CriticalMoments(-math.inf, edge)


@dataclass(frozen=True)
class FiniteTimeDomain:
    """Effective domain D_t of Lambda_t at horizon t.

    ``lower``/``upper`` follow the regime classification: a root of f_t when
    the corresponding ``*_is_root`` flag is set, otherwise the critical moment
    (the interval ``[lower, upper]`` is then only guaranteed to lie inside
    D_t).  ``exact_lower``/``exact_upper`` are the true edges of D_t obtained
    from the explosion time on both sides.
    """

    t: float
    lower: float
    upper: float
    lower_open: bool
    upper_open: bool
    domain_class: DomainClass
    lower_is_root: bool
    upper_is_root: bool
    exact_lower: float
    exact_upper: float

    def contains(self, u: float) -> bool:
        return self.exact_lower < u < self.exact_upper


def _scan_for_root(t: float, p: ModelParams, start: float, stop: float,
                   n_scan: int = 400) -> float | None:
    """First zero of f_t moving from ``start`` (where f_t > 0) towards ``stop``."""
    direction = 1.0 if stop > start else -1.0
    span = abs(stop - start)
    sign = lambda u: _f_sign(u, t, p)  # noqa: E731
    prev = start
    # log-spaced offsets: roots crowd towards 0 and 1 for large t
    for k in range(n_scan + 1):
        off = span * 10.0 ** (-12.0 + 12.0 * k / n_scan)
        u = start + direction * off
        if sign(u) <= 0:
            return bisect_to_precision(sign, prev, u)
        prev = u
    return None


def _upper_search_limit(t: float, p: ModelParams, u_plus: float) -> float:
    if math.isfinite(u_plus):
        return u_plus - _ROOT_INSET
    hi = 2.0
    while hi < 1e8 and _f_sign(hi, t, p) > 0:
        hi *= 2.0
    return hi


def _lower_search_limit(t: float, p: ModelParams, u_minus: float) -> float:
    if math.isfinite(u_minus):
        return u_minus + _ROOT_INSET
    lo = -1.0
    while lo > -1e8 and _f_sign(lo, t, p) > 0:
        lo *= 2.0
    return lo


def _explosion_edge(t: float, p: ModelParams, start: float, direction: float) -> float:
    """Edge of {u : T*(u) > t} beyond ``start``; T* is monotone away from [0,1]."""
    if explosion_time(start, p) <= t:
        return start
    step = 1.0
    far = start + direction * step
    while explosion_time(far, p) > t:
        step *= 2.0
        if step > 1e12:
            return direction * math.inf
        far = start + direction * step
    near = start
    while True:
        mid = 0.5 * (near + far)
        if mid == near or mid == far:
            return far if explosion_time(far, p) <= t else mid
        if explosion_time(mid, p) > t:
            near = mid
        else:
            far = mid


def domain_t(t: float, p: ModelParams) -> FiniteTimeDomain:
    """Effective domain of Lambda_t, classified by regime.

    In the regimes where chi(1) > 0 (resp. chi(0) > 0) the upper (lower)
    edge is the root of f_t nearest to 1 (resp. 0).  When t is too short for
    that root to lie inside (1, u_+) (resp. (u_-, 0)) the critical moment is
    reported instead with ``*_is_root`` False.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    cls = classify(p)
    cm = critical_moments(p)

    lower, lower_is_root = cm.u_minus, False
    upper, upper_is_root = cm.u_plus, False
    if chi(1.0, p) > 0:
        root = _scan_for_root(t, p, 1.0, _upper_search_limit(t, p, cm.u_plus))
        if root is not None:
            upper, upper_is_root = root, True
    if chi(0.0, p) > 0:
        root = _scan_for_root(t, p, 0.0, _lower_search_limit(t, p, cm.u_minus))
        if root is not None:
            lower, lower_is_root = root, True

    if upper_is_root:
        exact_upper = upper
    else:
        start = cm.u_plus if math.isfinite(cm.u_plus) else 1.0
        exact_upper = _explosion_edge(t, p, start, 1.0)
    if lower_is_root:
        exact_lower = lower
    else:
        start = cm.u_minus if math.isfinite(cm.u_minus) else 0.0
        exact_lower = _explosion_edge(t, p, start, -1.0)

    return FiniteTimeDomain(
        t=t, lower=lower, upper=upper,
        lower_open=lower_is_root, upper_open=upper_is_root,
        domain_class=cls,
        lower_is_root=lower_is_root, upper_is_root=upper_is_root,
        exact_lower=exact_lower, exact_upper=exact_upper,
    )
