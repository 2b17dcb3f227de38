"""Quick oracle and residual checks of the closed forms, one PASS/FAIL line each."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .asymptotics import (
    bs_rate, implied_var_infinity, implied_variance_from_rate, svi_params, svi_variance,
)
from .limit import boundary_limits, limit_cgf, limit_cgf_derivative, rate, rate_oracle
from .mgf import domain_t, explosion_time, f_t, lambda_t, psi_t, riccati_rhs
from .params import ModelParams

# one parameter set per domain class
REFERENCE_SETS = {
    "IA": ModelParams(b=0.08, alpha=0.04, beta=-2.0, rho=-0.5, v0=0.04),
    "IB": ModelParams(b=0.1, alpha=1.0, beta=-0.6, rho=0.9, v0=0.1),
    "IIA": ModelParams(b=0.1, alpha=1.0, beta=0.3, rho=-0.9, v0=0.1),
    "IIB": ModelParams(b=0.1, alpha=0.25, beta=0.2, rho=0.3, v0=0.04),
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _normalization() -> str | None:
    rng = np.random.default_rng(7)
    for _ in range(20):
        p = ModelParams(a=rng.uniform(0, 0.1), b=rng.uniform(0, 0.5), alpha=rng.uniform(0.01, 2),
                        beta=rng.uniform(-3, 1), rho=rng.uniform(-1, 1), v0=rng.uniform(0.01, 0.5))
        for t in (0.1, 1.0, 10.0):
            if lambda_t(0.0, t, p) != 0.0 or lambda_t(1.0, t, p) != 0.0:
                return f"nonzero at {p}, t={t}"
    return None


def _riccati() -> str | None:
    p = REFERENCE_SETS["IA"]
    h = 1e-5
    worst = 0.0
    for u in (-2.0, -0.5, 0.3, 1.5, 3.0):
        for t in (0.5, 1.0, 2.0):
            if explosion_time(u, p) <= t + h:
                continue
            dpsi = (psi_t(u, t + h, p) - psi_t(u, t - h, p)) / (2 * h)
            rhs = riccati_rhs(u, psi_t(u, t, p), p)
            worst = max(worst, abs(dpsi - rhs) / max(abs(rhs), 1e-8))
    return None if worst < 1e-6 else f"relative residual {worst:.3g}"


def _legendre_oracle() -> str | None:
    for name, p in REFERENCE_SETS.items():
        L = boundary_limits(p)
        for x in np.linspace(-0.5, 0.5, 11):
            err = abs(rate(float(x), L).value - rate_oracle(float(x), L, n_grid=10_000))
            if err >= 1e-4:
                return f"{name} x={x:.3g}: {err:.3g}"
    return None


def _conjugacy() -> str | None:
    for name, p in REFERENCE_SETS.items():
        L = boundary_limits(p)
        lo = L.dom_lo if math.isfinite(L.dom_lo) else -5.0
        hi = L.dom_hi if math.isfinite(L.dom_hi) else 5.0
        for u in np.linspace(lo, hi, 27)[1:-1]:
            u = float(u)
            if u in (0.0, 1.0):
                continue
            d = limit_cgf_derivative(u, L)
            err = abs(rate(d, L).value - (u * d - limit_cgf(u, L)))
            if err >= 1e-10:
                return f"{name} u={u:.3g}: {err:.3g}"
    return None


def _smile_residual() -> str | None:
    for name, p in REFERENCE_SETS.items():
        L = boundary_limits(p)
        for x in np.linspace(-0.5, 0.5, 21):
            sp = implied_var_infinity(float(x), L)
            if not 0 < sp.var_inf < math.inf:
                continue
            err = abs(rate(float(x), L).value - bs_rate(float(x), sp.vol_inf))
            if err >= 1e-9:
                return f"{name} x={x:.3g}: {err:.3g}"
    return None


def _svi() -> str | None:
    p = REFERENCE_SETS["IA"]
    L = boundary_limits(p)
    s = svi_params(p)
    lo, hi = L.convex_range
    lo, hi = max(lo, -2.0), min(hi, 2.0)
    for x in np.linspace(lo, hi, 41)[1:-1]:
        err = abs(implied_var_infinity(float(x), L).var_inf - svi_variance(float(x), s))
        if err >= 1e-10:
            return f"x={x:.3g}: {err:.3g}"
    return None


def _bs_fixed_point() -> str | None:
    sig2 = 0.09
    for x in np.linspace(-0.5 * sig2, 0.5 * sig2, 21)[1:-1]:
        var = implied_variance_from_rate(float(x), bs_rate(float(x), math.sqrt(sig2)), 2)
        if abs(var - sig2) >= 1e-12:
            return f"x={x:.3g}: {var!r}"
    return None


def _degenerate() -> str | None:
    L = boundary_limits(ModelParams(a=0.04, b=0.0, alpha=0.04, beta=-1.0, rho=-0.5, v0=0.04))
    for x in (-0.3, -0.0201, -0.02, 0.0, 0.3):
        want = -2.0 * x if x < -0.02 else 0.04
        if implied_var_infinity(x, L).var_inf != want:
            return f"x={x}"
    return None


def _domain_edges() -> str | None:
    p = REFERENCE_SETS["IB"]
    prev = math.inf
    for t in (5.0, 10.0, 20.0, 40.0, 80.0):
        d = domain_t(t, p)
        if not (d.upper_is_root and 1.0 < d.upper < prev):
            return f"upper edge not decreasing at t={t}"
        if abs(f_t(d.upper, t, p)) >= 1e-9:
            return f"f_t at upper edge {f_t(d.upper, t, p):.3g}"
        prev = d.upper
    return None


def _finite_t() -> str | None:
    p = REFERENCE_SETS["IB"]
    L = boundary_limits(p)
    u = 0.5
    errs = [abs(lambda_t(u, t, p) / t - limit_cgf(u, L) + 2 * p.b / (p.alpha * t) * math.log(1 - u))
            for t in (50.0, 100.0, 200.0, 400.0)]
    ok = all(b < a for a, b in zip(errs, errs[1:])) and errs[-1] < 5e-3
    return None if ok else f"errors {errs}"


CHECKS: dict[str, Callable[[], str | None]] = {
    "normalization": _normalization,
    "riccati_residual": _riccati,
    "legendre_oracle": _legendre_oracle,
    "conjugacy_round_trip": _conjugacy,
    "smile_quadratic_residual": _smile_residual,
    "svi_equivalence": _svi,
    "bs_fixed_point": _bs_fixed_point,
    "degenerate_smile": _degenerate,
    "domain_edges": _domain_edges,
    "finite_t_convergence": _finite_t,
}


def run_checks(verbose: bool = True) -> list[CheckResult]:
    """Run every check; with ``verbose`` print one PASS/FAIL line per check to stderr."""
    import sys

    out = []
    for name, fn in CHECKS.items():
        try:
            problem = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            problem = f"{type(exc).__name__}: {exc}"
        res = CheckResult(name, problem is None, problem or "")
        if verbose:
            print(f"{'PASS' if res.passed else 'FAIL'} {name} {res.detail}".rstrip(),
                  file=sys.stderr)
        out.append(res)
    return out
