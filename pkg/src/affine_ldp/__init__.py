"""Large-maturity asymptotics of continuous affine stochastic volatility models.

The model is

    dX = -(a + V)/2 dt + rho sqrt(V) dW1 + sqrt(a + (1 - rho^2) V) dW2
    dV = (b + beta V) dt + sqrt(alpha V) dW1

with Heston as the case a = 0.  The package gives the finite-horizon
moment generating function in closed form, its large-time limit, the
resulting rate function (with affine wings when the limit is not steep),
option-price decay rates and the limiting implied volatility smile, plus a
Monte Carlo harness to check them.
"""

from .asymptotics import (
    OptionAsymptote, OptionKind, SmilePoint, SviParams,
    bs_option_asymptotes, bs_rate, implied_var_infinity, implied_variance_from_rate,
    option_asymptote, smile_selector, svi_flat_extreme_rho, svi_params, svi_variance,
    svi_wing_left, svi_wing_right,
)
from .limit import (
    LimitCgf, RateEval, Region, boundary_limits, limit_cgf, limit_cgf_array,
    limit_cgf_derivative, rate, rate_oracle, rate_share, u_star,
)
from .mgf import (
    CriticalMoments, DomainClass, FiniteTimeDomain, chi, classify, critical_moments,
    domain_t, explosion_time, f_t, gamma_sq, lambda_t, psi_t, riccati_rhs,
)
from .montecarlo import (
    McEstimate, Scheme, SimConfig, mc_ldp_rate, mc_mgf_check, simulate_snapshots,
    simulate_terminal,
)
from .params import (
    AdmissibilityError, ExplosionError, ModelParams, OutOfRangeError, UnsupportedError,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError", "CriticalMoments", "DomainClass", "ExplosionError",
    "FiniteTimeDomain", "LimitCgf", "McEstimate", "ModelParams", "OptionAsymptote",
    "OptionKind", "OutOfRangeError", "RateEval", "Region", "Scheme", "SimConfig",
    "SmilePoint", "SviParams", "UnsupportedError",
    "boundary_limits", "bs_option_asymptotes", "bs_rate", "chi", "classify",
    "critical_moments", "domain_t", "explosion_time", "f_t", "gamma_sq",
    "implied_var_infinity", "implied_variance_from_rate", "lambda_t", "limit_cgf",
    "limit_cgf_array", "limit_cgf_derivative", "mc_ldp_rate", "mc_mgf_check",
    "option_asymptote", "psi_t", "rate", "rate_oracle", "rate_share", "riccati_rhs",
    "simulate_snapshots", "simulate_terminal", "smile_selector", "svi_flat_extreme_rho",
    "svi_params", "svi_variance", "svi_wing_left", "svi_wing_right", "u_star",
]
