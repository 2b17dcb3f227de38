import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affine_ldp import (
    DomainClass, ExplosionError, ModelParams, boundary_limits, chi, critical_moments,
    domain_t, explosion_time, f_t, gamma_sq, lambda_t, limit_cgf, psi_t, riccati_rhs,
)

from conftest import CLASS_IB, CLASS_IIA, CLASS_IIB, HESTON_IA

admissible = st.builds(
    ModelParams,
    a=st.floats(0.0, 0.2),
    b=st.floats(0.0, 1.0),
    alpha=st.floats(1e-3, 4.0),
    beta=st.floats(-5.0, 2.0),
    rho=st.floats(-1.0, 1.0),
    v0=st.floats(1e-3, 1.0),
)


class TestChiGamma:
    def test_chi_at_zero_is_beta(self):
        assert chi(0.0, HESTON_IA) == -2.0

    def test_chi_constant_without_correlation(self):
        p = ModelParams(beta=-0.7, rho=0.0, alpha=0.3)
        assert all(chi(u, p) == -0.7 for u in (-3.0, 0.5, 11.0))

    def test_chi_at_one(self):
        assert chi(1.0, HESTON_IA) == pytest.approx(-2.1, abs=1e-15)

    def test_gamma_sq_at_endpoints(self):
        assert gamma_sq(0.0, HESTON_IA) == 4.0
        assert gamma_sq(1.0, HESTON_IA) == pytest.approx(chi(1.0, HESTON_IA) ** 2, rel=1e-15)

    def test_gamma_sq_golden_roots(self):
        p = ModelParams(beta=-1.0, rho=0.0, alpha=1.0)
        for root in ((1 - math.sqrt(5)) / 2, (1 + math.sqrt(5)) / 2):
            assert abs(gamma_sq(root, p)) < 1e-15


class TestCriticalMoments:
    def test_golden_ratio(self):
        cm = critical_moments(ModelParams(beta=-1.0, rho=0.0, alpha=1.0))
        assert cm.u_minus == pytest.approx((1 - math.sqrt(5)) / 2, rel=1e-15)
        assert cm.u_plus == pytest.approx((1 + math.sqrt(5)) / 2, rel=1e-15)

    def test_both_infinite_when_leading_coefficient_vanishes(self):
        # |rho| = 1 and sqrt(alpha) + 2 rho beta = 0
        cm = critical_moments(ModelParams(alpha=0.04, rho=-1.0, beta=0.1))
        assert cm.u_minus == -math.inf and cm.u_plus == math.inf

    def test_one_infinite_at_extreme_rho(self):
        # gamma^2 = 1 - 0.36 u is linear
        p = ModelParams(alpha=0.04, rho=-1.0, beta=1.0)
        cm = critical_moments(p)
        assert cm.u_minus == -math.inf
        assert cm.u_plus == pytest.approx(1 / 0.36, rel=1e-14)

    @settings(max_examples=200, deadline=None)
    @given(admissible)
    def test_roots_and_ordering(self, p):
        cm = critical_moments(p)
        assert cm.u_minus <= 0.0 and cm.u_plus >= 1.0
        for u in (cm.u_minus, cm.u_plus):
            if math.isfinite(u) and abs(p.rho) < 1:
                scale = max(1.0, chi(u, p) ** 2, p.alpha * u * u)
                assert abs(gamma_sq(u, p)) <= 1e-12 * scale

    def test_roots_agree_with_bisection(self):
        p = HESTON_IA
        cm = critical_moments(p)
        lo, hi = 1.0, 100.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if gamma_sq(mid, p) > 0 else (lo, mid)
        assert cm.u_plus == pytest.approx(lo, rel=1e-13)


class TestFt:
    def test_time_zero(self):
        for u in (-3.0, 0.2, 5.0, 40.0):
            assert f_t(u, 0.0, HESTON_IA) == 1.0

    def test_at_zero_with_negative_beta(self):
        t = 3.0
        assert f_t(0.0, t, HESTON_IA) == pytest.approx(math.exp(2.0 * t / 2), rel=1e-13)

    def test_vanishes_at_upper_domain_edge(self):
        for t in (5.0, 10.0, 20.0, 40.0):
            d = domain_t(t, CLASS_IB)
            assert d.upper_is_root
            assert abs(f_t(d.upper, t, CLASS_IB)) <= 1e-9


class TestPsi:
    def test_zero_on_martingale_points(self):
        for t in (0.1, 1.0, 10.0):
            assert psi_t(0.0, t, HESTON_IA) == 0.0
            assert psi_t(1.0, t, HESTON_IA) == 0.0

    def test_zero_at_time_zero(self):
        assert psi_t(7.0, 0.0, HESTON_IA) == 0.0

    def test_raises_past_explosion(self):
        u = 1.5
        T = explosion_time(u, CLASS_IB)
        with pytest.raises(ExplosionError):
            psi_t(u, T * 1.01, CLASS_IB)

    @pytest.mark.parametrize("p", [HESTON_IA, CLASS_IB, CLASS_IIA, CLASS_IIB], ids=["IA", "IB", "IIA", "IIB"])
    def test_riccati_residual(self, p):
        h = 1e-5
        cm = critical_moments(p)
        lo = max(cm.u_minus, -20.0)
        hi = min(cm.u_plus, 20.0)
        # straddle the critical moments to exercise the trigonometric branch too
        for u in np.linspace(lo - 0.5, hi + 0.5, 15):
            for t in (0.25, 1.0, 3.0):
                if explosion_time(float(u), p) <= 1.05 * (t + h):
                    continue
                w = psi_t(float(u), t, p)
                dpsi = (psi_t(float(u), t + h, p) - psi_t(float(u), t - h, p)) / (2 * h)
                r = riccati_rhs(float(u), w, p)
                assert abs(dpsi - r) / (1.0 + abs(r)) < 1e-6


class TestLambdaT:
    @settings(max_examples=300, deadline=None)
    @given(admissible, st.sampled_from([0.1, 1.0, 10.0, 250.0]))
    def test_normalization_exact(self, p, t):
        assert lambda_t(0.0, t, p) == 0.0
        assert lambda_t(1.0, t, p) == 0.0

    def test_heston_value(self):
        # frozen from the closed form; agrees with Monte Carlo (see test_montecarlo)
        assert lambda_t(0.5, 1.0, HESTON_IA) == pytest.approx(-0.0049287319902796044, rel=1e-12)

    def test_infinite_past_explosion(self):
        u = 1.5
        T = explosion_time(u, CLASS_IB)
        assert lambda_t(u, 1.01 * T, CLASS_IB) == math.inf
        assert math.isfinite(lambda_t(u, 0.99 * T, CLASS_IB))

    @pytest.mark.parametrize("p", [HESTON_IA, CLASS_IB, CLASS_IIA, CLASS_IIB], ids=["IA", "IB", "IIA", "IIB"])
    def test_midpoint_convexity(self, p):
        t = 2.0
        d = domain_t(t, p)
        lo = max(d.exact_lower, -30.0)
        hi = min(d.exact_upper, 30.0)
        u = np.linspace(lo, hi, 401)[1:-1]
        vals = np.array([lambda_t(float(x), t, p) for x in u])
        assert np.all(np.isfinite(vals))
        second = vals[2:] - 2 * vals[1:-1] + vals[:-2]
        assert np.all(second >= -1e-9)

    def test_expansion_converges(self):
        p = CLASS_IB
        L = boundary_limits(p)
        u = 0.5
        ts = (25.0, 50.0, 100.0, 200.0)
        q = [t * (lambda_t(u, t, p) / t - limit_cgf(u, L)) + 2 * p.b / p.alpha * math.log(1 - u)
             for t in ts]
        diffs = [abs(b - a) for a, b in zip(q, q[1:])]
        assert all(d1 < d0 for d0, d1 in zip(diffs, diffs[1:]))

    def test_rate_of_convergence(self):
        p = CLASS_IB
        L = boundary_limits(p)
        for u in (0.2, 0.5, 0.8):
            for t in (50.0, 100.0, 200.0, 400.0):
                err = abs(lambda_t(u, t, p) / t - limit_cgf(u, L))
                assert err <= 2.0 * math.log(t) / t


class TestContinuityAcrossCriticalMoments:
    @pytest.mark.parametrize("p", [HESTON_IA, CLASS_IB, CLASS_IIA], ids=["IA", "IB", "IIA"])
    def test_branches_join(self, p):
        cm = critical_moments(p)
        t = 0.5
        for edge in (cm.u_minus, cm.u_plus):
            if not math.isfinite(edge) or explosion_time(edge, p) <= 2 * t:
                continue
            for fn in (f_t, psi_t, lambda_t):
                inner = fn(edge - 1e-7 * math.copysign(1, edge), t, p)
                outer = fn(edge + 1e-7 * math.copysign(1, edge), t, p)
                assert abs(inner - outer) < 1e-6


class TestExplosionTime:
    def test_infinite_on_unit_interval(self):
        for p in (HESTON_IA, CLASS_IB, CLASS_IIA, CLASS_IIB):
            for u in (0.0, 0.3, 1.0):
                assert explosion_time(u, p) == math.inf

    def test_finite_and_root_in_class_ib(self):
        p = CLASS_IB
        cm = critical_moments(p)
        for u in np.linspace(1.0, cm.u_plus, 7)[1:-1]:
            T = explosion_time(float(u), p)
            assert math.isfinite(T)
            assert abs(f_t(float(u), T, p)) <= 1e-9

    @pytest.mark.parametrize("t", [5.0, 10.0, 20.0])
    def test_round_trip_with_domain_edge(self, t):
        d = domain_t(t, CLASS_IB)
        assert explosion_time(d.upper, CLASS_IB) == pytest.approx(t, rel=1e-8)


class TestDomainT:
    def test_rejects_nonpositive_time(self):
        with pytest.raises(ValueError):
            domain_t(0.0, HESTON_IA)

    def test_class_ia_uses_critical_moments(self):
        cm = critical_moments(HESTON_IA)
        d = domain_t(10.0, HESTON_IA)
        assert d.domain_class is DomainClass.IA
        assert (d.lower, d.upper) == (cm.u_minus, cm.u_plus)
        assert not (d.lower_is_root or d.upper_is_root)

    def test_class_ib_upper_decreases_to_one(self):
        uppers = [domain_t(t, CLASS_IB).upper for t in (5.0, 10.0, 20.0, 40.0, 80.0)]
        assert all(1.0 < b < a for a, b in zip(uppers, uppers[1:]))
        assert uppers[-1] - 1.0 < 1e-8

    def test_class_iia_lower_increases_to_zero(self):
        lowers = [domain_t(t, CLASS_IIA).lower for t in (5.0, 10.0, 20.0, 40.0, 80.0)]
        cm = critical_moments(CLASS_IIA)
        assert all(cm.u_minus < a < b < 0.0 for a, b in zip(lowers, lowers[1:]))

    def test_class_iib_both_roots(self):
        cm = critical_moments(CLASS_IIB)
        d = domain_t(30.0, CLASS_IIB)
        assert d.domain_class is DomainClass.IIB
        assert d.lower_is_root and d.upper_is_root
        assert cm.u_minus < d.lower < 0.0 and 1.0 < d.upper < cm.u_plus

    @pytest.mark.parametrize("p", [HESTON_IA, CLASS_IB, CLASS_IIA, CLASS_IIB], ids=["IA", "IB", "IIA", "IIB"])
    @pytest.mark.parametrize("t", [0.5, 5.0, 50.0])
    def test_unit_interval_inside_and_sandwich(self, p, t):
        d = domain_t(t, p)
        assert d.lower <= 0.0 and d.upper >= 1.0
        assert d.exact_lower <= d.lower and d.exact_upper >= d.upper
        if math.isfinite(d.exact_upper):
            assert math.isinf(lambda_t(d.exact_upper * (1 + 1e-6), t, p))
        inner = 0.5 * (d.exact_lower + 0.0) if math.isfinite(d.exact_lower) else -1.0
        assert d.contains(inner) and math.isfinite(lambda_t(inner, t, p))
