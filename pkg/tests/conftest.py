import pytest

from affine_ldp import ModelParams, boundary_limits
from affine_ldp.selftest import REFERENCE_SETS

HESTON_IA = REFERENCE_SETS["IA"]
CLASS_IB = REFERENCE_SETS["IB"]
CLASS_IIA = REFERENCE_SETS["IIA"]
CLASS_IIB = REFERENCE_SETS["IIB"]
# class IIB with rho = -1
CLASS_IIB_RHO_M1 = ModelParams(b=0.08, alpha=0.04, beta=1.0, rho=-1.0, v0=0.04)
# the same sets with a > 0: steep everywhere, numeric u_x path
WITH_A = {
    "IAa": ModelParams(a=0.02, b=0.08, alpha=0.04, beta=-2.0, rho=-0.5, v0=0.04),
    "IBa": ModelParams(a=0.03, b=0.1, alpha=1.0, beta=-0.6, rho=0.9, v0=0.1),
}
ALL_SETS = {**REFERENCE_SETS, "IIB_rho_m1": CLASS_IIB_RHO_M1, **WITH_A}


@pytest.fixture(params=sorted(ALL_SETS), ids=sorted(ALL_SETS))
def any_set(request):
    p = ALL_SETS[request.param]
    return request.param, p, boundary_limits(p)


@pytest.fixture(params=sorted(REFERENCE_SETS), ids=sorted(REFERENCE_SETS))
def class_set(request):
    p = REFERENCE_SETS[request.param]
    return request.param, p, boundary_limits(p)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
