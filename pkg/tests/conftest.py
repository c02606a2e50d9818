import pytest
from hypothesis import HealthCheck, settings

from logdmod.chart import Chart
from logdmod.ncgb import ModulePresentation
from logdmod.opalg import OpElement

settings.register_profile("default", max_examples=40, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

LL = Chart(0, 1)
LP = Chart(0, 2)
PT = Chart(0, 1, frozenset({1}))
A1 = Chart(1, 0)


def g(chart, kind, i=1):
    return OpElement.gen(chart, kind, i)


def module(chart, rows, rank=1):
    return ModulePresentation.from_rows(chart, rank, rows)


def o_ll():
    return module(LL, [[g(LL, "th")]])


def c0():
    return module(LL, [[g(LL, "t")], [g(LL, "th")]])


def d_t():
    return module(LL, [[g(LL, "t")]])


def f_lp():
    t1, t2, h1, h2 = g(LP, "t", 1), g(LP, "t", 2), g(LP, "th", 1), g(LP, "th", 2)
    return module(LP, [[t1 - t2], [h1 + h2]])


def o_pt():
    return module(PT, [[g(PT, "th")]])


FIXTURES = {"O_LL": o_ll, "C0": c0, "D/Dt": d_t, "F_LP": f_lp, "O_PT": o_pt}
HOLONOMIC = {"O_LL": True, "C0": True, "D/Dt": False, "F_LP": False, "O_PT": True}


@pytest.fixture(params=sorted(FIXTURES))
def fixture_module(request):
    return request.param, FIXTURES[request.param]()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}")
