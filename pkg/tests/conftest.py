import pytest

from cylcrit import kernels
from cylcrit.families import StationaryParams
from cylcrit.solvers import solve_stationary_graph_bvp

_acceptance = []


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    kernels.warmup()


@pytest.fixture(scope="session")
def drop_graph():
    """Stationary m = 1 graph on [-1, 1] with unit boundary heights."""
    st = StationaryParams(1.0, 1.0, 0.0)
    return st, solve_stationary_graph_bvp(st, (-1.0, 1.0), (1.0, 1.0), h=1e-3)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.module.__name__.endswith("test_acceptance"):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _acceptance.append((doc, rep.outcome, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for doc, outcome, duration in _acceptance:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {doc}  ({duration:.2f} s)")
