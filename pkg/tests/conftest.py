import pytest

from _graphs import C4, C4_K3, K3, K23, P2, P3, named
from _report import RESULTS


@pytest.fixture
def p2():
    return named(P2)


@pytest.fixture
def p3():
    return named(P3)


@pytest.fixture
def k3():
    return named(K3)


@pytest.fixture
def c4():
    return named(C4)


@pytest.fixture
def c4_k3():
    return named(C4_K3)


@pytest.fixture
def k23():
    return named(K23)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        passed, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
