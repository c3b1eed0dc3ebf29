from fractions import Fraction

import pytest

from omegagroup.instances import parse_instance_spec

SHIPPED = ["q-abs", "q-padic:7", "q-padic:2", "matrix:3", "octonion", "map:2:q-abs"]


@pytest.fixture(params=SHIPPED)
def shipped(request):
    return parse_instance_spec(request.param)


@pytest.fixture
def q():
    return parse_instance_spec("q-abs")


@pytest.fixture
def q7():
    return parse_instance_spec("q-padic:7")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion")


_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            n, text = value
            prev = _criteria.get(n, (text, True))
            _criteria[n] = (text, prev[1] and report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        text, ok = _criteria[n]
        terminalreporter.write_line("%s  criterion %2d: %s" % ("PASS" if ok else "FAIL", n, text))
