import numpy as np
import pytest

from stegosink import kernels


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request, monkeypatch):
    """Run a test against each available kernel implementation."""
    impl = kernels.backends()[request.param]
    for name in ("embed_frame", "extract_frame", "sum_sq_diff", "dot", "channel_moments"):
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: exit-criterion checks")


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::", 1)[1]
        _acceptance.setdefault(name, report.outcome)
        if report.outcome == "failed":
            _acceptance[name] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
