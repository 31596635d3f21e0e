import numpy as np
import pytest

from vofwave import kernels


@pytest.fixture(params=kernels.available_backends())
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    impl = kernels.get_backend(request.param)
    for name in ("l1_weights", "history_sum", "ldl_factor", "ldl_solve"):
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance_log(request):
    """Collects one summary line per acceptance criterion."""
    lines = request.config.stash[_ACCEPTANCE]

    def log(criterion, passed, detail):
        lines.append((criterion, passed, detail))
        return passed

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in sorted(lines):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")
