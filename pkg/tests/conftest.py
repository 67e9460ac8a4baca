import pytest

from eur import HamiltonianParams
from eur.sweep import SweepConfig, run_sweep


@pytest.fixture(scope="session")
def small_sweep():
    """Numeric and first-order records over alpha = 0 .. 0.5."""
    cfg = SweepConfig.from_range(0.0, 0.5, 0.05, methods=("numeric", "analytic-small"))
    return run_sweep(cfg)


@pytest.fixture(scope="session")
def large_sweep():
    cfg = SweepConfig.from_range(30.0, 90.0, 10.0, methods=("numeric", "analytic-large", "adiabatic-numeric-FT"),
                                 n_max=60, adapt_basis=True)
    return run_sweep(cfg)


@pytest.fixture
def unit():
    return HamiltonianParams(1.0, 1.0, 0.0)


def pytest_configure(config):
    config._acceptance_lines = {}


@pytest.fixture(scope="session")
def acceptance_report(request):
    """Record (and echo) the one-line verdict of an acceptance criterion."""
    lines = request.config._acceptance_lines

    def report(number, ok, text):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {text}"
        lines[number] = line
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
