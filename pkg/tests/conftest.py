import pytest

from ai_energy_game import build_instance
from ai_energy_game.model import CostSpec, ModelParams


@pytest.fixture(params=list("ABCD"))
def instance(request):
    return build_instance(request.param)


@pytest.fixture
def toy():
    """Round numbers for hand-checkable arithmetic (k=100, alpha=1)."""
    return ModelParams(
        theta=10.0, lam=3.0, k=100.0, alpha=1.0, c_r=0.05, c_f=0.1,
        e_f=0.5e-3, b=0.15, eta=2.0, xi=225.0, cost=CostSpec(g=1.0, mu=1.5),
    )


def pytest_configure(config):
    config.acceptance_lines = {}


@pytest.fixture
def report(request):
    """Record the single pass/fail line of one acceptance criterion."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.acceptance_lines[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.acceptance_lines
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
