import functools

import pytest
from hypothesis import settings

from hydro2d.eigensolver import GroundState, Level, SolverOptions, converge, solve_target
from hydro2d.params import PhysicalConfig

settings.register_profile("repo", deadline=None, max_examples=40)
settings.load_profile("repo")


@functools.lru_cache(maxsize=None)
def cached_solve(B, alpha_deg, target, N=800, M=None, rho_N=None):
    cfg = PhysicalConfig.from_degrees(B, alpha_deg)
    return solve_target(cfg, target, SolverOptions(N=N, M=M, rho_N=rho_N))


@functools.lru_cache(maxsize=None)
def cached_converge(B, alpha_deg, target=GroundState(), tol=1e-7):
    return converge(PhysicalConfig.from_degrees(B, alpha_deg), target, tol)


@pytest.fixture(scope="session")
def zero_field_pair():
    """Ground state and Level(2, 1) at B = 0 on a common grid."""
    return cached_solve(0.0, 0.0, GroundState(), 1600, 1, 60.0), cached_solve(0.0, 0.0, Level(2, 1), 1600, 1, 60.0)


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line; all lines are repeated in the terminal summary."""
    def _report(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append((number, line))
        print(line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
