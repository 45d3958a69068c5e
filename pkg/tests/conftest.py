import os

import pytest

from disclosure_eq import ExtParams, ModelParams, make_normal

os.environ.setdefault("MPLBACKEND", "Agg")

# One (criterion id, description, passed) row per acceptance criterion;
# printed in the terminal summary so each criterion gets its own line.
ACCEPTANCE_RESULTS: list[tuple[int, str, bool]] = []


def record_criterion(criterion: int, description: str, passed: bool) -> None:
    ACCEPTANCE_RESULTS.append((criterion, description, passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, description, passed in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {criterion}: {status} - {description}")


@pytest.fixture(scope="session")
def nx():
    """Reference signal distribution used by most figures: Normal(1, 0.5)."""
    return make_normal(1.0, 0.5)


@pytest.fixture(scope="session")
def short_params(nx):
    """Short-case parameter point used throughout: beta=0.5, q=0.8, r=0.5."""
    return ModelParams(alpha=0.5, beta=0.5, q=0.8, r_obs=0.5, r0=1.0, x_dist=nx)


@pytest.fixture(scope="session")
def long_params(nx):
    return ModelParams(alpha=0.5, beta=0.5, q=0.8, r_obs=2.0, r0=1.0, x_dist=nx)


@pytest.fixture(scope="session")
def ext_below_params(nx):
    return ExtParams(alpha=0.5, beta=0.7, p_firm=0.5, r_obs=0.5, r0=1.0, x_dist=nx)


@pytest.fixture(scope="session")
def ext_above_params(nx):
    return ExtParams(alpha=0.5, beta=0.7, p_firm=0.5, r_obs=3.0, r0=1.0, x_dist=nx)
