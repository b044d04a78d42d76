import pytest

from fractm.measure import WeightParams
from fractm.optimize import OptimizerConfig
from fractm.profiles import default_grid

# one line per acceptance criterion, filled by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def p21():
    return WeightParams(2.0, 1.0)


@pytest.fixture
def small_cfg():
    # cheap optimizer settings for unit tests
    return OptimizerConfig(
        grid=default_grid(256),
        restarts=2,
        moser_n_max=40,
        ishiwata_points=24,
        identity_seed_fracs=(0.5,),
        max_iters=400,
    )


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k[2:])):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
