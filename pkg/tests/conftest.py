import warnings

import pytest

import rimlab as rl


@pytest.fixture(scope="session")
def fig2a():
    """eta < 1 < p2/K2: finite acs measure with a pole at 1/2+."""
    return rl.RandomSystem.of(
        [rl.MapSpec.lsv(0.5), rl.MapSpec.attracting(0.5, 0.2)], [0.6, 0.4]
    )


@pytest.fixture(scope="session")
def fig2b():
    """eta < p2/K2 < 1: finite acs measure, bounded at 1/2+."""
    return rl.RandomSystem.of(
        [rl.MapSpec.lsv(0.5), rl.MapSpec.attracting(0.5, 0.8)], [0.6, 0.4]
    )


@pytest.fixture(scope="session")
def eta_above_one():
    """Swapped weights push eta to 0.6 * 0.2^-0.5 ~ 1.34 > 1."""
    return rl.RandomSystem.of(
        [rl.MapSpec.lsv(0.5), rl.MapSpec.attracting(0.5, 0.2)], [0.4, 0.6]
    )


@pytest.fixture(scope="session")
def fig2a_run100(fig2a):
    return rl.power_iterate(fig2a, 100, nodes_per_half=2048)


@pytest.fixture(scope="session")
def fig2b_run(fig2b):
    return rl.power_iterate(fig2b, 400, nodes_per_half=1024)


@pytest.fixture(scope="session")
def quiet_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        yield
