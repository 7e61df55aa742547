import functools

import numpy as np
import pytest

from sptsim.model import get_preset, target_ground_state


@functools.lru_cache(maxsize=None)
def ground(preset: str, n_sites: int):
    return target_ground_state(get_preset(preset).params, n_sites)[1]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_state(rng, n_sites):
    from sptsim.statevector import State

    v = rng.standard_normal(2**n_sites) + 1j * rng.standard_normal(2**n_sites)
    return State(n_sites, v / np.linalg.norm(v))


def random_unitary(rng, dim):
    from scipy.stats import unitary_group

    return unitary_group.rvs(dim, random_state=rng)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
