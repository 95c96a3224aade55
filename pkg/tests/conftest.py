import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from inducibility.tanglegram import Tanglegram, random_plane_tree
from inducibility.trees import PlaneTree

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def plane_trees(draw, min_leaves=1, max_leaves=9):
    n = draw(st.integers(min_leaves, max_leaves))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_plane_tree(n, np.random.default_rng(seed))


@st.composite
def shapes(draw, min_leaves=1, max_leaves=9):
    return draw(plane_trees(min_leaves, max_leaves)).shape


@st.composite
def tanglegrams(draw, min_leaves=1, max_leaves=7):
    n = draw(st.integers(min_leaves, max_leaves))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    sigma = tuple(int(x) + 1 for x in rng.permutation(n))
    return Tanglegram(random_plane_tree(n, rng), random_plane_tree(n, rng), sigma)


# acceptance lines collected for the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
