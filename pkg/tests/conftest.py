import numpy as np
import pytest
from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def spread_roots(n, lo=-4.0, hi=-0.2, gap=0.1, rng=None):
    """n real roots in [lo, hi] with pairwise gaps of at least ``gap``."""
    rng = rng or np.random.default_rng()
    while True:
        r = rng.uniform(lo, hi, n)
        if n == 1 or np.min(np.diff(np.sort(r))) >= gap:
            return r


@st.composite
def stable_roots(draw, min_n=1, max_n=5, lo=-4.0, hi=-0.2, gap=0.1):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return spread_roots(n, lo, hi, gap, np.random.default_rng(seed))


@st.composite
def roots_and_state(draw, min_n=1, max_n=4, max_d=3):
    r = draw(stable_roots(min_n, max_n))
    d = draw(st.integers(1, max_d))
    seed = draw(st.integers(0, 2**32 - 1))
    return r, np.random.default_rng(seed).uniform(-1, 1, (r.size, d))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
