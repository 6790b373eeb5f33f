import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from acmg import random_models as rm
from acmg.pipeline import Geometry

settings.register_profile(
    "default", max_examples=100, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
EPS = 1e-9


def random_geometry(seed, m=None, family=None):
    """A random left-invariant metric Lie algebra with a random structure on it."""
    rng = np.random.default_rng(seed)
    if m is None:
        m = int(rng.choice([3, 5, 7]))
    if family is None:
        family = rm.FAMILIES[rng.integers(len(rm.FAMILIES))]
    if family == "sum" and m < 4:
        family = "su2"
    model, _ = rm.random_lie_algebra(rng, m, family)
    return Geometry(model, rm.random_structure(rng, m))


def zeta_free_geometry(seed, m=None):
    rng = np.random.default_rng(seed)
    if m is None:
        m = int(rng.choice([3, 5, 7]))
    model, acms = rm.random_xi_zeta_free(rng, m)
    return Geometry(model, acms)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(acceptance.LINES, key=lambda k: int(k[1:])):
        terminalreporter.write_line(acceptance.LINES[key])
