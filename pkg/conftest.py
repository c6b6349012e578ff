"""Shared fixtures: the expensive maps and fixed points are built once per session."""

import math

import pytest

from combinatorics import DOUBLING, CombSequence
from family_cascade import Family, cascade_table, feigenbaum_map
from spectral import analyse_fixed_point, fixed_point

GOLDEN_C = (math.sqrt(5.0) - 1.0) / 2.0
# c (1 + c) at the period-doubling accumulation point of z^2 + C, C = -c (1 + c)
FEIGENBAUM_K = 1.4011551890920506
FEIGENBAUM_C = (-1.0 + math.sqrt(1.0 + 4.0 * FEIGENBAUM_K)) / 2.0
DELTA = 4.669201609102990
SCALING = 2.502907875095892


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: multi-second solver runs")


def standard_map(c, alpha=2.0):
    return Family.standard(alpha).map_at(c)


@pytest.fixture(scope="session")
def golden_map():
    """Superstable period-2 map of the quadratic standard family."""
    return standard_map(GOLDEN_C)


@pytest.fixture(scope="session")
def full_map():
    """f(x) = 1 - 2x^2."""
    return standard_map(1.0)


@pytest.fixture(scope="session")
def feigenbaum():
    return feigenbaum_map(2.0)


@pytest.fixture(scope="session")
def cascade2():
    return cascade_table(Family.standard(2.0), 10)


@pytest.fixture(scope="session")
def doubling_word():
    return CombSequence((DOUBLING,))


@pytest.fixture(scope="session")
def doubling_fixed_point(doubling_word):
    return fixed_point(2.0, doubling_word, degree=40, tol=1e-11)


@pytest.fixture(scope="session")
def doubling_report(doubling_fixed_point):
    return analyse_fixed_point(doubling_fixed_point)
