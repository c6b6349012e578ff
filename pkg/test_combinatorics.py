import math

import numpy as np
import pytest

from analytic_core import affine_from_endpoints
from combinatorics import (DOUBLING, TRIPLING, CombSequence, RenormData, UnimodalPermutation,
                           detect_renormalization, expansion_factor, interval_image, iterate,
                           orbit_derivative, orbit_intervals, permutation_of,
                           restrictive_interval)
from conftest import GOLDEN_C, standard_map
from errors import ArgumentError, InconsistencyError
from family_cascade import Family, superstable_parameter_of_period


@pytest.fixture(scope="module")
def period3_map():
    fam = Family.standard(2.0)
    return fam.map_at(superstable_parameter_of_period(fam, 3, (0.9, 0.95)))


def test_golden_map_doubling_interval(golden_map):
    data = detect_renormalization(golden_map, 3)
    beta = GOLDEN_C ** 2  # positive fixed point of f
    assert data.m == 2
    assert data.J[0] == -data.J[1]
    assert data.J[1] == pytest.approx(beta, abs=1e-14)
    assert data.theta == DOUBLING
    assert data.boundary_type == "right"
    assert (data.p, data.q) == (data.J[1], data.J[0])
    assert data.mu == pytest.approx(1.0 / beta, rel=1e-12)
    assert expansion_factor(golden_map, data) == data.mu


def test_rescaling_sends_p_and_q_to_the_boundary(golden_map):
    data = detect_renormalization(golden_map, 2)
    assert data.rescale(data.p) == pytest.approx(-1.0, abs=1e-15)
    assert data.rescale(data.q) == pytest.approx(1.0, abs=1e-15)


def test_orbit_of_interval_is_restrictive(golden_map):
    data = detect_renormalization(golden_map, 2)
    images = orbit_intervals(golden_map, data.J, 2)
    J, image = images[0], images[-1]
    assert J[0] - 1e-10 <= image[0] and image[1] <= J[1] + 1e-10
    assert min(images[0][1], images[1][1]) - max(images[0][0], images[1][0]) <= 1e-12


def test_period_three_window(period3_map):
    assert detect_renormalization(period3_map, 2) is None
    data = detect_renormalization(period3_map, 3)
    assert data.m == 3
    assert data.theta == TRIPLING
    assert permutation_of(period3_map, data) == TRIPLING


def test_full_map_not_renormalizable(full_map):
    assert detect_renormalization(full_map, 4) is None


def test_permutation_recomputed(golden_map):
    data = detect_renormalization(golden_map, 2)
    assert permutation_of(golden_map, data) == data.theta


def test_overlapping_orbit_is_inconsistent(golden_map):
    data = RenormData(m=2, J=(-0.9, 0.9), p=0.9, q=-0.9,
                      rescale=affine_from_endpoints(0.9, -0.9), theta=DOUBLING,
                      boundary_type="right")
    with pytest.raises(InconsistencyError) as info:
        permutation_of(golden_map, data)
    assert info.value.details["pair"] == (0, 1)


def test_no_period_two_interval_past_the_window():
    assert restrictive_interval(standard_map(0.95), 2) is None


def test_m_max_range(golden_map):
    with pytest.raises(ArgumentError):
        detect_renormalization(golden_map, 1)
    with pytest.raises(ArgumentError):
        detect_renormalization(golden_map, 33)


def test_renorm_data_needs_period_two():
    with pytest.raises(ArgumentError):
        RenormData(m=1, J=(-0.5, 0.5), p=0.5, q=-0.5, rescale=affine_from_endpoints(0.5, -0.5),
                   theta=DOUBLING, boundary_type="right")


def test_interval_image(golden_map):
    f = golden_map
    lo, hi = interval_image(f, (-0.5, 0.25))
    assert hi == pytest.approx(GOLDEN_C)
    assert lo == pytest.approx(min(f(-0.5), f(0.25)))
    lo, hi = interval_image(f, (0.25, 0.5))
    assert (lo, hi) == pytest.approx((f(0.5), f(0.25)))
    with pytest.raises(ArgumentError):
        interval_image(f, (0.5, 0.25))


def test_orbit_derivative_chain_rule(golden_map):
    f = golden_map
    x = 0.3
    expected = f.derivative(x) * f.derivative(f(x)) * f.derivative(f(f(x)))
    assert orbit_derivative(f, x, 3) == pytest.approx(expected)
    assert iterate(f, x, 3) == f(f(f(x)))


def test_permutation_validation():
    assert UnimodalPermutation.parse("1,2,0") == TRIPLING
    assert str(DOUBLING) == "0,1"
    assert TRIPLING.period == 3
    with pytest.raises(ArgumentError):
        UnimodalPermutation((0, 0))
    with pytest.raises(ArgumentError):
        UnimodalPermutation((0,))


def test_word_parsing():
    named = CombSequence.parse("doubling, tripling")
    assert list(named) == [DOUBLING, TRIPLING]
    explicit = CombSequence.parse("0,1;1,2,0")
    assert explicit == named
    assert explicit.to_list() == [[0, 1], [1, 2, 0]]
    assert len(CombSequence()) == 0
    with pytest.raises(ArgumentError):
        CombSequence.parse("0,1;2,2,0")


def test_golden_interval_matches_fixed_point_formula():
    c = 0.7
    f = standard_map(c)
    beta = (-1.0 + math.sqrt(1.0 + 4.0 * c * (1.0 + c))) / (2.0 * (1.0 + c))
    data = detect_renormalization(f, 2)
    assert data.J[1] == pytest.approx(beta, abs=1e-14)
    assert np.isclose(f(beta), beta, atol=1e-14)
