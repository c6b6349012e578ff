from dataclasses import replace

import numpy as np
import pytest

from combinatorics import DOUBLING
from errors import ArgumentError, NotRenormalizableError, PrecisionError
from renorm_operator import (refit_residual, renorm_tower, renormalize, renormalized_values,
                             successive_distances)
from settings import DEFAULTS


def test_golden_map_renormalizes_to_critical_fixed_point(golden_map):
    result = renormalize(golden_map, 2)
    g = result.map
    assert result.data.m == 2
    assert g.alpha == 2.0
    assert abs(g.critical_value) < 1e-12
    assert result.refit_residual < 1e-10
    assert g(1.0) == pytest.approx(-1.0, abs=1e-10)


def test_refit_agrees_with_direct_composition(golden_map):
    result = renormalize(golden_map, 2)
    x = np.linspace(-0.99, 0.99, 101)
    direct = renormalized_values(golden_map, result.data, x)
    assert np.abs(result.map(x) - direct).max() < 1e-10
    assert refit_residual(golden_map, result.data, result.map.psi) == result.refit_residual


def test_renormalized_values_are_even(feigenbaum):
    data = renormalize(feigenbaum, 2).data
    x = np.linspace(0.0, 1.0, 57)
    assert np.array_equal(renormalized_values(feigenbaum, data, x),
                          renormalized_values(feigenbaum, data, -x))


def test_boundary_points_snap(feigenbaum):
    data = renormalize(feigenbaum, 2).data
    assert renormalized_values(feigenbaum, data, 1.0) == -1.0
    assert renormalized_values(feigenbaum, data, -1.0 + 1e-13) == -1.0


def test_full_map_is_not_renormalizable(full_map):
    with pytest.raises(NotRenormalizableError) as info:
        renormalize(full_map, 3)
    assert info.value.details["m_max"] == 3


def test_golden_tower_breaks_at_second_step(golden_map):
    tower = renorm_tower(golden_map, 3, 2)
    assert len(tower) == 1
    assert tower.break_index == 2
    assert not tower.complete
    assert tower.break_reason


def test_feigenbaum_tower(feigenbaum):
    tower = renorm_tower(feigenbaum, 5, 2)
    assert tower.complete
    assert list(tower.word) == [DOUBLING] * 5
    distances = successive_distances(tower, 0.1)
    assert len(distances) == 5
    assert all(later < earlier for earlier, later in zip(distances, distances[1:]))


def test_tower_steps_compose(feigenbaum):
    tower = renorm_tower(feigenbaum, 2, 2)
    twice = renormalize(renormalize(feigenbaum, 2).map, 2).map
    assert np.abs(tower.maps[2].psi.coeffs - twice.psi.coeffs).max() <= 2e-9


def test_empty_tower(golden_map):
    tower = renorm_tower(golden_map, 0, 2)
    assert len(tower) == 0 and tower.complete
    assert len(tower.word) == 0
    with pytest.raises(ArgumentError):
        renorm_tower(golden_map, -1, 2)


def test_degree_rises_while_tail_is_large(feigenbaum):
    settings = replace(DEFAULTS, tail_threshold=0.0)
    result = renormalize(feigenbaum, 2, settings=settings)
    assert result.map.psi.degree == settings.refit_degree_max


def test_fixed_degree_is_kept(feigenbaum):
    result = renormalize(feigenbaum, 2, degree=24, auto_raise=False)
    assert result.map.psi.degree == 24


def test_unreachable_refit_tolerance(feigenbaum):
    with pytest.raises(PrecisionError) as info:
        renormalize(feigenbaum, 2, settings=replace(DEFAULTS, refit_tol=1e-30))
    assert info.value.details["degree"] == DEFAULTS.refit_degree


def test_fixed_point_is_invariant(doubling_fixed_point):
    g = doubling_fixed_point.point.to_map()
    image = renormalize(g, 2, degree=40, auto_raise=False).map
    assert np.abs(image.psi.coeffs - g.psi.coeffs).max() < 1e-9


def test_result_serializes(golden_map):
    data = renormalize(golden_map, 2).to_dict()
    assert set(data) == {"map", "data", "refit_residual", "tail_norm"}
    assert set(data["data"]) == {"m", "J", "p", "q", "theta", "mu"}
    assert data["data"]["theta"] == [0, 1]
