import numpy as np
import pytest

from analytic_core import AnalyticSeries
from conftest import standard_map
from errors import ArgumentError, DomainError, ValidationError
from unimodal_space import (PSI_INTERVAL, UnimodalMap, domain_limit, dist_r, embed_j_alpha,
                            eval_unimodal, validate_unimodal)


def test_standard_map_is_unimodal():
    f = standard_map(0.5)
    report = validate_unimodal(f)
    assert report.is_unimodal
    assert report.boundary_residual <= 1e-15
    assert report.critical_value == pytest.approx(0.5, abs=1e-15)
    assert report.monotonicity_margin > 0.0
    assert not report.is_boundary_case


def test_values_and_evenness():
    f = standard_map(0.5)
    x = np.linspace(-1.0, 1.0, 41)
    assert np.array_equal(f(x), f(-x))
    assert np.allclose(f(x), 0.5 - 1.5 * x ** 2, atol=1e-15)
    assert f(1.0) == pytest.approx(-1.0, abs=1e-15)


def test_eval_unimodal_margin():
    f = standard_map(0.5, alpha=2.5)
    assert eval_unimodal(f, 0.3) == eval_unimodal(f, -0.3)
    assert eval_unimodal(f, 0.3) == pytest.approx(0.5 - 1.5 * 0.3 ** 2.5, abs=1e-15)
    assert eval_unimodal(f, 1.0) == pytest.approx(-1.0, abs=1e-15)
    eval_unimodal(f, 1.005)
    with pytest.raises(DomainError):
        eval_unimodal(f, np.array([0.0, -1.05]))


def test_derivative_matches_finite_difference():
    f = standard_map(0.7, alpha=2.5)
    h = 1e-6
    for x in (-0.7, -0.2, 0.3, 0.9):
        fd = (f(x + h) - f(x - h)) / (2 * h)
        assert f.derivative(x) == pytest.approx(fd, rel=1e-7)
    assert f.derivative(0.0) == 0.0


def test_full_map_is_boundary_case(full_map):
    report = validate_unimodal(full_map)
    assert report.is_unimodal
    assert report.is_boundary_case


def test_boundary_normalization_enforced():
    psi = AnalyticSeries(PSI_INTERVAL, [0.0, 0.5], 50.0)
    with pytest.raises(ValidationError) as info:
        embed_j_alpha(psi, 2.0)
    report = info.value.details["report"]
    assert report.boundary_residual == pytest.approx(0.5)
    assert not report.is_unimodal


def test_non_monotone_factor_rejected():
    # psi(t) = 0.2 T_1 - 0.8 T_2 has psi(-1) = -1 but turns over at t = 1/16
    psi = AnalyticSeries(PSI_INTERVAL, [0.0, 0.2, -0.8], 50.0)
    with pytest.raises(ValidationError) as info:
        embed_j_alpha(psi, 2.0)
    report = info.value.details["report"]
    assert report.boundary_residual <= 1e-15
    assert report.monotonicity_margin < 0.0


def test_constructor_checks():
    psi = AnalyticSeries(PSI_INTERVAL, [0.0, 1.0], 50.0)
    with pytest.raises(ArgumentError):
        UnimodalMap(1.0, psi)
    with pytest.raises(ArgumentError):
        UnimodalMap(2.0, AnalyticSeries((-1.0, 1.0), [0.0, 1.0], 50.0))


def test_domain_limit():
    f = standard_map(0.5)
    limit = domain_limit(f)
    assert limit == pytest.approx(1.025 ** 0.5)
    f(1.01)
    with pytest.raises(DomainError):
        f(np.array([0.0, 1.2]))


def test_dict_round_trip():
    f = standard_map(0.3, alpha=3.0)
    g = UnimodalMap.from_dict(f.to_dict())
    assert g.alpha == 3.0
    assert np.array_equal(g.psi.coeffs, f.psi.coeffs)


def test_distance_is_a_metric():
    f, g, h = standard_map(0.2), standard_map(0.5), standard_map(0.9)
    assert dist_r(f, f, 0.1) == 0.0
    assert dist_r(f, g, 0.1) == pytest.approx(dist_r(g, f, 0.1))
    assert dist_r(f, h, 0.1) <= dist_r(f, g, 0.1) + dist_r(g, h, 0.1) + 1e-15
    assert dist_r(f, g, 0.1) > 0.0


def _random_map(rng):
    c = rng.uniform(0.2, 0.9)
    coeffs = np.zeros(6)
    coeffs[:2] = c - 0.5 * (1.0 + c), 0.5 * (1.0 + c)
    bumps = rng.uniform(-1e-3, 1e-3, 4)
    coeffs[2:] += bumps
    coeffs[0] -= sum(b * (-1.0) ** k for k, b in enumerate(bumps, start=2))
    return UnimodalMap(rng.uniform(1.5, 3.0), AnalyticSeries(PSI_INTERVAL, coeffs, 50.0))


def test_distance_triangle_inequality():
    rng = np.random.default_rng(41)
    for _ in range(20):
        f, g, h = (_random_map(rng) for _ in range(3))
        assert dist_r(f, h, 0.1) <= dist_r(f, g, 0.1) + dist_r(g, h, 0.1) + 1e-14
        assert dist_r(f, g, 0.1) == pytest.approx(dist_r(g, f, 0.1), rel=1e-14)


def test_distance_counts_exponent():
    f = standard_map(0.5, alpha=2.0)
    g = UnimodalMap(2.5, f.psi)
    assert dist_r(f, g, 0.1) == pytest.approx(0.5)
