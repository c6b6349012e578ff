import math

import numpy as np
import pytest

from analytic_core import (AffineMap, AnalyticSeries, affine_from_endpoints, bisect_root,
                           branch_power, chebyshev_nodes, estimate_rho, max_radius, series_eval,
                           series_fit, sup_norm_on_neighborhood)
from errors import ArgumentError, DomainError, PrecisionError, RootFindingError


def test_nodes_lie_inside_interval():
    t, x = chebyshev_nodes((-1.0, 0.0), 20)
    assert t.size == x.size == 21
    assert np.all((x > -1.0) & (x < 0.0))


def test_fit_reproduces_entire_function():
    s = series_fit(np.exp, (-1.0, 0.0), 20, vectorized=True)
    x = np.random.default_rng(7).uniform(-1.0, 0.0, 200)
    assert np.abs(s(x) - np.exp(x)).max() < 1e-14
    assert s.tail_norm < 1e-15


def test_fit_elementwise_matches_vectorized():
    a = series_fit(math.sin, (0.0, 2.0), 16)
    b = series_fit(np.sin, (0.0, 2.0), 16, vectorized=True)
    assert np.allclose(a.coeffs, b.coeffs, atol=1e-15, rtol=0.0)


def test_derivative():
    s = series_fit(np.sin, (-1.0, 1.0), 24, vectorized=True)
    x = np.linspace(-1.0, 1.0, 50)
    assert np.abs(s.derivative()(x) - np.cos(x)).max() < 1e-12


def test_estimate_rho_from_geometric_decay():
    coeffs = 0.5 ** np.arange(30)
    assert estimate_rho(coeffs) == pytest.approx(2.0, rel=1e-9)


def test_estimate_rho_caps_short_tails():
    assert estimate_rho([1.0, 0.5]) == 50.0


def test_eval_margin():
    s = series_fit(np.exp, (-1.0, 0.0), 10, vectorized=True)
    assert series_eval(s, 0.02) == pytest.approx(math.exp(0.02), abs=1e-12)
    with pytest.raises(DomainError) as info:
        series_eval(s, 0.2)
    assert info.value.error_code == "OUT_OF_DOMAIN"


def test_scalar_eval_returns_float():
    s = AnalyticSeries((-1.0, 1.0), [0.0, 1.0], 10.0)
    assert isinstance(s(0.25), float)


def test_series_arithmetic_pads():
    a = AnalyticSeries((-1.0, 1.0), [1.0, 2.0, 3.0], 5.0)
    b = AnalyticSeries((-1.0, 1.0), [1.0], 3.0)
    d = a - b
    assert d.coeffs.tolist() == [0.0, 2.0, 3.0]
    assert d.rho == 3.0
    with pytest.raises(ArgumentError):
        a + AnalyticSeries((0.0, 1.0), [1.0], 3.0)


def test_series_rejects_bad_input():
    with pytest.raises(ArgumentError):
        AnalyticSeries((1.0, 1.0), [1.0], 2.0)
    with pytest.raises(ArgumentError):
        AnalyticSeries((0.0, 1.0), [np.nan], 2.0)
    with pytest.raises(ArgumentError):
        AnalyticSeries((0.0, 1.0), [1.0], 1.0)


def test_coefficients_are_read_only():
    s = AnalyticSeries((0.0, 1.0), [1.0, 2.0], 2.0)
    with pytest.raises(ValueError):
        s.coeffs[0] = 3.0


def test_series_dict_round_trip():
    s = series_fit(np.cos, (-1.0, 0.0), 12, vectorized=True)
    back = AnalyticSeries.from_dict(s.to_dict())
    assert back.interval == s.interval and back.rho == s.rho
    assert np.array_equal(back.coeffs, s.coeffs)


def test_non_finite_sample():
    with pytest.raises(PrecisionError) as info:
        series_fit(lambda x: 1.0 / x if x > 0.9 else float("nan"), (0.0, 1.0), 8)
    assert info.value.error_code == "NON_FINITE_SAMPLE"


def test_affine_endpoints_and_inverse():
    A = affine_from_endpoints(0.4, -0.4)
    assert A(0.4) == -1.0 and A(-0.4) == 1.0
    identity = A.compose(A.inverse())
    assert identity.slope == pytest.approx(1.0) and identity.offset == pytest.approx(0.0)
    assert np.allclose(A(np.array([0.0, 0.2])), [0.0, -0.5])


def test_affine_degenerate():
    with pytest.raises(ArgumentError) as info:
        affine_from_endpoints(0.3, 0.3)
    assert info.value.error_code == "DEGENERATE_INTERVAL"
    with pytest.raises(ArgumentError):
        AffineMap(0.0, 1.0)


def test_branch_power():
    assert branch_power(2.0, -0.5) == pytest.approx(-0.25)
    assert branch_power(1.5, 0.0) == 0.0
    with pytest.raises(DomainError):
        branch_power(2.0, 0.1)
    with pytest.raises(ArgumentError):
        branch_power(1.0, -0.5)


def test_sup_norm_of_linear_function():
    s = AnalyticSeries((-1.0, 1.0), [0.0, 1.0], 50.0)
    estimate = sup_norm_on_neighborhood(s, 0.5)
    rho_r = 0.5 + math.sqrt(1.25)
    assert estimate.rho_r == pytest.approx(rho_r)
    assert estimate.upper == pytest.approx(rho_r)
    assert estimate.lower == pytest.approx(0.5 * (rho_r + 1.0 / rho_r), rel=1e-12)
    assert estimate.lower <= estimate.upper


def test_sup_norm_of_shifted_identity():
    s = series_fit(lambda y: y + 1.0, (-1.0, 0.0), 4, rho=50.0, vectorized=True)
    estimate = sup_norm_on_neighborhood(s, 0.1)
    # maximum at the rightmost point of the ellipse, t = sqrt(1.04)
    assert estimate.lower == pytest.approx((1.0 + math.sqrt(1.04)) / 2.0, rel=1e-12)
    assert estimate.lower > 1.0
    assert estimate.upper >= estimate.lower


def test_sup_norm_of_constants():
    for value in (0.0, 3.0):
        estimate = sup_norm_on_neighborhood(AnalyticSeries((-1.0, 0.0), [value], 50.0), 0.5)
        assert estimate.upper == pytest.approx(value)
        assert estimate.lower == pytest.approx(value)


def test_refit_is_idempotent():
    s = series_fit(np.exp, (-1.0, 0.0), 20, vectorized=True)
    again = series_fit(s, (-1.0, 0.0), 20, vectorized=True)
    assert np.abs(again.coeffs - s.coeffs).max() < 1e-13


def test_affine_inverse_on_random_points():
    rng = np.random.default_rng(31)
    for _ in range(10):
        p, q = rng.uniform(-2.0, -0.1), rng.uniform(0.1, 2.0)
        A = affine_from_endpoints(p, q)
        z = rng.uniform(p, q, 100)
        assert np.abs(A.inverse()(A(z)) - z).max() < 1e-13
        assert np.abs(A(A.inverse()(z)) - z).max() < 1e-13


def test_branch_power_is_increasing():
    rng = np.random.default_rng(5)
    y = np.unique(rng.uniform(-5.0, 0.0, 200))
    for alpha in rng.uniform(1.1, 4.0, 5):
        values = branch_power(alpha, y)
        assert np.all(np.diff(values) > 0.0)
        assert np.all(values <= 0.0)


def test_radius_too_large_suggests_maximum():
    s = AnalyticSeries((-1.0, 0.0), [0.0, 1.0, 0.5], 1.5)
    with pytest.raises(PrecisionError) as info:
        sup_norm_on_neighborhood(s, 1.0)
    assert info.value.details["suggested_max_r"] == pytest.approx(max_radius(1.5, 0.5))
    sup_norm_on_neighborhood(s, 0.9 * max_radius(1.5, 0.5))


def test_bisect_root_reaches_adjacency():
    root, lo, hi = bisect_root(math.cos, 0.0, 2.0)
    assert abs(root - math.pi / 2) <= 2 * math.ulp(math.pi / 2)
    assert np.nextafter(lo, np.inf) >= hi


def test_bisect_root_without_sign_change():
    with pytest.raises(RootFindingError):
        bisect_root(lambda x: x * x + 1.0, -1.0, 1.0)
