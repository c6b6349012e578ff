#!/usr/bin/env python3
"""
Chebyshev representation of real-symmetric analytic functions on an interval.

A function on [a, b] is stored by the coefficients of its expansion in
Chebyshev polynomials of the rescaled variable t = (x - center) / half_length.
Analyticity on a complex neighborhood of [a, b] is tracked through the
parameter rho > 1 of the Bernstein ellipse (foci a, b) on which the
coefficient tail certifies the expansion converges.

Neighborhood convention: the ellipse whose minor semi-axis equals r lies
inside the round r-neighborhood of [a, b], so sup-norms over it bound the
round-neighborhood sup-norm from below; the coefficient-sum bound is an
upper estimate of the ellipse sup-norm.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as cheb

from errors import Errors
from settings import DEFAULTS

logger = logging.getLogger(__name__)


def chebyshev_nodes(interval, degree):
    """Chebyshev points of the first kind.

    Args:
        interval: (a, b) with a < b.
        degree: Polynomial degree; degree + 1 nodes are returned.

    Returns:
        Tuple (t, x) of the nodes on [-1, 1] and on [a, b].
    """
    n = degree + 1
    t = np.cos(np.pi * (np.arange(n) + 0.5) / n)
    a, b = interval
    return t, 0.5 * (a + b) + 0.5 * (b - a) * t


def estimate_rho(coeffs, settings=DEFAULTS):
    """Measure the analyticity-ellipse parameter from coefficient decay.

    The slope of a least-squares line through log|a_k| (significant
    coefficients only, k >= 1) gives |a_k| ~ rho^-k.
    """
    mags = np.abs(np.asarray(coeffs, dtype=float))
    top = mags.max() if mags.size else 0.0
    if top == 0.0:
        return settings.rho_cap
    k = np.nonzero(mags > 1e-14 * top)[0]
    k = k[k >= 1]
    if k.size < 3:
        return settings.rho_cap
    slope, _ = np.polyfit(k, np.log(mags[k]), 1)
    if slope >= 0.0:
        return settings.rho_floor
    return float(np.clip(math.exp(-slope), settings.rho_floor, settings.rho_cap))


def ellipse_parameter(r, half_length):
    """Parameter of the Bernstein ellipse with minor semi-axis r."""
    b = r / half_length
    return b + math.sqrt(b * b + 1.0)


def max_radius(rho, half_length):
    """Largest minor semi-axis whose ellipse parameter stays below rho."""
    return half_length * (rho - 1.0 / rho) / 2.0


@dataclass(frozen=True, eq=False)
class AnalyticSeries:
    """Chebyshev expansion on a closed interval.

    Attributes:
        interval: (a, b), the domain of definition.
        coeffs: Chebyshev coefficients (read-only array).
        rho: Analyticity-ellipse parameter (> 1).
    """
    interval: tuple
    coeffs: np.ndarray
    rho: float

    def __post_init__(self):
        a, b = (float(v) for v in self.interval)
        if not b > a:
            raise Errors.degenerate_interval(a, b)
        coeffs = np.array(self.coeffs, dtype=float).ravel()
        if coeffs.size < 1:
            raise Errors.argument("A series needs at least one coefficient")
        if not np.all(np.isfinite(coeffs)):
            raise Errors.argument("Series coefficients must be finite")
        if not float(self.rho) > 1.0:
            raise Errors.argument(f"rho must exceed 1, got {self.rho!r}", rho=self.rho)
        coeffs.setflags(write=False)
        object.__setattr__(self, "interval", (a, b))
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rho", float(self.rho))

    @property
    def degree(self):
        return self.coeffs.size - 1

    @property
    def center(self):
        return 0.5 * (self.interval[0] + self.interval[1])

    @property
    def half_length(self):
        return 0.5 * (self.interval[1] - self.interval[0])

    @property
    def tail_norm(self):
        """Mass of the trailing coefficients (last eighth, at least two)."""
        count = max(2, self.coeffs.size // 8)
        return float(np.abs(self.coeffs[-count:]).sum())

    def __call__(self, x):
        return series_eval(self, x)

    def derivative(self):
        if self.degree == 0:
            return AnalyticSeries(self.interval, [0.0], self.rho)
        return AnalyticSeries(self.interval, cheb.chebder(self.coeffs) / self.half_length, self.rho)

    def _combine(self, other, sign):
        if self.interval != other.interval:
            raise Errors.argument("Series live on different intervals",
                                  left=self.interval, right=other.interval)
        n = max(self.coeffs.size, other.coeffs.size)
        left = np.zeros(n)
        right = np.zeros(n)
        left[:self.coeffs.size] = self.coeffs
        right[:other.coeffs.size] = other.coeffs
        return AnalyticSeries(self.interval, left + sign * right, min(self.rho, other.rho))

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def to_dict(self):
        return {"interval": list(self.interval), "coeffs": self.coeffs.tolist(), "rho": self.rho}

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(data["interval"]), data["coeffs"], data["rho"])


@dataclass(frozen=True)
class AffineMap:
    """z -> slope * z + offset."""
    slope: float
    offset: float

    def __post_init__(self):
        if self.slope == 0.0 or not math.isfinite(self.slope) or not math.isfinite(self.offset):
            raise Errors.argument("Affine map needs a finite non-zero slope",
                                  slope=self.slope, offset=self.offset)

    def __call__(self, z):
        return self.slope * z + self.offset

    def inverse(self):
        return AffineMap(1.0 / self.slope, -self.offset / self.slope)

    def compose(self, other):
        """Return self o other."""
        return AffineMap(self.slope * other.slope, self.slope * other.offset + self.offset)


def series_fit(sample_fn, interval, degree, rho=None, vectorized=False, settings=DEFAULTS):
    """Interpolate a function at the degree + 1 Chebyshev nodes of an interval.

    Args:
        sample_fn: Callable real -> real (array -> array when vectorized).
        interval: (a, b).
        degree: Positive integer.
        rho: Analyticity proxy; measured from the coefficients when omitted.
        vectorized: Call sample_fn once on the node array.

    Returns:
        AnalyticSeries interpolating sample_fn; see ``tail_norm`` for the tail.
    """
    if int(degree) != degree or degree < 1:
        raise Errors.argument(f"degree must be a positive integer, got {degree!r}", degree=degree)
    degree = int(degree)
    t, x = chebyshev_nodes(interval, degree)
    if vectorized:
        values = np.asarray(sample_fn(x), dtype=float)
    else:
        values = np.array([float(sample_fn(node)) for node in x])
    bad = np.nonzero(~np.isfinite(values))[0]
    if bad.size:
        raise Errors.non_finite_sample(float(x[bad[0]]), float(values[bad[0]]))

    n = degree + 1
    coeffs = (2.0 / n) * (cheb.chebvander(t, degree).T @ values)
    coeffs[0] *= 0.5
    if rho is None:
        rho = estimate_rho(coeffs, settings)
    series = AnalyticSeries(interval, coeffs, rho)
    logger.debug("fit degree %d on %s: tail %.2e, rho %.3f", degree, series.interval,
                 series.tail_norm, series.rho)
    return series


def series_eval(s, x, settings=DEFAULTS):
    """Evaluate a series by Clenshaw recurrence.

    Args:
        s: AnalyticSeries.
        x: Scalar or array inside the interval widened by ``eval_margin``.
    """
    slack = (settings.eval_margin - 1.0) * s.half_length
    lo, hi = s.interval[0] - slack, s.interval[1] + slack
    xs = np.asarray(x, dtype=float)
    inside = (xs >= lo) & (xs <= hi)
    if not np.all(inside):
        offender = xs[~inside].ravel()[0] if xs.ndim else float(xs)
        raise Errors.out_of_domain(float(offender), lo, hi)
    values = cheb.chebval((xs - s.center) / s.half_length, s.coeffs)
    if xs.ndim == 0:
        return float(values)
    return values


def affine_from_endpoints(p, q):
    """The affine map A_{p,q} with A(p) = -1 and A(q) = 1."""
    p, q = float(p), float(q)
    if p == q:
        raise Errors.degenerate_interval(p, q)
    return AffineMap(2.0 / (q - p), -(p + q) / (q - p))


def branch_power(alpha, y):
    """p_alpha(y) = -(-y)**alpha on (-inf, 0]."""
    if not alpha > 1.0:
        raise Errors.argument(f"critical exponent must satisfy alpha > 1, got {alpha!r}",
                              alpha=alpha)
    ys = np.asarray(y, dtype=float)
    if np.any(ys > 0.0):
        raise Errors.branch_domain(float(ys[ys > 0.0].ravel()[0]) if ys.ndim else float(ys))
    values = -np.power(-ys, alpha)
    if ys.ndim == 0:
        return float(values)
    return values


@dataclass(frozen=True)
class NormEstimate:
    """Sup-norm estimates over the ellipse proxy of N_r(interval).

    Attributes:
        upper: Coefficient-sum bound sum |a_k| rho(r)^k.
        lower: Sampled maximum over the ellipse boundary.
        rho_r: Ellipse parameter used.
    """
    upper: float
    lower: float
    rho_r: float


def sup_norm_on_neighborhood(s, r, samples=720, settings=DEFAULTS):
    """Estimate sup |s| over the radius-r neighborhood proxy of its interval."""
    if not r > 0.0:
        raise Errors.argument(f"radius must be positive, got {r!r}", r=r)
    rho_r = ellipse_parameter(r, s.half_length)
    if rho_r >= s.rho:
        raise Errors.radius_too_large(r, s.rho, max_radius(s.rho, s.half_length))
    powers = rho_r ** np.arange(s.coeffs.size)
    upper = float(np.abs(s.coeffs) @ powers)
    w = rho_r * np.exp(2j * np.pi * np.arange(samples) / samples)
    t = 0.5 * (w + 1.0 / w)
    lower = float(np.abs(cheb.chebval(t, s.coeffs)).max())
    return NormEstimate(upper=upper, lower=lower, rho_r=rho_r)


def bisect_root(func, lo, hi, f_lo=None, max_iter=DEFAULTS.bisect_max_iter):
    """Bisect a sign change of a scalar function down to floating-point adjacency.

    Args:
        func: Callable real -> real.
        lo, hi: Bracket with func(lo) and func(hi) of opposite sign (or zero).
        f_lo: func(lo) if already known.

    Returns:
        Tuple (root, lo, hi): the bracket end with the smaller |func| and the
        final bracket.
    """
    if f_lo is None:
        f_lo = func(lo)
    f_hi = func(hi)
    if f_lo == 0.0:
        return lo, lo, lo
    if f_hi == 0.0:
        return hi, hi, hi
    if (f_lo < 0.0) == (f_hi < 0.0):
        raise Errors.bracket_failure("sign change", lo, hi, f_lo=f_lo, f_hi=f_hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = func(mid)
        if f_mid == 0.0:
            return mid, mid, mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    root = lo if abs(f_lo) <= abs(f_hi) else hi
    return root, lo, hi
