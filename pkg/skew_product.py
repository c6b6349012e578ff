#!/usr/bin/env python3
"""
Non-even unimodal maps g = phi^-1 o f o phi and the skew-product renormalization
(f, phi) -> (R(f), F_f(phi)) with F_f(phi) = A_{p,q} o phi o A_{u,v}^-1,
u = phi^-1(p), v = phi^-1(q).
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from analytic_core import AnalyticSeries, affine_from_endpoints, series_fit, sup_norm_on_neighborhood
from combinatorics import iterate
from convergence_tracker import ConvergenceTracker
from errors import (DomainError, Errors, NotRenormalizableError, PrecisionError, RootFindingError,
                    ValidationError)
from renorm_operator import renormalize
from settings import DEFAULTS, Settings

logger = logging.getLogger(__name__)

PHI_INTERVAL = (-1.0, 1.0)
PHI_DEGREE = 32
INVERSE_XTOL = 1e-15
DEVIATION_SAMPLES = 2001


@dataclass(frozen=True, eq=False)
class CoordChange:
    """Increasing analytic phi on [-1, 1] with phi(-1) = -1 and phi(1) = 1.

    ``settings`` supplies the boundary tolerances used to validate phi and to
    snap inverse images onto the endpoints.
    """
    phi: AnalyticSeries
    settings: Settings = field(default=DEFAULTS, repr=False)

    def __post_init__(self):
        if self.phi.interval != PHI_INTERVAL:
            raise Errors.invalid_coord_change("phi must be defined on [-1, 1]",
                                              interval=self.phi.interval)
        ends = self.phi(np.array([-1.0, 1.0]))
        tol = self.settings.boundary_tol
        if abs(ends[0] + 1.0) > tol or abs(ends[1] - 1.0) > tol:
            raise Errors.invalid_coord_change("phi must fix -1 and 1", ends=ends.tolist())
        x = np.linspace(-1.0, 1.0, self.settings.unimodal_nodes)
        slope = float(self.phi.derivative()(x).min())
        if not slope > 0.0:
            raise Errors.invalid_coord_change("phi must be strictly increasing", min_slope=slope)

    @classmethod
    def identity(cls, settings=DEFAULTS):
        return cls(AnalyticSeries(PHI_INTERVAL, [0.0, 1.0], settings.rho_cap), settings)

    @classmethod
    def perturbed_identity(cls, eps, settings=DEFAULTS):
        """phi(x) = x + eps (1 - x^2), valid for |eps| < 1/2."""
        return cls(AnalyticSeries(PHI_INTERVAL, [0.5 * eps, 1.0, -0.5 * eps], settings.rho_cap),
                   settings)

    @property
    def degree(self):
        return self.phi.degree

    @property
    def is_identity(self):
        coeffs = np.zeros(max(2, self.phi.coeffs.size))
        coeffs[:self.phi.coeffs.size] = self.phi.coeffs
        return coeffs[1] == 1.0 and not np.any(np.delete(coeffs, 1))

    def __call__(self, x):
        return self.phi(x)

    def inverse(self, y):
        """phi^-1(y) by bracketed root finding on [-1, 1]."""
        ys = np.asarray(y, dtype=float)
        if self.is_identity:
            return float(ys) if ys.ndim == 0 else ys.copy()
        values = np.array([self._inverse_scalar(float(v)) for v in ys.ravel()]).reshape(ys.shape)
        return float(values) if ys.ndim == 0 else values

    def _inverse_scalar(self, y):
        if abs(y + 1.0) <= self.settings.boundary_snap:
            return -1.0
        if abs(y - 1.0) <= self.settings.boundary_snap:
            return 1.0
        if not -1.0 < y < 1.0:
            raise Errors.out_of_domain(y, -1.0, 1.0)
        try:
            return brentq(lambda x: self.phi(x) - y, -1.0, 1.0, xtol=INVERSE_XTOL)
        except ValueError as e:
            raise Errors.bracket_failure("phi inverse", -1.0, 1.0, target=y, reason=str(e))

    def deviation(self, r=None, settings=DEFAULTS):
        """sup |phi - id| on [-1, 1] (r=None) or the upper estimate on the radius-r proxy."""
        identity = CoordChange.identity().phi
        if r is None:
            x = np.linspace(-1.0, 1.0, DEVIATION_SAMPLES)
            return float(np.abs(self.phi(x) - x).max())
        return sup_norm_on_neighborhood(self.phi - identity, r, settings=settings).upper

    def to_dict(self):
        return self.phi.to_dict()

    @classmethod
    def from_dict(cls, data, settings=DEFAULTS):
        return cls(AnalyticSeries.from_dict(data), settings)


@dataclass(frozen=True, eq=False)
class GeneralUnimodalMap:
    """g = phi^-1 o f o phi with f even; critical point phi^-1(0)."""
    base: object
    change: CoordChange

    @property
    def critical_point(self):
        return self.change.inverse(0.0)

    def __call__(self, x):
        return conjugate_eval(self, x)

    def to_dict(self):
        return {"base": self.base.to_dict(), "change": self.change.to_dict()}


def conjugate_eval(g, x):
    """phi^-1(f(phi(x))) for |x| <= 1."""
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > 1.0):
        offender = xs[np.abs(xs) > 1.0].ravel()[0] if xs.ndim else float(xs)
        raise Errors.out_of_domain(float(offender), -1.0, 1.0)
    return g.change.inverse(g.base(g.change(xs)))


def fiber_map(data, phi, degree=PHI_DEGREE, settings=DEFAULTS):
    """F_f(phi) for the renormalization data of f."""
    if phi.is_identity:
        return CoordChange.identity(settings)
    u, v = phi.inverse(data.p), phi.inverse(data.q)
    outer = data.rescale
    inner_inverse = affine_from_endpoints(u, v).inverse()
    series = series_fit(lambda x: outer(phi(np.clip(inner_inverse(x), -1.0, 1.0))), PHI_INTERVAL,
                        degree, vectorized=True, settings=settings)
    return CoordChange(series, settings)


def skew_step(f, phi, m_max, degree=PHI_DEGREE, settings=DEFAULTS):
    """(R(f), F_f(phi)).

    Raises:
        NotRenormalizableError: f has no restrictive interval of period <= m_max.
        RootFindingError: phi^-1(p) or phi^-1(q) could not be bracketed.
    """
    result = renormalize(f, m_max, settings=settings)
    return result.map, fiber_map(result.data, phi, degree, settings)


def direct_renormalized_values(g, data, x):
    """A_{u,v}(g^m(A_{u,v}^-1(x))) computed on g itself, with [u, v] = phi^-1(J).

    ``data`` is the renormalization data of the even map g.base.
    """
    u, v = g.change.inverse(data.p), g.change.inverse(data.q)
    rescale = affine_from_endpoints(u, v)
    z = np.clip(rescale.inverse()(np.asarray(x, dtype=float)), -1.0, 1.0)
    return rescale(iterate(g, z, data.m))


@dataclass
class SkewConvergence:
    """Deviations ||F_f^j(phi) - id||_r for j = 1..k and their geometric fit."""
    norms: list = field(default_factory=list)
    C: float = None
    lam: float = None
    rms_residual: float = None
    break_index: int = None
    break_reason: str = None

    def to_dict(self):
        return {"norms": self.norms, "C": self.C, "lambda": self.lam,
                "rms_residual": self.rms_residual, "break_index": self.break_index,
                "break_reason": self.break_reason}


def skew_convergence(f, phi, k, r, m_max=2, degree=PHI_DEGREE, settings=DEFAULTS):
    """Iterate the skew product k times and fit the decay of phi_j toward the identity.

    A tower break before k steps is reported through ``break_index``.
    """
    if k < 0:
        raise Errors.argument(f"k must be >= 0, got {k}", k=k)
    report = SkewConvergence()
    tracker = ConvergenceTracker("skew", noise_floor=settings.noise_floor)
    current_f, current_phi = f, phi
    for j in range(1, k + 1):
        try:
            current_f, current_phi = skew_step(current_f, current_phi, m_max, degree, settings)
        except (NotRenormalizableError, PrecisionError, RootFindingError, ValidationError,
                DomainError) as e:
            report.break_index, report.break_reason = j, e.message
            logger.info("skew product broke at step %d: %s", j, e.message)
            break
        norm = current_phi.deviation(r, settings)
        report.norms.append(norm)
        tracker.record(j, norm)
        logger.debug("step %d: ||phi_j - id|| = %.3e", j, norm)
    fit = tracker.fit_geometric()
    if fit is not None:
        report.C, report.lam, report.rms_residual = fit.C, fit.rate, fit.rms_residual
    return report
