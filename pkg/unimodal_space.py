#!/usr/bin/env python3
"""
Even unimodal maps f(x) = psi(-|x|^alpha) and the metric between them.

A map is stored as the pair (alpha, psi) with psi an AnalyticSeries on
[-1, 0]; the embedding psi -> psi(-|x|^alpha) is one-to-one, so nothing is
lost. The critical point is always 0.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from analytic_core import AnalyticSeries, chebyshev_nodes, sup_norm_on_neighborhood
from errors import Errors
from settings import DEFAULTS

logger = logging.getLogger(__name__)

PSI_INTERVAL = (-1.0, 0.0)


@dataclass(frozen=True, eq=False)
class UnimodalMap:
    """f = j_alpha(psi).

    Attributes:
        alpha: Critical exponent (> 1).
        psi: Univalent factor on [-1, 0].
    """
    alpha: float
    psi: AnalyticSeries

    def __post_init__(self):
        if not self.alpha > 1.0:
            raise Errors.argument(f"critical exponent must satisfy alpha > 1, got {self.alpha!r}",
                                  alpha=self.alpha)
        if self.psi.interval != PSI_INTERVAL:
            raise Errors.argument("psi must be defined on [-1, 0]", interval=self.psi.interval)
        object.__setattr__(self, "alpha", float(self.alpha))

    @cached_property
    def dpsi(self):
        return self.psi.derivative()

    @property
    def critical_value(self):
        return self.psi(0.0)

    def __call__(self, x):
        return eval_unimodal(self, x)

    def derivative(self, x):
        """f'(x) = psi'(-|x|^alpha) * (-alpha |x|^(alpha-1) sign(x))."""
        xs = np.asarray(x, dtype=float)
        ax = np.abs(xs)
        dy = -self.alpha * np.power(ax, self.alpha - 1.0) * np.sign(xs)
        values = self.dpsi(-np.power(ax, self.alpha)) * dy
        if xs.ndim == 0:
            return float(values)
        return values

    def to_dict(self):
        return {"alpha": self.alpha, **self.psi.to_dict()}

    @classmethod
    def from_dict(cls, data):
        return cls(data["alpha"], AnalyticSeries.from_dict(data))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the unimodality checks on a finite node set."""
    is_unimodal: bool
    boundary_residual: float
    critical_value: float
    monotonicity_margin: float
    is_boundary_case: bool

    def to_dict(self):
        return {
            "is_unimodal": self.is_unimodal,
            "boundary_residual": self.boundary_residual,
            "critical_value": self.critical_value,
            "monotonicity_margin": self.monotonicity_margin,
            "is_boundary_case": self.is_boundary_case,
        }


def domain_limit(f, settings=DEFAULTS):
    """Largest |x| for which psi(-|x|^alpha) stays inside psi's evaluation margin."""
    y_max = 1.0 + (settings.eval_margin - 1.0) * f.psi.half_length
    return y_max ** (1.0 / f.alpha)


def eval_unimodal(f, x, settings=DEFAULTS):
    """Evaluate f(x) = psi(-|x|^alpha); even in x by construction."""
    xs = np.asarray(x, dtype=float)
    limit = domain_limit(f, settings)
    inside = np.abs(xs) <= limit
    if not np.all(inside):
        offender = xs[~inside].ravel()[0] if xs.ndim else float(xs)
        raise Errors.out_of_domain(float(offender), -limit, limit)
    return f.psi(-np.power(np.abs(xs), f.alpha))


def validate_unimodal(f, settings=DEFAULTS):
    """Check psi(-1) = -1, -1 < psi(0) <= 1 and psi' > 0 on [-1, 0].

    psi' > 0 on [-1, 0] is equivalent to f' > 0 on [-1, 0) and f' < 0 on
    (0, 1], since dy/dx = -alpha |x|^(alpha-1) sign(x); the margin reported
    is min psi' over the nodes (endpoints included).
    """
    _, y = chebyshev_nodes(PSI_INTERVAL, settings.unimodal_nodes - 1)
    y = np.concatenate(([-1.0], y, [0.0]))
    margin = float(f.dpsi(y).min())
    residual = abs(f.psi(-1.0) + 1.0)
    cv = f.critical_value
    ok = (residual <= settings.boundary_tol and margin > 0.0
          and -1.0 < cv <= 1.0 + settings.boundary_tol)
    return ValidationReport(
        is_unimodal=bool(ok),
        boundary_residual=float(residual),
        critical_value=float(cv),
        monotonicity_margin=margin,
        is_boundary_case=bool(cv >= 1.0 - settings.boundary_tol),
    )


def embed_j_alpha(psi, alpha, settings=DEFAULTS):
    """Build and validate j_alpha(psi)."""
    f = UnimodalMap(alpha, psi)
    report = validate_unimodal(f, settings)
    if not report.is_unimodal:
        raise Errors.not_unimodal(report)
    if report.is_boundary_case:
        logger.debug("psi(0) = 1: map lies on the boundary stratum")
    return f


def dist_r(f1, f2, r, settings=DEFAULTS):
    """|alpha1 - alpha2| + sup over the N_r([-1, 0]) proxy of |psi1 - psi2|.

    Uses the upper (coefficient-sum) estimate, which is a weighted l1 norm
    of the coefficient difference and so satisfies the triangle inequality.
    """
    estimate = sup_norm_on_neighborhood(f1.psi - f2.psi, r, settings=settings)
    return abs(f1.alpha - f2.alpha) + estimate.upper
