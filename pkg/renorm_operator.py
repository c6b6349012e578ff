#!/usr/bin/env python3
"""
The renormalization operator R(f) = A o f^m o A^-1 and towers R^n(f).

The renormalized map h is even whenever f is (J is symmetric, so A is
linear), hence h(x) = psi'(-|x|^alpha) for a new factor psi' that is
recovered by sampling h at x = (-y)^(1/alpha) over Chebyshev nodes y of
[-1, 0] and interpolating.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from analytic_core import series_fit
from combinatorics import CombSequence, detect_renormalization, iterate
from errors import (DomainError, Errors, NotRenormalizableError, PrecisionError,
                    RenormException, ValidationError)
from settings import DEFAULTS
from unimodal_space import PSI_INTERVAL, dist_r, embed_j_alpha

logger = logging.getLogger(__name__)

# Off-node check points for the refit residual
CHECK_POINTS = 200


@dataclass(frozen=True)
class RenormResult:
    """One renormalization step.

    Attributes:
        map: R(f), same critical exponent as f.
        data: RenormData of f that produced it.
        refit_residual: Max defect of the refit against h at off-node points.
        tail_norm: Trailing-coefficient mass of the new psi.
    """
    map: object
    data: object
    refit_residual: float
    tail_norm: float

    def to_dict(self):
        return {"map": self.map.to_dict(), "data": self.data.to_dict(),
                "refit_residual": self.refit_residual, "tail_norm": self.tail_norm}


@dataclass
class RenormTower:
    """Renormalizations R(f), ..., R^k(f) and the word rho(f) up to length k.

    A tower that stopped early carries ``break_index`` (the 1-based step that
    failed) and ``break_reason``.
    """
    base: object
    steps: list = field(default_factory=list)
    break_index: int = None
    break_reason: str = None

    @property
    def maps(self):
        return [self.base] + [step.map for step in self.steps]

    @property
    def word(self):
        return CombSequence(tuple(step.data.theta for step in self.steps))

    @property
    def complete(self):
        return self.break_index is None

    def __len__(self):
        return len(self.steps)

    def to_dict(self):
        return {
            "steps": [step.to_dict() for step in self.steps],
            "word": self.word.to_list(),
            "break_index": self.break_index,
            "break_reason": self.break_reason,
        }


def renormalized_values(f, data, x, settings=DEFAULTS):
    """h(x) = A(f^m(A^-1(x))) for x in [-1, 1].

    Points within ``boundary_snap`` of +-1 take the exact boundary value -1:
    A^-1 sends them to the boundary of J, whose orbit returns to p.
    """
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > 1.0 + settings.boundary_snap):
        offender = xs[np.abs(xs) > 1.0 + settings.boundary_snap].ravel()[0] if xs.ndim else float(xs)
        raise Errors.out_of_domain(float(offender), -1.0, 1.0)
    rescale = data.rescale
    z = np.clip(rescale.inverse()(xs), min(data.J), max(data.J))
    values = rescale(iterate(f, z, data.m))
    values = np.where(np.abs(xs) >= 1.0 - settings.boundary_snap, -1.0, values)
    if xs.ndim == 0:
        return float(values)
    return values


def refit_residual(f, data, psi, settings=DEFAULTS):
    """Max |psi(-|x|^alpha) - h(x)| over points strictly between the fit nodes."""
    x = (np.arange(CHECK_POINTS) + 0.5) / CHECK_POINTS
    y = -np.power(x, f.alpha)
    return float(np.abs(psi(y) - renormalized_values(f, data, x, settings)).max())


def renormalize(f, m_max, degree=None, auto_raise=True, settings=DEFAULTS):
    """Compute R(f).

    Args:
        f: UnimodalMap.
        m_max: Largest period searched.
        degree: Refit degree (``settings.refit_degree`` when omitted).
        auto_raise: Raise the degree in steps of 16 up to
            ``settings.refit_degree_max`` while the tail exceeds
            ``settings.tail_threshold``.

    Returns:
        RenormResult.

    Raises:
        NotRenormalizableError: No restrictive interval of period <= m_max.
        PrecisionError: Refit residual above ``settings.refit_tol``.
    """
    data = detect_renormalization(f, m_max, settings)
    if data is None:
        raise Errors.not_renormalizable(m_max)
    degree = settings.refit_degree if degree is None else int(degree)

    def sample(y):
        return renormalized_values(f, data, np.power(-y, 1.0 / f.alpha), settings)

    while True:
        psi = series_fit(sample, PSI_INTERVAL, degree, vectorized=True, settings=settings)
        if (not auto_raise or psi.tail_norm <= settings.tail_threshold
                or degree >= settings.refit_degree_max):
            break
        degree = min(degree + 16, settings.refit_degree_max)
        logger.debug("tail %.2e above threshold, raising refit degree to %d", psi.tail_norm, degree)

    residual = refit_residual(f, data, psi, settings)
    if residual > settings.refit_tol:
        raise Errors.refit_precision(residual, settings.refit_tol, degree)
    g = embed_j_alpha(psi, f.alpha, settings)
    return RenormResult(map=g, data=data, refit_residual=residual, tail_norm=psi.tail_norm)


def renorm_tower(f, n, m_max, degree=None, settings=DEFAULTS):
    """Renormalize n times, stopping at the first step that fails.

    Returns:
        RenormTower; a break is reported through ``break_index`` and
        ``break_reason`` rather than raised.
    """
    if n < 0:
        raise Errors.argument(f"tower depth must be >= 0, got {n}", n=n)
    tower = RenormTower(base=f)
    current = f
    for step in range(1, n + 1):
        try:
            result = renormalize(current, m_max, degree, settings=settings)
        except (NotRenormalizableError, PrecisionError, ValidationError, DomainError) as e:
            tower.break_index = step
            tower.break_reason = e.message
            logger.info("tower broke at step %d: %s", step, e.message)
            break
        logger.debug("step %d: m=%d, residual %.2e, critical value %.15f", step,
                     result.data.m, result.refit_residual, result.map.critical_value)
        tower.steps.append(result)
        current = result.map
    return tower


def successive_distances(tower, r, settings=DEFAULTS):
    """dist_r(R^k f, R^(k+1) f) along a tower."""
    maps = tower.maps
    distances = []
    for first, second in zip(maps[:-1], maps[1:]):
        try:
            distances.append(dist_r(first, second, r, settings))
        except RenormException as e:
            logger.warning("distance undefined at radius %g: %s", r, e.message)
            break
    return distances
