#!/usr/bin/env python3
"""
Fixed points and periodic orbits of renormalization, its truncated derivative
and the spectrum of that derivative.

Maps are handled in the affine chart psi(-1) = -1: a CoeffVector stores all
Chebyshev coefficients a_0..a_D of psi, but only a_1..a_D are free and a_0
is determined by sum_k a_k (-1)^k = -1. Newton steps, Jacobians and
eigenvectors all live in these D free coordinates.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.linalg import lu_factor, lu_solve

from analytic_core import AnalyticSeries, estimate_rho, series_fit
from combinatorics import CombSequence, detect_renormalization
from convergence_tracker import ConvergenceTracker
from eigen import eigenvalues, inverse_iteration
from errors import Errors, RenormException
from family_cascade import Family, accumulation_parameter
from renorm_operator import renormalize, renorm_tower
from settings import DEFAULTS
from unimodal_space import PSI_INTERVAL, dist_r, embed_j_alpha

logger = logging.getLogger(__name__)

MIN_DEGREE = 16
DEFAULT_DEGREE = 40
DEFAULT_TOL = 1e-11
RESIDUAL_NODES = 400
SEED_PERIOD_PRODUCT = 20
CONTINUATION_STEP = 0.05
PROVEN_REGIME_WIDTH = 0.25


@dataclass(frozen=True, eq=False)
class CoeffVector:
    """psi coefficients at a fixed degree D, on the chart psi(-1) = -1."""
    alpha: float
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).ravel()
        if coeffs.size < 2 or not np.all(np.isfinite(coeffs)):
            raise Errors.argument("CoeffVector needs finite coefficients a_0..a_D with D >= 1")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def degree(self):
        return self.coeffs.size - 1

    @property
    def free(self):
        return self.coeffs[1:].copy()

    @classmethod
    def from_free(cls, alpha, free):
        free = np.asarray(free, dtype=float)
        signs = (-1.0) ** np.arange(1, free.size + 1)
        return cls(alpha, np.concatenate(([-1.0 - signs @ free], free)))

    @classmethod
    def from_map(cls, f, degree, settings=DEFAULTS):
        """Project f.psi onto degree D (refit when the degrees differ)."""
        psi = f.psi
        if psi.degree != degree:
            psi = series_fit(psi, PSI_INTERVAL, degree, vectorized=True, settings=settings)
        return cls.from_free(f.alpha, psi.coeffs[1:])

    def psi(self, settings=DEFAULTS):
        return AnalyticSeries(PSI_INTERVAL, self.coeffs, estimate_rho(self.coeffs, settings))

    def to_map(self, settings=DEFAULTS):
        return embed_j_alpha(self.psi(settings), self.alpha, settings)

    def to_dict(self):
        return {"alpha": self.alpha, "coeffs": self.coeffs.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(data["alpha"], data["coeffs"])


def _as_word(word):
    word = CombSequence(tuple(word))
    if len(word) == 0:
        raise Errors.argument("combinatorial word must be non-empty")
    return word


def apply_word(point, word, settings=DEFAULTS):
    """R_word(point): renormalize once per symbol at fixed degree, checking theta.

    Raises:
        WordViolationError: A step's permutation differs from the word.
    """
    f = point.to_map(settings)
    for step, theta in enumerate(word):
        result = renormalize(f, theta.period, degree=point.degree, auto_raise=False,
                             settings=settings)
        if result.data.theta != theta:
            raise Errors.word_violation(step, str(theta), str(result.data.theta))
        f = result.map
    return CoeffVector.from_free(point.alpha, f.psi.coeffs[1:])


def residual(point, image):
    """sup over dense nodes of |psi_image - psi_point| on [-1, 0]."""
    y = np.linspace(-1.0, 0.0, RESIDUAL_NODES)
    t = 2.0 * y + 1.0
    diff = cheb.chebval(t, image.coeffs) - cheb.chebval(t, point.coeffs)
    return float(np.abs(diff).max())


def _column(point, word, j, h, settings):
    plus, minus = point.free, point.free
    plus[j] += h
    minus[j] -= h
    image_plus = apply_word(CoeffVector.from_free(point.alpha, plus), word, settings).free
    image_minus = apply_word(CoeffVector.from_free(point.alpha, minus), word, settings).free
    return (image_plus - image_minus) / (2.0 * h)


def _column_with_retry(point, word, j, h, settings):
    try:
        return _column(point, word, j, h, settings)
    except RenormException as e:
        logger.debug("column %d failed at step %.1e (%s), retrying at %.1e", j, h, e.message, h / 4)
        return _column(point, word, j, h / 4.0, settings)


def jacobian(alpha, word, point, step=None, jobs=1, settings=DEFAULTS):
    """Central-difference derivative of R_word in the free coordinates.

    Column j uses the step ``step * max(1, |a_j|)``; a column whose perturbed
    maps fail is retried once at a quarter of the step.

    Returns:
        D x D array.
    """
    word = _as_word(word)
    if point.alpha != float(alpha):
        point = CoeffVector(alpha, point.coeffs)
    step = settings.fd_step if step is None else step
    free = point.free
    steps = step * np.maximum(1.0, np.abs(free))

    def column(j):
        return _column_with_retry(point, word, j, float(steps[j]), settings)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            columns = list(pool.map(column, range(free.size)))
    else:
        columns = [column(j) for j in range(free.size)]
    return np.column_stack(columns)


@dataclass(frozen=True)
class FixedPointResult:
    """A fixed point of R_word with its independently rechecked residual."""
    point: CoeffVector
    residual: float
    word: CombSequence
    iterations: int

    def to_dict(self):
        return {"point": self.point.to_dict(), "residual": self.residual,
                "word": self.word.to_list(), "iterations": self.iterations}


def newton_fixed_point(alpha, word, degree, tol, seed, jobs=1, settings=DEFAULTS):
    """Solve R_word(g) = g by damped Newton in the free coefficients.

    Each step solves (J - I) dx = -(R_word(g) - g) by dense LU and halves the
    step (at most ``settings.newton_halvings`` times) until the residual
    drops; a trial that violates the word counts as failed.

    Raises:
        ArgumentError: degree < 16 or tol <= 0.
        DivergenceError: No decrease possible, or residual above tol after
            ``settings.newton_max_iter`` iterations; details hold the last
            iterate.
        WordViolationError: The seed itself does not realize the word.
    """
    word = _as_word(word)
    if degree < MIN_DEGREE:
        raise Errors.argument(f"degree must be >= {MIN_DEGREE}, got {degree}", degree=degree)
    if not tol > 0.0:
        raise Errors.argument(f"tol must be positive, got {tol}", tol=tol)
    if seed.degree != degree:
        seed = CoeffVector.from_map(seed.to_map(settings), degree, settings)
    x = CoeffVector(alpha, seed.coeffs)

    image = apply_word(x, word, settings)
    res = residual(x, image)
    iterations = 0
    while res > tol:
        if iterations >= settings.newton_max_iter:
            raise Errors.newton_divergence(iterations, res, x)
        iterations += 1
        J = jacobian(alpha, word, x, jobs=jobs, settings=settings)
        F = image.free - x.free
        dx = lu_solve(lu_factor(J - np.eye(J.shape[0])), -F)

        t = 1.0
        for _ in range(settings.newton_halvings + 1):
            trial = CoeffVector.from_free(alpha, x.free + t * dx)
            try:
                trial_image = apply_word(trial, word, settings)
                trial_res = residual(trial, trial_image)
            except RenormException as e:
                logger.debug("trial step %.3g rejected: %s", t, e.message)
                trial_res = math.inf
            if trial_res < res:
                break
            t *= 0.5
        else:
            raise Errors.newton_divergence(iterations, res, x)

        x, image, res = trial, trial_image, trial_res
        logger.info("newton %d: residual %.3e (step %.3g)", iterations, res, t)

    certified = residual(x, apply_word(x, word, settings))
    return FixedPointResult(point=x, residual=certified, word=word, iterations=iterations)


@dataclass
class SpectralReport:
    """Eigenvalues of a truncated derivative, sorted by decreasing modulus.

    Attributes:
        delta: Leading modulus (the unstable multiplier when hyperbolic).
        gap: Second-largest modulus.
        unstable_count: Number of moduli above 1.
        is_hyperbolic: Exactly one modulus above 1 and gap < 1.
    """
    eigenvalues: np.ndarray
    delta: float
    gap: float
    unstable_count: int
    is_hyperbolic: bool
    degree: int
    alpha: float = None
    word: CombSequence = None
    residual: float = None
    jacobian: np.ndarray = field(default=None, repr=False)

    @property
    def outside_proven_regime(self):
        return self.alpha is not None and outside_proven_regime(self.alpha)

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "word": self.word.to_list() if self.word is not None else None,
            "degree": self.degree,
            "delta": self.delta,
            "gap": self.gap,
            "eigenvalues": [{"re": float(z.real), "im": float(z.imag)} for z in self.eigenvalues],
            "residual": self.residual,
            "unstable_count": self.unstable_count,
            "is_hyperbolic": self.is_hyperbolic,
            "outside_proven_regime": self.outside_proven_regime,
        }


def spectrum(J, settings=DEFAULTS):
    """Full eigenvalue set of J by the in-repo Hessenberg + shifted QR solver."""
    values = eigenvalues(J, settings.qr_max_iter)
    order = np.argsort(-np.abs(values), kind="stable")
    values = values[order]
    moduli = np.abs(values)
    delta = float(moduli[0]) if moduli.size else 0.0
    gap = float(moduli[1]) if moduli.size > 1 else 0.0
    unstable = int(np.sum(moduli > 1.0))
    return SpectralReport(eigenvalues=values, delta=delta, gap=gap, unstable_count=unstable,
                          is_hyperbolic=bool(unstable == 1 and gap < 1.0), degree=len(values),
                          jacobian=np.asarray(J))


def eigenvector(J, eigenvalue):
    """Unit eigenvector of J by inverse iteration; real when the eigenvalue is real."""
    v = inverse_iteration(J, eigenvalue)
    if np.imag(eigenvalue) == 0.0:
        v = np.real(v)
        v = v / np.linalg.norm(v)
    return v


def outside_proven_regime(alpha):
    """True when alpha is further than 0.25 from the nearest even integer >= 2."""
    nearest = max(2.0, 2.0 * round(alpha / 2.0))
    return abs(alpha - nearest) > PROVEN_REGIME_WIDTH


def analyse_fixed_point(result, step=None, jobs=1, settings=DEFAULTS):
    """Jacobian and spectrum at a fixed point, annotated with alpha, word and residual."""
    point = result.point
    J = jacobian(point.alpha, result.word, point, step=step, jobs=jobs, settings=settings)
    report = spectrum(J, settings)
    report.alpha, report.word, report.residual = point.alpha, result.word, result.residual
    if outside_proven_regime(point.alpha):
        logger.warning("alpha = %g is outside the proven regime near even integers", point.alpha)
    logger.info("delta %.10f, gap %.6f, %d unstable", report.delta, report.gap,
                report.unstable_count)
    return report


def _seed_steps(word):
    """Smallest multiple of the word length whose period product reaches 20."""
    steps, product = 0, 1
    while product < SEED_PERIOD_PRODUCT or steps % len(word):
        product *= word[steps % len(word)].period
        steps += 1
    return steps


def seed_from_family(alpha, word, degree=DEFAULT_DEGREE, settings=DEFAULTS):
    """Seed for R_word: renormalize the accumulation map of the periodic word.

    Raises:
        DivergenceError: A renormalization step fails or breaks the word
            (``details['position']`` names the failing symbol).
    """
    word = _as_word(word)
    fam = Family.standard(alpha)
    acc = accumulation_parameter(fam, word, settings=settings)
    f = fam.map_at(acc.c_inf, settings)
    steps = _seed_steps(word)
    logger.info("seeding %s from c = %.17g with %d renormalizations", word.to_list(), acc.c_inf,
                steps)
    for position in range(steps):
        theta = word[position % len(word)]
        try:
            result = renormalize(f, theta.period, settings=settings)
        except RenormException as e:
            raise Errors.seeding_failure(position % len(word), e.message)
        if result.data.theta != theta:
            raise Errors.seeding_failure(position % len(word),
                                         f"found {result.data.theta}, expected {theta}")
        f = result.map
    return CoeffVector.from_map(f, degree, settings)


def continue_in_alpha(result, alpha_target, step=CONTINUATION_STEP, tol=DEFAULT_TOL, jobs=1,
                      settings=DEFAULTS):
    """Follow a fixed point from its exponent to alpha_target in steps of at most ``step``."""
    if not alpha_target > 1.0:
        raise Errors.argument(f"alpha must exceed 1, got {alpha_target}", alpha=alpha_target)
    if not 0.0 < step <= CONTINUATION_STEP:
        raise Errors.argument(f"continuation step must lie in (0, {CONTINUATION_STEP}]",
                              step=step)
    alpha = result.point.alpha
    count = max(1, math.ceil(abs(alpha_target - alpha) / step - 1e-12))
    for alpha_next in np.linspace(alpha, alpha_target, count + 1)[1:]:
        seed = CoeffVector(float(alpha_next), result.point.coeffs)
        result = newton_fixed_point(float(alpha_next), result.word, result.point.degree, tol,
                                    seed, jobs=jobs, settings=settings)
        logger.info("continued to alpha = %.4f (residual %.2e)", alpha_next, result.residual)
    return result


def fixed_point(alpha, word, degree=DEFAULT_DEGREE, tol=DEFAULT_TOL, seed=None, jobs=1,
                settings=DEFAULTS):
    """Fixed point of R_word, seeded from the family when no seed is given."""
    word = _as_word(word)
    if seed is None:
        seed = seed_from_family(alpha, word, degree, settings)
    return newton_fixed_point(alpha, word, degree, tol, seed, jobs=jobs, settings=settings)


def periodic_orbit(alpha, word, degree=DEFAULT_DEGREE, tol=DEFAULT_TOL, seed=None, jobs=1,
                   settings=DEFAULTS):
    """Periodic orbit g_0, ..., g_(k-1) of R with theta(g_i) = word[i].

    g_0 is a fixed point of R_word; the rest of the orbit is obtained by
    single renormalizations, each checked against the next orbit point.

    Returns:
        List of (CoeffVector, residual) pairs, residual_i measuring
        |R(g_i) - g_(i+1 mod k)|.
    """
    word = _as_word(word)
    head = fixed_point(alpha, word, degree, tol, seed, jobs, settings)
    orbit = [head.point]
    for position in range(len(word) - 1):
        try:
            orbit.append(apply_word(orbit[-1], CombSequence((word[position],)), settings))
        except RenormException as e:
            raise Errors.seeding_failure(position, e.message)
    pairs = []
    for position, point in enumerate(orbit):
        image = apply_word(point, CombSequence((word[position],)), settings)
        pairs.append((point, residual(orbit[(position + 1) % len(orbit)], image)))
    return pairs


@dataclass(frozen=True)
class StableRate:
    """dist_r(R^m f, R^m g) and its geometric fit (None when all distances vanish)."""
    distances: list
    C: float = None
    lam: float = None
    rms_residual: float = None

    def to_dict(self):
        return {"C": self.C, "lambda": self.lam, "rms_residual": self.rms_residual,
                "distances": self.distances}


def _orbit_maps(orbit, count, settings):
    maps = [point.to_map(settings) if isinstance(point, CoeffVector) else point for point in orbit]
    return [maps[m % len(maps)] for m in range(count)]


def stable_convergence_rate(f, g, steps, r, m_max=3, attractor_orbit=None, skip=1, window=2,
                            settings=DEFAULTS):
    """Fit dist_r(R^m f, R^m g) ~ C * lam^m for m = 0..steps.

    Along the doubling tower of the accumulation map the distances fall in
    a staircase: even and odd levels each decay at lam^2 per two steps, with
    different prefactors. The fit therefore runs through the geometric
    means of ``window`` consecutive distances.

    Args:
        attractor_orbit: Periodic orbit of R starting at g (CoeffVectors or
            maps); R^m(g) is read from it instead of renormalizing g.
        skip: Leading distances left out of the fit.
        window: Consecutive distances averaged on the log scale before fitting.

    Raises:
        CombinatoricsMismatchError: The towers of f and g differ.
    """
    tower_f = renorm_tower(f, steps, m_max, settings=settings)
    if attractor_orbit:
        maps_g = _orbit_maps(attractor_orbit, steps + 1, settings)
        word_g = [detect_renormalization(h, m_max, settings) for h in maps_g[:len(tower_f)]]
        word_g = [data.theta if data is not None else None for data in word_g]
    else:
        tower_g = renorm_tower(g, steps, m_max, settings=settings)
        maps_g = tower_g.maps
        word_g = list(tower_g.word)
    for level, theta in enumerate(tower_f.word):
        if level >= len(word_g) or word_g[level] != theta:
            found = word_g[level] if level < len(word_g) else None
            raise Errors.combinatorics_mismatch(level, theta, found)

    tracker = ConvergenceTracker("stable_rate", noise_floor=settings.noise_floor)
    distances = []
    for m, (fm, gm) in enumerate(zip(tower_f.maps, maps_g)):
        d = dist_r(fm, gm, r, settings)
        distances.append(d)
        tracker.record(m, d)
        logger.debug("m = %d: dist_r = %.3e", m, d)
    fit = tracker.fit_geometric(skip=skip, window=window)
    if fit is None:
        return StableRate(distances=distances)
    return StableRate(distances=distances, C=fit.C, lam=fit.rate, rms_residual=fit.rms_residual)
