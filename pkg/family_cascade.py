#!/usr/bin/env python3
"""
One-parameter families, superstable parameters and the period-doubling cascade.

The standard family is psi_c(y) = c + (1 + c) y, i.e. f_c(x) = c - (1 + c)|x|^alpha,
normalized so that f_c(+-1) = -1 for every c. For alpha = 2 it is affinely
conjugate to z -> z^2 + C with C = -c (1 + c).
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from analytic_core import AnalyticSeries, bisect_root
from combinatorics import CombSequence, detect_renormalization
from convergence_tracker import ConvergenceTracker
from errors import Errors, RenormException, RootFindingError, WrongWindowError
from renorm_operator import renorm_tower
from settings import DEFAULTS
from unimodal_space import PSI_INTERVAL, embed_j_alpha

logger = logging.getLogger(__name__)

DELTA_GUESS = 4.669
MAX_LEVELS = 14
WINDOW_TOL = 1e-9
EDGE_FRACTION = 1e-3
SCAN_POINTS = 4000
MAX_ACCUMULATION_PERIOD = 1100
MIN_SPACING = 1e-9


def _standard_psi(c):
    return AnalyticSeries(PSI_INTERVAL, [c - 0.5 * (1.0 + c), 0.5 * (1.0 + c)], rho=DEFAULTS.rho_cap)


@dataclass(frozen=True)
class Family:
    """c -> f_c = j_alpha(psi_of_c(c)) for c in c_range.

    Families flagged ``closed_form`` (the standard one) iterate
    f_c(x) = c - (1 + c)|x|^alpha directly, vectorized over c; other families
    go through the embedded maps.
    """
    alpha: float
    psi_of_c: object
    c_range: tuple = (0.0, 1.0)
    closed_form: bool = False

    @classmethod
    def standard(cls, alpha):
        return cls(float(alpha), _standard_psi, (0.0, 1.0), closed_form=True)

    def map_at(self, c, settings=DEFAULTS):
        return embed_j_alpha(self.psi_of_c(float(c)), self.alpha, settings)

    def critical_iterate(self, c, k):
        """f_c^k(0); vectorized over c."""
        if np.ndim(c):
            c = np.asarray(c, dtype=float)
            if not self.closed_form:
                return np.array([self.critical_iterate(float(v), k) for v in c.ravel()])
            x = np.zeros_like(c)
            for _ in range(k):
                x = c - (1.0 + c) * np.power(np.abs(x), self.alpha)
            return x
        orbit = self.critical_orbit(c, k)
        return float(orbit[-1]) if k else 0.0

    def critical_orbit(self, c, k):
        """[f_c(0), ..., f_c^k(0)] for a scalar c."""
        c = float(c)
        orbit = np.empty(k)
        x = 0.0
        if self.closed_form:
            alpha = self.alpha
            for j in range(k):
                x = c - (1.0 + c) * abs(x) ** alpha
                orbit[j] = x
            return orbit
        f = self.map_at(c)
        for j in range(k):
            x = f(x)
            orbit[j] = x
        return orbit


def _check_window(fam, c, period):
    orbit = fam.critical_orbit(c, period - 1)
    for k, value in enumerate(orbit, start=1):
        if abs(value) < WINDOW_TOL:
            raise Errors.wrong_window(period, k, abs(value))


@dataclass(frozen=True)
class Superstable:
    """A superstable parameter and its certificate.

    ``residual`` is |f_c^period(0)|; ``bracket_width`` is the width of the
    final sign-change bracket (one ulp of c once bisection reaches adjacency).
    """
    c: float
    period: int
    residual: float
    bracket_width: float


def superstable_parameter_of_period(fam, period, bracket, settings=DEFAULTS):
    """Parameter in bracket with f_c^period(0) = 0 and exact period ``period``."""
    return solve_superstable(fam, period, bracket, settings).c


def solve_superstable(fam, period, bracket, settings=DEFAULTS):
    """Superstable parameter of exact period ``period`` in bracket, with its certificate.

    Bisection on the sign of the critical iterate runs to floating-point
    adjacency.

    Raises:
        ArgumentError: period < 2 (the period-1 parameter is the excluded
            critical fixed point) or a bracket outside c_range.
        RootFindingError: No sign change on the bracket.
        WrongWindowError: The critical orbit returns before ``period`` steps.
    """
    if period < 2:
        raise Errors.argument(f"superstable period must be >= 2, got {period}", period=period)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (fam.c_range[0] <= lo < hi <= fam.c_range[1]):
        raise Errors.argument(f"bracket {bracket} outside the family range {fam.c_range}",
                              bracket=bracket)
    c, lo, hi = bisect_root(lambda v: fam.critical_iterate(v, period), lo, hi,
                            max_iter=settings.bisect_max_iter)
    _check_window(fam, c, period)
    result = Superstable(c=c, period=period, residual=abs(fam.critical_iterate(c, period)),
                         bracket_width=hi - lo)
    logger.debug("period %d superstable at c = %.17g (|f^P(0)| = %.2e, bracket width %.1e)",
                 period, c, result.residual, result.bracket_width)
    return result


def superstable_parameter(fam, n, bracket=None, settings=DEFAULTS):
    """Superstable parameter of period 2^n (n >= 1)."""
    if n < 1:
        raise Errors.argument("n must be >= 1: the period-1 superstable parameter is the "
                              "critical fixed point excluded from the family range", n=n)
    if bracket is None:
        if n != 1:
            raise Errors.argument("a bracket is required for n > 1", n=n)
        bracket = _first_bracket(fam)
    return superstable_parameter_of_period(fam, 2 ** n, bracket, settings)


def _first_bracket(fam):
    lo, hi = fam.c_range
    width = hi - lo
    return lo + EDGE_FRACTION * width, hi - EDGE_FRACTION * width


def aitken(values):
    """Aitken delta-squared extrapolation of the last three values."""
    if len(values) < 3:
        return None
    x0, x1, x2 = values[-3:]
    denominator = x2 - 2.0 * x1 + x0
    if denominator == 0.0:
        return x2
    return x2 - (x2 - x1) ** 2 / denominator


@dataclass
class CascadeTable:
    """Superstable parameters c_1..c_K of periods 2^n with ratio estimates.

    ``delta`` maps n to (c_n - c_(n-1)) / (c_(n+1) - c_n) for the n where all
    three parameters exist; ``lam`` maps n to |J_(n+1)| / |J_n| measured on
    the tower of the accumulation map. Undefined entries are absent.
    ``residual`` and ``bracket_width`` hold the certificate of each c_n:
    |f_(c_n)^(2^n)(0)| and the width of its final bisection bracket.
    """
    alpha: float
    c: list = field(default_factory=list)
    residual: list = field(default_factory=list)
    bracket_width: list = field(default_factory=list)
    delta: dict = field(default_factory=dict)
    lam: dict = field(default_factory=dict)
    c_inf_extrapolated: float = None
    break_level: int = None
    break_reason: str = None

    def to_frame(self):
        n = range(1, len(self.c) + 1)
        return pd.DataFrame({
            "n": list(n),
            "c": self.c,
            "residual": self.residual,
            "bracket_width": self.bracket_width,
            "delta_n": [self.delta.get(k, np.nan) for k in n],
            "lambda_n": [self.lam.get(k, np.nan) for k in n],
        })

    def to_csv(self, path_or_buf=None):
        return self.to_frame().to_csv(path_or_buf, index=False, float_format="%.17g",
                                      na_rep="", lineterminator="\n")

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "c": self.c,
            "delta_n": {str(k): v for k, v in self.delta.items()},
            "lambda_n": {str(k): v for k, v in self.lam.items()},
            "c_inf_extrapolated": self.c_inf_extrapolated,
            "break_level": self.break_level,
            "break_reason": self.break_reason,
        }


def _next_parameter(fam, cs, n, settings):
    points = [fam.c_range[0]] + list(cs)
    spacing = points[-1] - points[-2]
    delta_est = DELTA_GUESS if len(points) < 3 else (points[-2] - points[-3]) / spacing
    step = spacing / delta_est
    last_error = None
    for low, high in ((0.5, 1.5), (0.25, 2.5)):
        bracket = (points[-1] + low * step, min(points[-1] + high * step, fam.c_range[1]))
        try:
            return solve_superstable(fam, 2 ** n, bracket, settings), None
        except (RootFindingError, WrongWindowError) as e:
            last_error = e
            logger.info("level %d: bracket [%.15g, %.15g] failed, %s", n, bracket[0], bracket[1],
                        e.message)
    return None, last_error.message


def cascade_table(fam, K, settings=DEFAULTS):
    """Superstable parameters c_1..c_K, ratio estimates and the scaling ratios.

    Each bracket is predicted from the previous spacing and the running delta
    estimate; a failed level (after one widened retry) ends the table early
    with ``break_level`` set.
    """
    if K < 0 or K > MAX_LEVELS:
        raise Errors.argument(f"K must lie in [0, {MAX_LEVELS}], got {K}", K=K)
    table = CascadeTable(alpha=fam.alpha)
    if K == 0:
        return table
    level = solve_superstable(fam, 2, _first_bracket(fam), settings)
    for n in range(1, K + 1):
        if n > 1:
            level, reason = _next_parameter(fam, table.c, n, settings)
            if level is None:
                table.break_level, table.break_reason = n, reason
                break
        table.c.append(level.c)
        table.residual.append(level.residual)
        table.bracket_width.append(level.bracket_width)
        logger.info("c_%d = %.17g (|f^P(0)| = %.1e)", n, level.c, level.residual)

    for n in range(2, len(table.c)):
        c_prev, c_n, c_next = table.c[n - 2], table.c[n - 1], table.c[n]
        table.delta[n] = (c_n - c_prev) / (c_next - c_n)
    table.c_inf_extrapolated = aitken(table.c)

    if table.c_inf_extrapolated is not None:
        table.lam = _scaling_ratios(fam, table.c_inf_extrapolated, len(table.c), settings)
    return table


def _scaling_ratios(fam, c_inf, levels, settings):
    """|J_(n+1)| / |J_n| = 1 / mu(R^n f) along the tower of f_(c_inf)."""
    try:
        f = fam.map_at(c_inf, settings)
    except RenormException as e:
        logger.warning("accumulation map rejected: %s", e.message)
        return {}
    tower = renorm_tower(f, levels + 1, 2, settings=settings)
    return {n: 1.0 / tower.steps[n].data.mu for n in range(1, min(levels, len(tower) - 1) + 1)}


def feigenbaum_map(alpha, K=12, settings=DEFAULTS):
    """Standard-family map at the extrapolated period-doubling accumulation parameter."""
    fam = Family.standard(alpha)
    table = cascade_table(fam, K, settings)
    if table.c_inf_extrapolated is None:
        raise Errors.bracket_failure("accumulation parameter", *fam.c_range,
                                     break_level=table.break_level)
    return fam.map_at(table.c_inf_extrapolated, settings)


@dataclass(frozen=True)
class AccumulationResult:
    """Nested superstable parameters realizing a periodic word and their limit."""
    word: CombSequence
    periods: tuple
    parameters: tuple
    c_inf: float


def _first_root_after(fam, period, lo, hi, settings):
    for points in (SCAN_POINTS, 8 * SCAN_POINTS):
        grid = np.linspace(lo, hi, points + 1)[1:]
        values = fam.critical_iterate(grid, period)
        crossings = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0.0)[0]
        if crossings.size:
            i = int(crossings[0])
            c, _, _ = bisect_root(lambda v: fam.critical_iterate(v, period),
                                  float(grid[i]), float(grid[i + 1]),
                                  max_iter=settings.bisect_max_iter)
            return c
    raise Errors.bracket_failure(f"period-{period} superstable parameter", lo, hi)


def accumulation_parameter(fam, word, levels=None, settings=DEFAULTS):
    """Accumulation parameter of the periodic combinatorial word ``word``.

    Level k is the first superstable parameter of period P_k (the product of
    the first k symbol periods, cycling through the word) past level k - 1.
    Levels stop once P_k exceeds the double-precision comfort zone or the
    spacing drops below 1e-9; the limit is Aitken-extrapolated over levels
    one word-length apart.
    """
    word = CombSequence(tuple(word))
    if len(word) == 0:
        raise Errors.argument("word must be non-empty")
    periods, parameters = [], []
    period = 1
    lo = fam.c_range[0]
    k = 0
    while levels is None or k < levels:
        period *= word[k % len(word)].period
        if period > MAX_ACCUMULATION_PERIOD:
            break
        if parameters:
            anchor = parameters[-2] if len(parameters) > 1 else fam.c_range[0]
            hi = min(parameters[-1] + 3.0 * abs(parameters[-1] - anchor), fam.c_range[1])
        else:
            hi = fam.c_range[1]
        c = _first_root_after(fam, period, lo, hi, settings)
        _check_window(fam, c, period)
        if parameters and abs(c - parameters[-1]) < MIN_SPACING:
            break
        periods.append(period)
        parameters.append(c)
        logger.debug("word level %d: period %d at c = %.17g", k + 1, period, c)
        lo = c
        k += 1

    if not parameters:
        raise Errors.bracket_failure("accumulation parameter", *fam.c_range)
    spaced = parameters[len(parameters) - 1::-len(word)][::-1]
    c_inf = aitken(spaced)
    if c_inf is None:
        c_inf = parameters[-1]
    return AccumulationResult(word=word, periods=tuple(periods), parameters=tuple(parameters),
                              c_inf=float(c_inf))


@dataclass
class RigidityReport:
    """Scaling ratios |J_(n+1)| / |J_n| of two towers and their differences."""
    levels: list
    ratios_f: list
    ratios_g: list
    differences: list
    C: float = None
    mu: float = None
    rms_residual: float = None

    def to_dict(self):
        return {"levels": self.levels, "ratios_f": self.ratios_f, "ratios_g": self.ratios_g,
                "d_n": self.differences, "C": self.C, "mu": self.mu,
                "rms_residual": self.rms_residual}


def _data_along(f, depth, m_max, attractor_orbit, settings):
    """RenormData of R^n f for n = 0..depth."""
    if attractor_orbit:
        data = []
        for n in range(depth + 1):
            found = detect_renormalization(attractor_orbit[n % len(attractor_orbit)], m_max,
                                           settings)
            if found is None:
                break
            data.append(found)
        return data
    tower = renorm_tower(f, depth, m_max, settings=settings)
    data = [step.data for step in tower.steps]
    if tower.complete:
        last = detect_renormalization(tower.maps[-1], m_max, settings)
        if last is not None:
            data.append(last)
    return data


def cantor_scaling_compare(f, g, depth, m_max=3, attractor_orbit=None, settings=DEFAULTS):
    """Compare the restrictive-interval scaling ratios of two towers.

    Args:
        f, g: Maps with the same combinatorics.
        depth: Number of ratios compared.
        attractor_orbit: Periodic orbit g_0 = g, g_1 = R(g), ... of R, read
            cyclically instead of renormalizing g.

    Raises:
        CombinatoricsMismatchError: theta differs at some level.
    """
    data_f = _data_along(f, depth, m_max, None, settings)
    data_g = _data_along(g, depth, m_max, attractor_orbit, settings)
    available = min(len(data_f), len(data_g))
    for level in range(available):
        if data_f[level].theta != data_g[level].theta:
            raise Errors.combinatorics_mismatch(level, data_f[level].theta, data_g[level].theta)
    if available < depth + 1:
        logger.warning("towers available to level %d only (requested %d)", available - 1, depth)

    tracker = ConvergenceTracker("cantor_scaling")
    report = RigidityReport(levels=[], ratios_f=[], ratios_g=[], differences=[])
    for n in range(1, available):
        ratio_f, ratio_g = 1.0 / data_f[n].mu, 1.0 / data_g[n].mu
        report.levels.append(n)
        report.ratios_f.append(ratio_f)
        report.ratios_g.append(ratio_g)
        report.differences.append(abs(ratio_f - ratio_g))
        tracker.record(n, abs(ratio_f - ratio_g))
    fit = tracker.fit_geometric()
    if fit is not None:
        report.C, report.mu, report.rms_residual = fit.C, fit.rate, fit.rms_residual
    return report
