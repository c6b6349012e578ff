#!/usr/bin/env python3
"""
Renormalizability, restrictive intervals and unimodal permutations.

For an even map the maximal restrictive interval of period m is symmetric,
J = [-x*, x*], and f^m sends x* to x* or to -x*. The search therefore scans
f^m(x) - x and f^m(x) + x on (0, 1], refines every sign change by bisection,
and keeps the largest x* whose interval passes the exact interval-image
tests (invariance of J under f^m, disjoint interiors of J, ..., f^(m-1)(J)).
"""

import logging
from dataclasses import dataclass

import numpy as np

from analytic_core import AffineMap, affine_from_endpoints, bisect_root
from errors import Errors
from settings import DEFAULTS
from unimodal_space import domain_limit

logger = logging.getLogger(__name__)

M_MAX_LIMIT = 32


@dataclass(frozen=True)
class UnimodalPermutation:
    """theta(i) = rank of f^i(J) in the left-to-right order."""
    images: tuple

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        if len(images) < 2 or sorted(images) != list(range(len(images))):
            raise Errors.argument(f"{images} is not a permutation of 0..m-1 with m >= 2",
                                  images=images)
        object.__setattr__(self, "images", images)

    @property
    def period(self):
        return len(self.images)

    def __str__(self):
        return ",".join(str(v) for v in self.images)

    @classmethod
    def parse(cls, text):
        return cls(tuple(int(v) for v in text.split(",")))


DOUBLING = UnimodalPermutation((0, 1))
TRIPLING = UnimodalPermutation((1, 2, 0))
NAMED_PERMUTATIONS = {"doubling": DOUBLING, "tripling": TRIPLING}


@dataclass(frozen=True)
class CombSequence:
    """A finite stretch of rho(f) = (theta(f), theta(R f), ...)."""
    word: tuple = ()

    def __post_init__(self):
        word = tuple(self.word)
        if not all(isinstance(theta, UnimodalPermutation) for theta in word):
            raise Errors.argument("A combinatorial word holds UnimodalPermutation entries")
        object.__setattr__(self, "word", word)

    def __len__(self):
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def __getitem__(self, index):
        return self.word[index]

    def to_list(self):
        return [list(theta.images) for theta in self.word]

    @classmethod
    def parse(cls, text):
        """Parse either named symbols ("doubling,tripling") or "1,0;2,0,1"."""
        text = text.strip()
        names = [part.strip() for part in text.split(",")]
        if all(name in NAMED_PERMUTATIONS for name in names):
            return cls(tuple(NAMED_PERMUTATIONS[name] for name in names))
        return cls(tuple(UnimodalPermutation.parse(part) for part in text.split(";")))


@dataclass(frozen=True)
class RenormData:
    """Restrictive interval and rescaling of one renormalization step.

    Attributes:
        m: Period (>= 2).
        J: (a, b) with a < 0 < b.
        p, q: Endpoints sent to -1 and 1 by the rescaling.
        rescale: A_{p,q}.
        theta: Permutation of J, f(J), ..., f^(m-1)(J).
        boundary_type: "left" when p = a, "right" when p = b.
    """
    m: int
    J: tuple
    p: float
    q: float
    rescale: AffineMap
    theta: UnimodalPermutation
    boundary_type: str

    def __post_init__(self):
        if self.m < 2:
            raise Errors.argument(f"renormalization period must be >= 2, got {self.m}", m=self.m)

    @property
    def mu(self):
        return abs(self.rescale.slope)

    def to_dict(self):
        return {"m": self.m, "J": list(self.J), "p": self.p, "q": self.q,
                "theta": list(self.theta.images), "mu": self.mu}


def iterate(f, x, k):
    """f^k applied elementwise."""
    for _ in range(k):
        x = f(x)
    return x


def orbit_derivative(f, x, k):
    """(f^k)'(x) by the chain rule."""
    d = 1.0
    for _ in range(k):
        d *= f.derivative(x)
        x = f(x)
    return d


def interval_image(f, I, settings=DEFAULTS):
    """Exact image f(I) of an interval under a unimodal map with critical point 0."""
    lo, hi = float(I[0]), float(I[1])
    if lo > hi:
        raise Errors.argument(f"interval endpoints out of order: {I}", interval=I)
    limit = domain_limit(f, settings)
    if lo < -limit or hi > limit:
        raise Errors.out_of_domain(lo if lo < -limit else hi, -limit, limit)
    values = f(np.array([lo, hi]))
    out_lo, out_hi = float(values.min()), float(values.max())
    if lo < 0.0 < hi:
        out_hi = max(out_hi, f.critical_value)
    return out_lo, out_hi


def orbit_intervals(f, J, k, settings=DEFAULTS):
    """[J, f(J), ..., f^k(J)]."""
    images = [(float(J[0]), float(J[1]))]
    for _ in range(k):
        images.append(interval_image(f, images[-1], settings))
    return images


def _overlap(first, second):
    return min(first[1], second[1]) - max(first[0], second[0])


def _first_overlap(images, tol):
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if _overlap(images[i], images[j]) > tol:
                return i, j
    return None


def _is_restrictive(images, settings):
    J, image_m = images[0], images[-1]
    if image_m[0] < J[0] - settings.inclusion_tol or image_m[1] > J[1] + settings.inclusion_tol:
        return False
    return _first_overlap(images[:-1], settings.disjoint_tol) is None


def _ranks(images):
    order = sorted(range(len(images)), key=lambda i: images[i][0])
    ranks = [0] * len(images)
    for position, index in enumerate(order):
        ranks[index] = position
    return UnimodalPermutation(tuple(ranks))


def _boundary_candidates(f, m, settings):
    x = np.linspace(0.0, 1.0, settings.scan_grid + 1)[1:]
    fm = iterate(f, x, m)
    roots = []
    for sign in (1.0, -1.0):
        g = fm - sign * x

        def shifted(t, sign=sign):
            return iterate(f, t, m) - sign * t

        roots.extend(float(v) for v in x[g == 0.0])
        for i in np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0.0)[0]:
            root, _, _ = bisect_root(shifted, float(x[i]), float(x[i + 1]), float(g[i]),
                                     settings.bisect_max_iter)
            roots.append(root)
    return sorted(set(roots))


def restrictive_interval(f, m, settings=DEFAULTS):
    """Maximal symmetric restrictive interval of period m, or None."""
    passing = []
    for x_star in _boundary_candidates(f, m, settings):
        if abs(orbit_derivative(f, x_star, m)) < 1.0 - 1e-9:
            continue
        images = orbit_intervals(f, (-x_star, x_star), m, settings)
        if _is_restrictive(images, settings):
            passing.append((x_star, images))
    if not passing:
        return None

    x_star, images = max(passing, key=lambda item: item[0])
    a, b = -x_star, x_star
    if orbit_derivative(f, a, m) > 0.0:
        p, q, boundary_type = a, b, "left"
    else:
        p, q, boundary_type = b, a, "right"
    return RenormData(m=m, J=(a, b), p=p, q=q, rescale=affine_from_endpoints(p, q),
                      theta=_ranks(images[:-1]), boundary_type=boundary_type)


def detect_renormalization(f, m_max, settings=DEFAULTS):
    """Smallest period m <= m_max admitting a restrictive interval.

    Returns:
        RenormData for the maximal interval of that period, or None.
    """
    if m_max < 2 or m_max > M_MAX_LIMIT:
        raise Errors.argument(f"m_max must lie in [2, {M_MAX_LIMIT}], got {m_max}", m_max=m_max)
    for m in range(2, m_max + 1):
        data = restrictive_interval(f, m, settings)
        if data is not None:
            logger.debug("period %d, J = [%.15g, %.15g], theta %s", m, data.J[0], data.J[1],
                         data.theta)
            return data
    return None


def permutation_of(f, data, settings=DEFAULTS):
    """Recompute theta(f) from the orbit of J, checking disjointness."""
    if data.m < 2:
        raise Errors.argument(f"renormalization period must be >= 2, got {data.m}", m=data.m)
    images = orbit_intervals(f, data.J, data.m - 1, settings)
    clash = _first_overlap(images, settings.disjoint_tol)
    if clash is not None:
        raise Errors.overlapping_intervals(clash[0], clash[1], images)
    return _ranks(images)


def expansion_factor(f, data):
    """Real-bounds diagnostic mu = |A_{p,q}'| = 2 / |b - a|."""
    return abs(data.rescale.slope)
