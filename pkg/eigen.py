#!/usr/bin/env python3
"""
Dense eigenvalues by Householder reduction to Hessenberg form followed by
single-shift complex QR iterations with Wilkinson shifts and deflation.
"""

import logging

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from errors import Errors
from settings import DEFAULTS

logger = logging.getLogger(__name__)

EXCEPTIONAL_SHIFT_EVERY = 11


def _square(a):
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise Errors.argument(f"expected a square matrix, got shape {a.shape}", shape=a.shape)
    if not np.all(np.isfinite(a)):
        raise Errors.argument("matrix has non-finite entries")
    return a


def hessenberg(a):
    """Unitary similarity to upper Hessenberg form (complex copy)."""
    h = _square(a)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * norm_x
        v /= np.linalg.norm(v)
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _wilkinson_shift(h, hi):
    a, b = h[hi - 1, hi - 1], h[hi - 1, hi]
    c, d = h[hi, hi - 1], h[hi, hi]
    half_trace = 0.5 * (a + d)
    disc = np.sqrt(half_trace * half_trace - (a * d - b * c))
    first, second = half_trace + disc, half_trace - disc
    return first if abs(first - d) <= abs(second - d) else second


def _qr_step(h, lo, hi, shift):
    """One explicit shifted QR step on the active block h[lo:hi+1, lo:hi+1]."""
    block = h[lo:hi + 1, lo:hi + 1]
    n = block.shape[0]
    block[np.diag_indices(n)] -= shift
    rotations = []
    for k in range(n - 1):
        x, y = block[k, k], block[k + 1, k]
        r = np.hypot(abs(x), abs(y))
        c, s = (1.0, 0.0) if r == 0.0 else (x / r, y / r)
        rows = block[k:k + 2, k:].copy()
        block[k, k:] = np.conj(c) * rows[0] + np.conj(s) * rows[1]
        block[k + 1, k:] = -s * rows[0] + c * rows[1]
        rotations.append((c, s))
    for k, (c, s) in enumerate(rotations):
        cols = block[:k + 2, k:k + 2].copy()
        block[:k + 2, k] = cols[:, 0] * c + cols[:, 1] * s
        block[:k + 2, k + 1] = -cols[:, 0] * np.conj(s) + cols[:, 1] * np.conj(c)
    block[np.diag_indices(n)] += shift


def eigenvalues(a, max_iter=DEFAULTS.qr_max_iter):
    """All eigenvalues of a square matrix, in deflation order.

    Raises:
        EigenConvergenceError: An eigenvalue failed to deflate within
            ``max_iter`` iterations; ``details`` holds the eigenvalues already
            converged and the active block.
    """
    h = hessenberg(a)
    n = h.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    eps = np.finfo(float).eps
    scale = np.abs(h).max() or 1.0
    hi = n - 1
    iterations = 0
    while hi > 0:
        lo = hi
        while lo > 0:
            size = abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])
            if size == 0.0:
                size = scale
            if abs(h[lo, lo - 1]) <= eps * size:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            iterations = 0
            continue
        if iterations >= max_iter:
            raise Errors.qr_no_convergence(max_iter, np.diag(h)[hi + 1:].tolist(), (lo, hi))
        iterations += 1
        if iterations % EXCEPTIONAL_SHIFT_EVERY == 0:
            shift = h[hi, hi] + abs(h[hi, hi - 1])
        else:
            shift = _wilkinson_shift(h, hi)
        _qr_step(h, lo, hi, shift)
    return np.diag(h).copy()


def inverse_iteration(a, eigenvalue, iterations=4):
    """Unit eigenvector for an (approximate) eigenvalue, largest entry made real positive."""
    a = _square(a)
    n = a.shape[0]
    shift = eigenvalue + 1e-10 * max(1.0, float(np.abs(a).max()))
    lu = lu_factor(a - shift * np.eye(n), check_finite=False)
    v = np.ones(n, dtype=complex) / np.sqrt(n)
    for _ in range(iterations):
        v = lu_solve(lu, v, check_finite=False)
        v /= np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])
