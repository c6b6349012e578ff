#!/usr/bin/env python3
"""
Demonstration: the same universal number reached by two independent routes.

Route 1 locates superstable parameters of the period-doubling cascade and takes
ratios of their spacings. Route 2 solves R(g) = g for the renormalization fixed
point and reads the unstable eigenvalue of the truncated derivative.
"""

import sys

from combinatorics import DOUBLING, CombSequence
from convergence_tracker import ConvergenceTracker
from family_cascade import Family, cascade_table
from spectral import analyse_fixed_point, fixed_point


def delta_from_cascade(alpha, levels):
    """Route 1: ratio estimates delta_n along the cascade."""
    print(f"\n=== Cascade route (alpha = {alpha}, {levels} levels) ===")
    table = cascade_table(Family.standard(alpha), levels)
    tracker = ConvergenceTracker(f"cascade_alpha_{alpha}", sample_memory=True)
    for n, c in enumerate(table.c, start=1):
        delta = table.delta.get(n)
        lam = table.lam.get(n)
        print(f"n={n:>2}  c={c:.15f}  delta_n={'' if delta is None else f'{delta:.8f}'}"
              f"  lambda_n={'' if lam is None else f'{lam:.8f}'}")
        if delta is not None:
            tracker.record(n, delta)
    print(f"Extrapolated accumulation parameter: {table.c_inf_extrapolated:.15f}")
    tracker.save_data(f"demo_cascade_alpha_{alpha}.csv")
    return table.delta[max(table.delta)]


def delta_from_spectrum(alpha, degree):
    """Route 2: leading eigenvalue of DR at the doubling fixed point."""
    print(f"\n=== Spectral route (alpha = {alpha}, degree {degree}) ===")
    result = fixed_point(alpha, CombSequence((DOUBLING,)), degree)
    print(f"Fixed point found in {result.iterations} Newton steps, residual {result.residual:.2e}")
    report = analyse_fixed_point(result)
    for z in report.eigenvalues[:5]:
        print(f"  eigenvalue {z.real:+.10f} {z.imag:+.2e}i  |.| = {abs(z):.10f}")
    print(f"Unstable directions: {report.unstable_count}, gap {report.gap:.6f}")
    return report.delta


if __name__ == "__main__":
    alpha = 2.0
    if len(sys.argv) > 1:
        try:
            alpha = float(sys.argv[1])
        except ValueError:
            print(f"Invalid alpha: {sys.argv[1]}. Using default: 2.0")

    ratio_delta = delta_from_cascade(alpha, 10)
    spectral_delta = delta_from_spectrum(alpha, 40)

    print("\n=== Cross-validation ===")
    print(f"delta from superstable ratios: {ratio_delta:.8f}")
    print(f"delta from the spectrum:       {spectral_delta:.8f}")
    print(f"difference:                    {abs(ratio_delta - spectral_delta):.2e}")
