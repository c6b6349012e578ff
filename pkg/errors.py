#!/usr/bin/env python3
"""
Exceptions raised by the renormalization engine.

All of them derive from ``RenormException``, which carries a message, the
CLI exit code (2 for ``ArgumentError``, 1 for every numerical failure), a
stable upper-case ``error_code`` and a ``details`` dict with the structured
payload (offending point, bracket, last Newton iterate, partial eigenvalues).
Modules raise them through the ``Errors`` factory methods, one per failure.
"""


class RenormException(Exception):
    """Base exception class for engine errors."""
    def __init__(self, message, exit_code=1, error_code=None, details=None):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code
        self.details = details or {}
        super().__init__(self.message)


class ArgumentError(RenormException):
    """Invalid argument or flag (exit code 2)."""
    def __init__(self, message, error_code="BAD_ARGUMENT", details=None):
        super().__init__(message, exit_code=2, error_code=error_code, details=details)


class DomainError(RenormException):
    """Evaluation point outside the domain of a function."""
    pass


class PrecisionError(RenormException):
    """Requested accuracy not reachable with the stored representation."""
    pass


class ValidationError(RenormException):
    """A map failed the unimodality checks; ``details['report']`` holds the report."""
    pass


class NotRenormalizableError(RenormException):
    """No restrictive interval was found."""
    pass


class RootFindingError(RenormException):
    """Bisection or bracketing failed."""
    pass


class InconsistencyError(RenormException):
    """Renormalization data contradicts the map it was computed for."""
    pass


class DivergenceError(RenormException):
    """Newton iteration failed to converge."""
    pass


class WordViolationError(RenormException):
    """A renormalization step produced a permutation other than the prescribed one."""
    pass


class EigenConvergenceError(RenormException):
    """Shifted QR iteration hit its iteration cap."""
    pass


class WrongWindowError(RenormException):
    """A superstable parameter belongs to a different period window."""
    pass


class CombinatoricsMismatchError(RenormException):
    """Two towers that should share combinatorics do not."""
    pass


class Errors:
    """Error factory: each call returns a fresh exception instance."""

    @staticmethod
    def argument(message, **details):
        return ArgumentError(message, details=details)

    @staticmethod
    def degenerate_interval(p, q):
        return ArgumentError(
            message=f"Degenerate interval: endpoints p={p!r} and q={q!r} coincide",
            error_code="DEGENERATE_INTERVAL",
            details={"p": p, "q": q},
        )

    @staticmethod
    def branch_domain(y):
        return DomainError(
            message=f"Branch p_alpha is defined on (-inf, 0] only, got y={y!r}",
            error_code="BRANCH_DOMAIN",
            details={"y": y},
        )

    @staticmethod
    def out_of_domain(x, lo, hi):
        return DomainError(
            message=f"Point {x!r} outside the evaluation domain [{lo!r}, {hi!r}]",
            error_code="OUT_OF_DOMAIN",
            details={"x": x, "lo": lo, "hi": hi},
        )

    @staticmethod
    def non_finite_sample(node, value):
        return PrecisionError(
            message=f"Sample function returned {value!r} at node {node!r}",
            error_code="NON_FINITE_SAMPLE",
            details={"node": node, "value": value},
        )

    @staticmethod
    def radius_too_large(r, rho, r_max):
        return PrecisionError(
            message=(f"Radius r={r!r} exceeds the analyticity proxy rho={rho!r}; "
                     f"use r < {r_max!r}"),
            error_code="RADIUS_TOO_LARGE",
            details={"r": r, "rho": rho, "suggested_max_r": r_max},
        )

    @staticmethod
    def refit_precision(residual, tol, degree):
        return PrecisionError(
            message=(f"Refit residual {residual:.3e} above tolerance {tol:.1e} at degree "
                     f"{degree}; raise the degree"),
            error_code="REFIT_PRECISION",
            details={"residual": residual, "tol": tol, "degree": degree},
        )

    @staticmethod
    def not_unimodal(report):
        return ValidationError(
            message=f"Map failed unimodality validation: {report}",
            error_code="NOT_UNIMODAL",
            details={"report": report},
        )

    @staticmethod
    def invalid_coord_change(reason, **details):
        return ValidationError(
            message=f"Invalid coordinate change: {reason}",
            error_code="INVALID_COORD_CHANGE",
            details=details,
        )

    @staticmethod
    def not_renormalizable(m_max):
        return NotRenormalizableError(
            message=f"No restrictive interval with period <= {m_max}",
            error_code="NOT_RENORMALIZABLE",
            details={"m_max": m_max},
        )

    @staticmethod
    def bracket_failure(what, lo, hi, **details):
        return RootFindingError(
            message=f"Root finding for {what} failed on bracket [{lo!r}, {hi!r}]",
            error_code="BRACKET_FAILURE",
            details={"bracket": (lo, hi), **details},
        )

    @staticmethod
    def overlapping_intervals(i, j, intervals):
        return InconsistencyError(
            message=f"Intervals f^{i}(J) and f^{j}(J) have overlapping interiors",
            error_code="OVERLAPPING_INTERVALS",
            details={"pair": (i, j), "intervals": intervals},
        )

    @staticmethod
    def newton_divergence(iterations, residual, last_iterate):
        return DivergenceError(
            message=f"Newton failed after {iterations} iterations (residual {residual:.3e})",
            error_code="NEWTON_DIVERGENCE",
            details={"iterations": iterations, "residual": residual,
                     "last_iterate": last_iterate},
        )

    @staticmethod
    def word_violation(step, expected, found):
        return WordViolationError(
            message=f"Renormalization step {step} has permutation {found}, expected {expected}",
            error_code="WORD_VIOLATION",
            details={"step": step, "expected": expected, "found": found},
        )

    @staticmethod
    def qr_no_convergence(iterations, converged, block):
        return EigenConvergenceError(
            message=f"Shifted QR did not converge within {iterations} iterations",
            error_code="QR_NO_CONVERGENCE",
            details={"converged_eigenvalues": converged, "active_block": block},
        )

    @staticmethod
    def wrong_window(period, k, value):
        return WrongWindowError(
            message=(f"Critical orbit returns at step {k} < {period} "
                     f"(|f^{k}(0)| = {value:.3e}); wrong window"),
            error_code="WRONG_WINDOW",
            details={"period": period, "return_step": k, "value": value},
        )

    @staticmethod
    def combinatorics_mismatch(level, theta_f, theta_g):
        return CombinatoricsMismatchError(
            message=f"Combinatorics differ at level {level}: {theta_f} vs {theta_g}",
            error_code="COMBINATORICS_MISMATCH",
            details={"level": level, "theta_f": theta_f, "theta_g": theta_g},
        )

    @staticmethod
    def seeding_failure(position, reason):
        return DivergenceError(
            message=f"Seeding failed at word position {position}: {reason}",
            error_code="SEEDING_FAILURE",
            details={"position": position, "reason": reason},
        )
