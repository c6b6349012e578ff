"""
Tunable numerical defaults shared by all modules.

Override with ``dataclasses.replace(DEFAULTS, field=value)`` and pass the
result as the ``settings`` argument of any public operation.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Settings:
    """Numerical defaults.

    Attributes:
        eval_margin: Series may be evaluated on their interval widened by this
            factor of the half-length.
        rho_floor: Smallest analyticity-ellipse parameter a fit may report.
        rho_cap: Largest one (used when the tail is below the noise floor).
        unimodal_nodes: Node count for the unimodality certificate.
        boundary_tol: Allowed |psi(-1) + 1|.
        scan_grid: Grid size for fixed-point scans of f^m.
        bisect_max_iter: Upper bound on bisection steps (bisection otherwise
            stops at floating-point adjacency).
        disjoint_tol: Allowed overlap of the interiors of f^i(J).
        inclusion_tol: Allowed overshoot of f^m(J) beyond J.
        boundary_snap: Points this close to the boundary of J use the exact
            endpoint orbit.
        refit_tol: Maximum accepted refit residual of a renormalization.
        refit_degree: Default degree of the refit.
        refit_degree_max: Ceiling for automatic degree raises.
        tail_threshold: Tail mass above which the degree is raised.
        newton_max_iter: Newton iteration cap.
        newton_halvings: Line-search halvings per Newton step.
        fd_step: Base finite-difference step (scaled by coefficient size).
        qr_max_iter: Iteration cap per eigenvalue of the shifted QR solver.
        noise_floor: Values below this are treated as zero in geometric fits.
    """
    eval_margin: float = 1.05
    rho_floor: float = 1.001
    rho_cap: float = 50.0
    unimodal_nodes: int = 1024
    boundary_tol: float = 1e-10
    scan_grid: int = 4096
    bisect_max_iter: int = 200
    disjoint_tol: float = 1e-12
    inclusion_tol: float = 1e-10
    boundary_snap: float = 1e-12
    refit_tol: float = 1e-9
    refit_degree: int = 48
    refit_degree_max: int = 96
    tail_threshold: float = 1e-11
    newton_max_iter: int = 20
    newton_halvings: int = 8
    fd_step: float = 1e-6
    qr_max_iter: int = 200
    noise_floor: float = 1e-15


DEFAULTS = Settings()
