"""Solve pipeline for mean exit time and escape probability.

``solve`` assembles the operator on the scaled domain s = x / b, solves the
dense system and maps v(s) back to u(x) = v(x / b) on the physical nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .discretization import ProblemKind, ProblemSpec, build_grid, build_system
from .levy_coefficients import _check_alpha, gamma_real
from .linalg import ConvergenceError, SolveStats, direct_solve, gmres_solve, relative_residual

__all__ = [
    "SolutionProfile",
    "solve",
    "solve_linear",
    "analytic_met_symmetric",
    "analytic_escape_symmetric",
    "symmetry_check",
]

SOLVE_METHODS = ("auto", "gmres", "direct")


@dataclass
class SolutionProfile:
    """Nodal solution on x_j = b s_j, j = -J..J, exterior values included.

    For ESCAPE_RIGHT the end nodes carry the exterior data: 0 at -b and 1 at
    +b (the value on E = [b, inf)), not a limit of interior values.
    """

    x_nodes: np.ndarray
    values: np.ndarray
    stats: SolveStats
    spec: ProblemSpec
    J: int
    meta: dict = field(default_factory=dict)

    @property
    def interior_x(self) -> np.ndarray:
        return self.x_nodes[1:-1]

    @property
    def interior_values(self) -> np.ndarray:
        return self.values[1:-1]

    def value_at(self, x: float) -> float:
        j = round((x / self.spec.b) * self.J)
        if abs(self.x_nodes[j + self.J] - x) > 1e-9 * max(1.0, self.spec.b):
            raise ValueError(f"x = {x!r} is not a grid node")
        return float(self.values[j + self.J])


def solve_linear(matrix, rhs, *, method="auto", tol=1e-10, restart=50, max_iters=None, jacobi=False):
    """Solve a dense system, returning (x, SolveStats).

    ``auto`` runs GMRES and falls back to LU once restart cycles stop making
    progress; ``gmres`` propagates ConvergenceError instead.
    """
    if method not in SOLVE_METHODS:
        raise ValueError(f"method must be one of {SOLVE_METHODS}")
    if method == "direct":
        x = direct_solve(matrix, rhs)
        return x, SolveStats(0, relative_residual(matrix, rhs, x), True, "direct")
    try:
        return gmres_solve(
            matrix,
            rhs,
            tol=tol,
            restart=restart,
            max_iters=max_iters,
            jacobi=jacobi,
            stagnation_cycles=3 if method == "auto" else None,
        )
    except ConvergenceError as err:
        if method == "gmres":
            raise
        x = direct_solve(matrix, rhs)
        return x, SolveStats(err.stats.iterations, relative_residual(matrix, rhs, x), True, "direct")


def solve(
    spec: ProblemSpec,
    J: int,
    *,
    method: str = "auto",
    tol: float = 1e-10,
    restart: int = 50,
    jacobi: bool = False,
    boundary_stencil: str = "auto",
    rhs: str | None = None,
) -> SolutionProfile:
    """Mean exit time or escape probability on the nodes of a 2J-interval grid."""
    grid = build_grid(J)
    system = build_system(spec, grid, rhs=rhs, boundary_stencil=boundary_stencil)
    v, stats = solve_linear(system.matrix, system.rhs, method=method, tol=tol, restart=restart, jacobi=jacobi)
    values = np.empty(2 * grid.J + 1)
    values[1:-1] = v
    if spec.kind is ProblemKind.ESCAPE_RIGHT and rhs is None:
        values[0], values[-1] = 0.0, 1.0
        meta = {"exterior": "P = 1 on [b, inf), P = 0 on (-inf, -b]"}
    else:
        values[0] = values[-1] = 0.0
        meta = {"exterior": "u = 0 outside (-b, b)"}
    return SolutionProfile(spec.b * grid.nodes, values, stats, spec, grid.J, meta)


def _met_prefactor(alpha: float) -> float:
    return math.sqrt(math.pi) / (2.0**alpha * gamma_real(1.0 + alpha / 2.0) * gamma_real((1.0 + alpha) / 2.0))


def analytic_met_symmetric(alpha: float, x, b: float = 1.0, eps: float = 1.0):
    """Mean exit time from (-b, b) for beta = 0, d = 0, f = 0.

    The unit-interval formula scaled by b^alpha / eps.
    """
    _check_alpha(alpha)
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > b):
        raise ValueError("|x| must not exceed b")
    out = b**alpha / eps * _met_prefactor(alpha) * np.maximum(1.0 - (xs / b) ** 2, 0.0) ** (alpha / 2.0)
    return float(out) if out.ndim == 0 else out


def _half_beta_integral(z: float, a: float) -> float:
    # int_0^z (t (1-t))^(a-1) dt for z <= 1/2; t = u^(1/a) removes the t = 0 singularity
    upper = z**a
    val, _ = integrate.quad(
        lambda u: (1.0 - u ** (1.0 / a)) ** (a - 1.0), 0.0, upper, epsabs=1e-14, epsrel=1e-13, limit=200
    )
    return val / a


def analytic_escape_symmetric(alpha: float, x, b: float = 1.0):
    """Probability of first landing in [b, inf) from x, for beta = 0, d = 0, f = 0."""
    _check_alpha(alpha)
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > b):
        raise ValueError("|x| must not exceed b")
    a = alpha / 2.0
    norm = gamma_real(alpha) / gamma_real(a) ** 2

    def one(xv: float) -> float:
        z = (xv + b) / (2.0 * b)
        if z <= 0.0:
            return 0.0
        if z >= 1.0:
            return 1.0
        if z <= 0.5:
            return norm * _half_beta_integral(z, a)
        return 1.0 - norm * _half_beta_integral(1.0 - z, a)

    out = np.vectorize(one, otypes=[float])(xs)
    return float(out) if out.ndim == 0 else out


def symmetry_check(spec: ProblemSpec, J: int, **solve_kw) -> float:
    """max_j |u_{-beta}(-x_j) - u_beta(x_j)| over interior nodes (odd drift, MET)."""
    if not spec.drift.is_odd:
        raise ValueError("symmetry check needs an odd drift")
    if spec.kind is not ProblemKind.MET:
        raise ValueError("symmetry check is defined for the mean exit time")
    u = solve(spec, J, **solve_kw).interior_values
    u_ref = solve(spec.with_beta(-spec.beta), J, **solve_kw).interior_values
    return float(np.max(np.abs(u_ref[::-1] - u)))
