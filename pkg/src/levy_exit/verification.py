"""Grid-convergence studies: manufactured solution and self-convergence."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .discretization import ProblemSpec
from .exit_solver import solve

__all__ = ["ConvergenceReport", "observed_order", "manufactured_study", "self_convergence_study"]


@dataclass
class ConvergenceReport:
    J_list: list
    probe_x: float
    errors: list
    observed_orders: list
    reference: str  # "analytic", "manufactured" or "self-J"
    alpha: float | None = None
    beta: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def observed_order(errors) -> list:
    """log2(e_i / e_{i+1}) for errors at successively doubled resolutions."""
    errs = [float(e) for e in errors]
    if len(errs) < 2:
        raise ValueError("need at least two errors")
    if any(not e > 0 for e in errs):
        raise ValueError("errors must be positive")
    return [math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]


def _check_probe(J_list, probe_x):
    for J in J_list:
        if abs(probe_x * J - round(probe_x * J)) > 1e-9:
            raise ValueError(f"probe_x = {probe_x} is not a node for J = {J}")


def _probe_value(spec, J, probe_x, solve_kw):
    prof = solve(spec, J, **solve_kw)
    return prof.value_at(probe_x * spec.b)


def _map(fn, args, jobs):
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, *zip(*args)))
    return [fn(*a) for a in args]


def manufactured_study(
    alpha: float,
    beta: float,
    J_list=(20, 40, 80, 160),
    probe_x: float = -0.5,
    *,
    boundary_stencil: str = "central",
    jobs: int = 1,
    **solve_kw,
) -> ConvergenceReport:
    """Errors against u = (1 - x^2)_+ with the matching right-hand side.

    Uses d = 0, eps = 1, b = 1, f = 0. The exact solution is continuous at
    the boundary, so central boundary stencils are the default here.
    """
    _check_probe(J_list, probe_x)
    spec = ProblemSpec.make(alpha, beta, d=0.0, eps=1.0, b=1.0)
    kw = dict(solve_kw, rhs="manufactured", boundary_stencil=boundary_stencil)
    values = _map(_probe_value, [(spec, J, probe_x, kw) for J in J_list], jobs)
    exact = 1.0 - probe_x**2
    errors = [abs(v - exact) for v in values]
    return ConvergenceReport(list(J_list), probe_x, errors, observed_order(errors), "manufactured", alpha, beta)


def self_convergence_study(
    spec: ProblemSpec,
    J_list=(10, 20, 40, 80, 160),
    J_ref: int = 1280,
    probe_x: float = -0.5,
    *,
    jobs: int = 1,
    **solve_kw,
) -> ConvergenceReport:
    """Errors against the solution at resolution J_ref (probe_x in units of b)."""
    if J_ref < 8 * max(J_list):
        raise ValueError("J_ref must be at least 8 * max(J_list)")
    _check_probe(list(J_list) + [J_ref], probe_x)
    args = [(spec, J, probe_x, solve_kw) for J in list(J_list) + [J_ref]]
    values = _map(_probe_value, args, jobs)
    ref = values[-1]
    errors = [abs(v - ref) for v in values[:-1]]
    return ConvergenceReport(list(J_list), probe_x, errors, observed_order(errors), "self-J", spec.alpha, spec.beta)


def analytic_study(spec: ProblemSpec, J_list, exact_fn, probe_x: float = -0.5, **solve_kw) -> ConvergenceReport:
    """Errors against a closed-form solution exact_fn(x) at probe_x (units of b)."""
    _check_probe(J_list, probe_x)
    exact = float(exact_fn(probe_x * spec.b))
    errors = [abs(_probe_value(spec, J, probe_x, solve_kw) - exact) for J in J_list]
    return ConvergenceReport(list(J_list), probe_x, errors, observed_order(errors), "analytic", spec.alpha, spec.beta)


def max_node_error(values: np.ndarray, exact: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(values) - np.asarray(exact))))
