"""Dense linear solvers: restarted GMRES and a direct LU oracle."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "SolveStats",
    "ConvergenceError",
    "SingularMatrixError",
    "gmres_solve",
    "direct_solve",
    "relative_residual",
]


@dataclass(frozen=True)
class SolveStats:
    iterations: int
    final_residual: float  # relative 2-norm residual
    converged: bool
    method: str  # "gmres" or "direct"


class ConvergenceError(RuntimeError):
    """GMRES did not reach the tolerance; carries the best iterate."""

    def __init__(self, message: str, x: np.ndarray, stats: SolveStats):
        super().__init__(message)
        self.x = x
        self.stats = stats


class SingularMatrixError(np.linalg.LinAlgError):
    pass


def relative_residual(matrix: np.ndarray, rhs: np.ndarray, x: np.ndarray) -> float:
    bnorm = np.linalg.norm(rhs)
    r = np.linalg.norm(rhs - matrix @ x)
    return float(r / bnorm) if bnorm > 0 else float(r)


def _check_system(matrix, rhs):
    matrix = np.asarray(matrix, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"matrix must be square, got shape {matrix.shape}")
    if rhs.shape != (matrix.shape[0],):
        raise ValueError(f"rhs shape {rhs.shape} does not match matrix {matrix.shape}")
    return matrix, rhs


def gmres_solve(
    matrix,
    rhs,
    tol: float = 1e-10,
    restart: int = 50,
    max_iters: int | None = None,
    x0=None,
    jacobi: bool = False,
    stagnation_cycles: int | None = None,
):
    """Restarted GMRES(m) for a dense system.

    Arnoldi uses classical Gram-Schmidt with one reorthogonalization pass;
    the small least-squares problem is updated with Givens rotations. With
    ``jacobi`` the system is right-preconditioned by the inverse diagonal, so
    the reported residual is still that of the original system.

    Convergence is declared on the true residual ||b - A x|| / ||b||,
    recomputed at the end of each cycle. Raises ConvergenceError after
    ``max_iters`` inner iterations (default 10 n), or earlier if
    ``stagnation_cycles`` consecutive restart cycles each fail to cut the
    residual by at least a factor of 2.
    """
    A, b = _check_system(matrix, rhs)
    if not tol > 0:
        raise ValueError("tol must be positive")
    n = b.shape[0]
    restart = max(1, min(int(restart), n))
    if max_iters is None:
        max_iters = 10 * n
    if jacobi:
        diag = np.diag(A).copy()
        if np.any(diag == 0.0):
            raise ValueError("Jacobi preconditioning needs a zero-free diagonal")
        scale = 1.0 / diag
    else:
        scale = None

    bnorm = np.linalg.norm(b)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    if bnorm == 0.0:
        return np.zeros(n), SolveStats(0, 0.0, True, "gmres")

    total = 0
    r = b - A @ x
    res = np.linalg.norm(r) / bnorm
    best_x, best_res = x.copy(), res
    slow = 0
    V = np.empty((restart + 1, n))
    H = np.zeros((restart + 1, restart))
    cs = np.empty(restart)
    sn = np.empty(restart)

    while res > tol and total < max_iters:
        beta = np.linalg.norm(r)
        V[0] = r / beta
        g = np.zeros(restart + 1)
        g[0] = beta
        H[:] = 0.0
        k = 0
        for k in range(restart):
            z = V[k] * scale if scale is not None else V[k]
            w = A @ z
            # CGS2
            h = V[: k + 1] @ w
            w -= h @ V[: k + 1]
            h2 = V[: k + 1] @ w
            w -= h2 @ V[: k + 1]
            h += h2
            hnext = np.linalg.norm(w)
            H[: k + 1, k] = h
            H[k + 1, k] = hnext
            for i in range(k):
                t = cs[i] * H[i, k] + sn[i] * H[i + 1, k]
                H[i + 1, k] = -sn[i] * H[i, k] + cs[i] * H[i + 1, k]
                H[i, k] = t
            denom = math.hypot(H[k, k], H[k + 1, k])
            cs[k] = H[k, k] / denom
            sn[k] = H[k + 1, k] / denom
            H[k, k] = denom
            H[k + 1, k] = 0.0
            g[k + 1] = -sn[k] * g[k]
            g[k] = cs[k] * g[k]
            total += 1
            breakdown = hnext <= 1e-14 * beta
            if not breakdown:
                V[k + 1] = w / hnext
            if abs(g[k + 1]) / bnorm <= tol or breakdown or total >= max_iters:
                break
        m = k + 1
        y = scipy.linalg.solve_triangular(H[:m, :m], g[:m])
        dx = y @ V[:m]
        if scale is not None:
            dx *= scale
        x = x + dx
        r = b - A @ x
        new_res = np.linalg.norm(r) / bnorm
        slow = slow + 1 if new_res > 0.5 * res else 0
        res = new_res
        if res < best_res:
            best_x, best_res = x.copy(), res
        if stagnation_cycles is not None and slow >= stagnation_cycles and res > tol:
            break

    stats = SolveStats(total, float(best_res), bool(best_res <= tol), "gmres")
    if not stats.converged:
        raise ConvergenceError(
            f"GMRES({restart}) stopped after {total} iterations at relative residual {best_res:.3e} (tol {tol:.1e})",
            best_x,
            stats,
        )
    return best_x, stats


def direct_solve(matrix, rhs) -> np.ndarray:
    """LU with partial pivoting (LAPACK getrf/getrs)."""
    A, b = _check_system(matrix, rhs)
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= np.finfo(float).eps * A.shape[0] * max(np.abs(A).max(), 1e-300):
        raise SingularMatrixError("matrix is numerically singular")
    return scipy.linalg.lu_solve((lu, piv), b)
