"""Uniform-grid discretization of the nonlocal exit-problem operator.

The unknown v(s) = u(b s) lives on [-1, 1] with nodes s_j = j / J. Each
interior row combines a corrected second difference, a first-derivative
term, a killing term from jumps that leave the domain, and three trapezoid
sums over the jump kernel with the singular node punched out.

Rows with s_j >= 0 are built directly. Rows with s_j < 0 are the rows of the
mirror-image problem (beta -> -beta, c(x) -> -c(-x)) read backwards, which is
the same set of equations and makes the beta-reflection symmetry of the
matrix hold bit for bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .levy_coefficients import (
    StableParams,
    _is_alpha_one,
    c_alpha,
    effective_drift,
    jump_coefficients,
    zeta_real,
)

__all__ = [
    "DriftSpec",
    "ProblemKind",
    "ProblemSpec",
    "Grid",
    "DenseSystem",
    "build_grid",
    "correction_coefficient",
    "assemble_operator",
    "assemble_full_operator",
    "met_rhs",
    "escape_rhs",
    "exterior_lift",
    "manufactured_rhs",
    "manufactured_jump_term",
    "build_system",
    "BOUNDARY_STENCILS",
]


@dataclass(frozen=True)
class DriftSpec:
    """Deterministic drift f(x).

    ``linear`` holds one slope k (f(x) = k x); ``polynomial`` holds
    coefficients in ascending powers.
    """

    kind: str = "zero"
    coefficients: tuple = ()

    def __post_init__(self):
        if self.kind not in ("zero", "linear", "polynomial"):
            raise ValueError(f"unknown drift kind {self.kind!r}")
        coeffs = tuple(float(c) for c in self.coefficients)
        if self.kind == "linear" and len(coeffs) != 1:
            raise ValueError("linear drift takes exactly one slope")
        if self.kind == "zero" and coeffs:
            raise ValueError("zero drift takes no coefficients")
        if not all(math.isfinite(c) for c in coeffs):
            raise ValueError("drift coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def parse(cls, text: str) -> DriftSpec:
        """Parse ``zero``, ``linear:<k>`` or ``poly:<c0,c1,...>``."""
        text = text.strip()
        if text == "zero":
            return cls()
        head, _, tail = text.partition(":")
        if head == "linear" and tail:
            return cls("linear", (float(tail),))
        if head in ("poly", "polynomial") and tail:
            return cls("polynomial", tuple(float(c) for c in tail.split(",")))
        raise ValueError(f"cannot parse drift {text!r}")

    def __str__(self) -> str:
        if self.kind == "zero":
            return "zero"
        if self.kind == "linear":
            return f"linear:{self.coefficients[0]:g}"
        return "poly:" + ",".join(f"{c:g}" for c in self.coefficients)

    @property
    def power_coefficients(self) -> tuple:
        if self.kind == "zero":
            return ()
        if self.kind == "linear":
            return (0.0, self.coefficients[0])
        return self.coefficients

    @property
    def is_odd(self) -> bool:
        return all(c == 0.0 for c in self.power_coefficients[0::2])

    def __call__(self, x):
        # Horner; sign-symmetric in x for odd polynomials
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for c in reversed(self.power_coefficients):
            acc = acc * x + c
        return float(acc) if acc.ndim == 0 else acc

    def derivative(self, x):
        coeffs = self.power_coefficients
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for p in range(len(coeffs) - 1, 0, -1):
            acc = acc * x + p * coeffs[p]
        return float(acc) if acc.ndim == 0 else acc


class ProblemKind(str, enum.Enum):
    MET = "met"
    ESCAPE_RIGHT = "escape_right"


@dataclass(frozen=True)
class ProblemSpec:
    """Exit problem for dX = f(X) dt + dL on D = (-b, b).

    L has Gaussian intensity ``d`` and stable jump intensity ``eps``; for
    ESCAPE_RIGHT the target set is [b, inf).
    """

    stable: StableParams
    d: float = 0.0
    eps: float = 1.0
    b: float = 1.0
    drift: DriftSpec = field(default_factory=DriftSpec)
    kind: ProblemKind = ProblemKind.MET

    def __post_init__(self):
        if self.stable.sigma != 1.0 or self.stable.mu != 0.0:
            raise ValueError("exit problems use sigma = 1, mu = 0")
        if not (self.d >= 0.0 and math.isfinite(self.d)):
            raise ValueError(f"d must be a finite nonnegative number, got {self.d!r}")
        if not (self.eps >= 0.0 and math.isfinite(self.eps)):
            raise ValueError(f"eps must be a finite nonnegative number, got {self.eps!r}")
        if not (self.b > 0.0 and math.isfinite(self.b)):
            raise ValueError(f"b must be positive, got {self.b!r}")
        if self.d + self.eps <= 0.0:
            raise ValueError("d + eps must be positive")
        object.__setattr__(self, "kind", ProblemKind(self.kind))

    @classmethod
    def make(cls, alpha, beta=0.0, *, d=0.0, eps=1.0, b=1.0, drift=None, kind="met") -> ProblemSpec:
        if isinstance(drift, str):
            drift = DriftSpec.parse(drift)
        return cls(StableParams(alpha, beta), d=d, eps=eps, b=b, drift=drift or DriftSpec(), kind=kind)

    @property
    def alpha(self) -> float:
        return self.stable.alpha

    @property
    def beta(self) -> float:
        return self.stable.beta

    def with_beta(self, beta: float) -> ProblemSpec:
        return ProblemSpec(StableParams(self.alpha, beta), self.d, self.eps, self.b, self.drift, self.kind)

    def effective_drift(self, x):
        return effective_drift(x, self.drift, self.stable, self.eps, self.b)


@dataclass(frozen=True)
class Grid:
    J: int
    h: float
    nodes: np.ndarray = field(repr=False)

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]

    @property
    def n_unknowns(self) -> int:
        return 2 * self.J - 1

    def index_of(self, s: float) -> int:
        """Interior unknown index of the node at s (which must be a node)."""
        j = round(s * self.J)
        if abs(j - s * self.J) > 1e-9 or abs(j) >= self.J:
            raise ValueError(f"s = {s!r} is not an interior node for J = {self.J}")
        return j + self.J - 1


@dataclass
class DenseSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    J: int


def build_grid(J: int) -> Grid:
    if int(J) != J or J < 2:
        raise ValueError(f"J must be an integer >= 2, got {J!r}")
    J = int(J)
    nodes = np.arange(-J, J + 1) / J
    return Grid(J=J, h=1.0 / J, nodes=nodes)


def correction_coefficient(spec: ProblemSpec, grid: Grid) -> float:
    """Diffusion coefficient of the corrected second difference.

    The Gaussian part d / (2 b^2) plus the leading zeta(alpha - 1) h^(2-alpha)
    error term of the punched-hole trapezoid rule.
    """
    a = spec.alpha
    ch = spec.d / (2.0 * spec.b**2)
    if spec.eps > 0.0:
        zeta = zeta_real(0.0 if _is_alpha_one(a) else a - 1.0)
        ch -= spec.eps * spec.b ** (-a) * c_alpha(a) * zeta * grid.h ** (2.0 - a) / 2.0
    return ch


def _gap_power(gap, alpha):
    return gap ** (-alpha)


def _g_of_gap(gap: float, alpha: float) -> float:
    # g as a function of 1 - |s|
    if _is_alpha_one(alpha):
        return -math.log(gap)
    return (1.0 - gap ** (1.0 - alpha)) / (1.0 - alpha)


BOUNDARY_STENCILS = ("auto", "central", "one_sided")


def _use_one_sided(spec: ProblemSpec, boundary_stencil: str) -> bool:
    """Whether rows +-(J-1) use two-point one-sided first differences.

    "auto" switches them on for alpha <= 1 with a jump part, where the exit
    solutions can jump at the boundary.
    """
    if boundary_stencil not in BOUNDARY_STENCILS:
        raise ValueError(f"boundary_stencil must be one of {BOUNDARY_STENCILS}, got {boundary_stencil!r}")
    if boundary_stencil == "auto":
        return spec.eps > 0.0 and spec.alpha <= 1.0
    return boundary_stencil == "one_sided"


class _RowBuilder:
    """Builds the row for a node at s_i >= 0 over the full node set."""

    def __init__(self, spec: ProblemSpec, grid: Grid, boundary_stencil: str = "auto"):
        J = grid.J
        self.J = J
        self.h = grid.h
        self.alpha = spec.alpha
        self.scale = spec.eps * spec.b ** (-spec.alpha)
        self.ch = correction_coefficient(spec, grid)
        r = np.arange(1, 2 * J + 1) / J
        self.pw1 = r ** (-1.0 - spec.alpha)
        self.pw0 = r ** (-spec.alpha)
        self.one_sided = _use_one_sided(spec, boundary_stencil)

    def row(self, i: int, cr: float, cl: float, drift_coef: float) -> np.ndarray:
        J, h, A = self.J, self.h, self.scale
        n_full = 2 * J + 1
        c = i + J
        right = np.zeros(n_full)
        left = np.zeros(n_full)
        far = np.zeros(n_full)

        # int_0^{1-s} G_1: k = i+1..J, top term halved
        n = J - i
        w1 = np.ones(n)
        w1[-1] = 0.5
        t1 = A * cr * h * w1 * self.pw1[:n]
        right[c + 1 : c + n + 1] = t1
        s1 = t1.sum()
        d1 = A * cr * h * (w1 * self.pw0[:n]).sum()

        # int_0^1 G_2: k = i-1 down to i-J, the y = 1 term halved
        w3 = np.ones(J)
        w3[-1] = 0.5
        t3 = A * cl * h * w3 * self.pw1[:J]
        left[c - 1 :: -1][:J] = t3
        s3 = t3.sum()
        d3 = A * cl * h * (w3 * self.pw0[:J]).sum()

        # int_1^{1+s} (v(s-y) - v(s)) / y^{1+alpha}: y = J h .. (J+i) h, both ends halved
        s2 = 0.0
        if i >= 1:
            m2 = np.arange(J, J + i + 1)
            w2 = np.ones(i + 1)
            w2[0] = w2[-1] = 0.5
            t2 = A * cl * h * w2 * self.pw1[m2 - 1]
            far[c - m2] = t2
            s2 = t2.sum()

        gap_r = (J - i) / J
        gap_l = (J + i) / J
        kill = A / self.alpha * (cr * _gap_power(gap_r, self.alpha) + cl * _gap_power(gap_l, self.alpha))

        dcoef = (drift_coef - A * cr * _g_of_gap(gap_r, self.alpha)) + (d3 - d1)

        out = (right + left) + far
        out[c] += -2.0 * self.ch / h**2 - kill - (s1 + s3) - s2
        out[c - 1] += self.ch / h**2
        out[c + 1] += self.ch / h**2
        if self.one_sided and i == J - 1:
            out[c] += dcoef * (1.0 / h)
            out[c - 1] += dcoef * (-1.0 / h)
        else:
            out[c + 1] += dcoef * (1.0 / (2.0 * h))
            out[c - 1] += dcoef * (-1.0 / (2.0 * h))
        return out


def assemble_full_operator(spec: ProblemSpec, grid: Grid, boundary_stencil: str = "auto") -> np.ndarray:
    """(2J-1) x (2J+1) operator acting on all nodes, exterior ones included."""
    J = grid.J
    co = jump_coefficients(spec.stable)
    rb = _RowBuilder(spec, grid, boundary_stencil)
    cdrift = np.asarray(spec.effective_drift(spec.b * grid.nodes), dtype=float) / spec.b
    cdrift = np.broadcast_to(cdrift, grid.nodes.shape)
    full = np.empty((2 * J - 1, 2 * J + 1))
    for j in range(0, J):
        full[j + J - 1] = rb.row(j, co.c1, co.c2, cdrift[j + J])
    for j in range(1, J):
        # mirror problem at s = +j h, read backwards
        full[-j + J - 1] = rb.row(j, co.c2, co.c1, -cdrift[-j + J])[::-1]
    return full


def assemble_operator(spec: ProblemSpec, grid: Grid, boundary_stencil: str = "auto") -> np.ndarray:
    """Dense (2J-1) x (2J-1) matrix on the interior unknowns V_{-J+1..J-1}."""
    return np.ascontiguousarray(assemble_full_operator(spec, grid, boundary_stencil)[:, 1:-1])


def met_rhs(grid: Grid) -> np.ndarray:
    return -np.ones(grid.n_unknowns)


def escape_rhs(spec: ProblemSpec, grid: Grid) -> np.ndarray:
    """Jump mass landing in [b, inf), moved to the right-hand side."""
    if spec.kind is not ProblemKind.ESCAPE_RIGHT:
        raise ValueError("escape_rhs needs an ESCAPE_RIGHT problem")
    co = jump_coefficients(spec.stable)
    a = spec.alpha
    gap = (grid.J - np.arange(-grid.J + 1, grid.J)) / grid.J
    return -spec.eps * spec.b ** (-a) * (co.c1 / a) * gap ** (-a)


def exterior_lift(spec: ProblemSpec, grid: Grid, full: np.ndarray | None = None) -> np.ndarray:
    """Right-hand-side contribution of the exterior node values V_{-J}, V_J.

    Zero for the mean exit time. For escape to the right V_J = 1, which the
    stencils and the top trapezoid term touching s = 1 pick up.
    """
    if spec.kind is ProblemKind.MET:
        return np.zeros(grid.n_unknowns)
    if full is None:
        full = assemble_full_operator(spec, grid)
    return -full[:, -1] * 1.0


def manufactured_jump_term(x, params: StableParams):
    """Jump integral (cutoff 1) of u = (1 - x^2)_+ at |x| < 1."""
    co = jump_coefficients(params)
    a = params.alpha
    x = np.asarray(x, dtype=float)
    xm, xp = 1.0 - x, 1.0 + x
    if _is_alpha_one(a):
        return -2.0 * (co.c1 + co.c2) - 2.0 * x * (co.c1 * np.log(xm) - co.c2 * np.log(xp))
    right = -(xm ** (2 - a)) / (2 - a) - 2 * x * (xm ** (1 - a) - 1) / (1 - a) - xp * xm ** (1 - a) / a
    left = -(xp ** (2 - a)) / (2 - a) - 2 * x * (1 - xp ** (1 - a)) / (1 - a) - xm * xp ** (1 - a) / a
    return co.c1 * right + co.c2 * left


def manufactured_rhs(spec: ProblemSpec, grid: Grid) -> np.ndarray:
    """Generator applied to (1 - x^2)_+ at the interior nodes (b = 1 only).

    Includes the drift term c(x) u'(x) = -2 x c(x), which carries the
    compensator constant, so that (1 - x^2)_+ solves the discrete problem
    up to truncation error.
    """
    if spec.b != 1.0 or spec.kind is not ProblemKind.MET:
        raise ValueError("manufactured solution is defined for b = 1 MET problems")
    x = grid.interior
    local = spec.d / 2.0 * (-2.0) + spec.effective_drift(x) * (-2.0 * x)
    return local + spec.eps * manufactured_jump_term(x, spec.stable)


def build_system(
    spec: ProblemSpec, grid: Grid, rhs: str | None = None, boundary_stencil: str = "auto"
) -> DenseSystem:
    """Assemble matrix and right-hand side.

    ``rhs`` is ``None`` (pick by problem kind) or ``"manufactured"``.
    """
    full = assemble_full_operator(spec, grid, boundary_stencil)
    matrix = np.ascontiguousarray(full[:, 1:-1])
    if rhs == "manufactured":
        b = manufactured_rhs(spec, grid)
    elif rhs is not None:
        raise ValueError(f"unknown rhs {rhs!r}")
    elif spec.kind is ProblemKind.MET:
        b = met_rhs(grid)
    else:
        b = escape_rhs(spec, grid) + exterior_lift(spec, grid, full)
    return DenseSystem(matrix=matrix, rhs=b, J=grid.J)
