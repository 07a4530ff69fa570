"""Stable-law constants and scalar coefficient functions.

Everything here is a pure function of its arguments. The two special
functions (real Gamma and real Riemann zeta) are implemented locally so the
numerical core has no dependency beyond numpy/scipy quadrature.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

__all__ = [
    "ALPHA_ONE_TOL",
    "StableParams",
    "LevyCoefficients",
    "c_alpha",
    "jump_coefficients",
    "alpha_one_constant",
    "effective_drift",
    "boundary_drift_g",
    "zeta_real",
    "gamma_real",
    "char_fn",
]

# alpha within this distance of 1 takes the alpha == 1 branch
ALPHA_ONE_TOL = 1e-12


def _is_alpha_one(alpha: float) -> bool:
    return abs(alpha - 1.0) <= ALPHA_ONE_TOL


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 2.0) or math.isnan(alpha):
        raise ValueError(f"alpha must lie in (0, 2), got {alpha!r}")


@dataclass(frozen=True)
class StableParams:
    """Parameters of S_alpha(sigma, beta, mu)."""

    alpha: float
    beta: float = 0.0
    sigma: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not (-1.0 <= self.beta <= 1.0):
            raise ValueError(f"beta must lie in [-1, 1], got {self.beta!r}")
        if not self.sigma >= 0.0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma!r}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu!r}")

    def reflected(self) -> StableParams:
        """Same law with the skewness sign flipped."""
        return StableParams(self.alpha, -self.beta, self.sigma, self.mu)


@dataclass(frozen=True)
class LevyCoefficients:
    c_alpha: float
    c1: float  # right-jump density coefficient
    c2: float  # left-jump density coefficient
    k_ab: float  # compensator drift


# ---------------------------------------------------------------------------
# special functions

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_real(x: float) -> float:
    """Gamma function for real x > 0.

    Lanczos approximation on [1, inf); smaller arguments are shifted up with
    Gamma(x) = Gamma(x + 1) / x.
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"gamma_real requires x > 0, got {x!r}")
    scale = 1.0
    while x < 1.0:
        scale *= x
        x += 1.0
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc / scale


_ETA_TERMS = 64


def zeta_real(x: float) -> float:
    """Riemann zeta for real x < 1 (also usable on (1, inf)).

    Sums the Dirichlet eta series with the Euler transform
    eta(s) = sum_n 2^-(n+1) sum_k (-1)^k C(n, k) (k+1)^-s and converts with
    zeta(s) = eta(s) / (1 - 2^(1-s)).
    """
    s = float(x)
    if s == 1.0:
        raise ValueError("zeta has a pole at x = 1")
    powers = [(k + 1.0) ** (-s) for k in range(_ETA_TERMS)]
    eta = 0.0
    for n in range(_ETA_TERMS):
        diff = 0.0
        for k in range(n + 1):
            term = math.comb(n, k) * powers[k]
            diff += -term if k & 1 else term
        eta += diff / 2.0 ** (n + 1)
    return eta / (1.0 - 2.0 ** (1.0 - s))


# ---------------------------------------------------------------------------
# stable-law constants


def c_alpha(alpha: float) -> float:
    """Normalising constant of the alpha-stable jump measure."""
    _check_alpha(alpha)
    if _is_alpha_one(alpha):
        return 2.0 / math.pi
    return alpha * (1.0 - alpha) / (gamma_real(2.0 - alpha) * math.cos(math.pi * alpha / 2.0))


@lru_cache(maxsize=1)
def alpha_one_constant() -> float:
    """Q = int_1^inf sin(x)/x^2 dx + int_0^1 (sin(x) - x)/x^2 dx.

    The tail is integrated by parts, int_1^inf sin(x)/x^2 dx =
    sin(1) + int_1^inf cos(x)/x dx, and the remaining oscillatory integral is
    done adaptively on [1, 20 pi] and with QAWF (Fourier-weighted) beyond.
    """
    split = 20.0 * math.pi
    mid, _ = integrate.quad(lambda x: math.cos(x) / x, 1.0, split, limit=400, epsabs=1e-13, epsrel=1e-13)
    far, _ = integrate.quad(lambda x: 1.0 / x, split, math.inf, weight="cos", wvar=1.0, epsabs=1e-13)
    tail = math.sin(1.0) + mid + far

    def near(x: float) -> float:
        if x < 1e-4:
            # series of (sin x - x)/x^2 avoids cancellation
            return -x / 6.0 + x**3 / 120.0
        return (math.sin(x) - x) / (x * x)

    head, _ = integrate.quad(near, 0.0, 1.0, epsabs=1e-14, epsrel=1e-14)
    return tail + head


def jump_coefficients(params: StableParams) -> LevyCoefficients:
    """Jump-measure coefficients C1, C2 and the compensator drift K."""
    ca = c_alpha(params.alpha)
    c1 = ca * (1.0 + params.beta) / 2.0
    c2 = ca * (1.0 - params.beta) / 2.0
    if _is_alpha_one(params.alpha):
        k_ab = alpha_one_constant() * (c2 - c1)
    else:
        k_ab = (c1 - c2) / (1.0 - params.alpha)
    return LevyCoefficients(c_alpha=ca, c1=c1, c2=c2, k_ab=k_ab)


def effective_drift(x, drift, params: StableParams, eps: float, b: float):
    """Drift c(x) after moving the small-jump cutoff from 1 to b.

    ``drift`` is any callable f; ``x`` may be a scalar or an array.
    """
    if not b > 0.0:
        raise ValueError(f"b must be positive, got {b!r}")
    co = jump_coefficients(params)
    if _is_alpha_one(params.alpha):
        shift = math.log(b)
    else:
        shift = (b ** (1.0 - params.alpha) - 1.0) / (1.0 - params.alpha)
    return drift(x) + eps * co.k_ab + eps * (co.c1 - co.c2) * shift


def boundary_drift_g(s, alpha: float):
    """g(s) = (1 - (1-|s|)^(1-alpha)) / (1-alpha), or -ln(1-|s|) at alpha = 1."""
    a = np.abs(np.asarray(s, dtype=float))
    if np.any(a >= 1.0):
        raise ValueError("boundary_drift_g requires |s| < 1")
    if _is_alpha_one(alpha):
        out = -np.log1p(-a)
    else:
        out = -np.expm1((1.0 - alpha) * np.log1p(-a)) / (1.0 - alpha)
    return float(out) if out.ndim == 0 else out


def char_fn(lam: float, t: float, params: StableParams) -> complex:
    """E[exp(i lam L_t)] for the stable motion with the given parameters."""
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    a, beta, sig, mu = params.alpha, params.beta, params.sigma, params.mu
    if lam == 0.0:
        return complex(1.0, 0.0)
    sgn = math.copysign(1.0, lam)
    absl = abs(lam)
    if _is_alpha_one(a):
        expo = -sig * absl * t * complex(1.0, beta * (2.0 / math.pi) * sgn * math.log(absl))
    else:
        expo = -((sig * absl) ** a) * t * complex(1.0, -beta * sgn * math.tan(math.pi * a / 2.0))
    return cmath.exp(expo + 1j * mu * lam * t)
