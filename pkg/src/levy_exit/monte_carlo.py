"""Monte Carlo exit-time estimates by direct simulation of the SDE.

Paths are simulated in fixed-size blocks. Block ``i`` draws from a Philox
stream keyed by ``(seed, i)``, so results do not depend on how blocks are
spread over worker processes.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .discretization import ProblemSpec
from .levy_coefficients import StableParams, _is_alpha_one

__all__ = [
    "McConfig",
    "McEstimate",
    "block_rng",
    "sample_stable",
    "increment",
    "estimate_exit",
]


@dataclass(frozen=True)
class McConfig:
    n_paths: int = 10_000
    dt: float = 1e-3
    seed: int = 0
    t_max: float = 1e3
    block_size: int = 4096
    # Brownian-bridge crossing test for the Gaussian part of each step
    bridge: bool = True

    def __post_init__(self):
        if self.n_paths < 1:
            raise ValueError("n_paths must be >= 1")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_max >= self.dt:
            raise ValueError("t_max must be at least dt")
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n_effective: int
    censored_fraction: float
    warning: bool = False


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def sample_stable(params: StableParams, rng: np.random.Generator, size=None):
    """Draws from S_alpha(sigma, beta, mu) (Chambers-Mallows-Stuck)."""
    a, beta = params.alpha, params.beta
    v = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size)
    w = rng.standard_exponential(size)
    if _is_alpha_one(a):
        half_pi_bv = math.pi / 2.0 + beta * v
        x = (2.0 / math.pi) * (half_pi_bv * np.tan(v) - beta * np.log((math.pi / 2.0) * w * np.cos(v) / half_pi_bv))
        shift = (2.0 / math.pi) * beta * params.sigma * math.log(params.sigma) if params.sigma > 0 else 0.0
        return params.sigma * x + shift + params.mu
    t = beta * math.tan(math.pi * a / 2.0)
    b_ab = math.atan(t) / a
    s_ab = (1.0 + t * t) ** (1.0 / (2.0 * a))
    av = a * (v + b_ab)
    x = s_ab * np.sin(av) / np.cos(v) ** (1.0 / a) * (np.cos(v - av) / w) ** ((1.0 - a) / a)
    return params.sigma * x + params.mu


def increment(spec: ProblemSpec, dt: float, rng: np.random.Generator, size=None):
    """Noise increment over one step: Gaussian part plus stable jump part."""
    gauss = math.sqrt(spec.d * dt) * rng.standard_normal(size) if spec.d > 0 else np.zeros(size or ())
    return gauss + _jump_increment(spec, dt, rng, size)


def _jump_increment(spec: ProblemSpec, dt: float, rng, size):
    if spec.eps == 0.0:
        return np.zeros(size or ())
    xi = sample_stable(StableParams(spec.alpha, spec.beta), rng, size)
    c = spec.eps * dt
    if _is_alpha_one(spec.alpha):
        # c * xi alone carries an extra i lam c beta (2/pi) ln c in its exponent
        return c * xi + c * spec.beta * (2.0 / math.pi) * math.log(c)
    return c ** (1.0 / spec.alpha) * xi


def _simulate_block(spec: ProblemSpec, x0: float, cfg: McConfig, block: int, n: int):
    rng = block_rng(cfg.seed, block)
    b, dt = spec.b, cfg.dt
    max_steps = int(math.floor(cfg.t_max / dt + 1e-9))
    steps = np.full(n, max_steps, dtype=np.int64)
    right = np.zeros(n, dtype=bool)
    censored = np.ones(n, dtype=bool)
    active = np.arange(n)
    x = np.full(n, float(x0))
    sd = math.sqrt(spec.d * dt)
    use_bridge = cfg.bridge and spec.d > 0
    for step in range(1, max_steps + 1):
        m = active.size
        if m == 0:
            break
        y = x + spec.drift(x) * dt
        if spec.d > 0:
            y = y + sd * rng.standard_normal(m)
        hit_up = y >= b
        hit_dn = y <= -b
        if use_bridge:
            # P(Brownian bridge x -> y crosses a level) = exp(-2 gap_x gap_y / (d dt))
            u = rng.uniform(size=m)
            inside = ~(hit_up | hit_dn)
            p_up = np.exp(-2.0 * (b - x) * (b - y) / (spec.d * dt))
            p_dn = np.exp(-2.0 * (x + b) * (y + b) / (spec.d * dt))
            cross_up = inside & (u < p_up)
            cross_dn = inside & ~cross_up & (u < p_up + p_dn)
            hit_up |= cross_up
            hit_dn |= cross_dn
        xn = y + _jump_increment(spec, dt, rng, m)
        up = hit_up | (~hit_dn & (xn >= b))
        out = up | hit_dn | (xn <= -b)
        if out.any():
            done = active[out]
            steps[done] = step
            right[done] = up[out]
            censored[done] = False
            keep = ~out
            active = active[keep]
            x = xn[keep]
        else:
            x = xn
    return steps, right, censored


def _summarise(samples: np.ndarray, censored: np.ndarray) -> McEstimate:
    n = samples.size
    frac = float(censored.mean())
    stderr = float(samples.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return McEstimate(float(samples.mean()), stderr, n, frac, frac > 0.01)


def estimate_exit(spec: ProblemSpec, x0: float, cfg: McConfig, jobs: int = 1):
    """Euler-Maruyama estimates of E[tau] and P(exit to [b, inf)) from x0.

    tau is the step count at the first step with |X| >= b, times dt; paths
    still inside at t_max are censored at t_max.
    """
    if not abs(x0) < spec.b:
        raise ValueError("x0 must lie inside (-b, b)")
    sizes = [min(cfg.block_size, cfg.n_paths - start) for start in range(0, cfg.n_paths, cfg.block_size)]
    args = [(spec, x0, cfg, i, n) for i, n in enumerate(sizes)]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_simulate_block, *zip(*args)))
    else:
        results = [_simulate_block(*a) for a in args]
    steps = np.concatenate([r[0] for r in results])
    right = np.concatenate([r[1] for r in results])
    censored = np.concatenate([r[2] for r in results])
    met = _summarise(steps * cfg.dt, censored)
    esc = _summarise(right.astype(float), censored)
    if met.warning:
        warnings.warn(f"{met.censored_fraction:.1%} of paths reached t_max = {cfg.t_max}", RuntimeWarning, stacklevel=2)
    return met, esc
