"""Acceptance criteria, each at its stated tolerance.

Every test prints exactly one ``PASS``/``FAIL`` line (visible without -s)
and then asserts. Run standalone with ``python tests/test_acceptance.py``.
"""

import sys
import time

import numpy as np
import pytest

from levy_exit.discretization import ProblemSpec
from levy_exit.exit_solver import analytic_escape_symmetric, analytic_met_symmetric, solve, symmetry_check
from levy_exit.levy_coefficients import StableParams, char_fn
from levy_exit.monte_carlo import McConfig, block_rng, estimate_exit, sample_stable
from levy_exit.verification import manufactured_study, self_convergence_study

U0_ALPHA_15 = 0.752252  # closed-form MET at x = 0, alpha = 1.5


@pytest.fixture
def report(capsys):
    def _report(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail

    return _report


def _max_interior_error(prof, exact_fn):
    return float(np.abs(prof.interior_values - exact_fn(prof.interior_x)).max())


def test_criterion_01_manufactured_order(report):
    t0 = time.perf_counter()
    orders = {a: manufactured_study(a, 0.5, (20, 40, 80, 160), -0.5).observed_orders for a in (0.5, 1.0, 1.5)}
    elapsed = time.perf_counter() - t0
    worst = min(min(p) for p in orders.values())
    ok = worst >= 1.7 and elapsed < 30.0
    detail = ", ".join(f"alpha={a}: " + "/".join(f"{p:.2f}" for p in ps) for a, ps in orders.items())
    report(1, ok, f"orders {detail}; min {worst:.3f} >= 1.7; {elapsed:.1f}s < 30s")


def test_criterion_02_closed_form_met(report):
    t0 = time.perf_counter()
    errs = {}
    for alpha in (1.5, 0.5):
        prof = solve(ProblemSpec.make(alpha, 0.0), 320)
        errs[alpha] = _max_interior_error(prof, lambda x, a=alpha: analytic_met_symmetric(a, x))
    elapsed = time.perf_counter() - t0
    ok = errs[1.5] <= 5e-3 and errs[0.5] <= 2e-2 and elapsed < 60.0
    report(
        2,
        ok,
        f"J=320 max error alpha=1.5: {errs[1.5]:.3e} (<= 5e-3), alpha=0.5: {errs[0.5]:.3e} (<= 2e-2); {elapsed:.1f}s",
    )


def test_criterion_03_brownian_limit(report):
    prof = solve(ProblemSpec.make(1.0, d=1.0, eps=0.0), 160)
    err = float(np.abs(prof.values - (1.0 - prof.x_nodes**2)).max())
    report(3, err <= 1e-6, f"eps=0, d=1, J=160 max error {err:.2e} <= 1e-6")


def test_criterion_04_self_convergence(report):
    t0 = time.perf_counter()
    orders = {}
    for alpha in (0.5, 1.0, 1.5):
        rep = self_convergence_study(ProblemSpec.make(alpha, 0.5), (10, 20, 40, 80, 160), 1280, -0.5)
        orders[alpha] = rep.observed_orders
    elapsed = time.perf_counter() - t0
    flat = [p for ps in orders.values() for p in ps]
    ok = all(0.6 <= p <= 1.4 for p in flat) and elapsed < 600.0
    detail = ", ".join(f"alpha={a}: " + "/".join(f"{p:.2f}" for p in ps) for a, ps in orders.items())
    report(4, ok, f"orders {detail} in [0.6, 1.4]; {elapsed:.1f}s < 600s")


def test_criterion_05_symmetry(report):
    worst = 0.0
    for alpha in (0.5, 1.5):
        for beta in (0.5, 1.0):
            for drift in ("linear:-1", "zero"):
                worst = max(worst, symmetry_check(ProblemSpec.make(alpha, beta, drift=drift), 160))
    report(5, worst <= 1e-8, f"max |u_-beta(-x) - u_beta(x)| over 8 cases at J=160: {worst:.2e} <= 1e-8")


def test_criterion_06_monte_carlo(report):
    t0 = time.perf_counter()
    met, _ = estimate_exit(ProblemSpec.make(1.5, 0.0), 0.0, McConfig(n_paths=8000, dt=1e-3, seed=7))
    table_err = abs(met.mean - U0_ALPHA_15)
    starts = np.round(np.arange(-0.8, 0.81, 0.2), 10)
    worst_ratio, worst_case = 0.0, None
    for alpha in (0.5, 1.0, 1.5):
        for beta in (0.5, 1.0):
            spec = ProblemSpec.make(alpha, beta)
            prof = solve(spec, 320)
            for x0 in starts:
                est, _ = estimate_exit(spec, float(x0), McConfig(n_paths=10_000, dt=1e-3, seed=7))
                ratio = abs(est.mean - prof.value_at(float(x0))) / max(3.0 * est.stderr, 0.05)
                if ratio > worst_ratio:
                    worst_ratio, worst_case = ratio, (alpha, beta, float(x0))
    elapsed = time.perf_counter() - t0
    ok = table_err <= 0.02 and worst_ratio <= 1.0 and elapsed < 900.0
    report(
        6,
        ok,
        f"alpha=1.5 x0=0 MC mean {met.mean:.5f}, |error| {table_err:.4f} <= 0.02; "
        f"grid worst |MC - solver| / max(3 se, 0.05) = {worst_ratio:.2f} <= 1 at {worst_case}; {elapsed:.0f}s",
    )


def test_criterion_07_sampler_law(report):
    lams = [lam for lam in np.arange(-5.0, 5.01, 0.5) if lam != 0.0]
    assert len(lams) == 20
    worst, worst_case = 0.0, None
    for i, (alpha, beta) in enumerate((a, b) for a in (0.5, 1.0, 1.5) for b in (-1.0, 0.0, 0.5, 1.0)):
        p = StableParams(alpha, beta)
        x = sample_stable(p, block_rng(7, i), 100_000)
        dev = max(abs(np.mean(np.exp(1j * lam * x)) - char_fn(lam, 1.0, p)) for lam in lams)
        if dev > worst:
            worst, worst_case = dev, (alpha, beta)
    report(7, worst <= 0.012, f"max ECF deviation {worst:.4f} <= 0.012 (worst at {worst_case})")


def test_criterion_08_escape_probability(report):
    worst, centre = 0.0, 0.0
    for alpha in (0.5, 1.5):
        for b in (1.0, 4.0):
            prof = solve(ProblemSpec.make(alpha, 0.0, b=b, kind="escape_right"), 320)
            worst = max(worst, _max_interior_error(prof, lambda x, a=alpha, bb=b: analytic_escape_symmetric(a, x, bb)))
            centre = max(centre, abs(prof.value_at(0.0) - 0.5))
    ok = worst <= 1e-2 and centre <= 5e-3
    report(8, ok, f"J=320 max error {worst:.2e} <= 1e-2; max |P(0) - 0.5| {centre:.1e} <= 5e-3")


def test_criterion_09_boundary_behaviour(report):
    first = {}
    for alpha in (0.5, 1.5):
        first[alpha] = [solve(ProblemSpec.make(alpha, 0.5), J).interior_values[0] for J in (160, 320, 640)]
    small_ok = min(first[0.5]) >= 0.2
    large_ok = all(a > b for a, b in zip(first[1.5], first[1.5][1:]))
    fmt = lambda vs: "/".join(f"{v:.4f}" for v in vs)  # noqa: E731
    report(
        9,
        small_ok and large_ok,
        f"u at first node by J=160/320/640: alpha=0.5 {fmt(first[0.5])} (>= 0.2), "
        f"alpha=1.5 {fmt(first[1.5])} (decreasing)",
    )


def test_criterion_10_parameter_monotonicity(report):
    slack = 1e-6
    violations = []
    for alpha in (0.5, 1.5):
        u = lambda **kw: solve(ProblemSpec.make(alpha, 0.5, **kw), 160).interior_values  # noqa: E731
        d0, d01, d1 = u(d=0.0), u(d=0.1), u(d=1.0)
        checks = {
            "d=1 <= d=0.1": d1 - d01,
            "d=0.1 <= d=0": d01 - d0,
            "eps=1 <= eps=0.5": u(eps=1.0) - u(eps=0.5),
            "f=0 <= f=-x": d0 - u(drift="linear:-1"),
        }
        for name, diff in checks.items():
            if diff.max() > slack:
                violations.append(f"alpha={alpha} {name} by {diff.max():.2e}")
    report(10, not violations, "; ".join(violations) or "d, eps and O-U orderings hold pointwise at J=160")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
