import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from levy_exit.discretization import DriftSpec
from levy_exit.levy_coefficients import (
    StableParams,
    alpha_one_constant,
    boundary_drift_g,
    c_alpha,
    char_fn,
    effective_drift,
    gamma_real,
    jump_coefficients,
    zeta_real,
)

alphas = st.floats(0.05, 1.95).filter(lambda a: abs(a - 1.0) > 1e-6)
betas = st.floats(-1.0, 1.0)


# ---- special functions


@pytest.mark.parametrize("x", [0.05, 0.3, 0.5, 0.99, 1.0, 1.25, 1.75, 2.5, 3.7, 7.0, 12.5, 30.0])
def test_gamma_matches_math(x):
    assert gamma_real(x) == pytest.approx(math.gamma(x), rel=1e-12)


@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (0.5, math.sqrt(math.pi)), (1.75, 0.919062527)])
def test_gamma_examples(x, expected):
    assert gamma_real(x) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
def test_gamma_domain(x):
    with pytest.raises(ValueError):
        gamma_real(x)


@pytest.mark.parametrize("x", [-0.99, -0.9, -0.5, -0.25, 0.0, 0.01, 0.25, 0.5, 0.75, 0.99, 1.01, 1.5, 2.0, 3.0])
def test_zeta_matches_mpmath(x):
    assert zeta_real(x) == pytest.approx(float(mpmath.zeta(x)), rel=1e-11, abs=1e-13)


@pytest.mark.parametrize("x, expected", [(0.0, -0.5), (-0.5, -0.207886224977), (0.5, -1.460354508810)])
def test_zeta_examples(x, expected):
    assert zeta_real(x) == pytest.approx(expected, abs=1e-10)


def test_zeta_pole():
    with pytest.raises(ValueError):
        zeta_real(1.0)


# ---- C_alpha and jump coefficients


def test_c_alpha_examples():
    assert c_alpha(1.0) == pytest.approx(2.0 / math.pi, rel=1e-15)
    assert c_alpha(0.5) == pytest.approx(0.398942280, rel=1e-8)


@pytest.mark.parametrize("delta", [1e-6, -1e-6])
def test_c_alpha_continuous_at_one(delta):
    assert abs(c_alpha(1.0 + delta) - 2.0 / math.pi) < 1e-4


@pytest.mark.parametrize("alpha", [0.0, 2.0, -0.5, 2.5, float("nan")])
def test_c_alpha_domain(alpha):
    with pytest.raises(ValueError):
        c_alpha(alpha)


@given(alphas)
def test_c_alpha_positive(alpha):
    assert c_alpha(alpha) > 0.0


def test_alpha_one_constant_is_one_minus_euler_gamma():
    assert alpha_one_constant() == pytest.approx(1.0 - float(mpmath.euler), abs=1e-10)


def test_jump_coefficients_examples():
    co = jump_coefficients(StableParams(1.0, 1.0))
    assert co.c1 == pytest.approx(2.0 / math.pi) and co.c2 == 0.0
    assert co.k_ab == pytest.approx(-0.4227843351 * 2.0 / math.pi, rel=1e-9)
    assert jump_coefficients(StableParams(0.5, 1.0)).k_ab == pytest.approx(0.797884561, rel=1e-8)


@given(alphas, betas)
def test_jump_coefficients_invariants(alpha, beta):
    co = jump_coefficients(StableParams(alpha, beta))
    assert co.c1 >= 0.0 and co.c2 >= 0.0
    assert co.c1 + co.c2 == pytest.approx(co.c_alpha, rel=1e-12)
    mirror = jump_coefficients(StableParams(alpha, -beta))
    assert mirror.c1 == pytest.approx(co.c2, rel=1e-12, abs=1e-300)
    assert mirror.k_ab == pytest.approx(-co.k_ab, rel=1e-12, abs=1e-300)


@given(alphas)
def test_symmetric_case_has_no_compensator(alpha):
    co = jump_coefficients(StableParams(alpha, 0.0))
    assert co.c1 == co.c2 and co.k_ab == 0.0


def _k_by_quadrature(alpha, beta):
    # compensator drift: int_1^inf y nu(dy) - int_0^1 ... computed from the
    # measure directly, with a Cauchy principal-value style split
    co = jump_coefficients(StableParams(alpha, beta))
    if alpha < 1:
        val = mpmath.quad(lambda y: y**-alpha, [0, 1])
    else:
        val = -mpmath.quad(lambda y: y**-alpha, [1, mpmath.inf])
    return float((co.c1 - co.c2) * val)


@pytest.mark.parametrize("alpha, beta", [(0.5, 0.5), (0.3, -1.0), (1.5, 0.5), (1.8, -0.2)])
def test_k_matches_measure_integral(alpha, beta):
    assert jump_coefficients(StableParams(alpha, beta)).k_ab == pytest.approx(_k_by_quadrature(alpha, beta), rel=1e-8)


# ---- drift and g


def test_effective_drift_examples():
    p = StableParams(0.5, 1.0)
    assert effective_drift(0.3, DriftSpec(), p, 1.0, 4.0) == pytest.approx(1.595769122, rel=1e-8)
    lin = DriftSpec.parse("linear:-1")
    assert effective_drift(0.3, lin, StableParams(1.5, 0.0), 1.0, 3.0) == pytest.approx(-0.3)
    k = jump_coefficients(StableParams(1.5, 0.5)).k_ab
    assert effective_drift(0.3, lin, StableParams(1.5, 0.5), 2.0, 1.0) == pytest.approx(-0.3 + 2.0 * k)


@given(alphas, betas, st.floats(0.1, 10.0), st.floats(0.0, 3.0))
def test_effective_drift_reflects(alpha, beta, b, eps):
    # c(x; beta) = -c(-x; -beta) for odd f
    f = DriftSpec.parse("poly:0,-1,0,0.5")
    lhs = effective_drift(0.4, f, StableParams(alpha, beta), eps, b)
    rhs = -effective_drift(-0.4, f, StableParams(alpha, -beta), eps, b)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_boundary_drift_g_examples():
    assert boundary_drift_g(0.0, 0.7) == 0.0
    assert boundary_drift_g(0.5, 1.0) == pytest.approx(math.log(2.0))
    assert boundary_drift_g(0.5, 0.5) == pytest.approx((1 - math.sqrt(0.5)) / 0.5)
    assert boundary_drift_g(-0.5, 0.5) == boundary_drift_g(0.5, 0.5)


@pytest.mark.parametrize("s", [1.0, -1.0, 1.5])
def test_boundary_drift_g_domain(s):
    with pytest.raises(ValueError):
        boundary_drift_g(s, 0.5)


@given(st.floats(0.05, 1.95), st.floats(0.0, 0.99))
def test_boundary_drift_g_increasing_and_nonnegative(alpha, s):
    assert boundary_drift_g(s, alpha) >= 0.0
    assert boundary_drift_g(min(s + 0.005, 0.995), alpha) >= boundary_drift_g(s, alpha)


# ---- characteristic function


def test_char_fn_examples():
    p = StableParams(1.0, 1.0)
    assert char_fn(0.0, 1.0, p) == 1.0
    expected = cmath.exp(-2.0 * (1.0 + 1j * (2.0 / math.pi) * math.log(2.0)))
    assert abs(char_fn(2.0, 1.0, p) - expected) < 1e-14


@given(alphas, st.floats(-20, 20), st.floats(0.0, 5.0))
def test_char_fn_symmetric_is_real(alpha, lam, t):
    phi = char_fn(lam, t, StableParams(alpha, 0.0))
    assert phi.imag == 0.0
    assert phi.real == pytest.approx(math.exp(-(abs(lam) ** alpha) * t), abs=1e-15)


@given(st.floats(0.05, 1.95), betas, st.floats(-20, 20), st.floats(0.0, 5.0))
def test_char_fn_modulus_and_conjugate(alpha, beta, lam, t):
    p = StableParams(alpha, beta)
    phi = char_fn(lam, t, p)
    assert abs(phi) <= 1.0 + 1e-15
    assert abs(char_fn(-lam, t, p) - phi.conjugate()) < 1e-12


def test_stable_params_validation():
    with pytest.raises(ValueError):
        StableParams(1.5, 1.2)
    with pytest.raises(ValueError):
        StableParams(1.5, 0.0, sigma=-1.0)
    assert StableParams(0.7, 0.3).reflected() == StableParams(0.7, -0.3)


def test_vectorised_drift():
    xs = np.linspace(-0.9, 0.9, 7)
    out = effective_drift(xs, DriftSpec.parse("linear:-1"), StableParams(1.5, 0.5), 1.0, 2.0)
    assert out.shape == xs.shape
