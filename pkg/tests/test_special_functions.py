import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_genlaguerre, eval_hermite

from squeezelab.errors import InvalidParameterError, LevelCapError
from squeezelab.quadrature import QuadratureSpec
from squeezelab.special_functions import (
    MAX_DEGREE,
    hermite_eval,
    hermite_series,
    hermite_table,
    laguerre_eval,
    parity_sum_F,
)


@pytest.mark.parametrize(
    "n, x, value, deriv",
    [(0, 0.7, 1.0, 0.0), (1, 3.0, 6.0, 2.0), (2, 1.0, 2.0, 8.0), (3, 1.0, -4.0, 12.0), (4, 0.0, 12.0, 0.0)],
)
def test_hermite_small_values(n, x, value, deriv):
    v = hermite_eval(n, x)
    assert v.value == pytest.approx(value, abs=1e-14)
    assert v.derivative == pytest.approx(deriv, abs=1e-14)


@given(n=st.integers(0, 30), x=st.floats(-5, 5))
def test_hermite_matches_scipy(n, x):
    ref = eval_hermite(n, x)
    assert hermite_eval(n, x).value == pytest.approx(ref, rel=1e-11, abs=1e-11 * 2**n)


@given(n=st.integers(1, 25), x=st.floats(-4, 4))
def test_hermite_derivative_identity(n, x):
    # H_n' = 2n H_{n-1}
    assert hermite_eval(n, x).derivative == pytest.approx(
        2 * n * hermite_eval(n - 1, x).value, rel=1e-12, abs=1e-9
    )


@given(n=st.integers(0, 20), x=st.floats(-3, 3))
def test_hermite_parity(n, x):
    assert hermite_eval(n, -x).value == pytest.approx((-1) ** n * hermite_eval(n, x).value, rel=1e-13, abs=1e-12)


def test_hermite_table_rows_agree_with_eval():
    x = np.linspace(-2, 2, 7)
    table = hermite_table(6, x)
    for n in range(7):
        np.testing.assert_allclose(table[n], hermite_eval(n, x).value, rtol=1e-14, atol=1e-12)


def test_hermite_series_is_linear_combination():
    x = np.linspace(-1.5, 1.5, 5)
    coeffs = [0.5, -1.0, 0.25, 2.0]
    expected = sum(c * eval_hermite(k, x) for k, c in enumerate(coeffs))
    np.testing.assert_allclose(hermite_series(coeffs, x), expected, rtol=1e-13)


@pytest.mark.parametrize("m, n", [(0, 0), (1, 1), (3, 5), (4, 4), (7, 2), (10, 10)])
def test_hermite_orthogonality_gauss_hermite(m, n):
    # quadrature nodes from numpy, polynomials from the recurrence
    x, w = QuadratureSpec(m + n + 8).nodes()
    got = float(np.sum(w * hermite_eval(m, x).value * hermite_eval(n, x).value))
    ref = math.sqrt(math.pi) * 2**n * math.factorial(n) if m == n else 0.0
    assert got == pytest.approx(ref, rel=1e-12, abs=1e-9)


def test_high_degree_uses_finite_extended_accumulation():
    v = hermite_eval(120, 1.3).value
    assert math.isfinite(v)
    assert v == pytest.approx(eval_hermite(120, 1.3), rel=1e-9)


@pytest.mark.parametrize("bad, error", [(-1, InvalidParameterError), (MAX_DEGREE + 1, LevelCapError)])
def test_degree_bounds(bad, error):
    with pytest.raises(error):
        hermite_eval(bad, 0.0)
    with pytest.raises(error):
        laguerre_eval(bad, 0.0, 0.0)


@pytest.mark.parametrize(
    "n, alpha, x, value",
    [(0, 0.0, 3.0, 1.0), (1, 0.0, 2.0, -1.0), (2, 0.0, -1.0, 3.5), (1, 1.0, -1.0, 3.0), (3, 0.0, -4.0, 1 + 12 + 24 + 64 / 6)],
)
def test_laguerre_small_values(n, alpha, x, value):
    assert laguerre_eval(n, alpha, x).value == pytest.approx(value, rel=1e-14)


@given(n=st.integers(0, 25), alpha=st.sampled_from([0.0, 0.5, 1.0, 2.0]), x=st.floats(-20, 5))
def test_laguerre_matches_scipy(n, alpha, x):
    ref = eval_genlaguerre(n, alpha, x)
    assert laguerre_eval(n, alpha, x).value == pytest.approx(ref, rel=1e-10, abs=1e-10)


@given(n=st.integers(1, 20), x=st.floats(-10, 5))
def test_laguerre_derivative(n, x):
    # d/dx L_n^(0) = -L_{n-1}^(1)
    assert laguerre_eval(n, 0.0, x).derivative == pytest.approx(
        -eval_genlaguerre(n - 1, 1.0, x), rel=1e-10, abs=1e-10
    )


@settings(max_examples=40)
@given(n=st.integers(0, 10), lam=st.floats(-3, 3))
def test_shifted_hermite_norm_identity(n, lam):
    # int e^{-x^2} H_n(x+s)^2 dx = sqrt(pi) 2^n n! L_n(-2 s^2)
    s = lam / math.sqrt(2)
    x, w = QuadratureSpec(n + 10).nodes()
    got = float(np.sum(w * hermite_eval(n, x + s).value ** 2))
    ref = math.sqrt(math.pi) * 2**n * math.factorial(n) * laguerre_eval(n, 0.0, -(lam**2)).value
    assert got == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("n, lam, value", [(0, 0.5, 1.0), (1, 0.5, 2.0), (2, 0.5, 2.25), (1, -0.3, 2.0)])
def test_parity_sum_values(n, lam, value):
    assert parity_sum_F(n, lam) == pytest.approx(value, rel=1e-14)


@pytest.mark.parametrize("n", range(0, 9))
@pytest.mark.parametrize("lam", [0.5, -0.3])
def test_parity_sum_normalizes_quadrature(n, lam):
    # int e^{-r x^2} H_n(x/sqrt(1-lam))^2 dx with r=(1+lam)/(1-lam), written via F_n
    r = (1 + lam) / (1 - lam)
    x, w = QuadratureSpec(n + 12, scale=1 / math.sqrt(r)).nodes()
    got = float(np.sum(w * hermite_eval(n, x / math.sqrt(1 - lam)).value ** 2))
    k2 = math.pi**-0.5 / math.factorial(n) ** 2 * math.sqrt(r) * (1 + lam) ** n / parity_sum_F(n, lam)
    assert k2 * got == pytest.approx(1.0, rel=1e-11)
