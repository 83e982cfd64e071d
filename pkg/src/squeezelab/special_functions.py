"""Hermite and generalized Laguerre polynomials by recurrence, plus the
parity sums used in the non-orthogonal family's normalization.

Hermite polynomials use the physicists' convention (weight ``exp(-x^2)``,
leading coefficient ``2^n``).
"""
from __future__ import annotations

from math import factorial
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError, LevelCapError

#: highest supported polynomial degree
MAX_DEGREE = 200
#: above this degree accumulate in extended precision
_EXTENDED_ABOVE = 50


class PolynomialValue(NamedTuple):
    value: np.ndarray | float
    derivative: np.ndarray | float


def _check_degree(n: int) -> int:
    n = int(n)
    if n < 0:
        raise InvalidParameterError(f"degree must be non-negative, got {n}")
    if n > MAX_DEGREE:
        raise LevelCapError(f"degree {n} exceeds cap {MAX_DEGREE}")
    return n


def _unwrap(arr, scalar_input):
    arr = np.asarray(arr, dtype=float)
    return float(arr) if scalar_input else arr


def hermite_table(n_max: int, x) -> np.ndarray:
    """All of ``H_0(x) .. H_{n_max}(x)`` stacked along axis 0."""
    n_max = _check_degree(n_max)
    dtype = np.longdouble if n_max > _EXTENDED_ABOVE else float
    x = np.asarray(x, dtype=dtype)
    out = np.empty((n_max + 1,) + x.shape, dtype=dtype)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * x
    for k in range(1, n_max):
        out[k + 1] = 2.0 * x * out[k] - 2.0 * k * out[k - 1]
    return out


def hermite_eval(n: int, x) -> PolynomialValue:
    """Evaluate ``H_n(x)`` and ``H_n'(x) = 2n H_{n-1}(x)``.

    Parameters
    ----------
    n : int
        Degree, ``0 <= n <= 200``.
    x : float or array_like
        Evaluation points.

    Returns
    -------
    PolynomialValue
        Value and derivative, with the shape of `x`.
    """
    n = _check_degree(n)
    scalar = np.ndim(x) == 0
    table = hermite_table(n, x)
    value = table[n]
    deriv = 2.0 * n * table[n - 1] if n > 0 else np.zeros_like(value)
    return PolynomialValue(_unwrap(value, scalar), _unwrap(deriv, scalar))


def hermite_series(coeffs, x) -> np.ndarray | float:
    """Evaluate ``sum_k coeffs[k] * H_k(x)``."""
    coeffs = np.asarray(coeffs, dtype=float)
    scalar = np.ndim(x) == 0
    if coeffs.size == 0:
        return _unwrap(np.zeros_like(np.asarray(x, dtype=float)), scalar)
    table = hermite_table(coeffs.size - 1, x)
    total = np.tensordot(coeffs.astype(table.dtype), table, axes=(0, 0))
    return _unwrap(total, scalar)


def _laguerre_table(n: int, alpha: float, x):
    dtype = np.longdouble if n > _EXTENDED_ABOVE else float
    x = np.asarray(x, dtype=dtype)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def laguerre_eval(n: int, alpha: float, x) -> PolynomialValue:
    """Generalized Laguerre ``L_n^(alpha)(x)`` and its x-derivative.

    Uses ``(k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}`` and
    ``d/dx L_n^(alpha) = -L_{n-1}^(alpha+1)``.
    """
    n = _check_degree(n)
    if not alpha > -1:
        raise ValueError(f"alpha must exceed -1, got {alpha}")
    scalar = np.ndim(x) == 0
    value = _laguerre_table(n, alpha, x)
    if n == 0:
        deriv = np.zeros_like(value)
    else:
        deriv = -_laguerre_table(n - 1, alpha + 1.0, x)
    return PolynomialValue(_unwrap(value, scalar), _unwrap(deriv, scalar))


def parity_sum_F(n: int, lam: float) -> float:
    """Parity-dependent sum entering the norm of the ``c2 = lambda`` family.

    Even n:  sum_{l=0}^{n/2}     2^(2l)   lam^(n-2l)   / ((2l)!   ((n/2-l)!)^2)
    Odd n:   sum_{l=0}^{(n-1)/2} 2^(2l+1) lam^(n-1-2l) / ((2l+1)! (((n-1)/2-l)!)^2)
    """
    n = _check_degree(n)
    lam = float(lam)
    total = 0.0
    if n % 2 == 0:
        half = n // 2
        for l in range(half + 1):
            # exact integer ratio first; factorial squares overflow floats at large n
            total += (4**l / (factorial(2 * l) * factorial(half - l) ** 2)) * lam ** (n - 2 * l)
    else:
        half = (n - 1) // 2
        for l in range(half + 1):
            total += (2 * 4**l / (factorial(2 * l + 1) * factorial(half - l) ** 2)) * lam ** (
                n - 1 - 2 * l
            )
    return total
