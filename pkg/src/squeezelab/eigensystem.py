"""Closed-form eigenfunctions and energies of the deformed Hamiltonians.

Every eigenfunction has the form

    psi_n(x) = norm * exp(-g2 x^2 / 2 - g1 x - g0 / 2) * H_n((x - q) / p)

with ``g2 = (B-1)/(2A)``, ``g1 = E - (B-1) C / (2A)``,
``g0 = -(2EA - BC)^2 / (2A)``, ``p = sqrt(-2A)`` and ``q = 2EA - BC``.
The normalization is always obtained by Gauss-Hermite quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    AdmissibilityError,
    LevelCapError,
    NoClosedFormError,
    SingularCoefficientError,
)
from .operator_algebra import (
    DeformationParams,
    Family,
    HamiltonianCoeffs,
    LadderOperator,
    preset_coeffs,
)
from .quadrature import QuadratureSpec, default_node_count
from .special_functions import hermite_eval, hermite_series, laguerre_eval, parity_sum_F

#: highest level index for eigenfunction construction
LEVEL_CAP = 64


class Admissibility(NamedTuple):
    ok: bool
    diagnostic: str

    def __bool__(self) -> bool:
        return self.ok


def admissibility(h: HamiltonianCoeffs) -> Admissibility:
    """Square integrability requires ``A < 0`` and ``B < 1``."""
    problems = []
    if not h.A < 0:
        problems.append("A must be negative")
    if not h.B < 1:
        problems.append("B must be less than 1")
    if problems:
        return Admissibility(False, "; ".join(problems) + f" (A={h.A!r}, B={h.B!r})")
    return Admissibility(True, "A < 0 and B < 1")


def _require_admissible(h: HamiltonianCoeffs) -> None:
    verdict = admissibility(h)
    if not verdict:
        raise AdmissibilityError(verdict.diagnostic)


def change_of_variable(h: HamiltonianCoeffs) -> tuple[float, float]:
    """Return ``(p, q)`` with ``x = p*y + q``; ``p`` is taken positive."""
    _require_admissible(h)
    # + 0.0 turns a signed zero into +0.0
    return math.sqrt(-2.0 * h.A), 2.0 * h.E * h.A - h.B * h.C + 0.0


def energy_general(h: HamiltonianCoeffs, p: float, q: float, n: int) -> float:
    """Energy of level `n` from the general formula, without assuming the
    change-of-variable constraints hold."""
    if h.A == 0:
        raise SingularCoefficientError("A = 0 makes the energy formula singular")
    if p == 0:
        raise SingularCoefficientError("p = 0 is not a valid change of variable")
    A, B, C, D, E, F = h.as_tuple()
    return (
        F
        - B / 2
        - C**2 / (4 * A)
        - (A / p**2) * (2 * n + 1)
        + q**2 * (D - B**2 / (4 * A))
        + q * (E - B * C / (2 * A))
    )


def energy_offset(h: HamiltonianCoeffs, p: float, q: float) -> float:
    """n-independent part of :func:`energy_general`; zero on the constraint surface."""
    return energy_general(h, p, q, 0) + h.A / p**2


def _mulz(c: np.ndarray) -> np.ndarray:
    # z H_k = H_{k+1}/2 + k H_{k-1}
    out = np.zeros(c.size + 1)
    k = np.arange(c.size)
    out[1:] += 0.5 * c
    out[:-2] += (k * c)[1:]
    return out


def _dz(c: np.ndarray) -> np.ndarray:
    # d/dz H_k = 2k H_{k-1}
    if c.size <= 1:
        return np.zeros(1)
    return 2.0 * np.arange(1, c.size) * c[1:]


def _pad_add(*terms: np.ndarray) -> np.ndarray:
    size = max(t.size for t in terms)
    out = np.zeros(size)
    for t in terms:
        out[: t.size] += t
    return out


@dataclass(frozen=True, eq=False)
class HermiteState:
    """Gaussian envelope times a finite Hermite series in ``z = (x-q)/p``.

    Ladder operators map such states into states of the same form, so
    compositions stay exact up to rounding.
    """

    g2: float
    g1: float
    g0: float
    p: float
    q: float
    coeffs: np.ndarray
    hamiltonian: HamiltonianCoeffs | None = None

    @property
    def center(self) -> float:
        return -self.g1 / self.g2

    @property
    def log_amplitude(self) -> float:
        return 0.5 * (self.g1**2 / self.g2 - self.g0)

    def envelope(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.exp(self.log_amplitude - 0.5 * self.g2 * (x - self.center) ** 2)

    def polynomial(self, x) -> np.ndarray:
        return hermite_series(self.coeffs, (np.asarray(x, dtype=float) - self.q) / self.p)

    def __call__(self, x) -> np.ndarray:
        return self.envelope(x) * self.polynomial(x)

    def _with(self, coeffs: np.ndarray) -> "HermiteState":
        return HermiteState(self.g2, self.g1, self.g0, self.p, self.q, coeffs, self.hamiltonian)

    def times_x(self) -> "HermiteState":
        return self._with(_pad_add(self.p * _mulz(self.coeffs), self.q * self.coeffs))

    def derivative(self) -> "HermiteState":
        # (e^phi f)' = e^phi (phi' f + f'),  phi' = -g2 x - g1
        x_f = self.times_x().coeffs
        return self._with(
            _pad_add(-self.g2 * x_f, -self.g1 * self.coeffs, _dz(self.coeffs) / self.p)
        )

    def apply(self, op: LadderOperator) -> "HermiteState":
        d = self.derivative().coeffs
        xf = self.times_x().coeffs
        return self._with(_pad_add(op.d_coeff * d, op.x_coeff * xf, op.kappa * self.coeffs))

    def scaled(self, factor: float) -> "HermiteState":
        return self._with(factor * self.coeffs)


@dataclass(frozen=True)
class Waveform:
    n: int
    g2: float
    g1: float
    g0: float
    p: float
    q: float
    norm: float

    @property
    def center(self) -> float:
        return -self.g1 / self.g2

    @property
    def width(self) -> float:
        """Scale ``1/sqrt(g2)`` of the squared envelope ``exp(-g2 (x-center)^2)``."""
        return 1.0 / math.sqrt(self.g2)

    @property
    def log_amplitude(self) -> float:
        """log of the envelope maximum times ``norm``."""
        return math.log(self.norm) + 0.5 * (self.g1**2 / self.g2 - self.g0)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        env = np.exp(self.log_amplitude - 0.5 * self.g2 * (x - self.center) ** 2)
        return env * hermite_eval(self.n, (x - self.q) / self.p).value

    def derivatives(self, x) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``psi, psi', psi''`` from the Hermite recurrence and the product rule."""
        x = np.asarray(x, dtype=float)
        n, p = self.n, self.p
        z = (x - self.q) / p
        h = hermite_eval(n, z)
        h2 = 2.0 * n * hermite_eval(n - 1, z).derivative if n >= 1 else np.zeros_like(z)
        f, f1, f2 = h.value, h.derivative / p, h2 / p**2
        env = np.exp(self.log_amplitude - 0.5 * self.g2 * (x - self.center) ** 2)
        phi1 = -self.g2 * x - self.g1
        phi2 = -self.g2
        psi = env * f
        dpsi = env * (phi1 * f + f1)
        d2psi = env * ((phi2 + phi1**2) * f + 2.0 * phi1 * f1 + f2)
        return psi, dpsi, d2psi

    def quadrature_spec(self, node_count: int | None = None) -> QuadratureSpec:
        m = default_node_count(self.n) if node_count is None else node_count
        return QuadratureSpec(m, self.center, self.width)

    def to_state(self, hamiltonian: HamiltonianCoeffs | None = None) -> HermiteState:
        c = np.zeros(self.n + 1)
        c[self.n] = self.norm
        return HermiteState(self.g2, self.g1, self.g0, self.p, self.q, c, hamiltonian)


@dataclass(frozen=True)
class EigenSolution:
    waveform: Waveform
    energy: float
    hamiltonian: HamiltonianCoeffs = field(repr=False)

    @property
    def n(self) -> int:
        return self.waveform.n

    def __call__(self, x) -> np.ndarray:
        return self.waveform(x)

    def to_state(self) -> HermiteState:
        return self.waveform.to_state(self.hamiltonian)


def envelope_params(h: HamiltonianCoeffs) -> tuple[float, float, float]:
    """Exponent coefficients ``(g2, g1, g0)`` shared by all levels."""
    _require_admissible(h)
    A, B, C, D, E, F = h.as_tuple()
    g2 = (B - 1.0) / (2.0 * A)
    g1 = E - (B - 1.0) * C / (2.0 * A)
    g0 = -((2.0 * E * A - B * C) ** 2) / (2.0 * A)
    return g2, g1, g0


def _quadrature_norm(n, g2, g1, g0, p, q, node_count=None) -> float:
    spec = QuadratureSpec(
        default_node_count(n) if node_count is None else node_count, -g1 / g2, 1.0 / math.sqrt(g2)
    )
    x, w = spec.nodes()
    hn = hermite_eval(n, (x - q) / p).value
    log_integral = g1**2 / g2 - g0 + math.log(np.sum(w * hn**2))
    return math.exp(-0.5 * log_integral)


def eigenfunction(h: HamiltonianCoeffs, n: int, node_count: int | None = None) -> EigenSolution:
    """Normalized eigenfunction of level `n` and its energy ``n + 1/2``.

    Raises
    ------
    AdmissibilityError
        If ``A >= 0`` or ``B >= 1``.
    LevelCapError
        If `n` is negative or above :data:`LEVEL_CAP`.
    """
    n = int(n)
    if n < 0 or n > LEVEL_CAP:
        raise LevelCapError(f"level must lie in [0, {LEVEL_CAP}], got {n}")
    g2, g1, g0 = envelope_params(h)
    p, q = change_of_variable(h)
    norm = _quadrature_norm(n, g2, g1, g0, p, q, node_count)
    return EigenSolution(Waveform(n, g2, g1, g0, p, q, norm), n + 0.5, h)


def eigenbasis(h: HamiltonianCoeffs, n_max: int) -> list[EigenSolution]:
    return [eigenfunction(h, n) for n in range(n_max + 1)]


def ladder_coefficients(c: DeformationParams, h: HamiltonianCoeffs, n: int) -> tuple[float, float]:
    """Closed-form ``b|n> = lower |n-1>`` and ``b+|n> = raise_ |n+1>`` factors.

    Returns ``(lower, raise_)``; ``lower`` is 0 for ``n = 0``.
    """
    root = math.sqrt(-h.A)
    norm = lambda k: eigenfunction(h, k).waveform.norm  # noqa: E731
    nn = norm(n)
    lower = n / root * nn / norm(n - 1) * (1 + c.c1 - c.c2) if n > 0 else 0.0
    raise_ = 1.0 / (2 * root) * nn / norm(n + 1) * (1 + c.c5 - c.c4)
    return lower, raise_


class LadderResult(NamedTuple):
    grid: np.ndarray
    values: np.ndarray
    state: HermiteState
    target_level: int
    coefficient: float
    residual: float


def _fit(values: np.ndarray, target: np.ndarray) -> tuple[float, float]:
    denom = float(np.dot(target, target))
    coef = float(np.dot(values, target)) / denom
    scale = float(np.linalg.norm(values))
    if scale == 0.0:
        return 0.0, 0.0
    return coef, float(np.linalg.norm(values - coef * target)) / scale


def sample_grid(g2: float, g1: float, points: int = 401, half_width: float = 8.0) -> np.ndarray:
    center, width = -g1 / g2, 1.0 / math.sqrt(g2)
    return np.linspace(center - half_width * width, center + half_width * width, points)


def apply_ladder(
    op: LadderOperator,
    s: EigenSolution | HermiteState,
    target: int | None = None,
    grid: np.ndarray | None = None,
) -> LadderResult:
    """Apply a ladder operator and fit the result to an eigenfunction.

    The operator acts exactly on the Hermite-series representation.  The
    result is sampled on `grid` and the proportionality coefficient to
    eigenfunction `target` is obtained by least squares.  Without a
    `target`, the neighbouring levels (or, for a general state, every
    level up to its degree) are tried and the best fit is kept.
    """
    if isinstance(s, EigenSolution):
        h = s.hamiltonian
        state = s.to_state()
        candidates = [m for m in (s.n - 1, s.n, s.n + 1) if m >= 0]
    else:
        h = s.hamiltonian
        state = s
        candidates = list(range(s.coeffs.size + 1))
    if h is None:
        raise ValueError("state carries no Hamiltonian; cannot build target eigenfunctions")
    if target is not None:
        candidates = [target]
    out = state.apply(op)
    if grid is None:
        grid = sample_grid(state.g2, state.g1)
    values = out(grid)
    best = None
    for m in candidates:
        coef, res = _fit(values, eigenfunction(h, m)(grid))
        if best is None or res < best[2]:
            best = (m, coef, res)
    m, coef, res = best
    return LadderResult(grid, values, out, m, coef, res)


def closed_form_eigenfunction(family: Family | str, lam: float, n: int):
    """Explicit closed-form eigenfunction of a preset family as a callable.

    The ``family_II`` normalization uses ``2^(-n/2)`` (unit norm); the
    ``harmonic`` case is the textbook oscillator state.
    """
    family = Family(family)
    n = int(n)
    fact = math.factorial(n)
    if family is Family.HARMONIC:
        k = 2 ** (-n / 2) * math.pi**-0.25 / math.sqrt(fact)
        return lambda x: k * np.exp(-np.asarray(x) ** 2 / 2) * hermite_eval(n, x).value
    if family is Family.SHIFTED_CREATION:
        lag = laguerre_eval(n, 0.0, -(lam**2)).value
        k = 2 ** (-n / 2) * math.pi**-0.25 / (math.sqrt(fact) * math.sqrt(lag))
        shift = lam / math.sqrt(2)
        return lambda x: k * np.exp(-np.asarray(x) ** 2 / 2) * hermite_eval(n, np.asarray(x) + shift).value
    if family is Family.FAMILY_I:
        k = math.sqrt(3) * math.pi**-0.25 * 2 ** (-n / 2) / math.sqrt(fact)
        r2 = math.sqrt(2)

        def psi(x):
            x = np.asarray(x, dtype=float)
            return (
                k
                * np.exp(-4.5 * x**2 - 6 / r2 * lam * x - lam**2)
                * hermite_eval(n, 3 * x + r2 * lam).value
            )

        return psi
    if family is Family.FAMILY_II:
        k = lam**0.25 * math.pi**-0.25 * 2 ** (-n / 2) / math.sqrt(fact)
        rl = math.sqrt(lam)
        return lambda x: k * np.exp(-lam * np.asarray(x) ** 2 / 2) * hermite_eval(n, rl * np.asarray(x)).value
    if family is Family.FAMILY_III:
        ratio = (1 + lam) / (1 - lam)
        k = math.pi**-0.25 / fact * ratio**0.25 * (1 + lam) ** (n / 2) / math.sqrt(parity_sum_F(n, lam))
        s = math.sqrt(1 - lam)
        return lambda x: k * np.exp(-0.5 * ratio * np.asarray(x) ** 2) * hermite_eval(n, np.asarray(x) / s).value
    raise NoClosedFormError(f"no closed-form eigenfunction for {family}")


def preset_eigenfunction(family: Family | str, lam: float, n: int) -> EigenSolution:
    return eigenfunction(preset_coeffs(family, lam), n)
