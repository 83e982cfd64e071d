"""Deformed ladder operators and the Hamiltonians they generate.

Ladder operators are linear forms ``mu*a + nu*a_dag + kappa`` in the usual
oscillator operators, with

    a     = (d/dx + x) / sqrt(2)
    a_dag = (-d/dx + x) / sqrt(2)

(units hbar = omega = m = 1).  A six-parameter pair ``(b, b_plus)`` built
from ``c1..c6`` satisfies ``[b, b_plus] = 1`` iff the canonical defect
``c1 + c5 + c1*c5 - c2*c4`` vanishes.  The symmetrized product
``(b b_plus + b_plus b) / 2`` is then the second-order operator

    A d^2/dx^2 + (B x + C) d/dx + D x^2 + E x + F.
"""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass
from enum import Enum

import numpy as np

from .errors import ConstraintError, DomainError, InvalidParameterError

SQRT2 = math.sqrt(2.0)

#: defect tolerance for exactly constructed presets
PRESET_TOL = 1e-12
#: defect tolerance for user supplied parameters
USER_TOL = 1e-9


class Family(str, Enum):
    HARMONIC = "harmonic"
    SHIFTED_CREATION = "shifted_creation"
    FAMILY_I = "family_I"
    FAMILY_II = "family_II"
    FAMILY_III = "family_III"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DeformationParams:
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0
    c5: float = 0.0
    c6: float = 0.0

    def __post_init__(self):
        for name, value in zip("c1 c2 c3 c4 c5 c6".split(), astuple(self)):
            if not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value!r}")

    def as_tuple(self) -> tuple[float, ...]:
        return astuple(self)


@dataclass(frozen=True)
class LadderOperator:
    """``mu*a + nu*a_dag + kappa``."""

    mu: float
    nu: float
    kappa: float = 0.0

    @property
    def d_coeff(self) -> float:
        """Coefficient of d/dx in the differential form."""
        return (self.mu - self.nu) / SQRT2

    @property
    def x_coeff(self) -> float:
        """Coefficient of x in the differential form."""
        return (self.mu + self.nu) / SQRT2


@dataclass(frozen=True)
class HamiltonianCoeffs:
    A: float
    B: float
    C: float
    D: float
    E: float
    F: float

    def as_tuple(self) -> tuple[float, ...]:
        return astuple(self)

    def is_self_adjoint(self, tol: float = 1e-12) -> bool:
        """Formal self-adjointness holds iff B = C = 0."""
        return abs(self.B) <= tol and abs(self.C) <= tol


def make_ladder_pair(c: DeformationParams) -> tuple[LadderOperator, LadderOperator]:
    """Build ``b = (1+c1) a + c2 a_dag + c3`` and ``b_plus = c4 a + (1+c5) a_dag + c6``."""
    if not all(math.isfinite(v) for v in c.as_tuple()):
        raise InvalidParameterError("deformation parameters must be finite")
    b = LadderOperator(1.0 + c.c1, c.c2, c.c3)
    b_plus = LadderOperator(c.c4, 1.0 + c.c5, c.c6)
    return b, b_plus


def canonical_defect(c: DeformationParams) -> float:
    return c.c1 + c.c5 + c.c1 * c.c5 - c.c2 * c.c4


def commutator_scalar(l1: LadderOperator, l2: LadderOperator) -> float:
    """``[l1, l2]`` as a multiple of the identity (constant terms commute)."""
    return l1.mu * l2.nu - l1.nu * l2.mu


def adjoint(op: LadderOperator) -> LadderOperator:
    return LadderOperator(op.nu, op.mu, op.kappa)


def is_adjoint_pair(b: LadderOperator, b_plus: LadderOperator, tol: float = 0.0) -> bool:
    bd = adjoint(b)
    return (
        abs(bd.mu - b_plus.mu) <= tol
        and abs(bd.nu - b_plus.nu) <= tol
        and abs(bd.kappa - b_plus.kappa) <= tol
    )


def hamiltonian_coeffs(c: DeformationParams, tol: float = USER_TOL) -> HamiltonianCoeffs:
    """Map deformation parameters to the coefficients ``A..F``.

    Parameters
    ----------
    c : DeformationParams
        Must satisfy the canonical constraint to within `tol`.
    tol : float
        Allowed absolute canonical defect.

    Raises
    ------
    ConstraintError
        If ``|canonical_defect(c)| > tol``.
    """
    defect = canonical_defect(c)
    if not abs(defect) <= tol:
        raise ConstraintError(
            f"canonical defect {defect:.3e} exceeds tolerance {tol:.1e}; [b, b+] != 1"
        )
    c1, c2, c3, c4, c5, c6 = c.as_tuple()
    A = -0.5 - c2 * c4 + 0.5 * c4 * (1 + c1) + 0.5 * c2 * (1 + c5)
    B = c4 * (1 + c1) - c2 * (1 + c5)
    C = (c6 * (c1 - c2 + 1) + c3 * (c4 - c5 - 1)) / SQRT2
    D = 0.5 + c2 * c4 + 0.5 * c4 * (1 + c1) + 0.5 * c2 * (1 + c5)
    E = (c6 * (c1 + c2 + 1) + c3 * (c4 + c5 + 1)) / SQRT2
    F = 0.5 * c4 * (1 + c1) - 0.5 * c2 * (1 + c5) + c3 * c6
    return HamiltonianCoeffs(A, B, C, D, E, F)


def family_domain(family: Family | str) -> tuple[float, float]:
    """Open interval of admissible lambda for a preset family."""
    family = Family(family)
    if family is Family.FAMILY_II:
        return 0.0, math.inf
    if family is Family.FAMILY_III:
        return -1.0, 1.0
    return -math.inf, math.inf


def in_domain(family: Family | str, lam: float) -> bool:
    lo, hi = family_domain(family)
    return math.isfinite(lam) and lo < lam < hi


def preset(name: Family | str, lam: float = 0.0, check_domain: bool = True) -> DeformationParams:
    """Deformation parameters of the named one-parameter family.

    ``harmonic`` ignores `lam`.  ``family_II`` needs ``lam > 0`` and
    ``family_III`` needs ``-1 < lam < 1``.  With ``check_domain=False`` the
    vector is built whenever its formula is defined, so that callers can
    report the failing admissibility inequality instead.
    """
    family = Family(name)
    lam = float(lam)
    if not math.isfinite(lam):
        raise InvalidParameterError(f"lambda must be finite, got {lam!r}")
    must_check = check_domain or family is Family.FAMILY_II
    if family is not Family.HARMONIC and must_check and not in_domain(family, lam):
        lo, hi = family_domain(family)
        raise DomainError(f"{family.value} requires {lo} < lambda < {hi}, got {lam}")

    if family is Family.HARMONIC:
        return DeformationParams()
    if family is Family.SHIFTED_CREATION:
        return DeformationParams(c6=lam)
    if family is Family.FAMILY_I:
        return DeformationParams(2 / 3, 4 / 3, lam, 4 / 3, 2 / 3, lam)
    if family is Family.FAMILY_II:
        s = math.sqrt(lam)
        diag = (s - 1.0) ** 2 / (2.0 * s)
        off = (lam - 1.0) / (2.0 * s)
        return DeformationParams(diag, off, 0.0, off, diag, 0.0)
    return DeformationParams(c2=lam)


def preset_coeffs(name: Family | str, lam: float = 0.0) -> HamiltonianCoeffs:
    return hamiltonian_coeffs(preset(name, lam), tol=PRESET_TOL)


def is_admissible_coeffs(h: HamiltonianCoeffs) -> bool:
    return h.A < 0 and h.B < 1


def sample_params(rng: np.random.Generator, max_tries: int = 10_000) -> DeformationParams:
    """Draw a random constraint-satisfying, admissible parameter vector.

    ``c1, c2, c4`` are uniform on [-0.9, 0.9], ``c5`` is solved from the
    constraint, ``c3, c6`` are uniform on [-1, 1].  Draws whose coefficients
    are not square-integrable are rejected.
    """
    for _ in range(max_tries):
        c1, c2, c4 = rng.uniform(-0.9, 0.9, size=3)
        c3, c6 = rng.uniform(-1.0, 1.0, size=2)
        c5 = (c2 * c4 - c1) / (1.0 + c1)
        c = DeformationParams(float(c1), float(c2), float(c3), float(c4), float(c5), float(c6))
        if accept_sample(c):
            return c
    raise RuntimeError("sampler failed to find an admissible parameter vector")


def accept_sample(c: DeformationParams) -> bool:
    """Sampler acceptance rule: constraint satisfied and coefficients admissible."""
    try:
        h = hamiltonian_coeffs(c, tol=PRESET_TOL)
    except ConstraintError:
        return False
    return is_admissible_coeffs(h)
