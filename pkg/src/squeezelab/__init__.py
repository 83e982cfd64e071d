"""Oscillator-like Hamiltonians from deformed ladder operators: closed-form
eigensystems, squeezing analysis and independent numerical checks."""

__version__ = "0.1.0"

from .eigensystem import (
    EigenSolution,
    Waveform,
    admissibility,
    apply_ladder,
    change_of_variable,
    eigenfunction,
    energy_general,
)
from .moments import MomentReport, closed_form_variance, quadrature_moments, squeeze_report
from .operator_algebra import (
    DeformationParams,
    Family,
    HamiltonianCoeffs,
    LadderOperator,
    adjoint,
    canonical_defect,
    commutator_scalar,
    hamiltonian_coeffs,
    make_ladder_pair,
    preset,
)
from .quadrature import QuadratureSpec
from .validator import gram_matrix, hamiltonian_residual, property_suite

__all__ = [
    "DeformationParams",
    "EigenSolution",
    "Family",
    "HamiltonianCoeffs",
    "LadderOperator",
    "MomentReport",
    "QuadratureSpec",
    "Waveform",
    "adjoint",
    "admissibility",
    "apply_ladder",
    "canonical_defect",
    "change_of_variable",
    "closed_form_variance",
    "commutator_scalar",
    "eigenfunction",
    "energy_general",
    "gram_matrix",
    "hamiltonian_coeffs",
    "hamiltonian_residual",
    "make_ladder_pair",
    "preset",
    "property_suite",
    "quadrature_moments",
    "squeeze_report",
]
