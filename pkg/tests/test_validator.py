import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezelab.eigensystem import eigenfunction, preset_eigenfunction
from squeezelab.operator_algebra import (
    DeformationParams,
    LadderOperator,
    hamiltonian_coeffs,
    make_ladder_pair,
    preset,
    preset_coeffs,
    sample_params,
)
from squeezelab.validator import (
    ANNIHILATION,
    CREATION,
    IDENTITY,
    DiffOp,
    SuiteTolerances,
    as_diffop,
    check_sample,
    compose_symmetrized,
    derivative_agreement,
    formally_self_adjoint,
    gram_matrix,
    hamiltonian_residual,
    preset_checks,
    property_suite,
)

X = DiffOp({(1, 0): 1.0})
D = DiffOp({(0, 1): 1.0})


def _commutator(a, b):
    return a @ b + (b @ a).scale(-1.0)


def test_diffop_canonical_commutators():
    assert _commutator(D, X).terms == {(0, 0): 1.0}
    assert _commutator(ANNIHILATION, CREATION).terms == pytest.approx({(0, 0): 1.0})


def test_diffop_composition_leibniz():
    # d^2 x^2 = x^2 d^2 + 4 x d + 2
    assert (D @ D @ X @ X).terms == {(2, 2): 1.0, (1, 1): 4.0, (0, 0): 2.0}


def test_diffop_adjoint():
    assert D.adjoint().terms == {(0, 1): -1.0}
    # (x d)^+ = -d x = -x d - 1
    assert DiffOp({(1, 1): 1.0}).adjoint().terms == {(1, 1): -1.0, (0, 0): -1.0}
    assert as_diffop(LadderOperator(1.0, 0.0)).adjoint().terms == pytest.approx(CREATION.terms)


def test_number_operator_from_composition():
    h = compose_symmetrized(LadderOperator(1.0, 0.0), LadderOperator(0.0, 1.0))
    assert h.as_tuple() == pytest.approx((-0.5, 0.0, 0.0, 0.5, 0.0, 0.0), abs=1e-15)
    assert (IDENTITY @ X).terms == X.terms


@pytest.mark.parametrize("family, lam, expected", [
    ("harmonic", 0.0, True), ("family_I", 1.0, True), ("family_II", 4.0, True),
    ("shifted_creation", 1.0, False), ("family_III", 0.5, False),
])
def test_formal_self_adjointness(family, lam, expected):
    assert formally_self_adjoint(preset_coeffs(family, lam)) is expected


@settings(max_examples=30)
@given(seed=st.integers(0, 2**32 - 1))
def test_self_adjoint_iff_b_and_c_vanish(seed):
    h = hamiltonian_coeffs(sample_params(np.random.default_rng(seed)))
    assert formally_self_adjoint(h) == h.is_self_adjoint()


@pytest.mark.parametrize("family, lam", [
    ("harmonic", 0.0), ("shifted_creation", 1.0), ("family_I", 1.0), ("family_II", 4.0), ("family_III", 0.5),
])
@pytest.mark.parametrize("n", [0, 3, 8])
def test_residual_small_both_methods(family, lam, n):
    h = preset_coeffs(family, lam)
    s = eigenfunction(h, n)
    assert hamiltonian_residual(h, s).residual < 1e-10
    assert hamiltonian_residual(h, s, method="finite_difference").residual < 1e-5
    assert derivative_agreement(h, s) < 1e-6


@pytest.mark.parametrize("n", [0, 4, 8])
def test_residual_detects_wrong_energy(n):
    h = preset_coeffs("family_III", 0.5)
    s = eigenfunction(h, n)
    assert hamiltonian_residual(h, s, energy=s.energy + 0.1).residual > 1e-2


def test_residual_detects_wrong_hamiltonian():
    s = preset_eigenfunction("family_II", 4.0, 2)
    assert hamiltonian_residual(preset_coeffs("family_II", 4.5), s).residual > 1e-2


def test_residual_rejects_unknown_method():
    h = preset_coeffs("harmonic")
    with pytest.raises(ValueError):
        hamiltonian_residual(h, eigenfunction(h, 0), method="spectral")


@pytest.mark.parametrize("family, lam", [("harmonic", 0.0), ("family_I", 2.0), ("family_II", 9.0)])
def test_gram_identity_self_adjoint(family, lam):
    g = gram_matrix(preset_coeffs(family, lam), 8)
    assert g.identity_deviation() < 1e-10


def test_gram_non_self_adjoint_frozen_entries():
    # frozen from scipy quad over eval_hermite forms: G02 = -1/3, G01 = 1/sqrt2
    g3 = gram_matrix(preset_coeffs("family_III", 0.5), 4).entries
    assert g3[0, 2] == pytest.approx(-1 / 3, abs=1e-12)
    assert abs(g3[0, 1]) < 1e-13  # parity
    g1 = gram_matrix(preset_coeffs("shifted_creation", 1.0), 4).entries
    assert g1[0, 1] == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert np.diag(g3) == pytest.approx(np.ones(5), abs=1e-12)


def test_check_sample_all_pass():
    checks = check_sample(sample_params(np.random.default_rng(11)))
    names = [c.name for c in checks]
    assert names == [
        "canonical_constraint", "commutator", "coefficient_map", "d_minus_a", "quartic_constraint",
        "shift_constraint", "energy_offset", "spectrum", "hamiltonian_residual",
        "self_adjoint_iff_B_C_zero", "ground_state_flags", "ground_state_var_x", "ground_state_product",
    ]
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_check_sample_reports_constraint_violation():
    checks = check_sample(DeformationParams(c1=0.2))
    assert [c.passed for c in checks] == [False, False, False]
    assert "canonical defect" in checks[-1].detail


def test_property_suite_passes_and_is_deterministic():
    a = property_suite(20, seed=5)
    b = property_suite(20, seed=5)
    assert a.passed
    assert a.to_dict() == b.to_dict()
    assert a.summary()["coefficient_map"]["count"] == 20


def test_property_suite_fails_at_impossible_tolerance():
    rep = property_suite(5, seed=5, tol=SuiteTolerances.uniform(1e-18))
    assert not rep.passed
    assert all(f.value > f.threshold for f in rep.failures)


@pytest.mark.parametrize("family, lam", [("family_I", 1.0), ("family_III", 0.5)])
def test_preset_checks(family, lam):
    checks = preset_checks(family, lam)
    assert all(c.passed for c in checks)
    names = {c.name.split(":")[1] for c in checks}
    assert ("gram_identity" in names) is (family == "family_I")


def test_ladder_pair_builds_preset_hamiltonian():
    b, bp = make_ladder_pair(preset("family_III", 0.5))
    assert compose_symmetrized(b, bp).as_tuple() == pytest.approx(preset_coeffs("family_III", 0.5).as_tuple())
