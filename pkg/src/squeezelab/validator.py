"""Independent numerical oracles for the closed forms.

* Differential-operator algebra that composes ladder operators from the
  raw ``(d/dx, x)`` realization, with no use of the coefficient map.
* Hamiltonian residuals ``|H psi - E psi|`` from analytic or
  finite-difference derivatives.
* Gram matrices of overlaps.
* A seeded randomized property suite.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from math import comb

import numpy as np

from .eigensystem import (
    EigenSolution,
    change_of_variable,
    closed_form_eigenfunction,
    eigenfunction,
    energy_general,
    energy_offset,
)
from .errors import ConstraintError
from .moments import ground_state_prediction, quadrature_moments
from .operator_algebra import (
    PRESET_TOL,
    DeformationParams,
    Family,
    HamiltonianCoeffs,
    LadderOperator,
    canonical_defect,
    commutator_scalar,
    hamiltonian_coeffs,
    make_ladder_pair,
    preset_coeffs,
    sample_params,
)
from .quadrature import default_node_count


# --------------------------------------------------------------------------
# differential operators  sum c_ij x^i (d/dx)^j, normal ordered


class DiffOp:
    """Polynomial-coefficient differential operator, x's to the left of d's."""

    def __init__(self, terms: dict[tuple[int, int], float] | None = None):
        self.terms: dict[tuple[int, int], float] = {}
        for key, val in (terms or {}).items():
            if val != 0.0:
                self.terms[key] = float(val)

    def __add__(self, other: "DiffOp") -> "DiffOp":
        out = defaultdict(float, self.terms)
        for key, val in other.terms.items():
            out[key] += val
        return DiffOp(out)

    def scale(self, k: float) -> "DiffOp":
        return DiffOp({key: k * v for key, v in self.terms.items()})

    def __matmul__(self, other: "DiffOp") -> "DiffOp":
        # (x^i d^j)(x^k d^l) = sum_r C(j,r) k!/(k-r)! x^(i+k-r) d^(j-r+l)
        out: dict[tuple[int, int], float] = defaultdict(float)
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                for r in range(min(j, k) + 1):
                    falling = math.perm(k, r)
                    out[(i + k - r, j - r + l)] += a * b * comb(j, r) * falling
        return DiffOp(out)

    def adjoint(self) -> "DiffOp":
        """Formal adjoint for real coefficients: (x^i d^j)^+ = (-d)^j x^i."""
        out = DiffOp()
        for (i, j), a in self.terms.items():
            term = DiffOp({(0, j): (-1.0) ** j * a}) @ DiffOp({(i, 0): 1.0})
            out = out + term
        return out

    def coeff(self, i: int, j: int) -> float:
        return self.terms.get((i, j), 0.0)


_R2 = 1.0 / math.sqrt(2.0)
ANNIHILATION = DiffOp({(0, 1): _R2, (1, 0): _R2})
CREATION = DiffOp({(0, 1): -_R2, (1, 0): _R2})
IDENTITY = DiffOp({(0, 0): 1.0})


def as_diffop(op: LadderOperator) -> DiffOp:
    return ANNIHILATION.scale(op.mu) + CREATION.scale(op.nu) + IDENTITY.scale(op.kappa)


def hamiltonian_diffop(h: HamiltonianCoeffs) -> DiffOp:
    return DiffOp(
        {(0, 2): h.A, (1, 1): h.B, (0, 1): h.C, (2, 0): h.D, (1, 0): h.E, (0, 0): h.F}
    )


def compose_symmetrized(b: LadderOperator, b_plus: LadderOperator) -> HamiltonianCoeffs:
    """Coefficients of ``(b b_plus + b_plus b)/2`` by brute-force composition."""
    ob, op = as_diffop(b), as_diffop(b_plus)
    h = (ob @ op + op @ ob).scale(0.5)
    known = {(0, 2), (1, 1), (0, 1), (2, 0), (1, 0), (0, 0)}
    stray = {k: v for k, v in h.terms.items() if k not in known and abs(v) > 1e-14}
    if stray:
        raise AssertionError(f"unexpected terms in composition: {stray}")
    return HamiltonianCoeffs(
        h.coeff(0, 2), h.coeff(1, 1), h.coeff(0, 1), h.coeff(2, 0), h.coeff(1, 0), h.coeff(0, 0)
    )


def formally_self_adjoint(h: HamiltonianCoeffs, tol: float = 1e-12) -> bool:
    """Compare the operator with its formal adjoint term by term."""
    H = hamiltonian_diffop(h)
    Hd = H.adjoint()
    keys = set(H.terms) | set(Hd.terms)
    return all(abs(H.coeff(*k) - Hd.coeff(*k)) <= tol for k in keys)


# --------------------------------------------------------------------------
# residuals


@dataclass(frozen=True)
class ResidualReport:
    n: int
    residual: float
    grid: str
    l2_residual: float = 0.0
    tail_residual: float = 0.0
    energy: float = 0.0


def _apply_h(h: HamiltonianCoeffs, x, psi, dpsi, d2psi):
    A, B, C, D, E, F = h.as_tuple()
    terms = (A * d2psi, (B * x + C) * dpsi, (D * x**2 + E * x + F) * psi)
    scale = sum(np.abs(t) for t in terms)
    return terms[0] + terms[1] + terms[2], scale


def _fd_derivatives(s: EigenSolution, x: np.ndarray, step: float):
    f = s.waveform
    v = {k: f(x + k * step) for k in (-2, -1, 0, 1, 2)}
    d1 = (v[-2] - 8 * v[-1] + 8 * v[1] - v[2]) / (12 * step)
    d2 = (-v[-2] + 16 * v[-1] - 30 * v[0] + 16 * v[1] - v[2]) / (12 * step**2)
    return v[0], d1, d2


def tail_points(s: EigenSolution, sds: float = 8.0) -> np.ndarray:
    """Points ``sds`` standard deviations of ``psi^2``'s envelope from the centre,
    pushed out past the outermost quadrature node if needed."""
    wf = s.waveform
    sd = wf.width / math.sqrt(2.0)
    nodes, _ = wf.quadrature_spec().nodes()
    reach = max(sds * sd, float(np.max(np.abs(nodes - wf.center))) + sd)
    return np.array([wf.center - reach, wf.center + reach])


def hamiltonian_residual(
    h: HamiltonianCoeffs,
    s: EigenSolution,
    energy: float | None = None,
    method: str = "analytic",
    step: float = 1e-4,
    node_count: int | None = None,
) -> ResidualReport:
    """Relative residual of ``H psi = E psi``.

    The L2 part is ``||H psi - E psi|| / ||E psi||`` by Gauss-Hermite
    quadrature on the envelope; the tail part is the pointwise residual at
    two far tail points, relative to the magnitude of the terms of
    ``H psi``.  ``residual`` is the larger of the two.
    """
    if energy is None:
        energy = s.energy
    spec = s.waveform.quadrature_spec(node_count)
    x, w = spec.nodes()
    pts = np.concatenate([x, tail_points(s)])
    if method == "analytic":
        psi, d1, d2 = s.waveform.derivatives(pts)
    elif method == "finite_difference":
        psi, d1, d2 = _fd_derivatives(s, pts, step)
    else:
        raise ValueError(f"unknown method {method!r}")
    hpsi, scale = _apply_h(h, pts, psi, d1, d2)
    r = hpsi - energy * psi
    m = x.size
    undo = np.exp(((x - spec.center) / spec.scale) ** 2)
    num = float(np.sum(w * undo * r[:m] ** 2))
    den = float(np.sum(w * undo * (energy * psi[:m]) ** 2))
    l2 = math.sqrt(num / den) if den > 0 else math.sqrt(num)
    tail_scale = scale[m:] + abs(energy) * np.abs(psi[m:])
    tail = float(np.max(np.abs(r[m:]) / np.where(tail_scale > 0, tail_scale, 1.0)))
    grid = f"gauss-hermite {m} nodes (center={spec.center:.6g}, scale={spec.scale:.6g}) + 2 tail points"
    return ResidualReport(s.n, max(l2, tail), grid, l2, tail, energy)


def derivative_agreement(h: HamiltonianCoeffs, s: EigenSolution, step: float = 1e-4) -> float:
    """Relative L2 gap between analytic and finite-difference ``H psi``."""
    spec = s.waveform.quadrature_spec()
    x, w = spec.nodes()
    undo = np.exp(((x - spec.center) / spec.scale) ** 2)
    ha, _ = _apply_h(h, x, *s.waveform.derivatives(x))
    hf, _ = _apply_h(h, x, *_fd_derivatives(s, x, step))
    return math.sqrt(float(np.sum(w * undo * (ha - hf) ** 2)) / float(np.sum(w * undo * ha**2)))


# --------------------------------------------------------------------------
# overlaps


@dataclass(frozen=True, eq=False)
class GramMatrix:
    entries: np.ndarray

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def off_diagonal_max(self) -> float:
        off = self.entries - np.diag(np.diag(self.entries))
        return float(np.max(np.abs(off))) if off.size else 0.0

    def diagonal_deviation(self) -> float:
        return float(np.max(np.abs(np.diag(self.entries) - 1.0)))

    def identity_deviation(self) -> float:
        return float(np.max(np.abs(self.entries - np.eye(self.dimension))))


def gram_matrix(h: HamiltonianCoeffs, n_max: int) -> GramMatrix:
    """Overlaps ``int psi_m psi_n dx`` for ``m, n <= n_max``."""
    states = [eigenfunction(h, n) for n in range(n_max + 1)]
    spec = states[-1].waveform.quadrature_spec(default_node_count(n_max))
    x, w = spec.nodes()
    undo = np.exp(0.5 * ((x - spec.center) / spec.scale) ** 2)
    vals = np.array([s(x) * undo for s in states])
    g = (vals * w) @ vals.T
    return GramMatrix(0.5 * (g + g.T))


def closed_form_deviation(family: Family | str, lam: float, n: int) -> float:
    """Relative L2 distance between the generic construction and the explicit closed form."""
    s = eigenfunction(preset_coeffs(family, lam), n)
    ref = closed_form_eigenfunction(family, lam, n)
    spec = s.waveform.quadrature_spec()
    x, w = spec.nodes()
    undo = np.exp(((x - spec.center) / spec.scale) ** 2)
    a, b = s(x), ref(x)
    return math.sqrt(float(np.sum(w * undo * (a - b) ** 2)) / float(np.sum(w * undo * b**2)))


# --------------------------------------------------------------------------
# property suite


@dataclass(frozen=True)
class SuiteTolerances:
    constraint: float = 1e-12
    coefficient_rel: float = 1e-12
    change_of_variable: float = 1e-10
    offset: float = 1e-9
    spectrum: float = 1e-9
    residual: float = 1e-8
    variance: float = 1e-9
    coherence: float = 1e-10

    @classmethod
    def uniform(cls, tol: float) -> "SuiteTolerances":
        return cls(*([tol] * 8))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    params: tuple[float, ...] = ()
    detail: str = ""

    @property
    def margin(self) -> float:
        return self.threshold - self.value

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = list(self.params)
        d["margin"] = self.margin
        return d


def _check(name, value, threshold, params, detail="") -> CheckResult:
    value = float(value)
    return CheckResult(name, bool(value <= threshold), value, float(threshold), params, detail)


def _flag(name, ok, params, detail="") -> CheckResult:
    return CheckResult(name, bool(ok), 0.0 if ok else 1.0, 0.0, params, detail)


def _rel(a: float, b: float) -> float:
    den = max(abs(a), abs(b))
    return abs(a - b) / den if den > 0 else 0.0


def check_sample(
    c: DeformationParams,
    tol: SuiteTolerances = SuiteTolerances(),
    levels: int = 5,
    spectrum_levels: int = 10,
) -> list[CheckResult]:
    """Run every property check on one parameter vector.

    Stops after the constraint checks if the vector is not canonical.
    """
    params = c.as_tuple()
    out: list[CheckResult] = []
    b, bp = make_ladder_pair(c)
    out.append(_check("canonical_constraint", abs(canonical_defect(c)), tol.constraint, params))
    out.append(_check("commutator", abs(commutator_scalar(b, bp) - 1.0), tol.constraint, params))
    try:
        h = hamiltonian_coeffs(c, tol=tol.constraint)
    except ConstraintError as exc:
        out.append(_flag("coefficient_map", False, params, str(exc)))
        return out

    comp = compose_symmetrized(b, bp)
    worst = max(_rel(x, y) for x, y in zip(h.as_tuple(), comp.as_tuple()))
    out.append(_check("coefficient_map", worst, tol.coefficient_rel, params))
    out.append(
        _check("d_minus_a", abs((h.D - h.A) - (1 + 2 * c.c2 * c.c4)), tol.constraint, params)
    )

    p, q = change_of_variable(h)
    A, B, C, D, E, F = h.as_tuple()
    out.append(
        _check(
            "quartic_constraint",
            abs(p**4 / A * (D - B**2 / (4 * A)) + 1.0),
            tol.change_of_variable,
            params,
        )
    )
    out.append(
        _check(
            "shift_constraint",
            abs(2 * q * (D - B**2 / (4 * A)) + E - B * C / (2 * A)),
            tol.change_of_variable,
            params,
        )
    )
    out.append(_check("energy_offset", abs(energy_offset(h, p, q)), tol.offset, params))
    spec_err = max(abs(energy_general(h, p, q, n) - (n + 0.5)) for n in range(spectrum_levels + 1))
    out.append(_check("spectrum", spec_err, tol.spectrum, params))

    worst_res = max(
        hamiltonian_residual(h, eigenfunction(h, n)).residual for n in range(levels + 1)
    )
    out.append(_check("hamiltonian_residual", worst_res, tol.residual, params))

    sa_formal = formally_self_adjoint(h)
    out.append(
        _flag(
            "self_adjoint_iff_B_C_zero",
            sa_formal == h.is_self_adjoint(),
            params,
            f"formal={sa_formal} B={B!r} C={C!r}",
        )
    )

    ground = quadrature_moments(eigenfunction(h, 0))
    pred = ground_state_prediction(h)
    flags_ok = ground.x_status == pred["x"] and ground.p_status == pred["p"]
    out.append(_flag("ground_state_flags", flags_ok, params, f"prediction={pred}"))
    out.append(_check("ground_state_var_x", abs(ground.var_x - A / (B - 1)), tol.variance, params))
    out.append(_check("ground_state_product", abs(ground.product - 0.5), tol.coherence, params))
    return out


@dataclass
class SuiteReport:
    seed: int
    sample_count: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> dict[str, dict[str, float]]:
        by_name: dict[str, dict[str, float]] = {}
        for c in self.checks:
            s = by_name.setdefault(c.name, {"count": 0, "failed": 0, "worst": 0.0})
            s["count"] += 1
            s["failed"] += 0 if c.passed else 1
            s["worst"] = max(s["worst"], c.value)
        return by_name

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "sample_count": self.sample_count,
            "passed": self.passed,
            "summary": self.summary(),
            "failures": [c.to_dict() for c in self.failures],
        }


def property_suite(
    sample_count: int, seed: int, tol: SuiteTolerances = SuiteTolerances()
) -> SuiteReport:
    """Draw `sample_count` admissible canonical parameter vectors and check them all."""
    if sample_count < 1:
        raise ValueError("sample_count must be positive")
    rng = np.random.default_rng(seed)
    report = SuiteReport(seed, sample_count)
    for _ in range(sample_count):
        report.checks.extend(check_sample(sample_params(rng), tol))
    return report


def preset_checks(
    family: Family | str,
    lam: float,
    n_max: int = 8,
    tol: SuiteTolerances = SuiteTolerances(),
    gram_tol: float = 1e-10,
) -> list[CheckResult]:
    """Residuals and Gram structure for one preset."""
    family = Family(family)
    h = preset_coeffs(family, lam)
    tag = (float(lam),)
    out = []
    worst = max(hamiltonian_residual(h, eigenfunction(h, n)).residual for n in range(n_max + 1))
    out.append(_check(f"{family.value}:residual", worst, tol.residual, tag))
    g = gram_matrix(h, n_max)
    out.append(_check(f"{family.value}:gram_diagonal", g.diagonal_deviation(), gram_tol, tag))
    if h.is_self_adjoint(PRESET_TOL):
        out.append(_check(f"{family.value}:gram_identity", g.identity_deviation(), gram_tol, tag))
    return out
