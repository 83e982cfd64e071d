"""Position/momentum moments, closed-form variances and squeezing criteria.

Momentum is ``-i d/dx``.  For the real, normalizable eigenfunctions built
here ``<p> = 0`` identically and ``<p^2> = int (psi')^2 dx``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq

from .eigensystem import EigenSolution, eigenfunction
from .errors import DomainError, NoClosedFormError, NormalizationError
from .operator_algebra import Family, HamiltonianCoeffs, in_domain, preset_coeffs
from .quadrature import QuadratureSpec, minimum_node_count
from .special_functions import laguerre_eval

#: a variance within this distance of 1/2 is a boundary case
SQUEEZE_MARGIN = 1e-12
#: |product - 1/2| below this counts as coherent
COHERENCE_TOL = 1e-10
#: slack on the Heisenberg floor
HEISENBERG_SLACK = 1e-12
#: allowed deviation of the quadrature norm from 1
NORMALIZATION_TOL = 1e-10

SQUEEZED = "squeezed"
UNSQUEEZED = "unsqueezed"
BOUNDARY = "boundary"

MOMENT_FIELDS = (
    "mean_x",
    "mean_x2",
    "mean_p",
    "mean_p2",
    "var_x",
    "var_p",
    "product",
    "squeezed_x",
    "squeezed_p",
    "coherent",
    "source",
)


def classify(var: float, margin: float = SQUEEZE_MARGIN) -> str:
    if var < 0.5 - margin:
        return SQUEEZED
    if var > 0.5 + margin:
        return UNSQUEEZED
    return BOUNDARY


@dataclass(frozen=True)
class MomentReport:
    mean_x: float
    mean_x2: float
    mean_p: float
    mean_p2: float
    var_x: float
    var_p: float
    product: float
    squeezed_x: bool
    squeezed_p: bool
    coherent: bool
    source: str
    margin: float = field(default=SQUEEZE_MARGIN, repr=False, compare=False)

    @classmethod
    def from_moments(
        cls,
        mean_x: float,
        mean_x2: float,
        mean_p2: float,
        source: str,
        mean_p: float = 0.0,
        margin: float = SQUEEZE_MARGIN,
        coherence_tol: float = COHERENCE_TOL,
        var_x: float | None = None,
    ) -> "MomentReport":
        if var_x is None:
            var_x = mean_x2 - mean_x**2
        var_p = mean_p2 - mean_p**2
        product = math.sqrt(max(var_x, 0.0) * max(var_p, 0.0))
        return cls(
            mean_x,
            mean_x2,
            mean_p,
            mean_p2,
            var_x,
            var_p,
            product,
            var_x < 0.5 - margin,
            var_p < 0.5 - margin,
            abs(product - 0.5) < coherence_tol,
            source,
            margin,
        )

    @property
    def x_status(self) -> str:
        return classify(self.var_x, self.margin)

    @property
    def p_status(self) -> str:
        return classify(self.var_p, self.margin)

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in MOMENT_FIELDS}


def envelope_spec(s: EigenSolution, node_count: int | None = None) -> QuadratureSpec:
    """Quadrature rule matched to the squared envelope of `s`."""
    return s.waveform.quadrature_spec(node_count)


def quadrature_moments(
    s: EigenSolution,
    spec: QuadratureSpec | None = None,
    margin: float = SQUEEZE_MARGIN,
    coherence_tol: float = COHERENCE_TOL,
) -> MomentReport:
    """Moments of ``|psi|^2`` by Gauss-Hermite quadrature.

    Parameters
    ----------
    s : EigenSolution
        A unit-normalized eigenfunction.
    spec : QuadratureSpec, optional
        Defaults to ``2n + 16`` nodes centred and scaled on the envelope;
        such a rule is exact for every integrand used here.

    Raises
    ------
    NormalizationError
        If the state does not integrate to one within 1e-10.
    """
    if spec is None:
        spec = envelope_spec(s)
    x, w = spec.nodes()
    psi, dpsi, _ = s.waveform.derivatives(x)
    # undo the rule's weight exp(-t^2)
    undo = np.exp(0.5 * ((x - spec.center) / spec.scale) ** 2)
    psi = psi * undo
    dpsi = dpsi * undo
    dens = w * psi**2
    total = float(np.sum(dens))
    if not abs(total - 1.0) <= NORMALIZATION_TOL:
        raise NormalizationError(f"state integrates to {total!r}, not 1")
    mean_x = float(np.sum(dens * x))
    mean_x2 = float(np.sum(dens * x**2))
    # centred sum avoids cancellation when |<x>| is large
    var_x = float(np.sum(dens * (x - mean_x) ** 2))
    mean_p2 = float(np.sum(w * dpsi**2))
    # psi is real, so <p> vanishes
    return MomentReport.from_moments(
        mean_x, mean_x2, mean_p2, "quadrature", margin=margin, coherence_tol=coherence_tol,
        var_x=var_x,
    )


def shifted_creation_ratio(n: int, lam: float) -> float:
    """``L_{n-1}^(1)(-lam^2) / L_n^(0)(-lam^2)``, zero at ``n = 0``."""
    if n == 0:
        return 0.0
    return laguerre_eval(n - 1, 1.0, -(lam**2)).value / laguerre_eval(n, 0.0, -(lam**2)).value


def shifted_creation_var_x(n: int, lam: float, shifted_index: bool = False) -> float:
    """Position variance of level `n` of the shifted-creation family.

    ``shifted_index=True`` uses ``L_n^(1)`` in the squared ratio instead of
    ``L_{n-1}^(1)``.  That variant is kept only for comparison; it gives
    ``1/2 - 2 lam^2`` at ``n = 0``, which is wrong.
    """
    r = shifted_creation_ratio(n, lam)
    l2 = lam**2
    if shifted_index:
        r_sq = laguerre_eval(n, 1.0, -l2).value / laguerre_eval(n, 0.0, -l2).value
    else:
        r_sq = r
    return 2 * n + 0.5 - (2 * l2 + 1) * r - 2 * l2 * r_sq**2


def closed_form_variance(
    family: Family | str, lam: float, n: int, margin: float = SQUEEZE_MARGIN
) -> MomentReport:
    """Closed-form moments for a preset family.

    Raises
    ------
    NoClosedFormError
        For ``family_III`` above the ground state.
    DomainError
        If `lam` is outside the family's range.
    """
    family = Family(family)
    n = int(n)
    if family is not Family.HARMONIC and not in_domain(family, lam):
        raise DomainError(f"lambda={lam} outside the {family.value} domain")
    half = n + 0.5
    var_x = None
    if family is Family.HARMONIC:
        mx, mx2, mp2 = 0.0, half, half
    elif family is Family.SHIFTED_CREATION:
        r = shifted_creation_ratio(n, lam)
        mx = math.sqrt(2) * lam * r
        mx2 = 2 * n + 0.5 - (2 * lam**2 + 1) * r
        var_x = shifted_creation_var_x(n, lam)
        # from <psi|H|psi> = n + 1/2 with H = H_osc + lam*a
        mp2 = 0.5 + r
    elif family is Family.FAMILY_I:
        mx = -math.sqrt(2) * lam / 3
        mx2 = (2 * lam**2 + half) / 9
        var_x = half / 9
        mp2 = 9 * half
    elif family is Family.FAMILY_II:
        mx, mx2, mp2 = 0.0, half / lam, lam * half
    else:
        if n != 0:
            raise NoClosedFormError(f"no closed-form moments for family_III at n={n}")
        mx = 0.0
        mx2 = 0.5 * (1 - lam) / (1 + lam)
        mp2 = 0.5 * (1 + lam) / (1 - lam)
    return MomentReport.from_moments(mx, mx2, mp2, "closed_form", margin=margin, var_x=var_x)


def ground_state_closed_form(h: HamiltonianCoeffs, margin: float = SQUEEZE_MARGIN) -> MomentReport:
    """Ground-state moments directly from ``A..F``."""
    A, B, C, D, E, F = h.as_tuple()
    mean_x = C + 2 * E * A / (1 - B)
    var_x = A / (B - 1)
    mean_p2 = (B - 1) / (4 * A)
    return MomentReport.from_moments(
        mean_x, var_x + mean_x**2, mean_p2, "closed_form", margin=margin, var_x=var_x
    )


def ground_state_prediction(h: HamiltonianCoeffs, margin: float = SQUEEZE_MARGIN) -> dict[str, str]:
    """Ground-state squeezing from the sign of ``B - (2A + 1)``."""
    d = h.B - (2 * h.A + 1)
    # var_x - 1/2 = d / (2 (1 - B))
    gap = d / (2 * (1 - h.B))
    if abs(gap) <= margin:
        return {"x": BOUNDARY, "p": BOUNDARY}
    if d < 0:
        return {"x": SQUEEZED, "p": UNSQUEEZED}
    return {"x": UNSQUEEZED, "p": SQUEEZED}


def _label_from_gap(gap: float, margin: float) -> str:
    """Label from ``var - 1/2``."""
    if abs(gap) <= margin:
        return BOUNDARY
    return SQUEEZED if gap < 0 else UNSQUEEZED


def threshold_prediction(
    family: Family | str | None, lam: float | None, n: int, h: HamiltonianCoeffs | None = None,
    margin: float = SQUEEZE_MARGIN,
) -> tuple[dict[str, str], list[str]]:
    """Squeezing predicted by the analytic inequalities, independent of quadrature.

    Returns per-axis labels and the names of the criteria used.  Axes with
    no applicable criterion are omitted.
    """
    pred: dict[str, str] = {}
    used: list[str] = []

    def merge(new: dict[str, str], name: str) -> None:
        for axis, label in new.items():
            if axis in pred and pred[axis] != label:
                raise AssertionError(f"criteria disagree on {axis}: {pred[axis]} vs {label} ({name})")
            pred[axis] = label
        used.append(name)

    if n == 0 and h is not None:
        merge(ground_state_prediction(h, margin), "ground_state_B_vs_2A+1")
    if family is not None:
        family = Family(family)
        if family is Family.FAMILY_II:
            merge({"x": _label_from_gap((2 * n + 1 - lam) / (2 * lam), margin)}, "lambda_vs_2n+1")
        elif family is Family.FAMILY_I:
            merge({"x": _label_from_gap((2 * n + 1 - 9) / 18, margin)}, "levels_0_to_3")
        elif family is Family.FAMILY_III and n == 0:
            if abs(lam) <= margin:
                new = {"x": BOUNDARY, "p": BOUNDARY}
            elif 0 < lam < 1:
                new = {"x": SQUEEZED, "p": UNSQUEEZED}
            else:
                new = {"x": UNSQUEEZED, "p": SQUEEZED}
            merge(new, "lambda_sign_range")
        elif family is Family.SHIFTED_CREATION:
            merge(
                {"x": _label_from_gap(shifted_creation_var_x(n, lam) - 0.5, margin)},
                "laguerre_variance",
            )
    return pred, used


@dataclass(frozen=True)
class SqueezeReport:
    moments: MomentReport
    prediction: dict[str, str]
    criteria: list[str]

    @property
    def observed(self) -> dict[str, str]:
        return {"x": self.moments.x_status, "p": self.moments.p_status}

    @property
    def agreement(self) -> bool | None:
        if not self.prediction:
            return None
        obs = self.observed
        return all(obs[axis] == label for axis, label in self.prediction.items())

    def prediction_string(self) -> str:
        return ";".join(f"{axis}:{self.prediction[axis]}" for axis in ("x", "p") if axis in self.prediction)


def squeeze_report(
    h: HamiltonianCoeffs,
    family: Family | str | None = None,
    lam: float | None = None,
    n: int = 0,
    spec: QuadratureSpec | None = None,
    margin: float = SQUEEZE_MARGIN,
) -> SqueezeReport:
    """Quadrature moments of level `n` together with the analytic squeezing verdicts."""
    s = eigenfunction(h, n)
    if spec is not None and spec.node_count < minimum_node_count(n):
        raise ValueError(f"at least {minimum_node_count(n)} nodes needed for level {n}")
    moments = quadrature_moments(s, spec, margin=margin)
    pred, used = threshold_prediction(family, lam, n, h, margin)
    return SqueezeReport(moments, pred, used)


def preset_squeeze_report(family: Family | str, lam: float, n: int, **kw) -> SqueezeReport:
    return squeeze_report(preset_coeffs(family, lam), family, lam, n, **kw)


def shifted_creation_radius(n: int, lam_max: float = 10.0, samples: int = 2001) -> float:
    """Half-width of the lambda interval around 0 without x-squeezing at level `n`.

    Located as the last sign change of ``var_x - 1/2`` on ``[0, lam_max]``
    and refined with Brent's method.
    """
    if n < 1:
        raise ValueError("the ground state is never squeezed; radius undefined for n = 0")
    f = lambda lam: shifted_creation_var_x(n, lam) - 0.5  # noqa: E731
    grid = np.linspace(0.0, lam_max, samples)
    vals = np.array([f(v) for v in grid])
    changes = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if changes.size == 0:
        raise ValueError(f"no squeezing onset found below lambda={lam_max}")
    i = changes[-1]
    if vals[i + 1] == 0.0:
        return float(grid[i + 1])
    return float(brentq(f, grid[i], grid[i + 1], xtol=1e-14, rtol=1e-14))
