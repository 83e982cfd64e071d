"""Scan rows, range parsing and CSV / JSON / plot-data emission."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, fields
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .eigensystem import EigenSolution
from .moments import BOUNDARY, SQUEEZED, MomentReport, SqueezeReport

SCAN_FIELDS = (
    "family",
    "lambda",
    "n",
    "var_x",
    "var_p",
    "product",
    "squeezed_x",
    "squeezed_p",
    "coherent",
    "threshold_prediction",
    "agreement",
)

SKIPPED = "skipped"


@dataclass(frozen=True)
class ScanResult:
    """One (family, lambda, n) grid point.

    ``squeezed_x`` / ``squeezed_p`` are ``True``/``False``, or the string
    ``"boundary"`` when the variance sits on 1/2 within the margin, or
    ``"skipped"`` for lambda outside the family's domain (numeric fields are
    then ``None``).
    """

    family: str
    lam: float
    n: int
    var_x: float | None
    var_p: float | None
    product: float | None
    squeezed_x: bool | str
    squeezed_p: bool | str
    coherent: bool | None
    threshold_prediction: str
    agreement: bool | None

    @classmethod
    def from_report(cls, family: str, lam: float, n: int, rep: SqueezeReport) -> "ScanResult":
        m = rep.moments

        def flag(status: str):
            return BOUNDARY if status == BOUNDARY else status == SQUEEZED

        return cls(
            family, lam, n, m.var_x, m.var_p, m.product,
            flag(m.x_status), flag(m.p_status), m.coherent,
            rep.prediction_string(), rep.agreement,
        )

    @classmethod
    def skipped(cls, family: str, lam: float, n: int) -> "ScanResult":
        return cls(family, lam, n, None, None, None, SKIPPED, SKIPPED, None, "", None)

    @property
    def is_skipped(self) -> bool:
        return self.squeezed_x == SKIPPED

    def to_dict(self) -> dict:
        values = [getattr(self, f.name) for f in fields(self)]
        return dict(zip(SCAN_FIELDS, values))

    @classmethod
    def from_dict(cls, d: dict) -> "ScanResult":
        return cls(*(d[k] for k in SCAN_FIELDS))


# --------------------------------------------------------------------------
# ranges


def parse_lambda_range(text: str) -> list[float]:
    """Parse ``start:stop:step``; the stop value is kept if it lies within
    half a step of the grid.  Decimal arithmetic keeps grid values such as
    0 or 2n+1 exact."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"lambda range must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (Decimal(p.strip()) for p in parts)
    except InvalidOperation as exc:
        raise ValueError(f"malformed lambda range {text!r}") from exc
    if not step > 0:
        raise ValueError("lambda step must be positive")
    if stop < start:
        raise ValueError("lambda range is empty (stop < start)")
    out = []
    k = 0
    while start + k * step <= stop + step / 2:
        out.append(float(start + k * step))
        k += 1
    return out


def parse_n_range(text: str) -> list[int]:
    """``a:b`` inclusive, or a single level."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError as exc:
        raise ValueError(f"level range must be a:b, got {text!r}") from exc
    if lo < 0 or hi < lo:
        raise ValueError(f"empty or negative level range {text!r}")
    return list(range(lo, hi + 1))


# --------------------------------------------------------------------------
# formatting


def format_float(x: float) -> str:
    """17 significant digits: round-trips every double."""
    return format(x, ".17g")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def to_csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_csv_cell(row[c]) for c in columns])
    return buf.getvalue()


def to_json(payload) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def scan_csv(rows: Sequence[ScanResult]) -> str:
    return to_csv((r.to_dict() for r in rows), SCAN_FIELDS)


def scan_json(rows: Sequence[ScanResult], regions: list | None = None, config: dict | None = None) -> str:
    payload = {"rows": [r.to_dict() for r in rows]}
    if regions is not None:
        payload["regions"] = regions
    if config is not None:
        payload["config"] = config
    return to_json(payload)


def scan_from_json(text: str) -> list[ScanResult]:
    return [ScanResult.from_dict(d) for d in json.loads(text)["rows"]]


def moment_json(report: MomentReport) -> str:
    return to_json(report.to_dict())


# --------------------------------------------------------------------------
# plot data


def waveform_samples(s: EigenSolution, points: int = 513, half_width: float = 8.0):
    """Samples of psi over ``center +- half_width / sqrt(g2)``."""
    wf = s.waveform
    x = np.linspace(wf.center - half_width * wf.width, wf.center + half_width * wf.width, points)
    return x, wf(x)


def plotdata_text(x: np.ndarray, y: np.ndarray) -> str:
    return "".join(f"{format_float(float(a))} {format_float(float(b))}\n" for a, b in zip(x, y))


def plotdata_filename(family: str, lam: float | None, n: int) -> str:
    tag = "raw" if lam is None else repr(float(lam))
    return f"psi_{family}_lambda{tag}_n{n}.dat"


def write_plotdata(outdir: Path, family: str, lam: float | None, s: EigenSolution,
                   points: int = 513) -> Path:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    x, y = waveform_samples(s, points)
    path = outdir / plotdata_filename(family, lam, s.n)
    path.write_text(plotdata_text(x, y), encoding="utf-8")
    return path


def emit(fmt: str, payload, out: Path | None):
    """Write `payload` (already formatted text) to `out` or return it for stdout."""
    if fmt not in ("csv", "json", "plotdata"):
        raise ValueError(f"unknown format {fmt!r}")
    if out is None:
        return payload
    out = Path(out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(payload, encoding="utf-8", newline="")
    return out


# --------------------------------------------------------------------------
# region summaries


def squeezing_regions(rows: Sequence[ScanResult], axis: str = "x",
                      expected_onset: dict[int, float] | None = None) -> list[dict]:
    """Contiguous runs of squeezed rows per level, ordered by lambda.

    Each run records its first and last lambda and the grid bracket
    ``[previous lambda, first lambda]`` around its onset.  When an expected
    onset is given for a level, ``onset_ok`` reports whether it falls in
    that bracket.
    """
    attr = "squeezed_x" if axis == "x" else "squeezed_p"
    by_n: dict[int, list[ScanResult]] = {}
    for r in rows:
        if not r.is_skipped:
            by_n.setdefault(r.n, []).append(r)
    out = []
    for n in sorted(by_n):
        seq = sorted(by_n[n], key=lambda r: r.lam)
        runs = []
        prev = None
        current = None
        for r in seq:
            if getattr(r, attr) is True:
                if current is None:
                    current = {"start": r.lam, "end": r.lam,
                               "onset_bracket": [prev.lam if prev else None, r.lam]}
                    runs.append(current)
                current["end"] = r.lam
            else:
                current = None
            prev = r
        entry = {"n": n, "axis": axis, "regions": runs}
        if expected_onset and n in expected_onset and runs:
            target = expected_onset[n]
            lo, hi = runs[-1]["onset_bracket"]
            entry["expected_onset"] = target
            entry["onset_ok"] = (lo is None or lo <= target + 1e-12) and target < hi
        out.append(entry)
    return out


def is_finite_row(r: ScanResult) -> bool:
    return not r.is_skipped and all(
        v is not None and math.isfinite(v) for v in (r.var_x, r.var_p, r.product)
    )
