"""Command-line front end.

    squeezelab analyze  --family family_II --lambda 4 --n-range 0:2
    squeezelab scan     --family family_II --lambda-range 0.5:10:0.5 --n-range 0:3 --format csv
    squeezelab validate --samples 100 --seed 42
    squeezelab presets

Settings come from command-line flags, then a flat JSON config file
(``--config`` or ``$SQUEEZELAB_CONFIG``), then built-in defaults.
Exit status: 0 success, 1 validation failure, 2 invalid configuration or
parameters.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .eigensystem import admissibility, change_of_variable, eigenfunction, energy_general
from .errors import (
    AdmissibilityError,
    ConstraintError,
    DomainError,
    InvalidParameterError,
    NoClosedFormError,
)
from .moments import (
    MOMENT_FIELDS,
    SQUEEZE_MARGIN,
    closed_form_variance,
    ground_state_closed_form,
    shifted_creation_radius,
    squeeze_report,
)
from .operator_algebra import (
    PRESET_TOL,
    USER_TOL,
    DeformationParams,
    Family,
    adjoint,
    family_domain,
    hamiltonian_coeffs,
    in_domain,
    is_adjoint_pair,
    make_ladder_pair,
    preset,
    preset_coeffs,
)
from .quadrature import QuadratureSpec, minimum_node_count
from .report import (
    ScanResult,
    emit,
    parse_lambda_range,
    parse_n_range,
    scan_csv,
    scan_json,
    squeezing_regions,
    to_csv,
    to_json,
    write_plotdata,
)
from .validator import (
    SuiteTolerances,
    gram_matrix,
    hamiltonian_residual,
    preset_checks,
    property_suite,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
CONFIG_ENV = "SQUEEZELAB_CONFIG"

DEFAULT_LAMBDA = {
    Family.HARMONIC: 0.0,
    Family.SHIFTED_CREATION: 1.0,
    Family.FAMILY_I: 1.0,
    Family.FAMILY_II: 4.0,
    Family.FAMILY_III: 0.5,
}

DEFAULTS = {
    "family": None,
    "c1": 0.0, "c2": 0.0, "c3": 0.0, "c4": 0.0, "c5": 0.0, "c6": 0.0,
    "lambda": None,
    "lambda_range": None,
    "n": None,
    "n_range": None,
    "tol": None,
    "margin": SQUEEZE_MARGIN,
    "nodes": None,
    "seed": 42,
    "samples": 100,
    "jobs": 1,
    "points": 513,
    "out": None,
    "format": "json",
}


class ConfigError(Exception):
    pass


def _shared(p: argparse.ArgumentParser) -> None:
    sup = argparse.SUPPRESS
    p.add_argument("--family", "--preset", dest="family", choices=[f.value for f in Family],
                   default=sup, help="preset family")
    for k in range(1, 7):
        p.add_argument(f"--c{k}", type=float, default=sup, help=f"raw deformation parameter c{k}")
    p.add_argument("--lambda", dest="lambda", type=float, default=sup)
    p.add_argument("--lambda-range", dest="lambda_range", default=sup, metavar="START:STOP:STEP",
                   help="inclusive range; write --lambda-range=-0.9:0.9:0.1 for negative starts")
    p.add_argument("--n", type=int, default=sup, help="single level")
    p.add_argument("--n-range", dest="n_range", default=sup, metavar="A:B", help="inclusive levels")
    p.add_argument("--tol", type=float, default=sup, help="validation tolerance override")
    p.add_argument("--margin", type=float, default=sup, help="squeezing boundary margin")
    p.add_argument("--nodes", type=int, default=sup, help="Gauss-Hermite node count override")
    p.add_argument("--seed", type=int, default=sup)
    p.add_argument("--samples", type=int, default=sup, help="property-suite sample count")
    p.add_argument("--jobs", type=int, default=sup, help="worker threads for scans")
    p.add_argument("--points", type=int, default=sup, help="plot-data sample count")
    p.add_argument("--out", default=sup, help="output file (csv/json) or directory (plotdata)")
    p.add_argument("--format", choices=["csv", "json", "plotdata"], default=sup)
    p.add_argument("--config", default=sup, help="flat JSON config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="squeezelab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("analyze", "analyze one configuration"),
        ("scan", "sweep lambda and levels for squeezing regions"),
        ("validate", "run the validation battery"),
        ("presets", "list the preset families"),
    ):
        _shared(sub.add_parser(name, help=helptext))
    return parser


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a flat JSON object")
    out = {}
    for key, value in data.items():
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(value, (dict, list)):
            raise ConfigError(f"config value for {key!r} must be a scalar")
        out[key] = value
    return out


def resolve(args: argparse.Namespace) -> dict:
    cli = {k: v for k, v in vars(args).items() if k != "command"}
    path = cli.pop("config", None) or os.environ.get(CONFIG_ENV)
    cfg = dict(DEFAULTS)
    cfg.update(load_config(path))
    cfg.update(cli)
    _check_config(cfg)
    return cfg


def _check_config(cfg: dict) -> None:
    if cfg["family"] is not None and cfg["family"] not in {f.value for f in Family}:
        raise ConfigError(f"unknown family {cfg['family']!r}")
    if cfg["tol"] is not None and not cfg["tol"] > 0:
        raise ConfigError("tol must be positive")
    if not cfg["margin"] > 0:
        raise ConfigError("margin must be positive")
    if cfg["samples"] < 1 or cfg["jobs"] < 1 or cfg["points"] < 2:
        raise ConfigError("samples, jobs must be positive and points at least 2")
    if cfg["format"] not in ("csv", "json", "plotdata"):
        raise ConfigError(f"unknown format {cfg['format']!r}")


def _levels(cfg: dict, default: str) -> list[int]:
    if cfg["n_range"] is not None:
        return parse_n_range(str(cfg["n_range"]))
    if cfg["n"] is not None:
        return parse_n_range(str(cfg["n"]))
    return parse_n_range(default)


def _lambdas(cfg: dict, family: Family) -> list[float]:
    if cfg["lambda_range"] is not None:
        return parse_lambda_range(str(cfg["lambda_range"]))
    if cfg["lambda"] is not None:
        return [float(cfg["lambda"])]
    return [DEFAULT_LAMBDA[family]]


def _spec_for(cfg: dict, s) -> QuadratureSpec | None:
    if cfg["nodes"] is None:
        return None
    if cfg["nodes"] < minimum_node_count(s.n):
        raise ConfigError(f"--nodes must be at least {minimum_node_count(s.n)} for level {s.n}")
    return s.waveform.quadrature_spec(cfg["nodes"])


def _write(cfg: dict, text: str) -> None:
    result = emit(cfg["format"], text, cfg["out"])
    if cfg["out"] is None:
        sys.stdout.write(result)
    else:
        print(f"wrote {result}", file=sys.stderr)


# --------------------------------------------------------------------------
# analyze


def _target(cfg: dict):
    """Resolve (label, lambda, c-vector) from either a family or raw c's."""
    if cfg["family"] is not None:
        family = Family(cfg["family"])
        lam = DEFAULT_LAMBDA[family] if cfg["lambda"] is None else float(cfg["lambda"])
        return family, lam, preset(family, lam, check_domain=False)
    c = DeformationParams(*(float(cfg[f"c{k}"]) for k in range(1, 7)))
    return None, None, c


def cmd_analyze(cfg: dict) -> int:
    family, lam, c = _target(cfg)
    h = hamiltonian_coeffs(c, tol=USER_TOL if family is None else PRESET_TOL)
    verdict = admissibility(h)
    if not verdict:
        raise AdmissibilityError(verdict.diagnostic)
    b, bp = make_ladder_pair(c)
    p, q = change_of_variable(h)
    margin = cfg["margin"]
    levels = []
    solutions = []
    for n in _levels(cfg, "0:2"):
        s = eigenfunction(h, n)
        solutions.append(s)
        rep = squeeze_report(h, family, lam, n, spec=_spec_for(cfg, s), margin=margin)
        closed = None
        try:
            if family is not None:
                closed = closed_form_variance(family, lam, n, margin=margin).to_dict()
            elif n == 0:
                closed = ground_state_closed_form(h, margin=margin).to_dict()
        except (NoClosedFormError, DomainError):
            closed = None
        levels.append({
            "n": n,
            "energy": s.energy,
            "energy_formula": energy_general(h, p, q, n),
            "residual": hamiltonian_residual(h, s).residual,
            "quadrature": rep.moments.to_dict(),
            "closed_form": closed,
            "x_status": rep.moments.x_status,
            "p_status": rep.moments.p_status,
            "threshold_prediction": rep.prediction_string(),
            "agreement": rep.agreement,
        })

    if cfg["format"] == "plotdata":
        outdir = Path(cfg["out"] or ".")
        label = family.value if family else "raw"
        for s in solutions:
            path = write_plotdata(outdir, label, lam, s, cfg["points"])
            print(f"wrote {path}", file=sys.stderr)
        return EXIT_OK

    if cfg["format"] == "csv":
        cols = ("n", "energy", "energy_formula", "residual") + MOMENT_FIELDS + (
            "threshold_prediction", "agreement")
        rows = [{**{k: lv[k] for k in ("n", "energy", "energy_formula", "residual",
                                       "threshold_prediction", "agreement")},
                 **lv["quadrature"]} for lv in levels]
        _write(cfg, to_csv(rows, cols))
        return EXIT_OK

    payload = {
        "family": family.value if family else None,
        "lambda": lam,
        "params": dict(zip(("c1", "c2", "c3", "c4", "c5", "c6"), c.as_tuple())),
        "coefficients": dict(zip("ABCDEF", h.as_tuple())),
        "self_adjoint": h.is_self_adjoint(),
        "adjoint_pair": is_adjoint_pair(b, bp, tol=1e-12),
        "admissibility": verdict.diagnostic,
        "change_of_variable": {"p": p, "q": q},
        "levels": levels,
    }
    _write(cfg, to_json(payload))
    return EXIT_OK


# --------------------------------------------------------------------------
# scan


def _scan_point(args):
    family, lam, n, cfg = args
    if not in_domain(family, lam) and family is not Family.HARMONIC:
        return ScanResult.skipped(family.value, lam, n)
    h = preset_coeffs(family, lam)
    s = eigenfunction(h, n)
    rep = squeeze_report(h, family, lam, n, spec=_spec_for(cfg, s), margin=cfg["margin"])
    return ScanResult.from_report(family.value, lam, n, rep)


def run_scan(cfg: dict) -> tuple[list[ScanResult], list[dict]]:
    if cfg["family"] is None:
        raise ConfigError("scan needs --family")
    family = Family(cfg["family"])
    lams = _lambdas(cfg, family)
    levels = _levels(cfg, "0:3")
    grid = [(family, lam, n, cfg) for lam in lams for n in levels]
    if cfg["jobs"] > 1:
        with ThreadPoolExecutor(max_workers=cfg["jobs"]) as pool:
            rows = list(pool.map(_scan_point, grid))
    else:
        rows = [_scan_point(g) for g in grid]
    rows.sort(key=lambda r: (r.lam, r.n))
    if all(r.is_skipped for r in rows):
        lo, hi = family_domain(family)
        raise DomainError(f"no admissible grid point: {family.value} needs {lo} < lambda < {hi}")

    expected = None
    if family is Family.FAMILY_II:
        expected = {n: 2.0 * n + 1.0 for n in levels}
    elif family is Family.SHIFTED_CREATION:
        expected = {n: shifted_creation_radius(n) for n in levels if n >= 1}
    regions = squeezing_regions(rows, "x", expected) + squeezing_regions(rows, "p")
    return rows, regions


def cmd_scan(cfg: dict) -> int:
    rows, regions = run_scan(cfg)
    if cfg["format"] == "plotdata":
        outdir = Path(cfg["out"] or ".")
        for r in rows:
            if not r.is_skipped:
                s = eigenfunction(preset_coeffs(r.family, r.lam), r.n)
                write_plotdata(outdir, r.family, r.lam, s, cfg["points"])
        print(f"wrote {sum(not r.is_skipped for r in rows)} files to {outdir}", file=sys.stderr)
        return EXIT_OK
    if cfg["format"] == "csv":
        _write(cfg, scan_csv(rows))
        for entry in regions:
            for reg in entry["regions"]:
                print(
                    f"n={entry['n']} {entry['axis']}-squeezed for lambda in "
                    f"[{reg['start']}, {reg['end']}], onset bracket {reg['onset_bracket']}",
                    file=sys.stderr,
                )
    else:
        _write(cfg, scan_json(rows, regions))
    return EXIT_OK


# --------------------------------------------------------------------------
# validate


def run_validation(cfg: dict) -> dict:
    tol = SuiteTolerances() if cfg["tol"] is None else SuiteTolerances.uniform(cfg["tol"])
    gram_tol = 1e-10 if cfg["tol"] is None else cfg["tol"]
    suite = property_suite(cfg["samples"], cfg["seed"], tol)

    if cfg["family"] is not None:
        family = Family(cfg["family"])
        lam = DEFAULT_LAMBDA[family] if cfg["lambda"] is None else float(cfg["lambda"])
        targets = [(family, lam)]
    else:
        targets = list(DEFAULT_LAMBDA.items())
    checks = []
    for family, lam in targets:
        checks.extend(preset_checks(family, lam, 8, tol, gram_tol))
        h = preset_coeffs(family, lam)
        if not h.is_self_adjoint(PRESET_TOL):
            off = gram_matrix(preset_coeffs(family, 0.5), 4).off_diagonal_max()
            checks.append({
                "name": f"{family.value}:non_orthogonal", "passed": off > 1e-3,
                "value": off, "threshold": 1e-3, "params": [0.5], "detail": "off-diagonal must exceed",
                "margin": off - 1e-3,
            })
    preset_dicts = [c if isinstance(c, dict) else c.to_dict() for c in checks]
    failures = suite.to_dict()["failures"] + [c for c in preset_dicts if not c["passed"]]
    return {
        "passed": not failures,
        "property_suite": suite.to_dict(),
        "preset_checks": preset_dicts,
        "failures": failures,
    }


def cmd_validate(cfg: dict) -> int:
    report = run_validation(cfg)
    if cfg["format"] == "csv":
        cols = ("name", "passed", "value", "threshold", "margin")
        _write(cfg, to_csv(report["preset_checks"] + report["failures"], cols))
    else:
        _write(cfg, to_json(report))
    n_fail = len(report["failures"])
    print("validation " + ("passed" if report["passed"] else f"FAILED ({n_fail} failures)"),
          file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# --------------------------------------------------------------------------
# presets


def preset_table(lam: float | None = None) -> list[dict]:
    rows = []
    for family, default in DEFAULT_LAMBDA.items():
        value = default if lam is None else lam
        lo, hi = family_domain(family)
        row = {"family": family.value, "lambda": value, "domain": f"({lo}, {hi})"}
        if family is not Family.HARMONIC and not in_domain(family, value):
            row["error"] = "lambda outside domain"
            rows.append(row)
            continue
        c = preset(family, value)
        b, bp = make_ladder_pair(c)
        h = preset_coeffs(family, value)
        row.update(dict(zip(("c1", "c2", "c3", "c4", "c5", "c6"), c.as_tuple())))
        row.update(dict(zip("ABCDEF", h.as_tuple())))
        row["self_adjoint"] = h.is_self_adjoint()
        row["adjoint_pair"] = is_adjoint_pair(b, bp, tol=1e-12)
        row["b_dagger"] = [adjoint(b).mu, adjoint(b).nu, adjoint(b).kappa]
        rows.append(row)
    return rows


def cmd_presets(cfg: dict) -> int:
    rows = preset_table(cfg["lambda"])
    if cfg["format"] == "csv":
        cols = ("family", "lambda", "domain", "c1", "c2", "c3", "c4", "c5", "c6",
                "A", "B", "C", "D", "E", "F", "self_adjoint", "adjoint_pair")
        _write(cfg, to_csv(({k: r.get(k) for k in cols} for r in rows), cols))
    else:
        _write(cfg, to_json(rows))
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "scan": cmd_scan, "validate": cmd_validate, "presets": cmd_presets}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except (ConfigError, ValueError, AdmissibilityError, ConstraintError, DomainError,
            InvalidParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
