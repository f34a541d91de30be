"""Command-line interface.

Subcommands: threshold (closed-form constants), period (orbit period at
one energy or over a scan), solve (profile of prescribed period),
bifurcate (branch diagram scan), verify (recheck a stored profile).

Output is deterministic byte for byte: floats are rendered with 17
significant digits, newlines are always "\\n", and scan orders are
fixed regardless of worker count.  Exit codes: 0 success, 2 usage or
domain errors, 3 threshold violations and failed verification, 4
numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .bifurcation import scan_branches
from .errors import (
    BudgetExceeded,
    DomainError,
    EnergyOutOfBand,
    NoBracket,
    NonPositiveWarp,
    PositivityViolation,
    QuadratureNonConvergence,
    ThresholdViolation,
    TooFewSamples,
)
from .geometry import conformal_field_check, curvature_audit
from .model import ModelParams, derive_constants
from .period import energy_grid, period_quadrature, period_scan
from .solver import SAMPLE_COLUMNS, SolutionProfile, audit_profile, solve_period

__all__ = ["main"]


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        value = float(v)
        if not math.isfinite(value):
            raise DomainError(f"cannot serialize non-finite value {value}")
        return format(value, ".17g")
    if isinstance(v, str):
        return json.dumps(v)
    raise TypeError(f"not a scalar: {type(v)!r}")


def _is_scalar(v) -> bool:
    return v is None or isinstance(
        v, (bool, np.bool_, int, np.integer, float, np.floating, str)
    )


def _render(obj, level: int = 0) -> str:
    """Recursive JSON renderer with fixed float formatting."""
    if _is_scalar(obj):
        return _scalar(obj)
    ind = "  " * level
    nxt = "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [f"{nxt}{json.dumps(str(k))}: {_render(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(parts) + "\n" + ind + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(_is_scalar(v) for v in seq):
            return "[" + ", ".join(_scalar(v) for v in seq) + "]"
        parts = [f"{nxt}{_render(v, level + 1)}" for v in seq]
        return "[\n" + ",\n".join(parts) + "\n" + ind + "]"
    raise TypeError(f"cannot render {type(obj)!r}")


def _csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_scalar(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args) -> ModelParams:
    return ModelParams(n=args.n, R=args.R, Rt=args.Rt)


def profile_to_doc(profile: SolutionProfile) -> dict:
    """JSON document for a solved profile; the inverse of doc_to_profile."""
    return {
        "params": {"n": profile.params.n, "R": profile.params.R, "Rt": profile.params.Rt},
        "T": profile.T,
        "c": profile.c,
        "root_count": profile.root_count,
        "residual_sup": profile.residual_sup,
        "closure_error": profile.closure_error,
        "columns": list(SAMPLE_COLUMNS),
        "samples": [list(row) for row in profile.samples],
    }


def doc_to_profile(doc: dict) -> SolutionProfile:
    try:
        raw = doc["params"]
        params = ModelParams(n=raw["n"], R=raw["R"], Rt=raw["Rt"])
        samples = np.asarray(doc["samples"], dtype=float)
        if samples.ndim != 2 or samples.shape[1] != len(SAMPLE_COLUMNS):
            raise DomainError(
                f"samples must be rows of {len(SAMPLE_COLUMNS)} numbers, "
                f"got shape {samples.shape}"
            )
        columns = doc.get("columns")
        if columns is not None and list(columns) != list(SAMPLE_COLUMNS):
            raise DomainError(f"unexpected column layout {columns}")
        return SolutionProfile(
            params=params,
            T=float(doc["T"]),
            c=float(doc["c"]),
            samples=samples,
            residual_sup=float(doc.get("residual_sup", 0.0)),
            closure_error=float(doc.get("closure_error", 0.0)),
            root_count=int(doc.get("root_count", 1)),
        )
    except (KeyError, TypeError, ValueError) as err:
        if isinstance(err, DomainError):
            raise
        raise DomainError(f"malformed profile document: {err}") from err


def cmd_threshold(args) -> int:
    params = _params(args)
    consts = derive_constants(params)
    doc = {
        "n": params.n,
        "R": params.R,
        "Rt": params.Rt,
        "f_star": consts.f_star,
        "x_star": consts.x_star,
        "omega": consts.omega,
        "T0": consts.T0,
        "c_min": consts.c_min,
        "c_crit": consts.c_crit,
    }
    if args.json:
        _emit(_render(doc), args.out)
    else:
        _emit("\n".join(f"{k} = {_scalar(v)}" for k, v in doc.items()), args.out)
    return 0


def cmd_period(args) -> int:
    params = _params(args)
    header = ["c", "a", "b", "T", "amplitude"]
    if args.energy is not None:
        spec = period_quadrature(args.energy, params, rtol=args.rtol)
        _emit(_csv(header, [(spec.c, spec.a, spec.b, spec.T, spec.amplitude)]), args.out)
        return 0
    size = args.scan
    if args.band is not None:
        lo, hi = args.band
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DomainError(f"band must be lo < hi, got {lo}, {hi}")
        grid = np.linspace(lo, hi, size)
    else:
        grid = energy_grid(params, size, mode="log")
    scan = period_scan(grid, params, rtol=args.rtol, workers=args.threads)
    for idx, err in scan.failures:
        print(f"# point {idx} at c = {_scalar(grid[idx])} failed: {err}", file=sys.stderr)
    rows = [
        (s.c, s.a, s.b, s.T, s.amplitude) for s in scan.entries if s is not None
    ]
    if not rows:
        raise QuadratureNonConvergence("every point of the period scan failed")
    _emit(_csv(header, rows), args.out)
    return 0


def cmd_solve(args) -> int:
    params = _params(args)
    profile = solve_period(
        args.period,
        params,
        args.samples,
        table_size=args.table_size,
        quad_rtol=args.rtol,
        workers=args.threads,
    )
    _emit(_render(profile_to_doc(profile)), args.out)
    return 0


def cmd_bifurcate(args) -> int:
    params = _params(args)
    diagram = scan_branches(
        args.tmax,
        params,
        args.grid,
        table_size=args.table_size,
        quad_rtol=args.rtol,
        workers=args.threads,
    )
    rows = [
        (r.T, r.k, r.tau, r.c, r.amplitude, r.f_min, r.f_max) for r in diagram.rows
    ]
    _emit(_csv(["T", "k", "tau", "c", "amplitude", "f_min", "f_max"], rows), args.out)
    if args.points:
        _emit(_csv(["k", "T"], [(bp.k, bp.T) for bp in diagram.branch_points]), args.points)
    lo, hi = diagram.band
    print(
        f"# attained per-wrap periods: [{_scalar(lo)}, {_scalar(hi)}]; "
        f"threshold T0 = {_scalar(diagram.T0)}; "
        f"{len(diagram.rows)} rows, {len(diagram.branch_points)} branch points, "
        f"{len(diagram.failures)} misses"
        + ("; isochronous degenerate case" if diagram.degenerate_isochronous else ""),
        file=sys.stderr,
    )
    return 0


def cmd_verify(args) -> int:
    try:
        with open(args.infile, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as err:
        raise DomainError(f"cannot read {args.infile}: {err}") from err
    except json.JSONDecodeError as err:
        raise DomainError(f"{args.infile} is not valid JSON: {err}") from err
    profile = doc_to_profile(doc)
    curvature = curvature_audit(profile, rel_tol=args.tol)
    conformal = conformal_field_check(profile)
    audit = audit_profile(profile)
    passed = bool(
        curvature.passed and audit.ok and conformal.squared_convention_ok
    )
    report = {
        "params": {
            "n": profile.params.n,
            "R": profile.params.R,
            "Rt": profile.params.Rt,
        },
        "T": profile.T,
        "c": profile.c,
        "curvature": {
            "max_dev": curvature.max_dev,
            "max_at": curvature.max_at,
            "tol_abs": curvature.tol_abs,
            "passed": curvature.passed,
        },
        "conformal": {
            "sup_tt": conformal.sup_tt,
            "sup_fiber_sq": conformal.sup_fiber_sq,
            "sup_fiber_lin": conformal.sup_fiber_lin,
            "reference": conformal.reference,
            "squared_convention_ok": conformal.squared_convention_ok,
            "linear_convention_ok": conformal.linear_convention_ok,
        },
        "audit": {
            "chain_sup": audit.chain_sup,
            "fd_sup": audit.fd_sup,
            "energy_sup": audit.energy_sup,
            "breaches": list(audit.breaches),
            "flagged_index": audit.flagged_index,
            "ok": audit.ok,
        },
        "passed": passed,
    }
    _emit(_render(report), args.out)
    return 0 if passed else 3


def _add_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="total dimension, >= 3")
    parser.add_argument("--R", type=float, required=True, help="fiber scalar curvature, > 0")
    parser.add_argument("--Rt", type=float, required=True, help="target scalar curvature, > 0")


def _add_out(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="write output to this file instead of stdout")


def _band(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(","))
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"band must be 'lo,hi', got {text!r}") from err
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="warpcsc",
        description="Constant-scalar-curvature warped metrics on the circle",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_thr = sub.add_parser("threshold", help="closed-form constants and the period threshold")
    _add_params(p_thr)
    p_thr.add_argument("--json", action="store_true", help="emit JSON instead of text lines")
    _add_out(p_thr)
    p_thr.set_defaults(handler=cmd_threshold)

    p_per = sub.add_parser("period", help="orbit period at one energy or over a scan")
    _add_params(p_per)
    which = p_per.add_mutually_exclusive_group(required=True)
    which.add_argument("--energy", type=float, default=None, help="single energy c")
    which.add_argument("--scan", type=int, default=None, metavar="N",
                       help="scan N energies (default spacing: log across the band)")
    p_per.add_argument("--band", type=_band, default=None, metavar="LO,HI",
                       help="scan this energy interval linearly instead")
    p_per.add_argument("--rtol", type=float, default=1e-10, help="quadrature relative tolerance")
    p_per.add_argument("--threads", type=int, default=1, help="parallel scan workers")
    _add_out(p_per)
    p_per.set_defaults(handler=cmd_period)

    p_sol = sub.add_parser("solve", help="solve for a profile with the prescribed period")
    _add_params(p_sol)
    p_sol.add_argument("--period", type=float, required=True, help="target circle period T")
    p_sol.add_argument("--samples", type=int, default=512, help="samples per period, >= 16")
    p_sol.add_argument("--table-size", type=int, default=160, help="period table resolution")
    p_sol.add_argument("--rtol", type=float, default=1e-10, help="quadrature relative tolerance")
    p_sol.add_argument("--threads", type=int, default=1, help="parallel table workers")
    _add_out(p_sol)
    p_sol.set_defaults(handler=cmd_solve)

    p_bif = sub.add_parser("bifurcate", help="branch diagram over circle periods")
    _add_params(p_bif)
    p_bif.add_argument("--tmax", type=float, required=True, help="largest circle period scanned")
    p_bif.add_argument("--grid", type=int, default=400, help="number of grid points above T0")
    p_bif.add_argument("--table-size", type=int, default=256, help="period table resolution")
    p_bif.add_argument("--rtol", type=float, default=1e-9, help="quadrature relative tolerance")
    p_bif.add_argument("--threads", type=int, default=1, help="parallel table workers")
    p_bif.add_argument("--points", default=None, metavar="FILE",
                       help="also write detected branch points as CSV to FILE")
    _add_out(p_bif)
    p_bif.set_defaults(handler=cmd_bifurcate)

    p_ver = sub.add_parser("verify", help="recheck a stored profile document")
    p_ver.add_argument("--in", dest="infile", required=True, help="profile JSON file")
    p_ver.add_argument("--tol", type=float, default=1e-4,
                       help="curvature tolerance relative to Rt")
    _add_out(p_ver)
    p_ver.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 0 if err.code in (0, None) else 2
    try:
        return args.handler(args)
    except (DomainError, EnergyOutOfBand, TooFewSamples, NonPositiveWarp) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ThresholdViolation as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except (NoBracket, QuadratureNonConvergence, BudgetExceeded, PositivityViolation) as err:
        print(f"error: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
