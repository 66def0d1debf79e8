"""Command-line interface.

Every command builds a plain result dict; ``--json`` prints it inside a
report envelope with keys in the fixed order command, version, inputs,
result, elapsed_ms.  Without ``--json`` the same envelope is rendered as
indented ``key: value`` lines.

Exit codes: 0 success, 2 usage or parse error, 3 exact-arithmetic domain
error, 4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import __version__
from .density import SphereGrid, coverage, iterate_wk, random_word_orbit
from .errors import DomainError, ExcludedCase, HolonomyError, UnrecognizedGroup
from .holonomy import (
    DEFAULT_CAP,
    DEFAULT_TOL,
    catalog_verify,
    check_remark75,
    classify_finite,
    close_group,
    orbit,
)
from .poly import (
    complexity_verdict,
    cos_minpoly,
    cos_minpoly_structure_ok,
    is_cyclotomic,
    minimal_poly_zeta,
    symmetric_substitute,
)
from .rotation import (
    P1,
    CosPhi,
    Mode,
    Triplet,
    axis_angle,
    build_pair,
    check_prop42,
    check_prop43,
    trace_product_exact,
    trace_product_numeric,
)
from .scalar import parse_scalar
from .tables import regenerate_tables
from .transport import (
    NormalPolygonalCurve,
    build_connection,
    holonomy_of_curve,
    transport,
    word_product,
)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CONSISTENCY = 0, 2, 3, 4
HOLONOMY_TOL = 1e-9


class UsageError(Exception):
    """Bad flag values; reported with exit code 2."""


class ConsistencyFailure(Exception):
    """A cross-check failed; carries the partial result, exit code 4."""

    def __init__(self, message: str, result: dict):
        super().__init__(message)
        self.result = result


# -- parsing helpers ---------------------------------------------------

def _fraction(text: str, flag: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{flag}: expected p/q, got {text!r}") from None


def _radians(text: str, flag: str) -> float:
    """A float, optionally written as a multiple of pi (``2pi/3``, ``0.5*pi``)."""
    s = text.strip().lower().replace(" ", "")
    try:
        if "pi" in s:
            head, _, tail = s.partition("pi")
            head = head.rstrip("*")
            num = float(head) if head not in ("", "+", "-") else float(head + "1")
            den = float(tail[1:]) if tail.startswith("/") else 1.0
            if tail and not tail.startswith("/"):
                raise ValueError
            return num * math.pi / den
        return float(s)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{flag}: expected radians, got {text!r}") from None


def parse_triplet(args, require_exact_domain: bool = True) -> Triplet:
    if args.tx is None or args.ty is None or args.phi is None:
        raise UsageError("--tx, --ty and --phi are required")
    try:
        phi = CosPhi.parse(args.phi)
    except (ValueError, ZeroDivisionError, KeyError):
        raise UsageError(f"--phi: cannot parse {args.phi!r}") from None
    if args.numeric:
        try:
            return Triplet.numeric(_radians(args.tx, "--tx"), _radians(args.ty, "--ty"), phi)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    t = Triplet.exact(_fraction(args.tx, "--tx"), _fraction(args.ty, "--ty"), phi)
    if require_exact_domain and not t.in_exact_domain:
        raise UsageError(
            f"exact triplet {t} outside 0 < θ' <= π with exact cos φ; use --numeric for other angles"
        )
    return t


def _unit4(text: Optional[str], flag: str):
    if text is None:
        return None
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag}: expected four comma-separated numbers") from None
    if len(vals) != 4:
        raise UsageError(f"{flag}: expected four comma-separated numbers")
    if abs(math.sqrt(sum(v * v for v in vals)) - 1.0) > 1e-12:
        raise UsageError(f"{flag}: vector must have unit length")
    return vals


def _matrix(m) -> list:
    return np.asarray(m, dtype=float).tolist()


def _axis(r) -> dict:
    axis, angle = axis_angle(r)
    return {"axis": axis.tolist(), "angle": angle}


def _write_csv(path: str, points) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "z"])
        for p in np.asarray(points, dtype=float):
            w.writerow([repr(float(c)) for c in p])


def _triplet_inputs(t: Triplet) -> dict:
    return {
        "theta_x": str(t.theta_x),
        "theta_y": str(t.theta_y),
        "cos_phi": str(t.phi),
        "mode": t.mode.value,
    }


# -- commands ----------------------------------------------------------

def cmd_pair(args) -> tuple[dict, dict]:
    t = parse_triplet(args)
    cx, cy = build_pair(t)
    c1, c2 = cx @ cy, cy @ cx
    exact = str(trace_product_exact(t)) if t.mode is Mode.EXACT else None
    try:
        prop43: object = check_prop43((cx, cy))
    except ExcludedCase:
        prop43 = "ExcludedCase"
    result = {
        "cx": _matrix(cx),
        "cy": _matrix(cy),
        "trace_exact": exact,
        "trace_numeric": trace_product_numeric(t),
        "axes": {"cx": _axis(cx), "cy": _axis(cy), "cxcy": _axis(c1), "cycx": _axis(c2)},
        "prop42": check_prop42((cx, cy)),
        "prop43": prop43,
        "remark75": check_remark75(t) if t.mode is Mode.EXACT else None,
    }
    return _triplet_inputs(t), result


def cmd_verdict(args) -> tuple[dict, dict]:
    t = parse_triplet(args)
    if t.mode is not Mode.EXACT:
        raise UsageError("verdict needs an exact triplet")
    tr = trace_product_exact(t)          # domain errors surface as exit 3
    f = minimal_poly_zeta(tr)
    v = complexity_verdict(t)
    result = {
        "trace": str(tr),
        "f_zeta": str(f),
        "f_zeta_coefficients": [str(c) for c in f.high_first()],
        "degree": f.degree,
        "cyclotomic": str(is_cyclotomic(f)),
        "verdict": str(v),
    }
    return _triplet_inputs(t), result


def cmd_minpoly(args) -> tuple[dict, dict]:
    if args.n is not None:
        f = cos_minpoly(args.n)
        g = symmetric_substitute(f)
        result = {
            "cos_minpoly": str(f),
            "cos_minpoly_coefficients": [str(c) for c in f.high_first()],
            "structure_ok": cos_minpoly_structure_ok(f),
            "f_zeta": str(g),
            "f_zeta_coefficients": [str(c) for c in g.high_first()],
            "palindromic": g.is_palindromic(),
            "cyclotomic": str(is_cyclotomic(g)),
        }
        return {"n": args.n}, result
    if args.trace is not None:
        try:
            tr = parse_scalar(args.trace)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"--trace: {exc}") from None
        inputs = {"trace": args.trace}
    else:
        t = parse_triplet(args)
        if t.mode is not Mode.EXACT:
            raise UsageError("minpoly needs an exact triplet")
        tr = trace_product_exact(t)
        inputs = _triplet_inputs(t)
    f = minimal_poly_zeta(tr)
    result = {
        "trace": str(tr),
        "f_zeta": str(f),
        "f_zeta_coefficients": [str(c) for c in f.high_first()],
        "degree": f.degree,
        "cyclotomic": str(is_cyclotomic(f)),
    }
    return inputs, result


def _parse_point(text: Optional[str]):
    if text is None:
        return np.array(P1)
    try:
        p = np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise UsageError("--point: expected x,y,z") from None
    if p.shape != (3,) or abs(np.linalg.norm(p) - 1.0) > 1e-9:
        raise UsageError("--point: expected a unit vector x,y,z")
    return p


def cmd_orbit(args) -> tuple[dict, dict]:
    t = parse_triplet(args, require_exact_domain=False)
    p = _parse_point(args.point)
    g = close_group(list(build_pair(t)), cap=args.cap, tol=args.tol)
    result: dict = {"status": g.status, "elements": g.order}
    if g.complete:
        try:
            result["group"] = str(classify_finite(g))
        except UnrecognizedGroup:
            result["group"] = None
        orb = orbit(g, p)
        result["orbit_size"] = len(orb)
        result["orbit"] = orb.points.tolist()
        if args.csv:
            _write_csv(args.csv, orb.points)
    inputs = _triplet_inputs(t)
    inputs.update(point=p.tolist(), cap=args.cap, tol=args.tol)
    return inputs, result


def cmd_density(args) -> tuple[dict, dict]:
    if args.seed is None:
        raise UsageError("density requires --seed")
    t = parse_triplet(args, require_exact_domain=False)
    pair = build_pair(t)
    grid = SphereGrid(args.resolution)
    if args.method == "wk":
        w = iterate_wk(pair, k_max=args.k, samples_per_circle=args.samples, seed=args.seed)
        max_len = None
    else:
        w = random_word_orbit(pair, args.max_length, args.points, args.seed)
        max_len = args.max_length
    report = coverage(w.points, grid, max_word_length=max_len, seed=args.seed)
    if args.csv:
        _write_csv(args.csv, w.points)
    inputs = _triplet_inputs(t)
    inputs.update(
        method=args.method,
        resolution_deg=args.resolution,
        seed=args.seed,
        k=args.k,
        samples=args.samples,
        points=args.points,
        max_length=args.max_length,
    )
    result = {"construction": w.construction, "coverage": report.to_dict()}
    return inputs, result


def cmd_transport(args) -> tuple[dict, dict]:
    t = parse_triplet(args, require_exact_domain=False)
    try:
        curve = NormalPolygonalCurve.parse(args.curve)
    except ValueError as exc:
        raise UsageError(f"--curve: {exc}") from None
    bx, by = _unit4(args.bx, "--bx"), _unit4(args.by, "--by")
    cx, cy = build_pair(t)
    conn = build_connection(cx, cy, bx, by)
    frame = transport(conn, curve)
    hol = holonomy_of_curve(conn, curve)
    result = {
        "p1": _matrix(conn.p1),
        "p2": _matrix(conn.p2),
        "transport": _matrix(frame),
        "holonomy": _matrix(hol),
    }
    inputs = _triplet_inputs(t)
    inputs.update(curve=str(curve), bx=bx, by=by)
    if bx is None and by is None:
        mismatch = float(np.max(np.abs(hol - word_product(cx, cy, curve))))
        result["word_mismatch"] = mismatch
        if mismatch > HOLONOMY_TOL:
            raise ConsistencyFailure(f"holonomy differs from word product by {mismatch:.3g}", result)
    return inputs, result


def cmd_catalog(args) -> tuple[dict, dict]:
    report = catalog_verify(cap=args.cap, tol=args.tol)
    rows = [
        {
            "source": r.entry.source,
            "triplet": str(r.entry.triplet),
            "expected": f"{r.entry.label} order {r.entry.order}",
            "status": r.status,
            "label": str(r.label) if r.label is not None else None,
            "passed": r.passed,
        }
        for r in report.results
    ]
    result = {"entries": len(rows), "failures": report.failures, "results": rows}
    if report.failures:
        raise ConsistencyFailure(f"{report.failures} catalog entries failed", result)
    return {"cap": args.cap, "tol": args.tol}, result


def cmd_tables(args) -> tuple[dict, dict]:
    inputs = {"golden": args.golden or "<shipped>", "lists": args.lists or "<shipped>"}
    try:
        report = regenerate_tables(args.golden, args.lists)
    except (OSError, ValueError, ZeroDivisionError, KeyError) as exc:
        raise ConsistencyFailure(f"cannot read tables: {exc}", {"ok": False}) from None
    result = report.to_dict()
    if not report.ok:
        raise ConsistencyFailure(
            f"{len(report.row_diffs)} row diffs, {len(report.list_diffs)} list diffs", result
        )
    return inputs, result


# -- parser ------------------------------------------------------------

def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=d(False), help="emit a JSON report")
    parser.add_argument("--seed", type=int, default=d(None), help="PRNG seed (required by density)")
    parser.add_argument("--cap", type=int, default=d(DEFAULT_CAP), help="group closure element cap")
    parser.add_argument("--tol", type=float, default=d(DEFAULT_TOL), help="closure deduplication tolerance")


def _triplet_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tx", help="θ'_x as p/q (meaning (p/q)π), radians with --numeric")
    parser.add_argument("--ty", help="θ'_y as p/q (meaning (p/q)π), radians with --numeric")
    parser.add_argument("--phi", help="cos φ: 0, r, sqrt(r), phi23, phi25_1, ... or a float")
    parser.add_argument("--numeric", action="store_true", help="angles are radians")


COMMANDS: dict[str, Callable] = {
    "pair": cmd_pair,
    "verdict": cmd_verdict,
    "minpoly": cmd_minpoly,
    "orbit": cmd_orbit,
    "density": cmd_density,
    "transport": cmd_transport,
    "catalog": cmd_catalog,
    "tables": cmd_tables,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistor-holonomy", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, triplet: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, suppress=True)
        if triplet:
            _triplet_flags(p)
        return p

    add("pair", "rotation pair, traces, axes and eigen-structure checks")
    add("verdict", "minimal polynomial of zeta and complexity verdict")
    p = add("minpoly", "f_zeta from a triplet, an exact trace, or cos(2π/n)")
    p.add_argument("--trace", help="exact trace expression, e.g. '1/2 - sqrt(2)'; write --trace=EXPR when EXPR starts with '-'")
    p.add_argument("--n", type=int, help="odd prime n: Chebyshev pipeline for cos(2π/n)")
    p = add("orbit", "group closure, classification and orbit of a point")
    p.add_argument("--point", help="unit vector x,y,z (default p1 = 1,0,0)")
    p.add_argument("--csv", help="write orbit points as x,y,z CSV")
    p = add("density", "coverage of S^2 by orbit points")
    p.add_argument("--method", choices=("wk", "random"), default="wk")
    p.add_argument("--resolution", type=float, default=5.0, help="grid resolution in degrees")
    p.add_argument("--k", type=int, default=5, help="W_k levels (wk)")
    p.add_argument("--samples", type=int, default=300, help="samples per circle (wk)")
    p.add_argument("--points", type=int, default=100000, help="number of random words (random)")
    p.add_argument("--max-length", type=int, default=30, help="maximum word length (random)")
    p.add_argument("--csv", help="write generated points as x,y,z CSV")
    p = add("transport", "SO(4) parallel transport along a normal polygonal curve")
    p.add_argument("--curve", default="x+1", help="moves such as x+1,y+1,x-1,y-1")
    p.add_argument("--bx", help="unit 4-vector twist for the x period")
    p.add_argument("--by", help="unit 4-vector twist for the y period")
    add("catalog", "verify the finite-group catalog", triplet=False)
    p = add("tables", "regenerate the trace / f_zeta tables and diff against golden data", triplet=False)
    p.add_argument("--golden", help="alternate golden case file")
    p.add_argument("--lists", help="alternate irrationality list file")
    return parser


def _render(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_render(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}: ({len(v)} entries)")
            for item in v:
                lines.append(f"{pad}  - " + ", ".join(f"{a}={b}" for a, b in item.items()))
        else:
            lines.append(f"{pad}{k}: {v}")
    return lines


def _emit(args, inputs: dict, result: dict, start: float, out) -> None:
    envelope = {
        "command": args.command,
        "version": __version__,
        "inputs": inputs,
        "result": result,
        "elapsed_ms": round((time.perf_counter() - start) * 1000.0, 3),
    }
    if args.json:
        out.write(json.dumps(envelope) + "\n")
    else:
        out.write("\n".join(_render(envelope)) + "\n")


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        inputs, result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConsistencyFailure as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        _emit(args, {}, exc.result, start, out)
        return EXIT_CONSISTENCY
    except HolonomyError as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    _emit(args, inputs, result, start, out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
