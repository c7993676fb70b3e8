"""Command line front end.

Exit codes: 0 on success, 2 for unreadable or malformed input, 3 when the
mathematics refuses (non-quasi-homogeneous potential, invalid fan, ...).
Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats as fmt
from .bundle import BundleError, bundle_cohomology
from .exactcore import FitError, format_rational
from .inverse_system import QuotientError, ann_graded, ann_local
from .polyring import format_poly, functional_from_potential, potential_from_functional
from .toricgeom import (
    FanError,
    convex_integral,
    find_ample,
    integrate_virtual,
    is_convex,
    is_strictly_convex,
    toric_cohomology,
    validate_fan,
    vertices,
    volume_polynomial,
)

EXIT_INPUT = 2
EXIT_MATH = 3


def _emit(report: dict, args, plain: str | None = None) -> None:
    if args.format == "text":
        sys.stdout.write(fmt.render_text(report))
    else:
        sys.stdout.write(fmt.dumps(report))
    if args.export_plain:
        if plain is None:
            raise fmt.InputError("--export-plain is only available for presentation reports")
        Path(args.export_plain).write_text(plain, encoding="utf-8")


def run_ann(args) -> None:
    f = fmt.load_potential(fmt.read_json(args.input), args.input)
    q = ann_graded(f)
    _emit(fmt.graded_report(q), args, q.to_plain())


def run_local(args) -> None:
    f = fmt.load_potential(fmt.read_json(args.input), args.input)
    q = ann_local(f)
    _emit(fmt.local_report(q), args, q.to_plain())


def run_potential(args) -> None:
    data = fmt.read_json(args.input)
    ring = fmt.load_ring(data, args.input)
    if "functional" in data:
        ell = fmt.load_functional(ring, data["functional"])
        report = {"potential": format_poly(potential_from_functional(ell))}
    elif "potential" in data:
        f = fmt.load_potential(data, args.input)
        bound = data.get("bound", max(f.wdeg(), 0))
        report = {"functional": fmt.dump_functional(functional_from_potential(f, int(bound)))}
    else:
        raise fmt.InputError(f"{args.input}: need either 'potential' or 'functional'")
    _emit(report, args)


def _fan_section(fan) -> dict:
    cert = validate_fan(fan)
    ample = find_ample(fan)
    return {
        "dim": cert.dim,
        "rays": cert.nrays,
        "max_cones": cert.ncones,
        "walls": cert.nwalls,
        "ample": [format_rational(v) for v in ample.values],
    }


def _polytope_section(h) -> dict:
    zero = (0,) * h.fan.dim
    out = {
        "values": [format_rational(v) for v in h.values],
        "convex": is_convex(h),
        "strictly_convex": is_strictly_convex(h),
        "vertices": [[format_rational(x) for x in m] for m in vertices(h).values()],
        "volume": format_rational(integrate_virtual(h, zero)),
    }
    return out


def run_toric(args) -> None:
    fan = fmt.load_fan(fmt.read_json(args.input), args.input)
    fan_info = _fan_section(fan)
    vol = volume_polynomial(fan)
    q = toric_cohomology(fan)
    report = fmt.graded_report(q)
    report["potential"] = format_poly(vol)
    report["fan"] = fan_info
    if args.polytope:
        h = fmt.load_polytope(fan, fmt.read_json(args.polytope), args.polytope)
        report["polytope"] = _polytope_section(h)
    _emit(report, args, q.to_plain())


def run_bundle(args) -> None:
    fan, base, c = fmt.load_bundle(fmt.read_json(args.input), args.input)
    validate_fan(fan)
    p = bundle_cohomology(fan, base, c)
    _emit(fmt.bundle_report(p), args, p.quotient.to_plain())


def _parse_mono(text: str, n: int) -> tuple:
    if text is None:
        return (0,) * n
    try:
        mono = tuple(int(x) for x in text.split(",")) if text.strip() else ()
    except ValueError:
        raise fmt.InputError(f"bad --monomial {text!r}; expected comma separated exponents") from None
    if len(mono) != n or any(e < 0 for e in mono):
        raise fmt.InputError(f"--monomial needs {n} nonnegative exponents")
    return mono


def run_integrate(args) -> None:
    fan = fmt.load_fan(fmt.read_json(args.input), args.input)
    if not args.polytope:
        raise fmt.InputError("integrate needs --polytope")
    h = fmt.load_polytope(fan, fmt.read_json(args.polytope), args.polytope)
    mono = _parse_mono(args.monomial, len(fan.rays[0]) if fan.rays else 0)
    validate_fan(fan)
    report = {"monomial": list(mono), "convex": is_convex(h)}
    if report["convex"]:
        res = convex_integral(h, mono)
        report["degenerate"] = res.degenerate
        report["value"] = format_rational(res.value)
    else:
        report["value"] = format_rational(integrate_virtual(h, mono))
    _emit(report, args)


COMMANDS = {
    "ann": (run_ann, "Presentation of Sym(V)/Ann(f) for a quasi-homogeneous potential"),
    "local": (run_local, "Presentation of Sym(V)/Ann(f) for an arbitrary polynomial potential"),
    "potential": (run_potential, "Convert between a functional table and its potential"),
    "integrate": (run_integrate, "Integrate a monomial over a (virtual) polytope"),
    "toric": (run_toric, "Volume polynomial and cohomology ring of a smooth projective fan"),
    "bundle": (run_bundle, "Cohomology ring of a toric bundle"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apolar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input", help="input JSON file")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--export-plain", metavar="PATH", help="write the relation list as plain text")
        if name in ("toric", "integrate"):
            p.add_argument("--polytope", metavar="PATH", help="virtual polytope JSON")
        if name == "integrate":
            p.add_argument("--monomial", help="comma separated exponents, default all zero")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        handler(args)
    except fmt.InputError as exc:
        print(f"apolar {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QuotientError, FanError, BundleError, FitError, ArithmeticError) as exc:
        print(f"apolar {args.command}: {exc}", file=sys.stderr)
        return EXIT_MATH
    return 0


if __name__ == "__main__":
    sys.exit(main())
