"""JSON input loaders and report renderers shared by the command line."""

from __future__ import annotations

import json
from pathlib import Path

from .bundle import BaseAlgebraData, BundlePresentation, ChernMap
from .exactcore import format_rational, to_rational
from .inverse_system import GradedQuotient, LocalQuotient
from .polyring import (
    LinearFunctional,
    Poly,
    RingSpec,
    format_monomial,
    format_poly,
    parse_monomial,
    parse_poly,
    potential_from_functional,
)
from .toricgeom import Fan, VirtualPolytope


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def read_json(path) -> dict:
    try:
        with open(Path(path), encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    return data


def dumps(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _require(data: dict, key: str, where: str):
    if key not in data:
        raise InputError(f"{where}: missing key {key!r}")
    return data[key]


def load_ring(data: dict, where: str = "input") -> RingSpec:
    variables = _require(data, "variables", where)
    weights = data.get("weights", [1] * len(variables))
    try:
        return RingSpec(tuple(variables), tuple(weights))
    except (ValueError, TypeError) as exc:
        raise InputError(f"{where}: bad ring ({exc})") from None


def load_functional(ring: RingSpec, data: dict, where: str = "functional") -> LinearFunctional:
    bound = _require(data, "bound", where)
    values = _require(data, "values", where)
    try:
        table = {parse_monomial(ring, k): to_rational(v) for k, v in values.items()}
        return LinearFunctional(ring, int(bound), table)
    except (ValueError, TypeError, AttributeError) as exc:
        raise InputError(f"{where}: {exc}") from None


def dump_functional(ell: LinearFunctional) -> dict:
    keys = sorted(ell.values, key=lambda e: (ell.ring.wdeg(e), tuple(-x for x in e)))
    return {
        "bound": ell.bound,
        "values": {format_monomial(ell.ring, e): format_rational(ell.values[e]) for e in keys},
    }


def load_potential(data: dict, where: str = "input") -> Poly:
    """A potential given directly or as a functional table to be converted."""
    ring = load_ring(data, where)
    if "potential" in data:
        try:
            return parse_poly(ring, data["potential"])
        except ValueError as exc:
            raise InputError(f"{where}: {exc}") from None
    if "functional" in data:
        return potential_from_functional(load_functional(ring, data["functional"]))
    raise InputError(f"{where}: need either 'potential' or 'functional'")


def load_fan(data: dict, where: str = "fan") -> Fan:
    try:
        rays = _require(data, "rays", where)
        cones = _require(data, "max_cones", where)
        return Fan(tuple(tuple(r) for r in rays), tuple(tuple(c) for c in cones))
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def load_polytope(fan: Fan, data: dict, where: str = "polytope") -> VirtualPolytope:
    values = _require(data, "values", where)
    try:
        return VirtualPolytope(fan, tuple(values))
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def load_bundle(data: dict, where: str = "bundle") -> tuple[Fan, BaseAlgebraData, ChernMap]:
    fan = load_fan(_require(data, "fan", where), f"{where}.fan")
    base_d = _require(data, "base", where)
    gens = _require(base_d, "generators", f"{where}.base")
    try:
        ring = RingSpec(tuple(g["name"] for g in gens), tuple(g.get("weight", 1) for g in gens))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{where}.base.generators: {exc}") from None
    try:
        potential = parse_poly(ring, _require(base_d, "potential", f"{where}.base"))
    except ValueError as exc:
        raise InputError(f"{where}.base.potential: {exc}") from None
    k = _require(base_d, "socle_degree", f"{where}.base")
    try:
        base = BaseAlgebraData(ring, potential, int(k))
    except ValueError as exc:
        raise InputError(f"{where}.base: {exc}") from None
    chern = _require(data, "chern", where)
    if not isinstance(chern, list):
        raise InputError(f"{where}.chern must be a list of polynomial strings")
    if fan.rays and len(chern) != len(fan.rays[0]):
        raise InputError(
            f"{where}.chern has {len(chern)} entries but the fan lives in rank {len(fan.rays[0])}"
        )
    try:
        images = tuple(parse_poly(ring, s) for s in chern)
        c = ChernMap(len(images), images)
    except ValueError as exc:
        raise InputError(f"{where}.chern: {exc}") from None
    return fan, base, c


# -- reports ----------------------------------------------------------------

def graded_report(q: GradedQuotient) -> dict:
    out = {"potential": format_poly(q.potential)}
    out.update(q.to_json())
    return out


def local_report(q: LocalQuotient) -> dict:
    out = {"potential": format_poly(q.potential)}
    out.update(q.to_json())
    return out


def bundle_report(p: BundlePresentation) -> dict:
    out = graded_report(p.quotient)
    out["base_hilbert"] = list(p.base_hilbert)
    out["fiber_hilbert"] = list(p.fiber_hilbert)
    out["leray_hirsch"] = p.leray_hirsch
    return out


def render_text(report: dict) -> str:
    """Human-readable rendering of a report dictionary."""
    lines = []
    for key, val in report.items():
        if key == "relations" and isinstance(val, list):
            lines.append("relations:")
            for d, rels in enumerate(val):
                if isinstance(rels, list):
                    for r in rels:
                        lines.append(f"  [{d}] {r}")
                else:
                    lines.append(f"  {rels}")
        elif key == "basis" and isinstance(val, list):
            lines.append("basis:")
            for d, b in enumerate(val):
                lines.append(f"  [{d}] " + (", ".join(b) if isinstance(b, list) else str(b)))
        elif key == "pairing":
            lines.append("pairing:")
            mats = val if val and isinstance(val[0], list) and val[0] and isinstance(val[0][0], list) else [val]
            for d, mat in enumerate(mats):
                lines.append(f"  [{d}]")
                for row in mat:
                    lines.append("    " + " ".join(row))
        elif isinstance(val, dict):
            lines.append(f"{key}:")
            for k2, v2 in val.items():
                lines.append(f"  {k2}: {_plain(v2)}")
        else:
            lines.append(f"{key}: {_plain(val)}")
    return "\n".join(lines) + "\n"


def _plain(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[" + ", ".join(_plain(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_plain(x)}" for k, x in v.items()) + "}"
    return str(v)
