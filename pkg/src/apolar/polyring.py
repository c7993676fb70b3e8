"""Sparse weighted polynomials over the rationals and the apolarity action.

A :class:`Poly` is a map from exponent tuples to nonzero Fractions, tied to
a :class:`RingSpec` that fixes variable names and positive integer weights.
The same representation serves for elements of the symmetric algebra (read
as constant-coefficient differential operators) and for the polynomials
they act on.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .exactcore import format_rational, to_rational


class RingMismatchError(ValueError):
    pass


class PolyParseError(ValueError):
    pass


@dataclass(frozen=True)
class RingSpec:
    variables: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.variables) != len(self.weights):
            raise ValueError("one weight per variable is required")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        for v in self.variables:
            if not isinstance(v, str) or not _VAR_RE.fullmatch(v):
                raise ValueError(f"bad variable name {v!r}")
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive integers")

    @classmethod
    def default(cls, n: int, prefix: str = "x") -> "RingSpec":
        return cls(tuple(f"{prefix}{i}" for i in range(n)), (1,) * n)

    @classmethod
    def unweighted(cls, variables: Sequence[str]) -> "RingSpec":
        return cls(tuple(variables), (1,) * len(variables))

    @property
    def arity(self) -> int:
        return len(self.variables)

    def wdeg(self, exps: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def gens(self) -> list["Poly"]:
        return [Poly.monomial(self, _unit(self.arity, i)) for i in range(self.arity)]

    def __str__(self):
        return ", ".join(f"{v}:{w}" for v, w in zip(self.variables, self.weights))


def _unit(n: int, i: int) -> tuple:
    return tuple(1 if j == i else 0 for j in range(n))


def mono_key(ring: RingSpec, exps: tuple):
    """Sort key: higher weighted degree first, then lex on variable order."""
    return (-ring.wdeg(exps), tuple(-e for e in exps))


def factorial_of(exps: Sequence[int]) -> int:
    """The multi-index factorial: product of ordinary factorials of the entries."""
    out = 1
    for e in exps:
        out *= math.factorial(e)
    return out


@lru_cache(maxsize=None)
def _monos(weights: tuple, d: int) -> tuple:
    if not weights:
        return ((),) if d == 0 else ()
    w, rest = weights[0], weights[1:]
    out = []
    for e in range(d // w, -1, -1):
        for tail in _monos(rest, d - e * w):
            out.append((e,) + tail)
    return tuple(out)


def monomials_of_degree(ring: RingSpec, d: int) -> list[tuple]:
    """All exponent vectors of weighted degree ``d``, descending lex order."""
    if d < 0:
        return []
    return list(_monos(ring.weights, d))


def monomials_up_to(ring: RingSpec, bound: int) -> list[tuple]:
    """All exponent vectors of weighted degree at most ``bound``, degree ascending."""
    out = []
    for d in range(bound + 1):
        out.extend(monomials_of_degree(ring, d))
    return out


class Poly:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping | None = None):
        self.ring = ring
        clean = {}
        if terms:
            n = ring.arity
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong arity for ring ({n})")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                c = to_rational(c)
                if c:
                    clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, ring: RingSpec, c) -> "Poly":
        return cls(ring, {(0,) * ring.arity: c})

    @classmethod
    def monomial(cls, ring: RingSpec, exps, c=1) -> "Poly":
        return cls(ring, {tuple(exps): c})

    @classmethod
    def zero(cls, ring: RingSpec) -> "Poly":
        return cls._raw(ring, {})

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.ring.arity)

    def sorted_terms(self) -> list[tuple]:
        return sorted(self.terms.items(), key=lambda t: mono_key(self.ring, t[0]))

    def degrees(self) -> set[int]:
        return {self.ring.wdeg(e) for e in self.terms}

    def wdeg(self) -> int:
        """Maximal weighted degree; -1 for the zero polynomial."""
        return max((self.ring.wdeg(e) for e in self.terms), default=-1)

    def is_quasi_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.ring, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(f"ring mismatch: [{self.ring}] vs [{other.ring}]")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly.constant(self.ring, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = to_rational(c)
        if not c:
            return Poly.zero(self.ring)
        return Poly._raw(self.ring, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(1 / to_rational(c))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- evaluation -------------------------------------------------------

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return evaluate(self, point)


def add(f: Poly, g: Poly) -> Poly:
    return f + g


def mul(f: Poly, g: Poly) -> Poly:
    return f * g


def scale(f: Poly, c) -> Poly:
    return f.scale(c)


def evaluate(f: Poly, point: Sequence) -> Fraction:
    point = [to_rational(x) for x in point]
    if len(point) != f.ring.arity:
        raise ValueError("point arity does not match ring")
    total = Fraction(0)
    for e, c in f.terms.items():
        t = c
        for x, k in zip(point, e):
            if k:
                t *= x ** k
        total += t
    return total


def partial(f: Poly, i: int, order: int = 1) -> Poly:
    out = {}
    for e, c in f.terms.items():
        k = e[i]
        if k >= order:
            ne = e[:i] + (k - order,) + e[i + 1:]
            out[ne] = c * math.perm(k, order)
    return Poly._raw(f.ring, out)


def directional_derivative(f: Poly, v: Sequence) -> Poly:
    """Derivative of ``f`` along the constant direction ``v``: sum of v_i df/dx_i."""
    v = [to_rational(x) for x in v]
    if len(v) != f.ring.arity:
        raise ValueError("direction arity does not match ring")
    out = Poly.zero(f.ring)
    for i, vi in enumerate(v):
        if vi:
            out = out + partial(f, i).scale(vi)
    return out


def apply_diffop(P: Poly, f: Poly) -> Poly:
    """Act on ``f`` by ``P`` read as a differential operator (x^a acts as d^a)."""
    if P.ring != f.ring:
        raise RingMismatchError(f"ring mismatch: [{P.ring}] vs [{f.ring}]")
    out: dict = {}
    for a, ca in P.terms.items():
        for g, cg in f.terms.items():
            if any(x < y for x, y in zip(g, a)):
                continue
            mult = 1
            for x, y in zip(g, a):
                if y:
                    mult *= math.perm(x, y)
            e = tuple(x - y for x, y in zip(g, a))
            s = out.get(e, 0) + ca * cg * mult
            if s:
                out[e] = s
            else:
                del out[e]
    return Poly._raw(f.ring, out)


def apolar_pairing(P: Poly, f: Poly) -> Fraction:
    """Constant term of ``P`` applied to ``f``.

    Only the terms of ``f`` matching a monomial of ``P`` contribute, so
    this avoids building the full derivative.
    """
    if P.ring != f.ring:
        raise RingMismatchError(f"ring mismatch: [{P.ring}] vs [{f.ring}]")
    total = Fraction(0)
    small, large = (P, f) if len(P.terms) <= len(f.terms) else (f, P)
    for e, c in small.terms.items():
        d = large.terms.get(e)
        if d:
            total += c * d * factorial_of(e)
    return total


@dataclass(frozen=True)
class LinearFunctional:
    """A linear functional on Sym(V), known on monomials up to a weighted degree."""

    ring: RingSpec
    bound: int
    values: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, v in dict(self.values).items():
            e = tuple(e)
            if len(e) != self.ring.arity:
                raise ValueError(f"exponent {e} has wrong arity")
            if self.ring.wdeg(e) > self.bound:
                raise ValueError(f"monomial {e} exceeds the degree bound {self.bound}")
            v = to_rational(v)
            if v:
                clean[e] = v
        object.__setattr__(self, "values", clean)

    def __call__(self, P: Poly) -> Fraction:
        if P.ring != self.ring:
            raise RingMismatchError("ring mismatch")
        if P.wdeg() > self.bound:
            raise ValueError("polynomial exceeds the functional's degree bound")
        return sum((c * self.values.get(e, 0) for e, c in P.terms.items()), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, LinearFunctional):
            return NotImplemented
        return (self.ring, self.bound, self.values) == (other.ring, other.bound, other.values)

    def __hash__(self):
        return hash((self.ring, self.bound, frozenset(self.values.items())))


def potential_from_functional(ell: LinearFunctional) -> Poly:
    """The truncated potential: sum of ell(x^a)/a! * x^a."""
    return Poly(ell.ring, {e: v / factorial_of(e) for e, v in ell.values.items()})


def functional_from_potential(f: Poly, bound: int) -> LinearFunctional:
    """Inverse of :func:`potential_from_functional`: ell(x^a) = a! * coeff_a(f)."""
    values = {e: c * factorial_of(e) for e, c in f.terms.items() if f.ring.wdeg(e) <= bound}
    return LinearFunctional(f.ring, bound, values)


def substitute(f: Poly, images: Sequence[Poly], target: RingSpec | None = None) -> Poly:
    """Compose ``f`` with the map sending variable i to ``images[i]``."""
    if len(images) != f.ring.arity:
        raise ValueError(f"expected {f.ring.arity} images, got {len(images)}")
    if target is None:
        if not images:
            raise ValueError("target ring required when substituting into a 0-variable ring")
        target = images[0].ring
    for im in images:
        if im.ring != target:
            raise RingMismatchError("all images must live in the target ring")
    powers: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            powers[key] = images[i] ** k
        return powers[key]

    out = Poly.zero(target)
    for e, c in f.terms.items():
        t = Poly.constant(target, c)
        for i, k in enumerate(e):
            if k:
                t = t * power(i, k)
        out = out + t
    return out


def quasi_homogeneous_components(f: Poly) -> dict[int, Poly]:
    comps: dict[int, dict] = {}
    for e, c in f.terms.items():
        comps.setdefault(f.ring.wdeg(e), {})[e] = c
    return {d: Poly._raw(f.ring, t) for d, t in sorted(comps.items())}


def extend_ring(f: Poly, target: RingSpec) -> Poly:
    """Re-express ``f`` in a ring whose variables contain all of f's (by name)."""
    idx = [target.index(v) for v in f.ring.variables]
    out = {}
    for e, c in f.terms.items():
        ne = [0] * target.arity
        for i, k in zip(idx, e):
            ne[i] = k
        out[tuple(ne)] = c
    return Poly._raw(target, out)


# -- text format ----------------------------------------------------------

_VAR_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TERM_SPLIT = re.compile(r"([+-])")
_LEADING_COEF = re.compile(r"^(\d+(?:/\d+)?)\s*(\*)?\s*")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\s*\^\s*(\d+))?$")


def format_monomial(ring: RingSpec, exps) -> str:
    parts = []
    for v, k in zip(ring.variables, exps):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts) if parts else "1"


def format_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    out = []
    for i, (e, c) in enumerate(f.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = format_monomial(f.ring, e)
        if mono == "1":
            body = format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_rational(a)}*{mono}"
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def parse_monomial(ring: RingSpec, text: str) -> tuple:
    p = parse_poly(ring, text)
    if len(p.terms) != 1 or next(iter(p.terms.values())) != 1:
        raise PolyParseError(f"not a monomial: {text!r}")
    return next(iter(p.terms))


def parse_poly(ring: RingSpec, text: str) -> Poly:
    """Parse e.g. ``"1/2*a^2*b - 3*c"`` in ``ring``."""
    if not isinstance(text, str):
        raise PolyParseError(f"polynomial must be a string, got {type(text).__name__}")
    s = text.strip()
    if not s:
        raise PolyParseError("empty polynomial string")
    pieces = [x.strip() for x in _TERM_SPLIT.split(s)]
    if pieces[0] == "":
        signs, bodies = pieces[1::2], pieces[2::2]
    else:
        signs, bodies = ["+"] + pieces[1::2], pieces[0::2]
    terms: dict = {}
    for sign, body in zip(signs, bodies):
        if not body:
            raise PolyParseError(f"dangling operator in {text!r}")
        e, c = _parse_term(ring, body, text)
        if sign == "-":
            c = -c
        total = terms.get(e, 0) + c
        if total:
            terms[e] = total
        else:
            terms.pop(e, None)
    return Poly._raw(ring, terms)


def _parse_term(ring: RingSpec, tok: str, text: str):
    coef = Fraction(1)
    m = _LEADING_COEF.match(tok)
    rest = tok
    if m:
        num = m.group(1)
        coef = Fraction(num) if "/" not in num else _frac(num, text)
        rest = tok[m.end():]
        if m.group(2) and not rest:
            raise PolyParseError(f"dangling '*' in {text!r}")
    exps = [0] * ring.arity
    if rest:
        for factor in rest.split("*"):
            factor = factor.strip()
            fm = _FACTOR.match(factor)
            if fm is None:
                if re.fullmatch(r"\d+(?:/\d+)?", factor):
                    coef *= _frac(factor, text)
                    continue
                raise PolyParseError(f"cannot parse factor {factor!r} in {text!r}")
            name, k = fm.group(1), int(fm.group(2) or 1)
            try:
                i = ring.index(name)
            except ValueError:
                raise PolyParseError(f"unknown variable {name!r} in {text!r}") from None
            exps[i] += k
    return tuple(exps), coef


def _frac(s: str, text: str) -> Fraction:
    num, _, den = s.partition("/")
    if den and int(den) == 0:
        raise PolyParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def iter_terms(f: Poly) -> Iterable[tuple]:
    return iter(f.sorted_terms())
