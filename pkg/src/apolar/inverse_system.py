"""Annihilators of polynomials and the algebras they present.

Given a potential ``f``, the algebra ``A = Sym(V)/Ann(f)`` is computed
degree by degree from catalecticant maps ``P -> D_P f``.  For a
quasi-homogeneous ``f`` the ideal is graded, so each weighted degree is an
independent kernel computation.  Non-homogeneous ``f`` go through
:func:`ann_local`, which works in the whole filtered piece of degree at most
``wdeg(f)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import exactcore as ec
from .exactcore import format_rational
from .polyring import (
    Poly,
    RingSpec,
    apolar_pairing,
    apply_diffop,
    format_monomial,
    format_poly,
    functional_from_potential,
    monomials_of_degree,
    monomials_up_to,
)


class QuotientError(ArithmeticError):
    pass


class NotQuasiHomogeneousError(QuotientError):
    pass


def ann_membership(P: Poly, f: Poly) -> bool:
    """True iff ``P`` annihilates ``f`` as a differential operator."""
    return apply_diffop(P, f).is_zero()


def _catalecticant(ring: RingSpec, f: Poly, sources: list, targets: list) -> list[list[Fraction]]:
    """Matrix of P -> D_P f, one column per source monomial, rows indexed by targets."""
    row_of = {e: i for i, e in enumerate(targets)}
    mat = [[Fraction(0)] * len(sources) for _ in targets]
    for j, e in enumerate(sources):
        image = apply_diffop(Poly.monomial(ring, e), f)
        for g, c in image.terms.items():
            mat[row_of[g]][j] = c
    return mat


def _kernel_polys(ring: RingSpec, mat, sources) -> list[Poly]:
    return [
        Poly(ring, {e: c for e, c in zip(sources, v) if c})
        for v in ec.kernel_basis(mat, len(sources))
    ]


@dataclass
class GradedQuotient:
    ring: RingSpec
    potential: Poly
    socle_degree: int
    hilbert: list
    basis: list
    relations: list
    mult_table: dict = field(repr=False)
    pairing: list = field(repr=False)

    @property
    def dimension(self) -> int:
        return sum(self.hilbert)

    def to_json(self) -> dict:
        return {
            "variables": list(self.ring.variables),
            "weights": list(self.ring.weights),
            "socle_degree": self.socle_degree,
            "hilbert": list(self.hilbert),
            "basis": [[format_monomial(self.ring, m) for m in b] for b in self.basis],
            "relations": [[format_poly(r) for r in rel] for rel in self.relations],
            "pairing": [[[format_rational(x) for x in row] for row in mat] for mat in self.pairing],
        }

    def to_plain(self) -> str:
        """Relation list for pasting into an external computer algebra system."""
        lines = [
            "variables: " + " ".join(self.ring.variables),
            "weights: " + " ".join(str(w) for w in self.ring.weights),
            f"potential: {format_poly(self.potential)}",
            f"socle_degree: {self.socle_degree}",
            "relations:",
        ]
        for rel in self.relations:
            lines.extend(format_poly(r) for r in rel)
        extra = _beyond_socle_generators(self.ring, self.socle_degree)
        if extra:
            lines.append("# all monomials above the socle degree, generated by:")
            lines.extend(format_monomial(self.ring, m) for m in extra)
        return "\n".join(lines) + "\n"


def _beyond_socle_generators(ring: RingSpec, n: int) -> list:
    """Monomials of weighted degree > n whose every proper divisor has degree <= n."""
    out = []
    seen = set()
    for d in range(n + 1, n + 1 + max(ring.weights, default=1)):
        for m in monomials_of_degree(ring, d):
            if all(m[i] == 0 or ring.wdeg(m) - ring.weights[i] <= n for i in range(ring.arity)):
                if m not in seen:
                    seen.add(m)
                    out.append(m)
    return out


def ann_graded(f: Poly) -> GradedQuotient:
    """Presentation of Sym(V)/Ann(f) for a nonzero quasi-homogeneous ``f``."""
    ring = f.ring
    if f.is_zero():
        raise QuotientError("the zero polynomial has no Gorenstein quotient")
    if not f.is_quasi_homogeneous():
        raise NotQuasiHomogeneousError(
            f"potential {format_poly(f)} is not quasi-homogeneous for weights "
            f"{list(ring.weights)}; use local (ann_local) instead"
        )
    n = f.wdeg()
    hilbert, basis, relations = [], [], []
    for d in range(n + 1):
        sources = monomials_of_degree(ring, d)
        targets = monomials_of_degree(ring, n - d)
        mat = _catalecticant(ring, f, sources, targets)
        cols = ec.independent_columns(mat, len(sources))
        basis.append([sources[j] for j in cols])
        hilbert.append(len(cols))
        relations.append(_kernel_polys(ring, mat, sources))
    q = GradedQuotient(ring, f, n, hilbert, basis, relations, {}, [])
    q.pairing = _pairing(q)
    q.mult_table = _mult_table(q)
    return q


def _pairing(q: GradedQuotient) -> list:
    f, n = q.potential, q.socle_degree
    ell = functional_from_potential(f, n)
    out = []
    for d in range(n + 1):
        mat = []
        for a in q.basis[d]:
            row = []
            for b in q.basis[n - d]:
                row.append(ell.values.get(tuple(x + y for x, y in zip(a, b)), Fraction(0)))
            mat.append(row)
        out.append(mat)
    return out


def pairing_matrices(q: GradedQuotient) -> tuple[list, list]:
    """Per-degree pairing matrices and their exact ranks.

    Raises :class:`QuotientError` if any matrix is rank deficient, which
    would mean the presentation is wrong.
    """
    ranks = []
    for d, mat in enumerate(q.pairing):
        r = ec.rank(mat) if mat and mat[0] else 0
        ranks.append(r)
        if r != q.hilbert[d]:
            raise QuotientError(f"pairing in degree {d} has rank {r}, expected {q.hilbert[d]}")
    return q.pairing, ranks


def reduce(q: GradedQuotient, p: Poly) -> list[Fraction]:
    """Coordinates of the class of a pure-degree ``p`` in the degree basis."""
    if p.ring != q.ring:
        raise QuotientError("polynomial is not in the quotient's ring")
    degs = p.degrees()
    if len(degs) > 1:
        raise QuotientError(f"mixed-degree input (degrees {sorted(degs)}); split it first")
    if not degs:
        return []
    d = degs.pop()
    if d > q.socle_degree:
        return []
    n = q.socle_degree
    comp = q.basis[n - d]
    rhs = [apolar_pairing(p * Poly.monomial(q.ring, m), q.potential) for m in comp]
    transposed = [list(col) for col in zip(*q.pairing[d])] if q.pairing[d] else []
    if not transposed:
        return []
    c = ec.solve(transposed, rhs)
    if c is None:
        raise QuotientError("pairing system inconsistent; presentation is corrupt")
    return c


def _mult_table(q: GradedQuotient) -> dict:
    n = q.socle_degree
    flat = [(d, m) for d in range(n + 1) for m in q.basis[d]]
    table = {}
    for i, (d1, a) in enumerate(flat):
        for d2, b in flat[i:]:
            if d1 + d2 > n:
                continue
            prod = Poly.monomial(q.ring, tuple(x + y for x, y in zip(a, b)))
            table[(a, b)] = reduce(q, prod)
    return table


def multiply(q: GradedQuotient, a: tuple, b: tuple) -> list[Fraction]:
    """Look up the product of two basis monomials; empty beyond the socle."""
    key = (a, b) if (a, b) in q.mult_table else (b, a)
    return q.mult_table.get(key, [])


@dataclass
class LocalQuotient:
    ring: RingSpec
    potential: Poly
    degree_bound: int
    dimension: int
    basis: list
    relations: list
    pairing: list = field(repr=False)

    def to_json(self) -> dict:
        return {
            "variables": list(self.ring.variables),
            "weights": list(self.ring.weights),
            "degree_bound": self.degree_bound,
            "dimension": self.dimension,
            "basis": [format_monomial(self.ring, m) for m in self.basis],
            "relations": [format_poly(r) for r in self.relations],
            "pairing": [[format_rational(x) for x in row] for row in self.pairing],
        }

    def to_plain(self) -> str:
        lines = [
            "variables: " + " ".join(self.ring.variables),
            "weights: " + " ".join(str(w) for w in self.ring.weights),
            f"potential: {format_poly(self.potential)}",
            f"degree_bound: {self.degree_bound}",
            "relations:",
        ]
        lines.extend(format_poly(r) for r in self.relations)
        extra = _beyond_socle_generators(self.ring, self.degree_bound)
        if extra:
            lines.append("# every monomial of weighted degree > degree bound, generated by:")
            lines.extend(format_monomial(self.ring, m) for m in extra)
        return "\n".join(lines) + "\n"


def ann_local(f: Poly) -> LocalQuotient:
    """Presentation of Sym(V)/Ann(f) for an arbitrary nonzero polynomial ``f``.

    Every monomial of weighted degree above ``wdeg(f)`` kills ``f``, so the
    span of monomials up to that degree already surjects onto the quotient.
    """
    if f.is_zero():
        raise QuotientError("the zero polynomial has no Gorenstein quotient")
    ring = f.ring
    D = f.wdeg()
    monos = monomials_up_to(ring, D)
    mat = _catalecticant(ring, f, monos, monos)
    cols = ec.independent_columns(mat, len(monos))
    basis = [monos[j] for j in cols]
    relations = _kernel_polys(ring, mat, monos)
    pairing = [
        [apolar_pairing(Poly.monomial(ring, tuple(x + y for x, y in zip(a, b))), f) for b in basis]
        for a in basis
    ]
    return LocalQuotient(ring, f, D, len(basis), basis, relations, pairing)


def derivative_span_rank(f: Poly) -> int:
    """Dimension of the span of all partial derivatives of ``f`` (f included)."""
    ring = f.ring
    derivs = {f}
    frontier = [f]
    while frontier:
        nxt = []
        for g in frontier:
            for x in ring.gens():
                h = apply_diffop(x, g)
                if h and h not in derivs:
                    derivs.add(h)
                    nxt.append(h)
        frontier = nxt
    monos = sorted({e for g in derivs for e in g.terms})
    rows = [[g.coeff(e) for e in monos] for g in derivs]
    return ec.rank(rows) if monos else 0
