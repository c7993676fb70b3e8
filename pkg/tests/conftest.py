import itertools
import math
import random
from fractions import Fraction
from pathlib import Path

import pytest

from apolar.polyring import Poly, RingSpec, monomials_of_degree, monomials_up_to

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# criterion number -> (description, passed); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        desc, ok = ACCEPTANCE[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num}. {desc}")


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def rand_rational(rng: random.Random, lo=-5, hi=5, maxden=4) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, maxden))


def random_poly(rng: random.Random, ring: RingSpec, bound: int, nterms: int) -> Poly:
    monos = monomials_up_to(ring, bound)
    terms = {}
    for _ in range(nterms):
        terms[rng.choice(monos)] = rand_rational(rng)
    return Poly(ring, terms)


def random_homogeneous(rng: random.Random, ring: RingSpec, d: int, nterms: int) -> Poly:
    monos = monomials_of_degree(ring, d)
    if not monos:
        return Poly.zero(ring)
    return Poly(ring, {rng.choice(monos): rand_rational(rng) for _ in range(nterms)})


def random_quasi_homogeneous(rng: random.Random) -> Poly:
    """Nonzero quasi-homogeneous polynomial in 1 to 3 variables, weights in {1, 2}, degree <= 5."""
    while True:
        k = rng.randint(1, 3)
        ring = RingSpec(tuple("xyz"[:k]), tuple(rng.choice((1, 2)) for _ in range(k)))
        d = rng.randint(1, 5)
        f = random_homogeneous(rng, ring, d, rng.randint(1, 4))
        if not f.is_zero():
            return f


def sympy_derivative_rank(f: Poly) -> int:
    """Independent oracle: rank of the span of all mixed partials of f, via sympy."""
    import sympy

    syms = [sympy.Symbol(v) for v in f.ring.variables]
    expr = sum(
        (sympy.Rational(c.numerator, c.denominator) * sympy.prod([s ** k for s, k in zip(syms, e)])
         for e, c in f.terms.items()),
        sympy.Integer(0),
    )
    derivs = []
    for e in monomials_up_to(f.ring, f.wdeg()):
        d = expr
        for s, k in zip(syms, e):
            if k:
                d = sympy.diff(d, s, k)
        d = sympy.expand(d)
        if d != 0:
            derivs.append(sympy.Poly(d, *syms))
    if not derivs:
        return 0
    monos = sorted({m for p in derivs for m in p.monoms()})
    mat = sympy.Matrix([[p.coeff_monomial(m) for m in monos] for p in derivs])
    return mat.rank()


def random_strictly_convex(rng: random.Random, fan):
    """Integer strictly convex support function near a multiple of the ample class."""
    from apolar.toricgeom import VirtualPolytope, find_ample, is_strictly_convex

    h0 = find_ample(fan)
    while True:
        t = rng.randint(1, 4)
        h = VirtualPolytope(fan, tuple(t * v + rng.randint(-2, 2) for v in h0.values))
        if is_strictly_convex(h):
            return h


def cli_suite() -> list:
    """Every (argv, expected exit code) pair exercised over the fixture tree."""
    F = FIXTURES
    runs = []
    for p in sorted((F / "ann").glob("*.json")):
        if p.stem == "functional_xy":
            runs.append((["potential", str(p)], 0))
        code = {"bad_syntax": 2, "not_homogeneous": 3}.get(p.stem, 0)
        if p.stem == "local":
            runs.append((["local", str(p)], 0))
            continue
        runs.append((["ann", str(p)], code))
        if code == 0:
            runs.append((["ann", str(p), "--format", "text"], 0))
            runs.append((["local", str(p)], 0))
    runs.append((["local", str(F / "ann" / "not_homogeneous.json")], 0))
    for p in sorted((F / "fans").glob("*.json")):
        code = 3 if p.stem in ("nonprojective3", "p2_missing_cone", "nonprimitive") else 0
        runs.append((["toric", str(p)], code))
    pairs = [
        ("p1", "p1_segment"), ("p1", "p1_virtual_segment"), ("p2", "p2_triangle"),
        ("p3", "p3_virtual"), ("simplex2", "standard_triangle"), ("p1xp1", "unit_square"),
    ]
    for fan, poly in pairs:
        fp, pp = str(F / "fans" / f"{fan}.json"), str(F / "polytopes" / f"{poly}.json")
        runs.append((["toric", fp, "--polytope", pp], 0))
        runs.append((["integrate", fp, "--polytope", pp], 0))
        runs.append((["integrate", fp, "--polytope", pp, "--monomial", ",".join(["1"] * (3 if fan == "p3" else 2 if fan not in ("p1",) else 1))], 0))
    for p in sorted((F / "bundles").glob("*.json")):
        runs.append((["bundle", str(p)], 2 if p.stem == "chern_mismatch" else 0))
    return runs


def h_vector(f) -> list:
    """h-vector of the simplicial sphere, from the face numbers."""
    n = f.dim
    faces = set()
    for cone in f.max_cones:
        for k in range(n + 1):
            faces.update(itertools.combinations(cone, k))
    fvec = [sum(1 for t in faces if len(t) == i) for i in range(n + 1)]  # f_{i-1}
    return [
        sum((-1) ** (k - i) * math.comb(n - i, k - i) * fvec[i] for i in range(k + 1))
        for k in range(n + 1)
    ]
