import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from apolar.polyring import (
    LinearFunctional,
    Poly,
    PolyParseError,
    RingMismatchError,
    RingSpec,
    apolar_pairing,
    apply_diffop,
    directional_derivative,
    evaluate,
    format_poly,
    functional_from_potential,
    monomials_of_degree,
    monomials_up_to,
    parse_poly,
    potential_from_functional,
    quasi_homogeneous_components,
    substitute,
)

from conftest import random_homogeneous, random_poly

XY = RingSpec.unweighted(["x", "y"])
XYZ = RingSpec.unweighted(["x", "y", "z"])


def P(text, ring=XY):
    return parse_poly(ring, text)


def to_sympy(f: Poly):
    syms = sympy.symbols(f.ring.variables)
    if not isinstance(syms, tuple):
        syms = (syms,)
    expr = sympy.Integer(0)
    for e, c in f.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            t *= s ** k
        expr += t
    return sympy.expand(expr), syms


def from_sympy(expr, ring: RingSpec) -> Poly:
    syms = sympy.symbols(ring.variables)
    if not isinstance(syms, tuple):
        syms = (syms,)
    poly = sympy.Poly(sympy.expand(expr), *syms)
    return Poly(ring, {e: Fraction(int(c.p), int(c.q)) for e, c in zip(poly.monoms(), poly.coeffs())})


# -- arithmetic -------------------------------------------------------------

def test_arith_examples():
    assert P("x + y") * P("x - y") == P("x^2 - y^2")
    assert P("x^3 + 2*y") * 0 == Poly.zero(XY)
    expanded, syms = to_sympy(P("x + 2*y") ** 2)
    x, y = syms
    assert sympy.expand((x + 2 * y) ** 2 - expanded) == 0
    assert P("x + 2*y") ** 2 == P("x^2 + 4*x*y + 4*y^2")


def test_no_zero_terms():
    f = P("x + y") - P("x")
    assert f.terms == {(0, 1): 1}
    assert (P("x") - P("x")).terms == {}


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        P("x") + parse_poly(XYZ, "x")
    with pytest.raises(RingMismatchError):
        apply_diffop(P("x"), parse_poly(XYZ, "x"))


# -- derivatives --------------------------------------------------------------

def test_directional_derivative_examples():
    assert directional_derivative(P("x^2*y"), [1, 0]) == P("2*x*y")
    f = P("x*y")
    twice = directional_derivative(directional_derivative(f, [1, 1]), [1, 1])
    assert twice == Poly.constant(XY, 2 * evaluate(f, [1, 1]))
    assert directional_derivative(P("7"), [3, -1]).is_zero()


def test_apply_diffop_examples():
    X = RingSpec.unweighted(["x"])
    assert apply_diffop(P("x", X), P("x^3", X)) == P("3*x^2", X)
    assert apply_diffop(P("x*y"), P("x^2*y")) == P("2*x")
    assert apply_diffop(P("x^2*y^2"), P("x^3 + y")).is_zero()


def test_apply_diffop_matches_sympy():
    rng = random.Random(3)
    for _ in range(25):
        Pp = random_poly(rng, XYZ, 3, 3)
        f = random_poly(rng, XYZ, 5, 5)
        fx, syms = to_sympy(f)
        expected = sympy.Integer(0)
        for e, c in Pp.terms.items():
            d = fx
            for s, k in zip(syms, e):
                if k:
                    d = sympy.diff(d, s, k)
            expected += sympy.Rational(c.numerator, c.denominator) * d
        assert apply_diffop(Pp, f) == from_sympy(expected, XYZ)


def test_apolar_pairing_examples():
    assert apolar_pairing(P("x^2*y"), P("1/2*x^2*y")) == 1
    assert apolar_pairing(P("x^3"), P("x^2 + y")) == 0
    f = P("3 + x*y")
    assert apolar_pairing(Poly.constant(XY, 1), f) == evaluate(f, [0, 0])


# -- functionals and potentials ----------------------------------------------

def test_potential_from_functional_examples():
    monos = monomials_up_to(XY, 2)
    ell = LinearFunctional(XY, 2, {e: math.factorial(e[0]) * math.factorial(e[1]) for e in monos})
    assert potential_from_functional(ell) == Poly(XY, {e: 1 for e in monos})
    assert potential_from_functional(LinearFunctional(XY, 3, {})).is_zero()


def test_degree_one_potential():
    # ell supported in degree n on weight-one variables gives f(v) = ell(v^n / n!)
    rng = random.Random(11)
    n = 3
    ell = LinearFunctional(XY, n, {e: rng.randint(-4, 4) for e in monomials_of_degree(XY, n)})
    f = potential_from_functional(ell)
    for _ in range(5):
        v = [Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3))]
        lin = P("x").scale(v[0]) + P("y").scale(v[1])
        assert evaluate(f, v) == ell(lin ** n) / math.factorial(n)


def test_functional_from_potential_examples():
    X = RingSpec.unweighted(["x"])
    ell = functional_from_potential(P("1/2*x^2", X), 2)
    assert ell.values == {(2,): 1}
    assert ell(P("x", X)) == 0 and ell(P("1", X)) == 0
    assert functional_from_potential(Poly.zero(XY), 3).values == {}
    f = P("x^3 + x*y")
    assert potential_from_functional(functional_from_potential(f, 3)) == f


def test_functional_rejects_out_of_bound():
    with pytest.raises(ValueError):
        LinearFunctional(XY, 1, {(2, 0): 1})


# -- substitution and components -----------------------------------------------

def test_substitute_examples():
    U = RingSpec.unweighted(["u"])
    LG = RingSpec.unweighted(["l", "g"])
    assert substitute(P("u^2", U), [parse_poly(LG, "l + g")]) == parse_poly(LG, "l^2 + 2*l*g + g^2")
    assert substitute(P("u", U), [Poly.zero(LG)], LG).is_zero()
    UV = RingSpec.unweighted(["u", "v"])
    assert substitute(P("u*v", UV), [P("x + y"), P("x - y")]) == P("x^2 - y^2")
    with pytest.raises(ValueError):
        substitute(P("u*v", UV), [P("x")])


def test_quasi_homogeneous_components_examples():
    W = RingSpec(("x", "y"), (1, 2))
    comps = quasi_homogeneous_components(parse_poly(W, "x^2 + y + x"))
    assert comps == {1: parse_poly(W, "x"), 2: parse_poly(W, "x^2 + y")}
    assert quasi_homogeneous_components(P("x*y + y^2")) == {2: P("x*y + y^2")}
    assert quasi_homogeneous_components(Poly.zero(XY)) == {}


# -- text format ---------------------------------------------------------------

def test_parse_print_examples():
    R = RingSpec.unweighted(["a", "b", "c"])
    f = parse_poly(R, "1/2*a^2*b - 3*c")
    assert format_poly(f) == "1/2*a^2*b - 3*c"
    assert parse_poly(R, "1/2*a^2+a*b+2c") == parse_poly(R, "2*c + a*b + 1/2*a^2")
    assert format_poly(parse_poly(R, "-a")) == "-a"
    assert format_poly(Poly.zero(R)) == "0"


@pytest.mark.parametrize("bad", ["", "x +", "x ** 2", "q", "1/0*x", "x^^2", "+"])
def test_parse_errors(bad):
    with pytest.raises(PolyParseError):
        parse_poly(XY, bad)


def test_ring_validation():
    with pytest.raises(ValueError):
        RingSpec(("x", "x"), (1, 1))
    with pytest.raises(ValueError):
        RingSpec(("x",), (0,))
    with pytest.raises(ValueError):
        RingSpec(("",), (1,))


def test_monomial_order():
    W = RingSpec(("x", "y"), (1, 2))
    assert monomials_of_degree(W, 4) == [(4, 0), (2, 1), (0, 2)]
    assert monomials_of_degree(XY, 2) == [(2, 0), (1, 1), (0, 2)]


# -- properties ------------------------------------------------------------------

polys3 = st.builds(
    lambda seed, bound, nterms: random_poly(random.Random(seed), XYZ, bound, nterms),
    st.integers(0, 10**6),
    st.integers(0, 4),
    st.integers(0, 5),
)


@settings(max_examples=60, deadline=None)
@given(polys3, polys3, polys3)
def test_apolarity_adjoint(Pp, Q, f):
    assert apolar_pairing(Pp * Q, f) == apolar_pairing(Q, apply_diffop(Pp, f))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 6))
def test_functional_pairing_identity(seed, bound):
    rng = random.Random(seed)
    monos = monomials_up_to(XYZ, bound)
    ell = LinearFunctional(XYZ, bound, {e: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for e in monos if rng.random() < 0.5})
    f = potential_from_functional(ell)
    Pp = random_poly(rng, XYZ, bound, 4)
    assert ell(Pp) == apolar_pairing(Pp, f)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_polarization_identity(seed, d):
    rng = random.Random(seed)
    f = random_homogeneous(rng, XYZ, d, 4)
    v = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3)]
    g = f
    for _ in range(d):
        g = directional_derivative(g, v)
    assert g == Poly.constant(XYZ, math.factorial(d) * evaluate(f, v))


@settings(max_examples=40, deadline=None)
@given(polys3, polys3)
def test_substitute_is_multiplicative(f, g):
    images = [P("x + 2*y"), P("x*y - 1"), P("1/3*y^2")]
    assert substitute(f * g, images) == substitute(f, images) * substitute(g, images)


@settings(max_examples=40, deadline=None)
@given(polys3, polys3, st.lists(st.fractions(-3, 3, max_denominator=3), min_size=3, max_size=3))
def test_leibniz(f, g, v):
    lhs = directional_derivative(f * g, v)
    assert lhs == directional_derivative(f, v) * g + f * directional_derivative(g, v)


@settings(max_examples=40, deadline=None)
@given(polys3)
def test_text_roundtrip(f):
    assert parse_poly(XYZ, format_poly(f)) == f
