import random
from fractions import Fraction

import pytest

from apolar.inverse_system import (
    NotQuasiHomogeneousError,
    QuotientError,
    ann_graded,
    ann_local,
    ann_membership,
    derivative_span_rank,
    multiply,
    pairing_matrices,
    reduce,
)
from apolar.polyring import Poly, RingSpec, monomials_of_degree, parse_poly
from apolar import exactcore as ec

from conftest import random_quasi_homogeneous, sympy_derivative_rank

XY = RingSpec.unweighted(["x", "y"])


def P(text, ring=XY):
    return parse_poly(ring, text)


def test_membership_examples():
    assert ann_membership(P("x^2"), P("x*y"))
    assert not ann_membership(P("x*y"), P("x*y"))
    assert ann_membership(Poly.zero(XY), P("x*y"))


def test_graded_xy():
    q = ann_graded(P("x*y"))
    assert q.hilbert == [1, 2, 1]
    assert set(q.relations[2]) == {P("x^2"), P("y^2")}
    assert q.relations[0] == [] and q.relations[1] == []
    assert q.pairing[1] == [[0, 1], [1, 0]]


def test_graded_weighted():
    W = RingSpec(("x", "y"), (1, 2))
    q = ann_graded(parse_poly(W, "x^2 + y"))
    assert q.hilbert == [1, 1, 1]
    (rel,) = q.relations[2]
    target = parse_poly(W, "x^2 - 2*y")
    # same line: rel is a nonzero multiple of x^2 - 2y
    ratio = rel.coeff((2, 0)) / target.coeff((2, 0))
    assert ratio != 0 and rel == target.scale(ratio)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_graded_power(n):
    X = RingSpec.unweighted(["x"])
    q = ann_graded(Poly.monomial(X, (n,)))
    assert q.hilbert == [1] * (n + 1)
    assert all(r == [] for r in q.relations)
    assert f"x^{n + 1}" in q.to_plain() or (n == 0)


def test_graded_pairing_x_squared():
    X = RingSpec.unweighted(["x"])
    q = ann_graded(P("x^2", X))
    assert q.pairing[1] == [[2]]
    assert q.pairing[0][0][0] != 0 and q.pairing[2][0][0] != 0


def test_graded_errors():
    with pytest.raises(QuotientError):
        ann_graded(Poly.zero(XY))
    with pytest.raises(NotQuasiHomogeneousError, match="ann_local"):
        ann_graded(P("x^2 + y"))


def test_local_examples():
    X = RingSpec.unweighted(["x"])
    q = ann_local(P("1/2*x^2 + x", X))
    assert q.dimension == 3
    assert q.basis == [(0,), (1,), (2,)]
    assert ann_local(Poly.constant(XY, 1)).dimension == 1
    g = P("x^3*y + x*y^3")
    assert ann_local(g).dimension == sum(ann_graded(g).hilbert)
    with pytest.raises(QuotientError):
        ann_local(Poly.zero(XY))


def test_local_pairing_nondegenerate():
    q = ann_local(P("x^3 + x*y + y"))
    assert ec.rank(q.pairing) == q.dimension
    for r in q.relations:
        assert ann_membership(r, q.potential)


def test_reduce_examples():
    q = ann_graded(P("x*y"))
    assert reduce(q, P("x + y")) == [1, 1]
    assert reduce(q, P("x")) == [1, 0]
    assert reduce(q, P("x^2")) == [0]
    with pytest.raises(QuotientError):
        reduce(q, P("x + x*y"))


def test_pairing_certificate():
    q = ann_graded(P("x^2*y + y^3"))
    _, ranks = pairing_matrices(q)
    assert ranks == q.hilbert
    q.pairing[1] = [[0] * len(row) for row in q.pairing[1]]
    with pytest.raises(QuotientError):
        pairing_matrices(q)


# -- properties -----------------------------------------------------------------

SEEDS = range(40)


@pytest.mark.parametrize("seed", SEEDS)
def test_quotient_invariants(seed):
    rng = random.Random(1000 + seed)
    f = random_quasi_homogeneous(rng)
    q = ann_graded(f)
    n = q.socle_degree
    assert q.hilbert[0] == 1 and q.hilbert[n] == 1
    assert q.hilbert == q.hilbert[::-1]
    _, ranks = pairing_matrices(q)
    assert ranks == q.hilbert
    for d in range(n + 1):
        assert q.hilbert[d] + len(q.relations[d]) == len(monomials_of_degree(f.ring, d))
        for r in q.relations[d]:
            assert ann_membership(r, f)
            m = Poly.monomial(f.ring, tuple(rng.randint(0, 2) for _ in range(f.ring.arity)))
            assert ann_membership(m * r, f)
    assert q.dimension == sympy_derivative_rank(f)
    assert q.dimension == derivative_span_rank(f)
    assert ann_local(f).dimension == q.dimension


@pytest.mark.parametrize("seed", range(15))
def test_mult_table_associative(seed):
    rng = random.Random(2000 + seed)
    f = random_quasi_homogeneous(rng)
    q = ann_graded(f)
    n = q.socle_degree
    flat = [(d, m) for d in range(n + 1) for m in q.basis[d]]

    def as_poly(d, coords):
        p = Poly.zero(q.ring)
        for c, m in zip(coords, q.basis[d]):
            p = p + Poly.monomial(q.ring, m, c)
        return p

    for _ in range(10):
        (da, a), (db, b), (dc, c) = (rng.choice(flat) for _ in range(3))
        if da + db + dc > n:
            continue
        ab = as_poly(da + db, multiply(q, a, b))
        bc = as_poly(db + dc, multiply(q, b, c))
        left = ab * Poly.monomial(q.ring, c)
        right = Poly.monomial(q.ring, a) * bc
        assert all(x == 0 for x in reduce(q, left - right))


@pytest.mark.parametrize("seed", range(10))
def test_reduce_of_relation_is_zero(seed):
    rng = random.Random(3000 + seed)
    q = ann_graded(random_quasi_homogeneous(rng))
    for d, rels in enumerate(q.relations):
        for r in rels:
            assert all(c == 0 for c in reduce(q, r))
        for i, m in enumerate(q.basis[d]):
            unit = [Fraction(int(i == j)) for j in range(q.hilbert[d])]
            assert reduce(q, Poly.monomial(q.ring, m)) == unit


def test_json_shape():
    data = ann_graded(P("x*y")).to_json()
    assert data["hilbert"] == [1, 2, 1]
    assert data["basis"] == [["1"], ["x", "y"], ["x*y"]]
    assert data["relations"] == [[], [], ["x^2", "y^2"]]
    assert data["pairing"][1] == [["0", "1"], ["1", "0"]]
