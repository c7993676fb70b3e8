"""Even cohomology of toric bundles from the base potential and Chern data.

The base enters only through its ring of generators, its potential ``P_X``
and a Chern map ``c`` sending the lattice basis characters to weight-one
elements of the base ring.  The bundle potential is

    P_E(gamma, h) = integral over D(h) of P_X(c(lambda) + gamma) d lambda,

a polynomial in the base generators and the ray variables of the fan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactcore import to_rational
from .inverse_system import GradedQuotient, ann_graded
from .polyring import (
    Poly,
    RingSpec,
    apolar_pairing,
    extend_ring,
    substitute,
)
from .toricgeom import (
    Fan,
    VirtualPolytope,
    integral_polynomial,
    integrate_virtual,
    ray_ring,
    toric_cohomology,
)


class BundleError(ValueError):
    pass


@dataclass(frozen=True)
class BaseAlgebraData:
    ring: RingSpec
    potential: Poly
    socle_degree: int

    def __post_init__(self):
        if self.potential.ring != self.ring:
            raise BundleError("base potential must live in the base ring")
        if self.potential.is_zero():
            raise BundleError("base potential is zero")
        if self.potential.degrees() != {self.socle_degree}:
            raise BundleError(
                f"base potential must be quasi-homogeneous of degree {self.socle_degree}"
            )

    @classmethod
    def point(cls) -> "BaseAlgebraData":
        ring = RingSpec((), ())
        return cls(ring, Poly.constant(ring, 1), 0)

    @classmethod
    def projective_space(cls, n: int, name: str = "u") -> "BaseAlgebraData":
        """P^n with hyperplane class ``name``: potential u^n/n!."""
        ring = RingSpec.unweighted([name])
        return cls(ring, Poly.monomial(ring, (n,), Fraction(1, math.factorial(n))), n)

    def quotient(self) -> GradedQuotient:
        q = ann_graded(self.potential)
        if q.hilbert[0] != 1 or q.hilbert[-1] != 1:
            raise BundleError(f"base algebra is not Gorenstein: hilbert {q.hilbert}")
        return q


@dataclass(frozen=True)
class ChernMap:
    """First Chern classes of the line bundles of the lattice basis characters."""

    n: int
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.n:
            raise BundleError(f"Chern map needs {self.n} images, got {len(self.images)}")
        for j, im in enumerate(self.images):
            if im.degrees() - {1}:
                raise BundleError(f"Chern image {j} ({im}) is not of weight one")

    @classmethod
    def zero(cls, base: BaseAlgebraData, n: int) -> "ChernMap":
        return cls(n, tuple(Poly.zero(base.ring) for _ in range(n)))

    @classmethod
    def from_matrix(cls, base: BaseAlgebraData, matrix: Sequence[Sequence]) -> "ChernMap":
        """``matrix[j][g]`` is the coefficient of base generator g in c(e_j^*)."""
        images = []
        for row in matrix:
            if len(row) != base.ring.arity:
                raise BundleError("Chern matrix row length must match the base generators")
            p = Poly.zero(base.ring)
            for g, x in zip(base.ring.gens(), row):
                p = p + g.scale(to_rational(x))
            images.append(p)
        return cls(len(images), tuple(images))


@dataclass
class BundlePresentation:
    ring: RingSpec
    potential: Poly
    quotient: GradedQuotient
    leray_hirsch: bool
    base_hilbert: list
    fiber_hilbert: list


def combined_ring(base: BaseAlgebraData, fan: Fan) -> RingSpec:
    """Base generators (their weights) followed by one weight-one variable per ray."""
    rays = ray_ring(fan, taken=base.ring.variables)
    return RingSpec(base.ring.variables + rays.variables, base.ring.weights + rays.weights)


def _lambda_ring(base: BaseAlgebraData, n: int) -> RingSpec:
    prefix = "lam"
    while any(f"{prefix}{j}" in base.ring.variables for j in range(n)):
        prefix += "_"
    names = base.ring.variables + tuple(f"{prefix}{j}" for j in range(n))
    return RingSpec(names, base.ring.weights + (1,) * n)


def _split_lambda(Q: Poly, base: BaseAlgebraData, n: int) -> dict:
    """Collect Q = sum_beta q_beta(gamma) lambda^beta; keys beta, values in the base ring."""
    k = base.ring.arity
    out: dict = {}
    for e, c in Q.terms.items():
        beta, g = e[k:], e[:k]
        out.setdefault(beta, {})[g] = c
    return {beta: Poly(base.ring, t) for beta, t in sorted(out.items(), reverse=True)}


def _check(fan: Fan, c: ChernMap):
    if c.n != fan.dim:
        raise BundleError(f"Chern map has rank {c.n} but the fan lives in rank {fan.dim}")


def chern_powers(c: ChernMap, base: BaseAlgebraData, i: int) -> dict:
    """c(lambda)^i expanded as {beta: m_beta} with m_beta in the base ring."""
    L = _lambda_ring(base, c.n)
    k = base.ring.arity
    lam = L.gens()[k:]
    cl = Poly.zero(L)
    for j, im in enumerate(c.images):
        cl = cl + extend_ring(im, L) * lam[j]
    return _split_lambda(cl ** i, base, c.n)


def horizontal_part(h: VirtualPolytope, c: ChernMap, base: BaseAlgebraData, i: int) -> Poly:
    """The base class ((n+i)!/i!) * integral over D(h) of c(lambda)^i."""
    if i < 0:
        raise BundleError("horizontal parts are indexed from n upward")
    _check(h.fan, c)
    n = c.n
    out = Poly.zero(base.ring)
    for beta, m in chern_powers(c, base, i).items():
        val = integrate_virtual(h, beta)
        if val:
            out = out + m.scale(val)
    return out.scale(Fraction(math.factorial(n + i), math.factorial(i)))


def shifted_base_potential(base: BaseAlgebraData, c: ChernMap) -> dict:
    """P_X(c(lambda) + gamma), split by lambda-monomial."""
    L = _lambda_ring(base, c.n)
    k = base.ring.arity
    gens = L.gens()
    images = []
    for gi in range(k):
        img = gens[gi]
        for j, im in enumerate(c.images):
            coef = im.coeff(tuple(1 if t == gi else 0 for t in range(k)))
            if coef:
                img = img + gens[k + j].scale(coef)
        images.append(img)
    Q = substitute(base.potential, images, L)
    return _split_lambda(Q, base, c.n)


def bundle_potential(fan: Fan, base: BaseAlgebraData, c: ChernMap) -> Poly:
    _check(fan, c)
    R = combined_ring(base, fan)
    k = base.ring.arity
    ray_gens = R.gens()[k:]
    out = Poly.zero(R)
    for beta, q in shifted_base_potential(base, c).items():
        F = integral_polynomial(fan, beta)
        F_R = substitute(F, ray_gens, R)
        out = out + extend_ring(q, R) * F_R
    return out


def convolve(a: Sequence[int], b: Sequence[int]) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def leray_hirsch_check(p: BundlePresentation, base: BaseAlgebraData, fan: Fan) -> bool:
    """Hilbert function of the bundle equals base (*) fiber convolution."""
    expected = convolve(base.quotient().hilbert, toric_cohomology(fan).hilbert)
    return list(p.quotient.hilbert) == expected


def bundle_cohomology(fan: Fan, base: BaseAlgebraData, c: ChernMap) -> BundlePresentation:
    P = bundle_potential(fan, base, c)
    q = ann_graded(P)
    pres = BundlePresentation(
        q.ring, P, q, False, base.quotient().hilbert, toric_cohomology(fan).hilbert
    )
    pres.leray_hirsch = leray_hirsch_check(pres, base, fan)
    return pres


def potential_via_horizontal_parts(
    h: VirtualPolytope, gamma: Sequence, c: ChernMap, base: BaseAlgebraData
) -> Fraction:
    """Evaluate the bundle potential as ell_X(exp(gamma) * sum_i h_{n+i}/(n+i)!).

    Independent of :func:`bundle_potential`: integrates numerically at the
    given ``h`` and pairs with the base potential instead of composing
    polynomials.
    """
    _check(h.fan, c)
    gamma = [to_rational(x) for x in gamma]
    if len(gamma) != base.ring.arity:
        raise BundleError("gamma must give one value per base generator")
    k = base.socle_degree
    n = c.n
    g = Poly.zero(base.ring)
    for gen, x in zip(base.ring.gens(), gamma):
        g = g + gen.scale(x)
    exp_g = Poly.zero(base.ring)
    power = Poly.constant(base.ring, 1)
    for j in range(k + 1):
        exp_g = exp_g + power.scale(Fraction(1, math.factorial(j)))
        power = power * g
    horiz = Poly.zero(base.ring)
    for i in range(k + 1):
        hp = horizontal_part(h, c, base, i)
        horiz = horiz + hp.scale(Fraction(1, math.factorial(n + i)))
    return apolar_pairing(exp_g * horiz, base.potential)
