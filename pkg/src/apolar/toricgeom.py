"""Smooth complete fans, virtual polytopes and exact integration.

A virtual polytope on a simplicial fan is recorded by its support values
``h[i] = h(e_i)`` on the rays.  We use the max convention::

    h_D(u) = max_{m in D} <m, u>,        D(h) = {m : <m, e_i> <= h[i]}

so convex piecewise linear functions correspond to honest polytopes.
Integrals over virtual polytopes are obtained from convex ones by shifting
along an ample direction and interpolating the resulting polynomial.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import exactcore as ec
from .exactcore import FitError, to_rational
from .inverse_system import GradedQuotient, ann_graded
from .polyring import Poly, RingSpec, evaluate, factorial_of, monomials_of_degree


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    rays: tuple
    max_cones: tuple

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)

    @property
    def dim(self) -> int:
        return len(self.rays[0]) if self.rays else 0

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.max_cones]}

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        try:
            return cls(data["rays"], data["max_cones"])
        except (KeyError, TypeError) as exc:
            raise FanError(f"malformed fan description: {exc}") from None


@dataclass(frozen=True)
class VirtualPolytope:
    fan: Fan
    values: tuple

    def __post_init__(self):
        vals = tuple(to_rational(v) for v in self.values)
        if len(vals) != self.fan.nrays:
            raise FanError(f"expected {self.fan.nrays} support values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    def __add__(self, other: "VirtualPolytope") -> "VirtualPolytope":
        if other.fan != self.fan:
            raise FanError("Minkowski sum of virtual polytopes on different fans")
        return VirtualPolytope(self.fan, tuple(a + b for a, b in zip(self.values, other.values)))

    def __mul__(self, s) -> "VirtualPolytope":
        s = to_rational(s)
        return VirtualPolytope(self.fan, tuple(s * a for a in self.values))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def to_json(self) -> dict:
        return {"values": [ec.format_rational(v) for v in self.values]}

    @classmethod
    def from_json(cls, fan: Fan, data: dict) -> "VirtualPolytope":
        try:
            return cls(fan, tuple(data["values"]))
        except (KeyError, TypeError) as exc:
            raise FanError(f"malformed polytope description: {exc}") from None


# -- standard fans ----------------------------------------------------------

def projective_space_fan(n: int) -> Fan:
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple([-1] * n))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan(tuple(rays), tuple(sorted(cones)))


def hirzebruch_fan(k: int) -> Fan:
    """Rays e1, e2, -e1 + k e2, -e2."""
    return Fan(((1, 0), (0, 1), (-1, k), (0, -1)), ((0, 1), (1, 2), (2, 3), (0, 3)))


def product_fan(a: Fan, b: Fan) -> Fan:
    """Fan of the product; rays of ``a`` come first, padded with zeros."""
    na, nb = a.dim, b.dim
    rays = [tuple(r) + (0,) * nb for r in a.rays] + [(0,) * na + tuple(r) for r in b.rays]
    off = a.nrays
    cones = [tuple(ca) + tuple(off + j for j in cb) for ca in a.max_cones for cb in b.max_cones]
    return Fan(tuple(rays), tuple(cones))


def p1xp1_fan() -> Fan:
    """P^1 x P^1 with ray order e1, e2, -e1, -e2."""
    return Fan(((1, 0), (0, 1), (-1, 0), (0, -1)), ((0, 1), (1, 2), (2, 3), (0, 3)))


def ray_ring(fan: Fan, taken: Sequence[str] = ()) -> RingSpec:
    """Weight-one ring with one variable per ray: a, b, c, ... (h0, h1, ... past 26)."""
    taken = set(taken)
    if fan.nrays <= 26 and not taken.intersection("abcdefghijklmnopqrstuvwxyz"[: fan.nrays]):
        names = list("abcdefghijklmnopqrstuvwxyz"[: fan.nrays])
    else:
        prefix = "h"
        while any(f"{prefix}{i}" in taken for i in range(fan.nrays)):
            prefix += "_"
        names = [f"{prefix}{i}" for i in range(fan.nrays)]
    return RingSpec.unweighted(names)


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class FanCertificate:
    dim: int
    nrays: int
    ncones: int
    nwalls: int
    covering_point: tuple


def _det(rows) -> Fraction:
    return ec.determinant([[Fraction(x) for x in r] for r in rows])


def validate_fan(fan: Fan) -> FanCertificate:
    """Check that ``fan`` is a smooth complete simplicial fan.

    Checks, in order: ray shape and primitivity, unimodularity of every
    maximal cone, every wall shared by exactly two cones lying on opposite
    sides of it, connectivity of the wall graph, and that a generic
    direction lies in exactly one maximal cone.  Projectivity is certified
    separately by :func:`find_ample`.
    """
    if not fan.rays:
        raise FanError("fan has no rays")
    n = fan.dim
    if n < 1:
        raise FanError("fan must live in a lattice of rank >= 1")
    for i, r in enumerate(fan.rays):
        if len(r) != n:
            raise FanError(f"ray {i} has length {len(r)}, expected {n}")
        g = math.gcd(*r)
        if g == 0:
            raise FanError(f"ray {i} is zero")
        if g != 1:
            raise FanError(f"ray {i} {list(r)} is not primitive")
    if len(set(fan.rays)) != len(fan.rays):
        raise FanError("duplicate rays")
    if not fan.max_cones:
        raise FanError("fan has no maximal cones")
    if len(set(fan.max_cones)) != len(fan.max_cones):
        raise FanError("duplicate maximal cones")
    used = set()
    for c in fan.max_cones:
        if len(c) != n or len(set(c)) != n:
            raise FanError(f"cone {list(c)} does not have {n} distinct rays")
        if any(i < 0 or i >= fan.nrays for i in c):
            raise FanError(f"cone {list(c)} refers to a missing ray")
        d = _det([fan.rays[i] for i in c])
        if d == 0:
            raise FanError(f"cone {list(c)} has linearly dependent rays")
        if abs(d) != 1:
            raise FanError(f"cone {list(c)} is not smooth (|det| = {abs(d)})")
        used.update(c)
    unused = sorted(set(range(fan.nrays)) - used)
    if unused:
        raise FanError(f"rays {unused} lie in no maximal cone")

    walls = _walls(fan)
    for w, owners in walls.items():
        if len(owners) != 2:
            raise FanError(
                f"completeness: wall {list(w)} lies in {len(owners)} maximal cone(s) "
                f"{[list(fan.max_cones[k]) for k in owners]}, expected 2"
            )
        s1, s2 = (_side(fan, w, fan.max_cones[k]) for k in owners)
        if s1 * s2 >= 0:
            raise FanError(f"completeness: cones on wall {list(w)} overlap instead of meeting")
    adj = {k: set() for k in range(len(fan.max_cones))}
    for owners in walls.values():
        a, b = owners
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != len(fan.max_cones):
        missing = sorted(set(adj) - seen)
        raise FanError(f"completeness: cones {[list(fan.max_cones[k]) for k in missing]} are disconnected")

    point, count = _covering_count(fan)
    if count != 1:
        raise FanError(f"completeness: generic direction {list(point)} lies in {count} maximal cones")
    return FanCertificate(n, fan.nrays, len(fan.max_cones), len(walls), point)


def _walls(fan: Fan) -> dict:
    walls: dict = {}
    for k, c in enumerate(fan.max_cones):
        for w in itertools.combinations(c, len(c) - 1):
            walls.setdefault(w, []).append(k)
    return walls


def _side(fan: Fan, wall: tuple, cone: tuple) -> int:
    (u,) = set(cone) - set(wall)
    d = _det([fan.rays[i] for i in wall] + [fan.rays[u]])
    return 1 if d > 0 else -1


@lru_cache(maxsize=None)
def _cone_inverses(fan: Fan) -> tuple:
    """For each max cone, the inverse of its ray matrix (rays as rows)."""
    out = []
    n = fan.dim
    for c in fan.max_cones:
        R = [[Fraction(x) for x in fan.rays[i]] for i in c]
        cols = []
        for k in range(n):
            e = [Fraction(1 if j == k else 0) for j in range(n)]
            cols.append(ec.solve(R, e))
        out.append(tuple(tuple(cols[k][j] for k in range(n)) for j in range(n)))
    return tuple(out)


def _covering_count(fan: Fan) -> tuple:
    """Count maximal cones containing a generic rational direction."""
    n = fan.dim
    rng = random.Random(12345)
    for _ in range(50):
        p = tuple(Fraction(rng.randint(-997, 997), rng.randint(1, 97)) for _ in range(n))
        if not any(p):
            continue
        count = 0
        generic = True
        for c in fan.max_cones:
            R = [[Fraction(x) for x in fan.rays[i]] for i in c]
            # p = sum coef_i * ray_i  <=>  R^T coef = p
            coef = ec.solve([list(col) for col in zip(*R)], list(p))
            if any(x == 0 for x in coef):
                generic = False
                break
            if all(x > 0 for x in coef):
                count += 1
        if generic:
            return p, count
    raise FanError("could not find a generic direction")


# -- vertices and convexity -----------------------------------------------

def vertices(h: VirtualPolytope) -> dict:
    """Vertex ``m_sigma`` for every maximal cone: <m, e_i> = h[i] for rays i in sigma."""
    fan = h.fan
    inv = _cone_inverses(fan)
    out = {}
    for c, M in zip(fan.max_cones, inv):
        hv = [h.values[i] for i in c]
        out[c] = tuple(sum((M[j][k] * hv[k] for k in range(fan.dim)), Fraction(0)) for j in range(fan.dim))
    return out


def _pair(m, r) -> Fraction:
    return sum((a * b for a, b in zip(m, r)), Fraction(0))


def is_convex(h: VirtualPolytope) -> bool:
    verts = vertices(h)
    for c, m in verts.items():
        cs = set(c)
        for j, r in enumerate(h.fan.rays):
            if j not in cs and _pair(m, r) > h.values[j]:
                return False
    return True


def is_strictly_convex(h: VirtualPolytope) -> bool:
    verts = vertices(h)
    for c, m in verts.items():
        cs = set(c)
        for j, r in enumerate(h.fan.rays):
            if j not in cs and _pair(m, r) >= h.values[j]:
                return False
    return True


def _wall_inequalities(fan: Fan) -> list:
    """Rows ``a`` with ``a . h > 0`` iff ``h`` is strictly convex across each wall."""
    rows = []
    for w, (k1, k2) in sorted(_walls(fan).items()):
        (u,) = set(fan.max_cones[k1]) - set(w)
        (v,) = set(fan.max_cones[k2]) - set(w)
        basis = [fan.rays[i] for i in w] + [fan.rays[u]]
        coef = ec.solve([list(col) for col in zip(*basis)], list(fan.rays[v]))
        # e_v = sum_i coef_i e_i + coef_u e_u; the linear function of cone k1
        # evaluated at e_v must fall strictly below h[v]
        row = [Fraction(0)] * fan.nrays
        row[v] += 1
        for i, c in zip(list(w) + [u], coef):
            row[i] -= c
        rows.append(row)
    return rows


def _fourier_motzkin_point(rows: list, rhs: list) -> list | None:
    """A rational point with rows . x >= rhs, or None if infeasible."""
    nv = len(rows[0]) if rows else 0
    stages = []
    cons = [(list(r), b) for r, b in zip(rows, rhs)]
    for k in range(nv - 1, -1, -1):
        stages.append(cons)
        pos = [c for c in cons if c[0][k] > 0]
        neg = [c for c in cons if c[0][k] < 0]
        new = [c for c in cons if c[0][k] == 0]
        for p in pos:
            for q in neg:
                a, b = p[0][k], -q[0][k]
                new.append(([b * x + a * y for x, y in zip(p[0], q[0])], b * p[1] + a * q[1]))
        cons = _dedupe(new)
        for r, b in cons:
            if not any(r) and b > 0:
                return None
    x = [Fraction(0)] * nv
    for k, stage in zip(range(nv), reversed(stages)):
        lo, hi = None, None
        for r, b in stage:
            a = r[k]
            if a == 0:
                continue
            rest = b - sum((r[j] * x[j] for j in range(k)), Fraction(0))
            bound = rest / a
            if a > 0:
                lo = bound if lo is None or bound > lo else lo
            else:
                hi = bound if hi is None or bound < hi else hi
        x[k] = _pick(lo, hi)
    return x


def _pick(lo, hi) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if hi is None:
        return Fraction(math.ceil(lo))
    if lo is None:
        return Fraction(math.floor(hi))
    if math.ceil(lo) <= hi:
        return Fraction(math.ceil(lo))
    return (lo + hi) / 2


def _dedupe(cons: list) -> list:
    seen = {}
    for r, b in cons:
        scale = max((abs(x) for x in r), default=Fraction(0))
        if scale == 0:
            key = (tuple(r), b)
            if key not in seen or seen[key][1] < b:
                seen[key] = (r, b)
            continue
        r = [x / scale for x in r]
        b = b / scale
        key = tuple(r)
        if key not in seen or seen[key][1] < b:
            seen[key] = (r, b)
    return list(seen.values())


@lru_cache(maxsize=None)
def find_ample(fan: Fan) -> VirtualPolytope:
    """An integer strictly convex support function, or FanError if none exists."""
    validate_fan(fan)
    rows = _wall_inequalities(fan)
    fixed = set(fan.max_cones[0])
    free = [i for i in range(fan.nrays) if i not in fixed]
    # linear functions shift h freely on the first cone, so pin it to zero
    reduced = [[r[i] for i in free] for r in rows]
    if not free:
        raise FanError("fan not projective: no strictly convex support function")
    x = _fourier_motzkin_point(reduced, [Fraction(1)] * len(rows))
    if x is None:
        raise FanError("fan not projective: wall inequalities are infeasible")
    lcm = 1
    for v in x:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    vals = [Fraction(0)] * fan.nrays
    for i, v in zip(free, x):
        vals[i] = v * lcm
    h = VirtualPolytope(fan, tuple(vals))
    if not is_strictly_convex(h):
        raise FanError("internal error: feasibility point is not strictly convex")
    return h


# -- integration ------------------------------------------------------------

@dataclass(frozen=True)
class ConvexIntegral:
    value: Fraction
    degenerate: bool
    simplices: int


def _affine_dim(points: list) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return ec.rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def triangulate(h: VirtualPolytope) -> list:
    """Deterministic pulling triangulation of the convex polytope of ``h``.

    Returns a list of simplices (vertex lists), empty if the polytope is
    not full dimensional.
    """
    fan = h.fan
    n = fan.dim
    verts = vertices(h)
    cones = sorted(fan.max_cones)

    def face_points(tau):
        pts = []
        for c in cones:
            if set(tau) <= set(c) and verts[c] not in pts:
                pts.append(verts[c])
        return pts

    def tri(tau, k):
        pts = face_points(tau)
        if k == 0:
            return [[pts[0]]]
        first = next(c for c in cones if set(tau) <= set(c))
        v0 = verts[first]
        out = []
        seen = set()
        cand = sorted({j for c in cones if set(tau) <= set(c) for j in c} - set(tau))
        for j in cand:
            if _pair(v0, fan.rays[j]) == h.values[j]:
                continue
            child = tuple(sorted(tau + (j,)))
            cpts = face_points(child)
            key = frozenset(cpts)
            if key in seen or _affine_dim(cpts) != k - 1:
                continue
            seen.add(key)
            for s in tri(child, k - 1):
                out.append([v0] + s)
        return out

    if _affine_dim(list(verts.values())) < n:
        return []
    return tri((), n)


def _simplex_integral(simplex: list, mono: Sequence[int]) -> Fraction:
    n = len(simplex) - 1
    v0 = simplex[0]
    vol = abs(ec.determinant([[a - b for a, b in zip(v, v0)] for v in simplex[1:]]))
    if vol == 0:
        return Fraction(0)
    bary = RingSpec.default(n + 1, "s")
    gens = bary.gens()
    integrand = Poly.constant(bary, 1)
    for k, e in enumerate(mono):
        if e:
            coord = Poly.zero(bary)
            for i, v in enumerate(simplex):
                if v[k]:
                    coord = coord + gens[i].scale(v[k])
            integrand = integrand * coord ** e
    total = Fraction(0)
    for a, c in integrand.terms.items():
        total += c * Fraction(factorial_of(a), math.factorial(n + sum(a)))
    return total * vol


def convex_integral(h: VirtualPolytope, mono: Sequence[int]) -> ConvexIntegral:
    if len(mono) != h.fan.dim:
        raise ValueError(f"monomial exponent must have length {h.fan.dim}")
    if not is_convex(h):
        raise ValueError("support function is not convex; use integrate_virtual")
    simplices = triangulate(h)
    if not simplices:
        return ConvexIntegral(Fraction(0), True, 0)
    value = sum((_simplex_integral(s, mono) for s in simplices), Fraction(0))
    return ConvexIntegral(value, False, len(simplices))


def integrate_convex(h: VirtualPolytope, mono: Sequence[int]) -> Fraction:
    """Exact integral of ``m^mono`` over the polytope of a convex ``h``.

    Lower-dimensional polytopes integrate to 0; :func:`convex_integral`
    reports that case explicitly.
    """
    return convex_integral(h, mono).value


def integrate_virtual(h: VirtualPolytope, mono: Sequence[int]) -> Fraction:
    """Integral of ``m^mono`` over a virtual polytope.

    The integral is polynomial along ``h + t*h0`` for an ample ``h0``, so it
    is sampled at enough integers ``t`` where the shift is strictly convex
    and interpolated back to ``t = 0``.
    """
    if len(mono) != h.fan.dim:
        raise ValueError(f"monomial exponent must have length {h.fan.dim}")
    if is_strictly_convex(h):
        return integrate_convex(h, mono)
    h0 = find_ample(h.fan)
    t = 0
    while not is_strictly_convex(h + h0 * t):
        t += 1
    deg = h.fan.dim + sum(mono)
    ts = list(range(t, t + deg + 1))
    ys = [integrate_convex(h + h0 * s, mono) for s in ts]
    return ec.lagrange_eval(ts, ys, 0)


def _fit_points(r: int, d: int) -> list:
    """Exponent vectors of total degree d, unisolvent for degree-d forms in r variables."""
    return [tuple(Fraction(x) for x in e) for e in monomials_of_degree(RingSpec.default(r), d)]


@lru_cache(maxsize=None)
def integral_polynomial(fan: Fan, mono: tuple, holdout: int = 3, seed: int = 0) -> Poly:
    """The polynomial in the ray values giving the integral of ``m^mono``.

    Fitted from exact evaluations and checked on ``holdout`` extra random
    integer points; a failed check triggers resampling on wider grids.
    """
    mono = tuple(mono)
    validate_fan(fan)
    ring = ray_ring(fan)
    r = fan.nrays
    d = fan.dim + sum(mono)
    rng = random.Random(seed)
    pts = _fit_points(r, d)
    width = 3
    for attempt in range(4):
        samples = [(p, integrate_virtual(VirtualPolytope(fan, p), mono)) for p in pts]
        try:
            F = ec.fit_homogeneous(samples, d, r, ring)
        except FitError:
            F = None
        if F is not None:
            ok = True
            for _ in range(holdout):
                p = tuple(Fraction(rng.randint(-width, width)) for _ in range(r))
                if evaluate(F, p) != integrate_virtual(VirtualPolytope(fan, p), mono):
                    ok = False
                    break
            if ok:
                return F
        width *= 2
        need = math.comb(r + d - 1, d)
        pts = [tuple(Fraction(rng.randint(-width, width)) for _ in range(r)) for _ in range(need + 2 * attempt + 2)]
    raise FitError(f"could not fit the integral polynomial of {list(mono)} on this fan")


def volume_polynomial(fan: Fan) -> Poly:
    return integral_polynomial(fan, (0,) * fan.dim)


def toric_cohomology(fan: Fan) -> GradedQuotient:
    """Even cohomology (degrees halved) as Sym(ray space)/Ann(volume polynomial)."""
    return ann_graded(volume_polynomial(fan))
