"""Exact rational linear algebra.

Everything here works on plain lists of :class:`fractions.Fraction`.  Matrices
are lists of rows.  No floating point is ever involved, so every result is
reproducible bit for bit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


class FitError(ArithmeticError):
    """Raised when an interpolation system is underdetermined or inconsistent."""


def to_rational(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: the base field is the rationals and we never
    round.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def parse_rational(s: str) -> Fraction:
    m = _RATIONAL_RE.match(s)
    if m is None:
        raise ValueError(f"not a rational literal: {s!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {s!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    """Serialize as ``"p/q"``, dropping the denominator when it is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class RatMatrix:
    """Dense row-major rational matrix."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "RatMatrix":
        rows = [[to_rational(x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    def to_rows(self) -> list:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __matmul__(self, v):
        return mat_vec(self.to_rows(), v)


def _as_rows(m) -> tuple[list, int]:
    if isinstance(m, RatMatrix):
        return m.to_rows(), m.cols
    rows = [[to_rational(x) for x in r] for r in m]
    return rows, (len(rows[0]) if rows else 0)


def rref(m, ncols: Optional[int] = None) -> tuple[list, list]:
    """Reduced row echelon form.

    Returns ``(rows, pivots)`` where ``rows`` holds only the nonzero rows
    and ``pivots[i]`` is the pivot column of row ``i``.  Pivoting takes the
    first nonzero entry in the column.
    """
    rows, cols = _as_rows(m)
    if ncols is not None:
        cols = ncols
    rows = [r[:] for r in rows]
    pivots = []
    prow = 0
    for c in range(cols):
        if prow == len(rows):
            break
        for i in range(prow, len(rows)):
            if rows[i][c] != 0:
                break
        else:
            continue
        rows[prow], rows[i] = rows[i], rows[prow]
        pivot_row = rows[prow]
        inv = 1 / pivot_row[c]
        if inv != 1:
            for k in range(c, cols):
                if pivot_row[k]:
                    pivot_row[k] *= inv
        nz = [k for k in range(c, cols) if pivot_row[k]]
        for i in range(len(rows)):
            if i == prow:
                continue
            f = rows[i][c]
            if f:
                r = rows[i]
                for k in nz:
                    r[k] -= f * pivot_row[k]
        pivots.append(c)
        prow += 1
    return rows[:prow], pivots


def rank(m) -> int:
    return len(rref(m)[1])


def kernel_basis(m, ncols: Optional[int] = None) -> list[list[Fraction]]:
    """Right null space basis, canonical form.

    One vector per free column, in increasing column order; the free
    variable is set to 1, the other free variables to 0.
    """
    rows, cols = _as_rows(m)
    if ncols is not None:
        cols = ncols
    red, pivots = rref(rows, cols)
    pivset = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * cols
        v[free] = Fraction(1)
        for r, p in zip(red, pivots):
            v[p] = -r[free]
        basis.append(v)
    return basis


def independent_columns(m, ncols: Optional[int] = None) -> list[int]:
    """Indices of the lexicographically first maximal independent column set."""
    return rref(m, ncols)[1]


def solve(m, b: Sequence) -> Optional[list[Fraction]]:
    """One exact solution of ``m x = b``, or ``None`` if inconsistent.

    Free variables are set to zero.
    """
    rows, cols = _as_rows(m)
    b = [to_rational(x) for x in b]
    if len(b) != len(rows):
        raise ValueError("right-hand side length does not match row count")
    aug = [r + [bi] for r, bi in zip(rows, b)]
    red, pivots = rref(aug, cols + 1)
    if pivots and pivots[-1] == cols:
        return None
    x = [Fraction(0)] * cols
    for r, p in zip(red, pivots):
        x[p] = r[cols]
    return x


def mat_vec(m, v: Sequence) -> list[Fraction]:
    rows, _ = _as_rows(m)
    return [sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in rows]


def determinant(m) -> Fraction:
    rows, n = _as_rows(m)
    if len(rows) != n:
        raise ValueError("determinant of a non-square matrix")
    rows = [r[:] for r in rows]
    det = Fraction(1)
    for c in range(n):
        for i in range(c, n):
            if rows[i][c] != 0:
                break
        else:
            return Fraction(0)
        if i != c:
            rows[c], rows[i] = rows[i], rows[c]
            det = -det
        p = rows[c][c]
        det *= p
        for i in range(c + 1, n):
            f = rows[i][c] / p
            if f:
                for k in range(c, n):
                    rows[i][k] -= f * rows[c][k]
    return det


def lagrange_eval(xs: Sequence, ys: Sequence, x0) -> Fraction:
    """Value at ``x0`` of the interpolating polynomial through ``(xs, ys)``."""
    xs = [to_rational(x) for x in xs]
    x0 = to_rational(x0)
    total = Fraction(0)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term = to_rational(yi)
        for j, xj in enumerate(xs):
            if j != i:
                term *= (x0 - xj) / (xi - xj)
        total += term
    return total


def fit_homogeneous(points, degree: int, nvars: int, ring=None):
    """Homogeneous polynomial of the given degree through the sample points.

    ``points`` is a list of ``(vector, value)`` pairs.  Raises
    :class:`FitError` when the samples do not determine the polynomial
    (too few or rank deficient) or are inconsistent.
    """
    from .polyring import Poly, RingSpec, monomials_of_degree

    if ring is None:
        ring = RingSpec.default(nvars)
    if ring.arity != nvars or any(w != 1 for w in ring.weights):
        raise ValueError("fit_homogeneous needs an unweighted ring of matching arity")
    monos = monomials_of_degree(ring, degree)
    if len(points) < len(monos):
        raise FitError(f"need at least {len(monos)} points, got {len(points)}")
    rows = []
    rhs = []
    for vec, val in points:
        vec = [to_rational(x) for x in vec]
        rows.append([_mono_value(e, vec) for e in monos])
        rhs.append(to_rational(val))
    if rank(rows) < len(monos):
        raise FitError("sample points are rank deficient; resample")
    coeffs = solve(rows, rhs)
    if coeffs is None:
        raise FitError("sample values are inconsistent with a homogeneous polynomial")
    return Poly(ring, {e: c for e, c in zip(monos, coeffs) if c})


def _mono_value(exps, vec) -> Fraction:
    out = Fraction(1)
    for e, x in zip(exps, vec):
        if e:
            out *= x ** e
    return out
