"""Exact integer and rational linear algebra.

Everything here works over Python ints and :class:`fractions.Fraction`, so no
result is ever rounded.  Matrices are plain lists of rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Rational = Fraction
IntMatrix = Sequence[Sequence[int]]


class LinearAlgebraError(ValueError):
    pass


class DimensionError(LinearAlgebraError):
    pass


class SingularError(LinearAlgebraError):
    pass


def format_rational(q) -> str:
    """Render ``q`` as ``"p/q"`` in lowest terms, or ``"p"`` for integers."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def transpose(m):
    return [list(col) for col in zip(*m)]


def columns_matrix(vectors):
    """Matrix whose columns are the given vectors."""
    return transpose([list(v) for v in vectors])


def determinant(m: IntMatrix) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionError(f"determinant needs a square matrix, got {n} rows of lengths {[len(r) for r in m]}")
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def elementary_divisors(m: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form of ``m``.

    Each entry divides the next.  Pivots are chosen by minimal absolute value
    to keep intermediate entries small.
    """
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    divisors = []
    t = 0
    while t < min(rows, cols):
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]

        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if dirty:
                # a remainder smaller than the pivot is left somewhere; promote it
                best = None
                for i in range(t + 1, rows):
                    if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best[0]][best[1]])):
                        best = (i, t)
                for j in range(t + 1, cols):
                    if a[t][j] and (best is None or abs(a[t][j]) < abs(a[best[0]][best[1]])):
                        best = (t, j)
                bi, bj = best
                a[t], a[bi] = a[bi], a[t]
                for row in a:
                    row[t], row[bj] = row[bj], row[t]
                continue
            # row and column are clear; enforce divisibility of the remaining block
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        divisors.append(abs(a[t][t]))
        t += 1
    return divisors


def _fraction_rows(m):
    return [[Fraction(x) for x in row] for row in m]


def row_reduce(m):
    """Reduced row echelon form over Q.  Returns ``(rref, pivot_columns)``."""
    a = _fraction_rows(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m) -> int:
    if not m:
        return 0
    return len(row_reduce(m)[1])


def nullspace(m, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : m x = 0}`` over Q."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if not m:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = row_reduce(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def solve_unique(basis, target) -> list[Fraction]:
    """Coefficients ``b`` with ``target + sum(b[i] * basis[i]) == 0``.

    ``basis`` must be ``d`` linearly independent vectors in ``Q^d``.
    """
    d = len(target)
    if len(basis) != d or any(len(v) != d for v in basis):
        raise DimensionError(f"need {d} basis vectors of length {d}")
    aug = [[Fraction(basis[j][i]) for j in range(d)] + [-Fraction(target[i])] for i in range(d)]
    red, pivots = row_reduce(aug)
    if pivots != list(range(d)):
        raise SingularError("basis vectors are linearly dependent")
    return [red[i][d] for i in range(d)]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def primitive(v) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    from math import gcd, lcm

    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)
