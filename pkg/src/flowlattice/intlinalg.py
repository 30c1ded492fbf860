"""Exact integer and rational linear algebra on plain Python lists.

Matrices are lists of rows. Nothing here uses floating point; integer inputs
stay integers unless a rational result is genuinely required.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = Sequence[int]
Matrix = Sequence[Sequence[int]]


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (sign preserved)."""
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def transpose(m: Matrix) -> list[list]:
    return [list(col) for col in zip(*m)]


def rref(rows: Matrix, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Matrix) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def det(m: Matrix) -> int:
    """Determinant of a square integer matrix (Bareiss fraction-free elimination)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(m: Matrix) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def integer_kernel(rows: Matrix, ncols: int) -> list[tuple[int, ...]]:
    """Basis of the lattice {x in Z^ncols : A x = 0}.

    Row-reduces A^T augmented by the identity using unimodular integer row
    operations; rows whose A^T part vanishes carry a kernel basis. The result
    is saturated because the transformation is unimodular.
    """
    k = len(rows)
    work = [[rows[i][j] for i in range(k)] + [int(j == c) for c in range(ncols)] for j in range(ncols)]
    p = 0
    for c in range(k):
        while True:
            nz = [i for i in range(p, ncols) if work[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(work[i][c]))
            work[p], work[best] = work[best], work[p]
            done = True
            for i in range(p + 1, ncols):
                if work[i][c] != 0:
                    q = work[i][c] // work[p][c]
                    work[i] = [x - q * y for x, y in zip(work[i], work[p])]
                    if work[i][c] != 0:
                        done = False
            if done:
                p += 1
                break
        if p == ncols:
            break
    basis = [tuple(r[k:]) for r in work[p:]]
    return [primitive(b) for b in basis]


def saturated_basis(vectors: Sequence[Vector], ncols: int) -> list[tuple[int, ...]]:
    """Integer basis of span_Q(vectors) intersected with Z^ncols."""
    if not vectors or rank(vectors) == 0:
        return []
    complement = integer_kernel([list(v) for v in vectors], ncols)
    if not complement:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    return integer_kernel(complement, ncols)


def gcd_of_maximal_minors(vectors: Sequence[Vector]) -> int:
    """Index of the lattice spanned by ``vectors`` inside its saturation."""
    from itertools import combinations

    r = len(vectors)
    if r == 0:
        return 1
    n = len(vectors[0])
    g = 0
    for cols in combinations(range(n), r):
        g = gcd(g, det([[v[c] for c in cols] for v in vectors]))
        if g == 1:
            return 1
    return g
