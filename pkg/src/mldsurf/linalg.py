"""Exact rational linear algebra for the small dense systems that show up here.

Everything is exact.  Integer matrices (every intersection matrix) go through
fraction-free Bareiss elimination; anything else falls back to Gaussian
elimination over :class:`fractions.Fraction`.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


class SingularMatrixError(ValueError):
    pass


def to_fractions(m: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in m]


def is_symmetric(m: Sequence[Sequence]) -> bool:
    n = len(m)
    if any(len(row) != n for row in m):
        return False
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def _all_int(m) -> bool:
    return all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for row in m for x in row)


def _bareiss(a: list[list[int]], ncols: int, pivoting: bool):
    """Fraction-free elimination in place; returns (sign, pivots) or None when stuck.

    Without pivoting the k-th pivot is the k-th leading principal minor.
    """
    n = len(a)
    sign, prev = 1, 1
    pivots = []
    for k in range(n):
        if a[k][k] == 0:
            if not pivoting:
                return None
            r = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if r is None:
                return sign, pivots + [0]
            a[k], a[r] = a[r], a[k]
            sign = -sign
        p = a[k][k]
        pivots.append(p)
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            f = ri[k]
            for j in range(k + 1, ncols):
                ri[j] = (p * ri[j] - f * rk[j]) // prev
            ri[k] = 0
        prev = p
    return sign, pivots


def solve(m: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve ``m x = rhs`` exactly; raises SingularMatrixError if ``m`` is singular."""
    n = len(m)
    if len(rhs) != n or any(len(row) != n for row in m):
        raise ValueError("shape mismatch")
    if n and _all_int(m):
        b = [Fraction(x) for x in rhs]
        den = 1
        for x in b:
            den = den * x.denominator // gcd(den, x.denominator)
        a = [[int(v) for v in row] + [x.numerator * (den // x.denominator)] for row, x in zip(m, b)]
        _, pivots = _bareiss(a, n + 1, pivoting=True)
        if len(pivots) < n or pivots[-1] == 0:
            raise SingularMatrixError("matrix is singular")
        # det * x is an integer vector (Cramer), so every division below is exact
        det = pivots[-1]
        num = [0] * n
        for i in range(n - 1, -1, -1):
            s = det * a[i][n] - sum(a[i][k] * num[k] for k in range(i + 1, n))
            num[i] = s // a[i][i]
        return [Fraction(v, det * den) for v in num]
    a = to_fractions(m)
    b = [Fraction(x) for x in rhs]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
        p = a[col][col]
        for r in range(col + 1, n):
            f = a[r][col]
            if f == 0:
                continue
            f /= p
            row_r, row_c = a[r], a[col]
            for k in range(col, n):
                row_r[k] -= f * row_c[k]
            b[r] -= f * b[col]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = b[i] - sum(a[i][k] * x[k] for k in range(i + 1, n))
        x[i] = s / a[i][i]
    return x


def leading_principal_minors(m: Sequence[Sequence]) -> list[Fraction]:
    """Determinants of the top-left k x k blocks, k = 1..n."""
    n = len(m)
    if n and _all_int(m):
        res = _bareiss([[int(v) for v in row] for row in m], n, pivoting=False)
        if res is not None:
            return [Fraction(p) for p in res[1]]
    return [determinant([row[:k] for row in m[:k]]) for k in range(1, n + 1)]


def determinant(m: Sequence[Sequence]) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    if _all_int(m):
        sign, pivots = _bareiss([[int(v) for v in row] for row in m], n, pivoting=True)
        return Fraction(sign * pivots[-1]) if len(pivots) == n else Fraction(0)
    a = to_fractions(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return det


def is_negative_definite(m: Sequence[Sequence]) -> bool:
    """Sylvester's criterion: (-1)^k * minor_k > 0 for every k."""
    if not is_symmetric(m):
        raise ValueError("negative definiteness is only defined for symmetric matrices")
    if len(m) == 0:
        return True
    return all((d < 0) if k % 2 == 0 else (d > 0) for k, d in enumerate(leading_principal_minors(m)))


def matvec(m: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((Fraction(x) * y for x, y in zip(row, v)), Fraction(0)) for row in m]
