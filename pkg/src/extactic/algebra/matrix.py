"""Polynomial matrices and exact determinants."""

from __future__ import annotations

from typing import Sequence

from ..errors import InputError
from .poly import MultiPoly, exact_div

DEFAULT_CAP = 8


class PolyMatrix:
    """Rectangular grid of polynomials sharing one variable context."""

    __slots__ = ("rows", "vars")

    def __init__(self, rows: Sequence[Sequence], vars=None):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise InputError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise InputError("matrix rows have unequal lengths")
        if vars is None:
            found = [e.vars for r in rows for e in r if isinstance(e, MultiPoly)]
            if not found:
                raise InputError("cannot infer variables for a constant matrix")
            vars = found[0]
        vars = tuple(vars)
        for r in rows:
            for j, e in enumerate(r):
                if isinstance(e, MultiPoly):
                    if e.vars != vars:
                        raise InputError("matrix entries use different variable contexts")
                else:
                    r[j] = MultiPoly.constant(e, vars)
        self.rows = rows
        self.vars = vars

    @property
    def shape(self) -> tuple:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(c) for c in zip(*self.rows)], self.vars)

    def swap_rows(self, i: int, j: int) -> "PolyMatrix":
        rows = [list(r) for r in self.rows]
        rows[i], rows[j] = rows[j], rows[i]
        return PolyMatrix(rows, self.vars)


def det(M, method: str = "bareiss", cap: int | None = DEFAULT_CAP) -> MultiPoly:
    """Exact determinant of a square polynomial matrix.

    ``method`` is ``"bareiss"`` (fraction-free elimination; rows with a single
    nonzero entry are expanded first) or ``"cofactor"`` (Laplace expansion
    with memoised minors).
    """
    if not isinstance(M, PolyMatrix):
        M = PolyMatrix(M)
    n, m = M.shape
    if n != m:
        raise InputError(f"determinant of a non-square {n}x{m} matrix")
    if cap is not None and n > cap:
        raise InputError(f"matrix size {n} exceeds the determinant cap {cap}")
    if method == "bareiss":
        return _bareiss([list(r) for r in M.rows], M.vars)
    if method == "cofactor":
        return _cofactor(M.rows, M.vars)
    raise InputError(f"unknown determinant method {method!r}")


def _bareiss(a: list, vars: tuple) -> MultiPoly:
    zero = MultiPoly.zero(vars)
    sign = 1
    factor = MultiPoly.one(vars)
    # peel rows with a single nonzero entry (cheap cofactor step)
    while len(a) > 1:
        peeled = False
        for i, row in enumerate(a):
            nz = [j for j, e in enumerate(row) if e]
            if not nz:
                return zero
            if len(nz) == 1:
                j = nz[0]
                if (i + j) % 2:
                    sign = -sign
                factor = factor * row[j]
                a = [[e for jj, e in enumerate(r) if jj != j] for ii, r in enumerate(a) if ii != i]
                peeled = True
                break
        if not peeled:
            break
    n = len(a)
    if n == 1:
        res = factor * a[0][0]
        return -res if sign < 0 else res
    prev = MultiPoly.one(vars)
    for k in range(n - 1):
        if not a[k][k]:
            # choose the sparsest nonzero pivot below
            best = None
            for i in range(k + 1, n):
                if a[i][k] and (best is None or len(a[i][k]) < len(a[best][k])):
                    best = i
            if best is None:
                return zero
            a[k], a[best] = a[best], a[k]
            sign = -sign
        piv = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                if aik:
                    num = piv * ri[j] - aik * rk[j]
                else:
                    num = piv * ri[j]
                if k > 0 and num:
                    num = exact_div(num, prev)
                ri[j] = num
            ri[k] = zero
        prev = piv
    res = factor * a[n - 1][n - 1]
    return -res if sign < 0 else res


def _cofactor(rows: list, vars: tuple) -> MultiPoly:
    n = len(rows)
    memo = {}
    zero = MultiPoly.zero(vars)

    def minor(r: int, cols: int) -> MultiPoly:
        # determinant of rows r.. restricted to the column bitmask cols
        if r == n:
            return MultiPoly.one(vars)
        hit = memo.get((r, cols))
        if hit is not None:
            return hit
        total = zero
        pos = 0
        for j in range(n):
            if cols >> j & 1:
                e = rows[r][j]
                if e:
                    sub = minor(r + 1, cols & ~(1 << j))
                    if sub:
                        term = e * sub
                        total = total - term if pos % 2 else total + term
                pos += 1
        memo[(r, cols)] = total
        return total

    return minor(0, (1 << n) - 1)


def det_field(rows: Sequence[Sequence]):
    """Determinant over a field by Gaussian elimination (mpq, mpmath, ...)."""
    a = [list(r) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise InputError("determinant of a non-square matrix")
    result = a[0][0] * 0 + 1 if n else 1
    for k in range(n):
        piv = None
        best = None
        for i in range(k, n):
            v = a[i][k]
            mag = abs(v)
            if v != 0 and (best is None or mag > best):
                piv, best = i, mag
        if piv is None:
            return result * 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            result = -result
        p = a[k][k]
        result = result * p
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f != 0:
                for j in range(k + 1, n):
                    a[i][j] = a[i][j] - f * a[k][j]
    return result
