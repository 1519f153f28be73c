"""Elimination and divisibility: resultants, discriminants, gcd, square-free parts.

Resultants are Sylvester determinants.  When one operand has a constant
leading coefficient the other is first reduced modulo it, which shrinks the
Sylvester matrix without changing the value.  GCD and factorisation over the
rationals are delegated to sympy's sparse polynomial rings.
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import InputError
from .matrix import det
from .poly import MultiPoly, exact_div, pseudo_divmod


def sylvester_matrix(P: MultiPoly, Q: MultiPoly, var: str) -> list:
    p, q = P.degree_in(var), Q.degree_in(var)
    cp, cq = P.coefficients_in(var), Q.coefficients_in(var)
    zero = MultiPoly.zero(P.vars)
    size = p + q
    rows = []
    for i in range(q):
        row = [zero] * size
        for e in range(p + 1):
            row[i + p - e] = cp.get(e, zero)
        rows.append(row)
    for i in range(p):
        row = [zero] * size
        for e in range(q + 1):
            row[i + q - e] = cq.get(e, zero)
        rows.append(row)
    return rows


def resultant(P: MultiPoly, Q: MultiPoly, var: str, reduce: bool = True) -> MultiPoly:
    """Sylvester resultant of P and Q with respect to ``var``.

    Conventions: ``Res(P, c) = c**deg(P)`` and ``Res(c, Q) = c**deg(Q)`` for
    ``c`` free of ``var``; the resultant of two constants is 1.
    """
    if P.vars != Q.vars:
        raise InputError("variable mismatch in resultant")
    if not P and not Q:
        raise InputError("resultant of two zero polynomials")
    if not P or not Q:
        return MultiPoly.zero(P.vars)
    p, q = P.degree_in(var), Q.degree_in(var)
    if q == 0:
        return Q ** p
    if p == 0:
        return P ** q
    if reduce:
        if p >= q and Q.leading_coeff_in(var).is_constant():
            return _reduced(P, Q, var, p, q, swap=True)
        if q >= p and P.leading_coeff_in(var).is_constant():
            return _reduced(Q, P, var, q, p, swap=False)
    return det(sylvester_matrix(P, Q, var), cap=None)


def _reduced(A: MultiPoly, B: MultiPoly, var: str, a: int, b: int, swap: bool) -> MultiPoly:
    # Res(B, A) = lc(B)^(a - r) * Res(B, A mod B) where r = deg(A mod B)
    _, _, R = pseudo_divmod(A, B, var)
    if not R:
        return MultiPoly.zero(A.vars)
    r = R.degree_in(var)
    lcB = B.leading_coeff_in(var).constant_value()
    inner = resultant(B, R, var)
    val = inner.scale(lcB ** (a - r))
    # val = Res(B, A); Res(A, B) = (-1)^(ab) Res(B, A)
    if swap and (a * b) % 2:
        val = -val
    return val


def discriminant(P: MultiPoly, var: str) -> MultiPoly:
    """``Res(P, dP/dvar) / lc(P)`` (no sign normalisation)."""
    lc = P.leading_coeff_in(var)
    return exact_div(resultant(P, P.diff(var), var), lc)


# sympy bridge ------------------------------------------------------------


@lru_cache(maxsize=64)
def _ring(vars: tuple):
    from sympy import QQ
    from sympy.polys.rings import ring

    R, *_ = ring(",".join(vars) if vars else "_c", QQ)
    return R


def to_sympy(P: MultiPoly):
    R = _ring(P.vars)
    if not P.vars:
        return R(P.constant_value())
    return R.from_dict({e: c for e, c in P.as_dict().items()})


def from_sympy(f, vars) -> MultiPoly:
    return MultiPoly(vars, {tuple(m): c for m, c in f.terms()})


def normalize(P: MultiPoly) -> MultiPoly:
    """Content-stripped representative with positive grlex-leading coefficient."""
    return P.primitive()[1]


def gcd(P: MultiPoly, Q: MultiPoly) -> MultiPoly:
    if P.vars != Q.vars:
        raise InputError("variable mismatch in gcd")
    if not P:
        return normalize(Q)
    if not Q:
        return normalize(P)
    if P.is_constant() or Q.is_constant():
        return MultiPoly.one(P.vars)
    g = to_sympy(P).gcd(to_sympy(Q))
    return normalize(from_sympy(g, P.vars))


def squarefree_part(P: MultiPoly) -> MultiPoly:
    if not P or P.is_constant():
        return normalize(P) if P else P
    return normalize(from_sympy(to_sympy(P).sqf_part(), P.vars))


def factor_list(P: MultiPoly) -> tuple:
    """Irreducible factorisation over the rationals: ``(content, [(factor, mult)])``.

    Factors are primitive with positive leading coefficient, sorted by
    (degree, canonical text).
    """
    if not P:
        raise InputError("cannot factor the zero polynomial")
    c, fs = to_sympy(P).factor_list()
    out = []
    for f, e in fs:
        g = from_sympy(f, P.vars)
        k, g = g.primitive()
        c = c * k ** e
        out.append((g, e))
    out.sort(key=lambda t: (t[0].total_degree(), str(t[0])))
    return c, out


def multiplicity(P: MultiPoly, f: MultiPoly) -> int:
    """Largest e with f**e dividing P (P nonzero, f nonconstant)."""
    from .poly import InexactDivision

    if not P:
        raise InputError("multiplicity in the zero polynomial")
    if f.is_constant():
        raise InputError("multiplicity of a constant")
    e = 0
    while True:
        try:
            P = exact_div(P, f)
        except InexactDivision:
            return e
        e += 1
