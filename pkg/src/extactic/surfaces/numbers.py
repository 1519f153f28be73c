"""Exact algebraic numbers: elements of Q[T]/(phi) with a chosen complex embedding.

A ``NumberField`` is a square-free monic modulus ``phi`` together with one of
its complex roots, isolated at high precision.  Elements are polynomials in
the generator of degree below ``deg phi``; arithmetic is exact and the
embedding is only used for display, ordering and numeric cross-checks.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from gmpy2 import mpq

from ..algebra import MultiPoly, factor_list
from ..errors import InputError, InvariantViolation

DPS = 120

# univariate helpers on coefficient lists (lowest degree first) ----------------


def _trim(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _divmod(a: list, b: list) -> tuple:
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [mpq(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        f = r[-1] / lb
        s = len(r) - len(b)
        q[s] = f
        for i, y in enumerate(b):
            r[s + i] -= f * y
        r = _trim(r)
    return _trim(q), r


def _rem(a: list, b: list) -> list:
    return _divmod(a, b)[1]


def _inverse_mod(a: list, m: list) -> list:
    """Inverse of a modulo m by the extended Euclidean algorithm."""
    r0, r1 = list(m), _rem(a, m)
    s0, s1 = [], [mpq(1)]
    while r1:
        q, r = _divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible modulo the defining polynomial")
    inv = 1 / r0[0]
    return _rem([c * inv for c in s0], m)


def to_mp(c) -> mpmath.mpf:
    c = mpq(c)
    return mpmath.mpf(int(c.numerator)) / int(c.denominator)


def poly_roots(coeffs: list, dps: int = DPS) -> list:
    """All complex roots of a square-free rational polynomial (lowest degree first)."""
    coeffs = _trim([mpq(c) for c in coeffs])
    if len(coeffs) < 2:
        return []
    with mpmath.workdps(dps + 20):
        hi = [to_mp(c) for c in reversed(coeffs)]
        roots = mpmath.polyroots(hi, maxsteps=400, extraprec=4 * dps + 200)
        if not isinstance(roots, (list, tuple)):
            roots = [roots]
        # convert while the working precision is still high
        return [mpmath.mpc(r) for r in roots]


def rational_approx(x, dps: int = DPS) -> mpq:
    """Rational number close to the real part of ``x``, checked at ``dps - 10`` digits."""
    with mpmath.workdps(dps):
        re = mpmath.re(x)
        if abs(mpmath.im(x)) > mpmath.mpf(10) ** (-(dps // 2)):
            raise InvariantViolation("expected a real value, got a complex one")
        f = Fraction(mpmath.nstr(re, dps, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf))
        g = f.limit_denominator(10 ** (dps // 2 - 5))
        if abs(to_mp(mpq(g.numerator, g.denominator)) - re) > mpmath.mpf(10) ** (-(dps - 15)) * max(1, abs(re)):
            raise InvariantViolation("rational reconstruction failed")
        return mpq(g.numerator, g.denominator)


# fields ---------------------------------------------------------------------


class NumberField:
    """``Q[T]/(phi)`` embedded in C by sending T to an isolated root of phi."""

    __slots__ = ("modulus", "root", "radius", "index")

    def __init__(self, modulus, root, radius, index: int = 0):
        modulus = _trim([mpq(c) for c in modulus])
        if len(modulus) < 2 or modulus[-1] != 1:
            raise InputError("number field modulus must be monic of positive degree")
        self.modulus = tuple(modulus)
        self.root = root
        self.radius = radius
        self.index = index

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls([0, 1], mpmath.mpc(0), mpmath.inf, 0)

    @classmethod
    def embeddings(cls, modulus, dps: int = DPS) -> list:
        """One field per complex root of a square-free monic modulus, roots isolated."""
        modulus = _trim([mpq(c) for c in modulus])
        lc = modulus[-1]
        modulus = [c / lc for c in modulus]
        roots = poly_roots(modulus, dps)
        roots.sort(key=lambda z: (round(float(mpmath.re(z)), 12), round(float(mpmath.im(z)), 12)))
        out = []
        for i, z in enumerate(roots):
            gap = min((abs(z - w) for j, w in enumerate(roots) if j != i), default=mpmath.inf)
            if gap < mpmath.mpf(10) ** (-(dps // 3)):
                raise InvariantViolation("modulus is not square-free: roots are not isolated")
            out.append(cls(modulus, z, gap / 3, i))
        return out

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def same(self, other: "NumberField") -> bool:
        return self.modulus == other.modulus and self.index == other.index

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.same(other)

    def __hash__(self) -> int:
        return hash((self.modulus, self.index))

    def __call__(self, coeffs) -> "AlgNumber":
        if isinstance(coeffs, AlgNumber):
            return coeffs
        if not isinstance(coeffs, (list, tuple)):
            coeffs = [coeffs]
        return AlgNumber(self, _rem([mpq(c) for c in coeffs], list(self.modulus)))

    def generator(self) -> "AlgNumber":
        return self([0, 1])

    def modulus_poly(self, var: str = "T") -> MultiPoly:
        return MultiPoly((var,), {(i,): c for i, c in enumerate(self.modulus) if c})

    def describe(self) -> dict:
        return {
            "modulus": [str(c) for c in self.modulus],
            "root": [mpmath.nstr(mpmath.re(self.root), 25), mpmath.nstr(mpmath.im(self.root), 25)],
            "radius": mpmath.nstr(self.radius, 5),
        }


class AlgNumber:
    """An element ``h(theta)`` of a NumberField."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        self.coeffs = tuple(_trim(coeffs))

    def _lift(self, other):
        if isinstance(other, AlgNumber):
            if not self.field.same(other.field):
                if other.field.is_rational:
                    return other.coeffs
                if self.field.is_rational:
                    raise TypeError("mixed fields: promote the rational operand first")
                raise InputError("arithmetic between different number fields")
            return other.coeffs
        return _trim([mpq(other)])

    def __add__(self, other):
        b = self._lift(other)
        a = self.coeffs
        n = max(len(a), len(b))
        return AlgNumber(self.field, [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return AlgNumber(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, AlgNumber) else -mpq(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._lift(other)
        return AlgNumber(self.field, _rem(_mul(list(self.coeffs), list(b)), list(self.field.modulus)))

    __rmul__ = __mul__

    def inverse(self) -> "AlgNumber":
        if not self.coeffs:
            raise ZeroDivisionError("division by zero in a number field")
        return AlgNumber(self.field, _inverse_mod(list(self.coeffs), list(self.field.modulus)))

    def __truediv__(self, other):
        if isinstance(other, AlgNumber):
            return self * other.inverse()
        return AlgNumber(self.field, [c / mpq(other) for c in self.coeffs])

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgNumber):
            if not self.field.same(other.field) and not (self.field.is_rational or other.field.is_rational):
                return False
            return self.coeffs == other.coeffs
        return self.coeffs == tuple(_trim([mpq(other)]))

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def rational_value(self) -> mpq:
        if not self.is_rational():
            raise InputError("not a rational number")
        return self.coeffs[0] if self.coeffs else mpq(0)

    def to_complex(self):
        z = self.field.root
        acc = mpmath.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * z + to_mp(c)
        return acc

    def as_poly(self, var: str = "T") -> MultiPoly:
        return MultiPoly((var,), {(i,): c for i, c in enumerate(self.coeffs)})

    def minimal_polynomial(self) -> list:
        """Minimal polynomial over Q (monic, lowest degree first)."""
        from ..algebra import resultant

        vars = ("T", "X")
        phi = self.field.modulus_poly("T").embed(vars)
        h = self.as_poly("T").embed(vars)
        X = MultiPoly.variable("X", vars)
        R = resultant(phi, X - h, "T")
        _, factors = factor_list(R)
        z = self.to_complex()
        best = None
        for f, _ in factors:
            g = f.embed(("X",))
            val = abs(g.evaluate([z], coeff=to_mp))
            if best is None or val < best[0]:
                best = (val, g)
        g = best[1].monic()
        deg = g.degree_in("X")
        d = g.as_dict()
        return [d.get((i,), mpq(0)) for i in range(deg + 1)]

    def __repr__(self) -> str:
        return f"AlgNumber({self.text()})"

    def text(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        from ..algebra import to_text

        return to_text(MultiPoly((var,), {(i,): c for i, c in enumerate(self.coeffs)}))


def rational(field: NumberField, value) -> AlgNumber:
    return field(value)
