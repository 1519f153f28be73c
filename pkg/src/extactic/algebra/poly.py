"""Sparse multivariate polynomials over the rationals.

Monomials are packed into a single Python integer: the total degree sits in
the top field and every exponent gets ``BITS`` bits below it, first variable
most significant.  Multiplying monomials is then integer addition and the
natural integer order on keys is graded-lex order with ``vars[0]`` largest.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq, mpz

from ..errors import InexactDivision, InputError

BITS = 20
MASK = (1 << BITS) - 1
MAX_EXPONENT = MASK

ZERO = mpq(0)
ONE = mpq(1)


def rational(value) -> mpq:
    """Coerce ints, Fractions, mpq and ``"a/b"`` strings to mpq."""
    if isinstance(value, type(ONE)):
        return value
    if isinstance(value, (int, type(mpz(0)))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(Fraction(value))
    if isinstance(value, float):
        raise TypeError("floating-point coefficients are not accepted")
    raise TypeError(f"cannot interpret {value!r} as a rational")


def pack(exps: Sequence[int]) -> int:
    key = sum(exps)
    for e in exps:
        if e < 0 or e > MAX_EXPONENT:
            raise InputError(f"exponent {e} out of range")
        key = (key << BITS) | e
    return key


def unpack(key: int, n: int) -> tuple:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = key & MASK
        key >>= BITS
    return tuple(out)


def _shift(i: int, n: int) -> int:
    return BITS * (n - 1 - i)


class MultiPoly:
    """Immutable sparse polynomial in an ordered tuple of named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Iterable[str], terms: Mapping | None = None):
        self.vars = tuple(vars)
        n = len(self.vars)
        packed = {}
        for exps, c in (terms or {}).items():
            if isinstance(exps, int) and n == 1:
                exps = (exps,)
            exps = tuple(exps)
            if len(exps) != n:
                raise InputError(f"exponent vector {exps} does not match {n} variables")
            c = rational(c)
            if c:
                key = pack(exps)
                c = packed.get(key, ZERO) + c
                if c:
                    packed[key] = c
                else:
                    packed.pop(key, None)
        self.terms = packed

    @classmethod
    def _raw(cls, vars: tuple, packed: dict) -> "MultiPoly":
        obj = object.__new__(cls)
        obj.vars = vars
        obj.terms = packed
        return obj

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, vars) -> "MultiPoly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def constant(cls, c, vars) -> "MultiPoly":
        c = rational(c)
        return cls._raw(tuple(vars), {0: c} if c else {})

    @classmethod
    def one(cls, vars) -> "MultiPoly":
        return cls.constant(1, vars)

    @classmethod
    def variable(cls, name: str, vars) -> "MultiPoly":
        vars = tuple(vars)
        if name not in vars:
            raise InputError(f"unknown variable {name!r}")
        i = vars.index(name)
        exps = [0] * len(vars)
        exps[i] = 1
        return cls._raw(vars, {pack(exps): ONE})

    @classmethod
    def gens(cls, vars) -> tuple:
        vars = tuple(vars)
        return tuple(cls.variable(v, vars) for v in vars)

    @classmethod
    def monomial(cls, exps, vars, coeff=1) -> "MultiPoly":
        return cls(vars, {tuple(exps): coeff})

    # inspection -------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def items(self):
        """Yield ``(exponent tuple, coefficient)`` pairs in descending grlex order."""
        n = len(self.vars)
        for key in sorted(self.terms, reverse=True):
            yield unpack(key, n), self.terms[key]

    def as_dict(self) -> dict:
        n = len(self.vars)
        return {unpack(k, n): c for k, c in self.terms.items()}

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self) -> mpq:
        return self.terms.get(0, ZERO)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(self.terms) >> (BITS * len(self.vars))

    def min_total_degree(self) -> int:
        if not self.terms:
            return -1
        return min(k >> (BITS * len(self.vars)) for k in self.terms)

    def index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise InputError(f"variable {var!r} not in {self.vars}") from None

    def degree_in(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        s = _shift(self.index(var), len(self.vars))
        return max((k >> s) & MASK for k in self.terms)

    def min_degree_in(self, var: str) -> int:
        if not self.terms:
            return -1
        s = _shift(self.index(var), len(self.vars))
        return min((k >> s) & MASK for k in self.terms)

    def variables_used(self) -> tuple:
        n = len(self.vars)
        used = [False] * n
        for k in self.terms:
            e = unpack(k, n)
            for i in range(n):
                if e[i]:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def leading_key(self) -> int:
        return max(self.terms)

    def leading_term(self) -> tuple:
        """``(exponents, coefficient)`` of the grlex-largest term."""
        k = max(self.terms)
        return unpack(k, len(self.vars)), self.terms[k]

    def leading_coefficient(self) -> mpq:
        return self.terms[max(self.terms)] if self.terms else ZERO

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        top = BITS * len(self.vars)
        degs = {k >> top for k in self.terms}
        return len(degs) == 1

    def homogeneous_part(self, degree: int) -> "MultiPoly":
        top = BITS * len(self.vars)
        return MultiPoly._raw(self.vars, {k: c for k, c in self.terms.items() if k >> top == degree})

    # arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise InputError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        return MultiPoly.constant(other, self.vars)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for k, c in b.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v += c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return MultiPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.vars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = -c
            else:
                v -= c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return MultiPoly._raw(self.vars, out)

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = rational(c)
        if not c:
            return MultiPoly._raw(self.vars, {})
        return MultiPoly._raw(self.vars, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        if other.vars != self.vars:
            raise InputError(f"variable mismatch: {self.vars} vs {other.vars}")
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly._raw(self.vars, {})
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (kb, cb), = b.items()
            return MultiPoly._raw(self.vars, {ka + kb: ca * cb for ka, ca in a.items()})
        out = {}
        get = out.get
        bitems = list(b.items())
        for ka, ca in a.items():
            for kb, cb in bitems:
                k = ka + kb
                v = get(k)
                if v is None:
                    out[k] = ca * cb
                else:
                    out[k] = v + ca * cb
        return MultiPoly._raw(self.vars, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MultiPoly":
        if not isinstance(e, int) or e < 0:
            raise InputError("exponent must be a nonnegative integer")
        if e > MAX_EXPONENT:
            raise InputError(f"exponent {e} exceeds {MAX_EXPONENT}")
        result = MultiPoly.one(self.vars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, c) -> "MultiPoly":
        if isinstance(c, MultiPoly):
            return exact_div(self, c)
        c = rational(c)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self.scale(1 / c)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        try:
            c = rational(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({0: c} if c else {})

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    # calculus and substitution ---------------------------------------

    def diff(self, var: str, times: int = 1) -> "MultiPoly":
        n = len(self.vars)
        s = _shift(self.index(var), n)
        step = (1 << s) + (1 << (BITS * n))
        out = dict(self.terms)
        for _ in range(times):
            nxt = {}
            for k, c in out.items():
                e = (k >> s) & MASK
                if e:
                    nxt[k - step] = c * e
            out = nxt
        return MultiPoly._raw(self.vars, out)

    def gradient(self) -> tuple:
        return tuple(self.diff(v) for v in self.vars)

    def compose(self, images: Mapping, target_vars=None) -> "MultiPoly":
        """Substitute ``images[var]`` for each variable.

        Images are polynomials in ``target_vars`` (default: the same variables)
        or scalars; variables missing from ``images`` map to themselves, which
        requires them to exist in the target context.
        """
        target = tuple(target_vars) if target_vars is not None else self.vars
        n = len(self.vars)
        subs = []
        for v in self.vars:
            img = images.get(v) if v in images else None
            if img is None:
                img = MultiPoly.variable(v, target)
            elif not isinstance(img, MultiPoly):
                img = MultiPoly.constant(img, target)
            elif img.vars != target:
                raise InputError("substitution images must share the target variables")
            subs.append(img)
        return _evaluate_terms(self.terms, n, subs, MultiPoly.one(target), MultiPoly.zero(target))

    def evaluate(self, point, coeff=None):
        """Evaluate at a point given as a mapping or a sequence.

        Values may be any ring elements supporting ``+`` and ``*``.  ``coeff``
        converts an mpq coefficient into that ring (default: used as is).
        """
        if isinstance(point, Mapping):
            values = [point[v] for v in self.vars]
        else:
            values = list(point)
        if len(values) != len(self.vars):
            raise InputError("point has wrong dimension")
        conv = coeff if coeff is not None else (lambda c: c)
        n = len(self.vars)
        cache = [dict() for _ in range(n)]
        total = conv(ZERO)
        for k, c in self.terms.items():
            e = unpack(k, n)
            term = conv(c)
            for i in range(n):
                if e[i]:
                    p = cache[i].get(e[i])
                    if p is None:
                        p = _power(values[i], e[i])
                        cache[i][e[i]] = p
                    term = term * p
            total = total + term
        return total

    def embed(self, vars) -> "MultiPoly":
        """Re-express in a larger (or reordered) variable context."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = []
        for v in self.vars:
            if v not in vars:
                used = self.variables_used()
                if v in used:
                    raise InputError(f"variable {v!r} missing from target context")
                pos.append(None)
            else:
                pos.append(vars.index(v))
        n, m = len(self.vars), len(vars)
        out = {}
        for k, c in self.terms.items():
            e = unpack(k, n)
            f = [0] * m
            for i, p in enumerate(pos):
                if p is not None:
                    f[p] = e[i]
            out[pack(f)] = c
        return MultiPoly._raw(vars, out)

    def rename(self, mapping: Mapping) -> "MultiPoly":
        return MultiPoly._raw(tuple(mapping.get(v, v) for v in self.vars), dict(self.terms))

    def coefficients_in(self, var: str) -> dict:
        """Split as ``sum_e coeff_e * var**e``; coefficients live in the same context."""
        n = len(self.vars)
        s = _shift(self.index(var), n)
        top = BITS * n
        out = {}
        for k, c in self.terms.items():
            e = (k >> s) & MASK
            kk = k - (e << s) - (e << top)
            out.setdefault(e, {})[kk] = c
        return {e: MultiPoly._raw(self.vars, t) for e, t in out.items()}

    @classmethod
    def from_coefficients_in(cls, var: str, coeffs: Mapping, vars) -> "MultiPoly":
        x = cls.variable(var, vars)
        total = cls.zero(vars)
        for e, c in coeffs.items():
            total = total + c * x ** e
        return total

    def leading_coeff_in(self, var: str) -> "MultiPoly":
        if not self.terms:
            return self
        cs = self.coefficients_in(var)
        return cs[max(cs)]

    def homogenize(self, var: str, degree: int | None = None) -> "MultiPoly":
        """Homogenize with a new variable appended to the context."""
        if var in self.vars:
            raise InputError(f"{var!r} already present")
        n = len(self.vars)
        D = self.total_degree() if degree is None else degree
        out = {}
        for k, c in self.terms.items():
            e = unpack(k, n)
            out[pack(e + (D - sum(e),))] = c
        return MultiPoly._raw(self.vars + (var,), out)

    def dehomogenize(self, var: str) -> "MultiPoly":
        """Set ``var = 1`` and drop it from the context."""
        i = self.index(var)
        n = len(self.vars)
        vars = self.vars[:i] + self.vars[i + 1:]
        out = {}
        for k, c in self.terms.items():
            e = unpack(k, n)
            kk = pack(e[:i] + e[i + 1:])
            v = out.get(kk, ZERO) + c
            if v:
                out[kk] = v
            else:
                out.pop(kk, None)
        return MultiPoly._raw(vars, out)

    # normalisation ----------------------------------------------------

    def content(self) -> mpq:
        """Positive rational g with self/g integral and primitive."""
        if not self.terms:
            return ZERO
        from gmpy2 import gcd, lcm
        num = mpz(0)
        den = mpz(1)
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return mpq(num, den)

    def primitive(self) -> tuple:
        """Return ``(c, p)`` with self = c*p, p integral primitive, positive leading coefficient."""
        if not self.terms:
            return ZERO, self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return c, self.scale(1 / c)

    def monic(self) -> "MultiPoly":
        return self.scale(1 / self.leading_coefficient()) if self.terms else self

    # printing ---------------------------------------------------------

    def __str__(self) -> str:
        from .parse import to_text
        return to_text(self)

    def __repr__(self) -> str:
        return f"MultiPoly({str(self)!r}, vars={self.vars})"


def _evaluate_terms(terms: dict, n: int, values: list, one, zero):
    cache = [dict() for _ in range(n)]

    def power(i, e):
        c = cache[i]
        v = c.get(e)
        if v is None:
            if e == 0:
                v = one
            elif e == 1:
                v = values[i]
            else:
                half = power(i, e // 2)
                v = half * half
                if e & 1:
                    v = v * values[i]
            c[e] = v
        return v

    total = zero
    for k, c in terms.items():
        e = unpack(k, n)
        term = None
        for i in range(n):
            if e[i]:
                p = power(i, e[i])
                term = p if term is None else term * p
        if term is None:
            total = total + one * c
        else:
            total = total + term * c
    return total


def _power(x, e):
    result = None
    base = x
    while e:
        if e & 1:
            result = base if result is None else result * base
        e >>= 1
        if e:
            base = base * base
    return result


def divides_monomial(ka: int, kb: int, n: int) -> bool:
    """True iff the monomial ``ka`` divides ``kb``."""
    for _ in range(n):
        if (ka & MASK) > (kb & MASK):
            return False
        ka >>= BITS
        kb >>= BITS
    return True


def exact_div(P: MultiPoly, Q: MultiPoly) -> MultiPoly:
    """Quotient P/Q; raises InexactDivision when Q does not divide P."""
    if Q.vars != P.vars:
        raise InputError("variable mismatch in exact_div")
    if not Q.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if not P.terms:
        return P
    n = len(P.vars)
    if len(Q.terms) == 1:
        (kq, cq), = Q.terms.items()
        out = {}
        for k, c in P.terms.items():
            if not divides_monomial(kq, k, n):
                raise InexactDivision("monomial division leaves a remainder")
            out[k - kq] = c / cq
        return MultiPoly._raw(P.vars, out)
    kq = max(Q.terms)
    lc = Q.terms[kq]
    rest = [(k, c) for k, c in Q.terms.items() if k != kq]
    rem = dict(P.terms)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quot = {}
    while heap:
        k = -heapq.heappop(heap)
        c = rem.pop(k, None)
        if c is None:
            continue
        while heap and -heap[0] == k:
            heapq.heappop(heap)
        if k < kq or not divides_monomial(kq, k, n):
            raise InexactDivision("polynomial division leaves a remainder")
        t = k - kq
        qc = c / lc
        quot[t] = qc
        for kr, cr in rest:
            kk = kr + t
            v = rem.get(kk)
            if v is None:
                rem[kk] = -qc * cr
                heapq.heappush(heap, -kk)
            else:
                v -= qc * cr
                if v:
                    rem[kk] = v
                else:
                    del rem[kk]
    return MultiPoly._raw(P.vars, quot)


def divides(Q: MultiPoly, P: MultiPoly) -> bool:
    try:
        exact_div(P, Q)
    except InexactDivision:
        return False
    return True


def pseudo_divmod(P: MultiPoly, Q: MultiPoly, var: str) -> tuple:
    """Pseudo-division in ``var``: ``lc(Q)**e * P = A*Q + R`` with deg R < deg Q.

    Returns ``(e, A, R)`` with ``e`` the number of reduction steps actually
    taken.  When ``lc(Q)`` is a constant the power is folded into the quotient
    and ``e`` is 0.
    """
    dq = Q.degree_in(var)
    if dq < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    cq = Q.coefficients_in(var)
    lc = cq[dq]
    x = MultiPoly.variable(var, P.vars)
    if lc.is_constant():
        inv = 1 / lc.constant_value()
        R = P
        A = MultiPoly.zero(P.vars)
        dr = R.degree_in(var)
        while dr >= dq:
            top = R.coefficients_in(var)[dr].scale(inv)
            mono = top * x ** (dr - dq)
            A = A + mono
            R = R - mono * Q
            dr = R.degree_in(var)
        return 0, A, R
    R = P
    A = MultiPoly.zero(P.vars)
    used = 0
    dr = R.degree_in(var)
    while dr >= dq:
        top = R.coefficients_in(var)[dr]
        mono = top * x ** (dr - dq)
        A = A * lc + mono
        R = R * lc - mono * Q
        used += 1
        dr = R.degree_in(var)
    return used, A, R


def reduce_mod(P: MultiPoly, F: MultiPoly, var: str) -> MultiPoly:
    """Normal form of P modulo F, dividing in ``var`` where F has constant leading coefficient."""
    e, _, R = pseudo_divmod(P, F, var)
    if e:
        raise InputError(f"modulus is not monic in {var!r}")
    return R
