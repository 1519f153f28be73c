"""Truncated univariate power series with rational coefficients."""

from __future__ import annotations

from gmpy2 import mpq

from .errors import InputError


class TruncSeries:
    """``c_0 + c_1 h + ... + c_N h^N`` modulo ``h^(N+1)``."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int):
        if order < 0:
            raise InputError("truncation order must be nonnegative")
        cs = [mpq(c) for c in list(coeffs)[: order + 1]]
        cs += [mpq(0)] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls([1], order)

    @classmethod
    def linear(cls, a, b, order: int) -> "TruncSeries":
        """``a + b h``."""
        return cls([a, b], order)

    def __getitem__(self, k: int) -> mpq:
        return self.coeffs[k] if 0 <= k <= self.order else mpq(0)

    def _check(self, other: "TruncSeries") -> int:
        if not isinstance(other, TruncSeries):
            raise TypeError("expected a TruncSeries")
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries([other], self.order)
        n = self._check(other)
        return TruncSeries([self[k] + other[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncSeries) else -mpq(other))

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries([c * mpq(other) for c in self.coeffs], self.order)
        n = self._check(other)
        out = [mpq(0)] * (n + 1)
        for i in range(n + 1):
            a = self[i]
            if a:
                for j in range(n + 1 - i):
                    out[i + j] += a * other[j]
        return TruncSeries(out, n)

    __rmul__ = __mul__

    def inverse(self) -> "TruncSeries":
        c0 = self[0]
        if not c0:
            raise InputError("series with zero constant term is not invertible")
        inv = [mpq(0)] * (self.order + 1)
        inv[0] = 1 / c0
        for k in range(1, self.order + 1):
            acc = sum((self[j] * inv[k - j] for j in range(1, k + 1)), mpq(0))
            inv[k] = -acc / c0
        return TruncSeries(inv, self.order)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.inverse()
        return TruncSeries([c / mpq(other) for c in self.coeffs], self.order)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncSeries) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"TruncSeries({[str(c) for c in self.coeffs]}, order={self.order})"
