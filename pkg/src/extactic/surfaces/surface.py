"""Surfaces in P^3 and arithmetic modulo their equation."""

from __future__ import annotations

import random
from dataclasses import dataclass

from gmpy2 import mpq

from ..algebra import MultiPoly, det_field, divides, exact_div, parse_poly, pseudo_divmod
from ..errors import InputError

X4 = ("x0", "x1", "x2", "x3")


@dataclass(frozen=True)
class ProjSurface:
    F: MultiPoly

    def __post_init__(self):
        F = self.F
        if not isinstance(F, MultiPoly) or F.vars != X4:
            raise InputError("surface equation must be a polynomial in x0, x1, x2, x3")
        if not F:
            raise InputError("the zero polynomial defines no surface")
        if not F.is_homogeneous() or F.is_constant():
            raise InputError("surface equation must be homogeneous of positive degree")

    @classmethod
    def parse(cls, text: str) -> "ProjSurface":
        return cls(parse_poly(text, X4))

    @property
    def d(self) -> int:
        return self.F.total_degree()

    def gradient(self) -> tuple:
        return self.F.gradient()

    def hessian(self) -> list:
        grad = self.gradient()
        return [[g.diff(v) for v in X4] for g in grad]

    def is_probably_smooth(self, seed=0) -> bool:
        """Randomised elimination probe for singular points.

        After a random linear change of coordinates, x3 and then x2 are
        eliminated from random combinations of the partials; a common zero
        of all partials forces the final binary forms in (x0, x1) to share
        a factor.  ``False`` therefore flags a probable singular point,
        ``True`` means none was found.
        """
        from ..algebra import gcd, resultant

        rng = random.Random(seed)
        x = MultiPoly.gens(X4)
        while True:
            M = [[rng.randint(-4, 4) for _ in range(4)] for _ in range(4)]
            if det_field([[mpq(v) for v in row] for row in M]):
                break
        images = {X4[i]: sum((x[j].scale(M[i][j]) for j in range(4)), MultiPoly.zero(X4)) for i in range(4)}
        grad = [g.compose(images) for g in self.gradient()]
        if self.d == 1:
            return True

        def combo():
            return sum((g.scale(rng.randint(-5, 5) or 1) for g in grad), MultiPoly.zero(X4))

        A = combo()
        elim3 = [resultant(A, combo(), "x3") for _ in range(3)]
        B = elim3[0]
        forms = [resultant(B, C, "x2") for C in elim3[1:]]
        if any(not f for f in forms):
            return False
        g = gcd(forms[0], forms[1])
        return g.is_constant()


def hessian_det(F: MultiPoly) -> MultiPoly:
    from ..algebra import det

    H = [[F.diff(a).diff(b) for b in F.vars] for a in F.vars]
    return det(H, cap=None)


class ModF:
    """Canonical representatives modulo a homogeneous F.

    If F has a constant leading coefficient in some variable ``v`` (not in
    ``keep``) reduction is plain division in ``v``.  Otherwise a unipotent
    change of coordinates fixing the variables in ``keep`` makes F monic in
    ``v`` first, and representatives live in the new coordinates.
    """

    def __init__(self, F: MultiPoly, keep=(), seed: int = 0):
        self.F = F
        self.vars = F.vars
        self.keep = tuple(keep)
        self.forward = None
        self.backward = None
        for v in reversed(self.vars):
            if v in self.keep:
                continue
            if F.leading_coeff_in(v).is_constant() and F.degree_in(v) == F.total_degree():
                self.var = v
                self.G = F
                return
        rng = random.Random(seed)
        v = next(v for v in reversed(self.vars) if v not in self.keep)
        for _ in range(50):
            shifts = {w: rng.randint(-3, 3) for w in self.vars if w != v and w not in self.keep}
            fwd = {w: MultiPoly.variable(w, self.vars) + MultiPoly.variable(v, self.vars).scale(c) for w, c in shifts.items()}
            bwd = {w: MultiPoly.variable(w, self.vars) - MultiPoly.variable(v, self.vars).scale(c) for w, c in shifts.items()}
            G = F.compose(fwd)
            if G.leading_coeff_in(v).is_constant() and G.degree_in(v) == G.total_degree():
                self.var, self.G = v, G
                self.forward, self.backward = fwd, bwd
                return
        raise InputError("could not make the surface equation monic by a coordinate change")

    def to_chart(self, P: MultiPoly) -> MultiPoly:
        return P.compose(self.forward) if self.forward else P

    def from_chart(self, P: MultiPoly) -> MultiPoly:
        return P.compose(self.backward) if self.backward else P

    def nf(self, P: MultiPoly) -> MultiPoly:
        """Normal form in chart coordinates."""
        _, _, R = pseudo_divmod(self.to_chart(P), self.G, self.var)
        return R

    def reduce(self, P: MultiPoly) -> MultiPoly:
        """A representative of P mod F in the original coordinates, of lower degree in the
        reduction variable."""
        return self.from_chart(self.nf(P))

    def is_zero(self, P: MultiPoly) -> bool:
        return not self.nf(P)

    def equal(self, A: MultiPoly, B: MultiPoly) -> bool:
        return divides(self.F, A - B)

    def ratio(self, A: MultiPoly, B: MultiPoly):
        """Rational c with A = c*B mod F, or None."""
        a, b = self.nf(A), self.nf(B)
        if not b:
            return mpq(0) if not a else None
        c = a.leading_coefficient() / b.leading_coefficient() if a else mpq(0)
        return c if a == b.scale(c) else None

    def divide_power(self, P: MultiPoly, var: str, e: int) -> MultiPoly:
        """Representative of P / var^e mod F for a kept variable ``var``."""
        if var not in self.keep:
            raise InputError("only kept variables can be divided out modulo F")
        R = self.nf(P)
        x = MultiPoly.variable(var, self.vars)
        for _ in range(e):
            R = exact_div(R, x)
        return self.from_chart(R)
