"""Lines in P^3 and exact enumeration of the lines on a surface.

A line is stored by a row-reduced 2x4 spanning matrix over a number field
with a chosen embedding, together with its Pluecker coordinates.

Enumeration works chart by chart on the Grassmannian.  In chart (i, j) a line
is spanned by ``a = e_i + a1 e_k + a2 e_l`` and ``b = e_j + b1 e_k + b2 e_l``;
the coefficients ``E_r`` of the binary form ``F(s a + t b)`` must vanish.
``E_1`` is linear in b and removes ``b2``; resultants in ``b1`` and then in
``a2`` leave a univariate eliminant in ``a1``.  Its roots are lifted
numerically, and every lifted solution is then certified exactly: the chart
solutions are packed into a rational univariate representation (a square-free
``Phi(T)`` and coordinates ``h_c(T)``) and every ``E_r`` is checked to vanish
modulo ``Phi``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import mpmath
from gmpy2 import mpq

from ..algebra import MultiPoly, factor_list, gcd, reduce_mod, resultant
from ..errors import InputError, InvariantViolation
from .numbers import DPS, AlgNumber, NumberField, _inverse_mod, _mul, _rem, poly_roots, rational_approx, to_mp
from .surface import X4, ProjSurface

PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
U = ("a1", "a2", "b1", "b2")


@dataclass(frozen=True)
class InfiniteFamily:
    """Marker returned when a surface carries a positive-dimensional family of lines."""

    reason: str

    def to_json(self) -> dict:
        return {"infinite_family": True, "reason": self.reason}


# lines ----------------------------------------------------------------------


def _as_field_elements(rows, field):
    out = []
    for row in rows:
        out.append([field(v) if not isinstance(v, AlgNumber) else v for v in row])
    return out


class Line3:
    """A line of P^3 given by two spanning points over a number field."""

    __slots__ = ("field", "span", "pluecker")

    def __init__(self, rows, field: NumberField | None = None):
        rows = [list(r) for r in rows]
        if len(rows) != 2 or any(len(r) != 4 for r in rows):
            raise InputError("a line is spanned by two points of P^3")
        if field is None:
            found = [v.field for r in rows for v in r if isinstance(v, AlgNumber) and not v.field.is_rational]
            field = found[0] if found else NumberField.rationals()
        self.field = field
        a, b = _as_field_elements(rows, field)
        self.span = _row_reduce(a, b)
        a, b = self.span
        self.pluecker = tuple(a[i] * b[j] - a[j] * b[i] for i, j in PLUCKER_PAIRS)

    @classmethod
    def through(cls, p, q) -> "Line3":
        return cls([list(p), list(q)])

    @property
    def is_rational(self) -> bool:
        return all(v.is_rational() for r in self.span for v in r)

    def pluecker_relation(self):
        p01, p02, p03, p12, p13, p23 = self.pluecker
        return p01 * p23 - p02 * p13 + p03 * p12

    def numeric_span(self) -> list:
        return [[v.to_complex() for v in r] for r in self.span]

    def numeric_pluecker(self) -> list:
        return [v.to_complex() for v in self.pluecker]

    def parametrization(self, vars=("s", "t", "T")) -> dict:
        """Images of x0..x3 under ``s*a + t*b`` with field elements as polynomials in T."""
        s = MultiPoly.variable(vars[0], vars)
        t = MultiPoly.variable(vars[1], vars)
        out = {}
        for c in range(4):
            ac = self.span[0][c].as_poly(vars[2]).embed(vars)
            bc = self.span[1][c].as_poly(vars[2]).embed(vars)
            out[X4[c]] = s * ac + t * bc
        return out

    def restrict(self, G: MultiPoly) -> MultiPoly:
        """``G(s a + t b)`` reduced modulo the field's defining polynomial (vars s, t, T)."""
        vars = ("s", "t", "T")
        P = G.compose(self.parametrization(vars), vars)
        phi = self.field.modulus_poly("T").embed(vars)
        return reduce_mod(P, phi, "T")

    def same_as(self, other: "Line3") -> bool:
        if self.field.same(other.field) or (self.is_rational and other.is_rational):
            return all(a == b for a, b in zip(self.pluecker, other.pluecker))
        with mpmath.workdps(DPS):
            p, q = self.numeric_pluecker(), other.numeric_pluecker()
            scale = max(abs(v) for v in p) + max(abs(v) for v in q)
            for i in range(6):
                for j in range(i + 1, 6):
                    if abs(p[i] * q[j] - p[j] * q[i]) > mpmath.mpf(10) ** (-DPS // 2) * scale ** 2:
                        return False
            return True

    def to_json(self) -> dict:
        body = {
            "span": [[v.text("t") for v in r] for r in self.span],
            "pluecker": [v.text("t") for v in self.pluecker],
        }
        if not self.field.is_rational:
            body["field"] = self.field.describe()
            with mpmath.workdps(20):
                body["numeric_span"] = [[mpmath.nstr(z, 12) for z in r] for r in self.numeric_span()]
        return body

    def __repr__(self) -> str:
        return f"Line3({[[v.text('t') for v in r] for r in self.span]})"


def _row_reduce(a: list, b: list) -> tuple:
    rows = [a, b]
    piv = []
    r = 0
    for c in range(4):
        if r == 2:
            break
        k = next((i for i in range(r, 2) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(2):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    if r < 2:
        raise InputError("spanning matrix of a line must have rank 2")
    return tuple(tuple(row) for row in rows)


def line_on_surface_check(F, L: Line3) -> bool:
    """Exact test that ``F`` vanishes identically on ``L``."""
    if isinstance(F, ProjSurface):
        F = F.F
    return not L.restrict(F)


# numeric helpers --------------------------------------------------------------


def _numeric_coeffs(P: MultiPoly, vars_keep: tuple) -> dict:
    """Split P by monomials in ``vars_keep``; returns {exps: coefficient polynomial}."""
    idx = [P.vars.index(v) for v in vars_keep]
    other = tuple(v for v in P.vars if v not in vars_keep)
    out = {}
    for e, c in P.items():
        key = tuple(e[i] for i in idx)
        rest = tuple(e[i] for i in range(len(e)) if i not in idx)
        out.setdefault(key, {})[rest] = c
    return {k: MultiPoly(other, t) for k, t in out.items()}


def _eval(P: MultiPoly, point) -> mpmath.mpc:
    return P.evaluate(point, coeff=to_mp)


def _eval_at(P: MultiPoly, values: dict) -> mpmath.mpc:
    return P.evaluate([values.get(v, 0) for v in P.vars], coeff=to_mp)


def _uni_roots(coeffs: list) -> list:
    """Roots of a numeric univariate polynomial given lowest degree first."""
    coeffs = list(coeffs)
    scale = max((abs(c) for c in coeffs), default=0)
    # coefficients are of moderate size, so tiny ones are numerical zeros
    tol = max(scale, 1) * mpmath.mpf(10) ** (-(mpmath.mp.dps // 2))
    if scale <= tol:
        return None
    while coeffs and abs(coeffs[-1]) <= tol:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    hi = list(reversed(coeffs))
    try:
        roots = mpmath.polyroots(hi, maxsteps=400, extraprec=2 * mpmath.mp.prec)
    except mpmath.libmp.libhyper.NoConvergence:
        roots = mpmath.polyroots(hi, maxsteps=2000, extraprec=4 * mpmath.mp.prec, error=False)
    if not isinstance(roots, (list, tuple)):
        roots = [roots]
    return [mpmath.mpc(r) for r in roots]


def _poly_compose_linear(coeffs: dict, lin: tuple) -> list:
    """Numeric bivariate ``sum c[(e1,e2)] b1^e1 b2^e2`` with b2 = lin0 + lin1*b1, as a list in b1."""
    out = []
    l0, l1 = lin

    def add(i, v):
        while len(out) <= i:
            out.append(mpmath.mpc(0))
        out[i] += v

    for (e1, e2), c in coeffs.items():
        # expand (l0 + l1 b1)^e2
        for k in range(e2 + 1):
            add(e1 + k, c * mpmath.binomial(e2, k) * l0 ** (e2 - k) * l1 ** k)
    return out


# chart systems ----------------------------------------------------------------


def chart_equations(F: MultiPoly, i: int, j: int) -> list:
    """Coefficients E_0..E_d of ``F(s a + t b)`` in the Grassmannian chart (i, j)."""
    k, l = [c for c in range(4) if c not in (i, j)]
    V = ("s", "t") + U
    s, t, a1, a2, b1, b2 = MultiPoly.gens(V)
    one = MultiPoly.one(V)
    a = [None] * 4
    b = [None] * 4
    a[i], a[j], a[k], a[l] = one, MultiPoly.zero(V), a1, a2
    b[i], b[j], b[k], b[l] = MultiPoly.zero(V), one, b1, b2
    images = {X4[c]: s * a[c] + t * b[c] for c in range(4)}
    P = F.compose(images, V)
    d = F.total_degree()
    cs = P.coefficients_in("t")
    out = []
    for r in range(d + 1):
        c = cs.get(r, MultiPoly.zero(V))
        out.append(c.dehomogenize("s").dehomogenize("t").embed(U) if c else MultiPoly.zero(U))
    return out


def chart_eliminant(E: list) -> MultiPoly | None:
    """Univariate eliminant in a1 whose roots contain every chart solution (None if degenerate)."""
    d = len(E) - 1
    E1 = E[1]
    split = E1.coefficients_in("b2")
    c2 = split.get(1, MultiPoly.zero(U))
    rest = split.get(0, MultiPoly.zero(U))
    neg_rest = -rest

    def tilde(Er, r):
        total = MultiPoly.zero(U)
        for e, c in Er.coefficients_in("b2").items():
            total = total + c * neg_rest ** e * c2 ** (r - e)
        return total

    if not c2:
        # E1 free of b2: swap the roles of b1 and b2 is not needed, report degenerate
        return None
    T2 = tilde(E[2], 2)
    chis = []
    for r in range(3, d + 1):
        Tr = tilde(E[r], r)
        if not T2 and not Tr:
            continue
        R = resultant(T2, Tr, "b1") if T2.degree_in("b1") > 0 or Tr.degree_in("b1") > 0 else None
        if R is None or not R:
            continue
        if not E[0]:
            continue
        chi = resultant(E[0], R, "a2")
        if chi:
            chis.append(chi)
    if not chis:
        return None
    g = chis[0]
    for c in chis[1:]:
        g = gcd(g, c)
    return g


def _lift_solutions(E: list, chi: MultiPoly, dps: int) -> list:
    """Numeric chart solutions (a1, a2, b1, b2) lying over the roots of chi."""
    d = len(E) - 1
    _, factors = factor_list(chi)
    sols = []
    E0_parts = _numeric_coeffs(E[0], ("a2",))
    E_parts = [_numeric_coeffs(Er, ("b1", "b2")) for Er in E]
    with mpmath.workdps(dps):
        for f, _ in factors:
            if f.is_constant():
                continue
            deg = f.degree_in("a1")
            coeffs = [mpq(0)] * (deg + 1)
            for e, c in f.items():
                coeffs[e[0]] = c
            for x1 in poly_roots(coeffs, dps):
                a2_coeffs = [mpmath.mpc(0)] * (max(k[0] for k in E0_parts) + 1)
                for (e,), c in E0_parts.items():
                    a2_coeffs[e] = _eval_at(c, {"a1": x1})
                a2_roots = _uni_roots(a2_coeffs)
                if a2_roots is None:
                    continue
                for x2 in _cluster_roots(a2_roots, mpmath.mpf(10) ** (-(dps // 6))):
                    sols.extend(_lift_b(E_parts, x1, x2, d))
    return sols


def _cluster_roots(roots: list, tol) -> list:
    """Replace each cluster of nearby roots (a numerically split multiple root) by its centroid."""
    clusters = []
    for z in roots:
        for c in clusters:
            if abs(c[0] - z) < tol:
                c.append(z)
                break
        else:
            clusters.append([z])
    return [sum(c) / len(c) for c in clusters]


def _lift_b(E_parts: list, x1, x2, d: int) -> list:
    def numeric(parts):
        out = {}
        for key, c in parts.items():
            out[key] = _eval_at(c, {"a1": x1, "a2": x2})
        return out

    E1 = numeric(E_parts[1])
    alpha = E1.get((0, 0), 0)
    beta = E1.get((1, 0), 0)
    gamma = E1.get((0, 1), 0)
    out = []
    if abs(gamma) >= abs(beta):
        if abs(gamma) == 0:
            return out
        lin = (-alpha / gamma, -beta / gamma)
        for r in range(2, d + 1):
            roots = _uni_roots(_poly_compose_linear(numeric(E_parts[r]), lin))
            if roots is not None:
                break
        else:
            return out
        for y1 in roots:
            out.append((x1, x2, y1, lin[0] + lin[1] * y1))
    else:
        lin = (-alpha / beta, -gamma / beta)
        for r in range(2, d + 1):
            swapped = {(e2, e1): c for (e1, e2), c in numeric(E_parts[r]).items()}
            roots = _uni_roots(_poly_compose_linear(swapped, lin))
            if roots is not None:
                break
        else:
            return out
        for y2 in roots:
            out.append((x1, x2, lin[0] + lin[1] * y2, y2))
    return out


def _residual(E: list, pt) -> mpmath.mpf:
    return max(abs(_eval(Er, list(pt))) for Er in E)


def _newton(E: list, pt, steps: int = 8):
    J = [[Er.diff(v) for v in U] for Er in E]
    x = mpmath.matrix([pt[i] for i in range(4)])
    for _ in range(steps):
        vals = mpmath.matrix([_eval(Er, list(x)) for Er in E])
        if mpmath.norm(vals) < mpmath.mpf(10) ** (-mpmath.mp.dps + 10):
            break
        Jm = mpmath.matrix([[_eval(Jrc, list(x)) for Jrc in row] for row in J])
        JH = Jm.H
        try:
            delta = mpmath.lu_solve(JH * Jm, JH * vals)
        except ZeroDivisionError:
            break
        x = x - delta
    return tuple(x[i] for i in range(4))


def _dedupe(points: list, tol) -> list:
    out = []
    for p in points:
        if all(max(abs(p[i] - q[i]) for i in range(4)) > tol for q in out):
            out.append(p)
    return out


def _chart_vectors(i, j, pt):
    k, l = [c for c in range(4) if c not in (i, j)]
    a = [0] * 4
    b = [0] * 4
    a[i], a[k], a[l] = 1, pt[0], pt[1]
    b[j], b[k], b[l] = 1, pt[2], pt[3]
    return a, b


def _chart_vector_polys(i, j, h):
    """Exact spanning vectors as polynomials in T from coordinate polynomials h."""
    k, l = [c for c in range(4) if c not in (i, j)]
    one = [mpq(1)]
    a = [[] for _ in range(4)]
    b = [[] for _ in range(4)]
    a[i], a[k], a[l] = one, h[0], h[1]
    b[j], b[k], b[l] = one, h[2], h[3]
    return a, b


# certification ------------------------------------------------------------------


def _certify(E: list, pts: list, i: int, j: int, earlier: list, seed: int, dps: int) -> list:
    """Exact rational univariate representation of the chart solutions; returns
    (Phi factor, h coordinates mod factor) pairs."""
    rng = random.Random(seed)
    N = len(pts)
    with mpmath.workdps(dps):
        for _ in range(20):
            lam = [1] + [rng.randint(-3, 3) for _ in range(3)]
            us = [sum(lam[c] * p[c] for c in range(4)) for p in pts]
            gap = min((abs(us[s] - us[t]) for s in range(N) for t in range(s + 1, N)), default=mpmath.inf)
            if gap > mpmath.mpf(10) ** -8:
                break
        else:
            raise InvariantViolation("no separating linear form found for the chart solutions")
        # Phi(T) = prod (T - u_s), lowest degree first
        phi = [mpmath.mpc(1)]
        for u in us:
            nxt = [mpmath.mpc(0)] * (len(phi) + 1)
            for k, c in enumerate(phi):
                nxt[k + 1] += c
                nxt[k] -= u * c
            phi = nxt
        Phi = [rational_approx(c, dps) for c in phi]
        # g_c(T) = sum_s c_s * Phi(T)/(T - u_s) has rational coefficients
        quotients = []
        for u in us:
            q = [mpmath.mpc(0)] * N
            acc = mpmath.mpc(0)
            for k in range(N, 0, -1):
                acc = acc * u + phi[k]
                q[k - 1] = acc
            quotients.append(q)
        hs = []
        dPhi = [Phi[k] * k for k in range(1, N + 1)]
        inv = _inverse_mod(dPhi, Phi)
        for c in range(4):
            g = [rational_approx(sum(pts[s][c] * quotients[s][k] for s in range(N)), dps) for k in range(N)]
            hs.append(_rem(_mul(g, inv), Phi))
    Tvar = ("T",)
    PhiP = MultiPoly(Tvar, {(k,): v for k, v in enumerate(Phi) if v})
    if not gcd(PhiP, PhiP.diff("T")).is_constant():
        raise InvariantViolation("chart solutions do not form a square-free representation")
    images = {U[c]: MultiPoly(Tvar, {(k,): v for k, v in enumerate(hs[c]) if v}) for c in range(4)}
    for Er in E:
        if reduce_mod(Er.compose(images, Tvar), PhiP, "T"):
            raise InvariantViolation(f"chart ({i},{j}): certified representation fails an equation")
    a, b = _chart_vector_polys(i, j, hs)
    for (p, q) in earlier:
        pq = _rem(_sub_lists(_mul(a[p], b[q]), _mul(a[q], b[p])), Phi)
        if pq:
            raise InvariantViolation(f"chart ({i},{j}): a certified line belongs to an earlier chart")
    _, factors = factor_list(PhiP)
    out = []
    for f, _ in factors:
        mon = f.monic()
        deg = mon.degree_in("T")
        phi_f = [mon.as_dict().get((k,), mpq(0)) for k in range(deg + 1)]
        out.append((phi_f, [_rem(h, phi_f) for h in hs]))
    return out


def _sub_lists(a, b):
    n = max(len(a), len(b))
    res = [(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)]
    while res and not res[-1]:
        res.pop()
    return res


# enumeration ----------------------------------------------------------------


def _lines_in_coordinates(F: MultiPoly, seed: int, dps: int):
    lines = []
    report = []
    for idx, (i, j) in enumerate(PLUCKER_PAIRS):
        earlier = list(PLUCKER_PAIRS[:idx])
        E = chart_equations(F, i, j)
        if not any(E):
            return None, report
        chi = chart_eliminant(E)
        if chi is None:
            return None, report
        with mpmath.workdps(dps):
            raw = _lift_solutions(E, chi, dps)
            tol = mpmath.mpf(10) ** (-(dps // 4))
            good = []
            for p in raw:
                if _residual(E, p) < tol * (1 + max(abs(v) for v in p)) ** F.total_degree():
                    good.append(_newton(E, p))
            good = [p for p in good if _residual(E, p) < mpmath.mpf(10) ** (-(dps // 2))]
            good = _dedupe(good, mpmath.mpf(10) ** (-(dps // 3)))
            owned = []
            for p in good:
                a, b = _chart_vectors(i, j, p)
                if all(abs(a[pp] * b[qq] - a[qq] * b[pp]) < mpmath.mpf(10) ** (-(dps // 3)) for pp, qq in earlier):
                    owned.append(p)
        report.append({"chart": [i, j], "eliminant_degree": chi.total_degree(), "solutions": len(owned)})
        if not owned:
            continue
        for phi, hs in _certify(E, owned, i, j, earlier, seed, dps):
            for K in NumberField.embeddings(phi, dps):
                a, b = _chart_vector_polys(i, j, hs)
                rows = [[K(v) for v in a], [K(v) for v in b]]
                lines.append(Line3(rows, K))
    return lines, report


def _random_change(rng) -> list:
    from ..algebra import det_field

    while True:
        M = [[rng.randint(-2, 2) for _ in range(4)] for _ in range(4)]
        if det_field([[mpq(v) for v in r] for r in M]):
            return M


def lines_on_surface(F, seed: int = 0, dps: int = DPS, tries: int = 3, with_report: bool = False):
    """All lines on the surface ``F = 0`` or an InfiniteFamily marker.

    Standard coordinates are tried first; if some chart system is degenerate
    the surface is moved by random linear changes of coordinates and the
    lines are mapped back exactly.
    """
    if isinstance(F, ProjSurface):
        F = F.F
    S = ProjSurface(F)
    d = S.d
    if d == 1:
        out = InfiniteFamily("a plane contains a two-dimensional family of lines")
        return (out, []) if with_report else out
    if d == 2:
        out = InfiniteFamily("a quadric contains at least a one-dimensional family of lines")
        return (out, []) if with_report else out
    rng = random.Random(seed)
    lines, report = _lines_in_coordinates(F, seed, dps)
    attempt = 0
    while lines is None and attempt < tries:
        attempt += 1
        M = _random_change(rng)
        x = MultiPoly.gens(X4)
        images = {X4[r]: sum((x[c].scale(M[r][c]) for c in range(4)), MultiPoly.zero(X4)) for r in range(4)}
        G = F.compose(images)
        moved, report = _lines_in_coordinates(G, seed, dps)
        if moved is None:
            continue
        lines = []
        for L in moved:
            rows = [[sum((L.span[r][c] * M[row][c] for c in range(4)), L.field(0)) for row in range(4)] for r in range(2)]
            lines.append(Line3(rows, L.field))
    if lines is None:
        out = InfiniteFamily("chart systems stay positive-dimensional under random coordinate changes")
        return (out, report) if with_report else out
    for L in lines:
        if not line_on_surface_check(F, L):
            raise InvariantViolation("an enumerated line fails the exact on-surface check")
        if L.pluecker_relation():
            raise InvariantViolation("Pluecker relation fails")
    for a in range(len(lines)):
        for b in range(a + 1, len(lines)):
            if lines[a].same_as(lines[b]):
                raise InvariantViolation("duplicate line after chart ownership")
    return (lines, report) if with_report else lines
