"""Foliations and d-webs on the projective plane, seen in the affine chart z = 1.

A foliation is a vector field ``A d/dx + B d/dy``; a d-web is a slope
polynomial ``P(x, y, m)`` whose roots in ``m`` are the slopes of its branches.
Extactic divisors are Wronskian determinants of the monomials of degree at
most n along the leaves.  For webs the determinant is formed over the algebra
``Q(x,y)[m]/(P)`` with the branch derivation and then normed back to
``Q[x,y]`` with resultants.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra import (
    DEFAULT_CAP,
    MultiPoly,
    det,
    det_field,
    exact_div,
    factor_list,
    gcd,
    multiplicity,
    normalize,
    parse_poly,
    pseudo_divmod,
    resultant,
)
from .errors import InexactDivision, InputError, InvariantViolation

XY = ("x", "y")
XYM = ("x", "y", "m")


def as_rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(0 if seed is None else seed)


def monomials(n: int, vars=XY) -> list:
    """Monomials in x, y of degree <= n, graded by degree then by x-power descending."""
    out = []
    nv = len(vars)
    for deg in range(n + 1):
        for i in range(deg, -1, -1):
            e = [0] * nv
            e[0], e[1] = i, deg - i
            out.append(MultiPoly.monomial(e, vars))
    return out


def linear_system_dimension(n: int) -> int:
    return n * (n + 3) // 2


# degree formula ---------------------------------------------------------


def degree_formula(n: int, d: int, r: int) -> int:
    """Degree of the n-extactic curve of a d-web of degree r on the plane."""
    if n < 1 or d < 1 or r < 0:
        raise InputError("degree_formula needs n >= 1, d >= 1, r >= 0")
    inner = (n + 1) * (n + 2) * (4 * d + (n + 3) * (r - d)) + (n + 3) * (n * n + 3 * n - 2) * (d - 1) * (d + 2 * r)
    total = n * inner
    if total % 8:
        raise InvariantViolation(f"degree formula not integral for n={n}, d={d}, r={r}")
    return total // 8


# data types -------------------------------------------------------------


@dataclass(frozen=True)
class AffineFoliation:
    A: MultiPoly
    B: MultiPoly
    declared_degree: int

    def __post_init__(self):
        for p in (self.A, self.B):
            if not isinstance(p, MultiPoly) or p.vars != XY:
                raise InputError("foliation components must be polynomials in (x, y)")
        if not self.A and not self.B:
            raise InputError("the zero vector field defines no foliation")
        if not gcd(self.A, self.B).is_constant():
            raise InputError("vector field is not saturated: A and B share a factor")
        if self.declared_degree < 0:
            raise InputError("degree must be nonnegative")

    @classmethod
    def parse(cls, text: str, degree: int) -> "AffineFoliation":
        parts = text.split(";")
        if len(parts) != 2:
            raise InputError('a vector field is written "A;B"')
        return cls(parse_poly(parts[0], XY), parse_poly(parts[1], XY), degree)

    @classmethod
    def saturated(cls, A: MultiPoly, B: MultiPoly, degree: int) -> "AffineFoliation":
        g = gcd(A, B)
        if not g.is_constant():
            A, B = exact_div(A, g), exact_div(B, g)
        return cls(A, B, degree)

    @property
    def d(self) -> int:
        return 1

    def slope_poly(self) -> MultiPoly:
        A, B = self.A.embed(XYM), self.B.embed(XYM)
        return A * MultiPoly.variable("m", XYM) - B

    def scaled(self, c) -> "AffineFoliation":
        return AffineFoliation(self.A.scale(c), self.B.scale(c), self.declared_degree)


@dataclass(frozen=True)
class AffineWeb:
    slope: MultiPoly
    declared_degree: int

    def __post_init__(self):
        P = self.slope
        if not isinstance(P, MultiPoly) or P.vars != XYM:
            raise InputError("slope polynomial must be in (x, y, m)")
        if P.degree_in("m") < 1:
            raise InputError("slope polynomial must have positive degree in m")
        if self.declared_degree < 0:
            raise InputError("degree must be nonnegative")
        content = None
        for c in P.coefficients_in("m").values():
            content = c if content is None else gcd(content, c)
            if content.is_constant():
                break
        if not content.is_constant():
            raise InputError("slope polynomial is not saturated: its m-coefficients share a factor")
        if self.d >= 2 and not resultant(P, P.diff("m"), "m"):
            raise InputError("web is not reduced: slope polynomial has a repeated factor in m")

    @classmethod
    def parse(cls, text: str, degree: int) -> "AffineWeb":
        return cls(parse_poly(text, XYM), degree)

    @property
    def d(self) -> int:
        return self.slope.degree_in("m")

    def slope_poly(self) -> MultiPoly:
        return self.slope


def _slope_of(w) -> MultiPoly:
    if isinstance(w, (AffineFoliation, AffineWeb)):
        return w.slope_poly()
    raise InputError("expected an AffineFoliation or AffineWeb")


def foliation_from_slope(P: MultiPoly, degree: int) -> AffineFoliation:
    cs = P.coefficients_in("m")
    if max(cs) != 1:
        raise InputError("not a foliation slope polynomial")
    zero = MultiPoly.zero(XYM)
    A = _drop_m(cs.get(1, zero))
    B = -_drop_m(cs.get(0, zero))
    return AffineFoliation(A, B, degree)


def _drop_m(p: MultiPoly) -> MultiPoly:
    return p.dehomogenize("m") if p.vars == XYM else p


# derivations --------------------------------------------------------------


def lie_derivative(v: AffineFoliation, f: MultiPoly) -> MultiPoly:
    """``A * df/dx + B * df/dy``."""
    if f.vars != XY:
        raise InputError("f must be a polynomial in (x, y)")
    return v.A * f.diff("x") + v.B * f.diff("y")


# tangency degree -------------------------------------------------------------


def _tangency_degree(P: MultiPoly, p1, p2, mu) -> int:
    t = MultiPoly.variable("x", XYM)
    images = {
        "x": t + p1,
        "y": t.scale(mu) + p2,
        "m": MultiPoly.constant(mu, XYM),
    }
    return P.compose(images).degree_in("x")


def web_degree(w, seed=None, tries: int = 20) -> int:
    """Number of tangencies between the web and a generic line.

    Two random rational lines are used; if they disagree the pair is redrawn.
    """
    P = _slope_of(w)
    rng = as_rng(seed)
    for _ in range(tries):
        degs = []
        for _ in range(2):
            p1 = mpq(rng.randint(-9, 9), rng.randint(1, 5))
            p2 = mpq(rng.randint(-9, 9), rng.randint(1, 5))
            mu = mpq(rng.randint(-9, 9), rng.randint(1, 5))
            degs.append(_tangency_degree(P, p1, p2, mu))
        if degs[0] == degs[1]:
            return max(degs[0], 0)
    raise InvariantViolation("random lines keep disagreeing on the tangency degree")


def check_degree(w, seed=None) -> None:
    found = web_degree(w, seed)
    if found != w.declared_degree:
        raise InputError(f"declared degree {w.declared_degree} but tangency count is {found}")


# discriminant -----------------------------------------------------------------


def web_discriminant_raw(P: MultiPoly) -> MultiPoly:
    lc = P.leading_coeff_in("m")
    return exact_div(resultant(P, P.diff("m"), "m"), lc)


def web_discriminant(w: AffineWeb) -> MultiPoly:
    """Content-stripped ``Res_m(P, dP/dm) / lc_m(P)`` as a polynomial in (x, y)."""
    if w.d < 2:
        raise InputError("discriminant needs d >= 2")
    D = web_discriminant_raw(w.slope)
    if not D:
        raise InputError("discriminant vanishes identically: the web is not reduced")
    return normalize(_drop_m(D))


# extactic -------------------------------------------------------------------


@dataclass
class ExtacticResult:
    affine_part: MultiPoly
    content: mpq
    infinity_multiplicity: int | None
    total_degree: int | None
    formula_degree: int
    vanishes_identically: bool
    infinity_source: str = "deficit"
    pole_order: int | None = None
    chart: list | None = field(default=None, repr=False)

    @property
    def raw(self) -> MultiPoly:
        return self.affine_part.scale(self.content)

    def to_json(self) -> dict:
        return {
            "affine_part": str(self.affine_part),
            "content": str(self.content),
            "infinity_multiplicity": self.infinity_multiplicity,
            "infinity_source": self.infinity_source,
            "total_degree": self.total_degree,
            "formula_degree": self.formula_degree,
            "vanishes_identically": self.vanishes_identically,
            "pole_order": self.pole_order,
            "chart": self.chart,
        }


def foliation_extactic_det(A: MultiPoly, B: MultiPoly, n: int, cap=DEFAULT_CAP, method="bareiss") -> MultiPoly:
    """Raw Wronskian determinant ``det(v^i(s_j))`` over the monomials of degree <= n."""
    k = linear_system_dimension(n)
    row = monomials(n)
    rows = [row]
    for _ in range(k):
        row = [A * s.diff("x") + B * s.diff("y") for s in row]
        rows.append(row)
    return det(rows, method=method, cap=cap)


def _reduce_row(entries: list, P: MultiPoly, c: MultiPoly) -> tuple:
    # bring each entry below degree d in m; returns (entries, extra power of c)
    reduced = []
    for N in entries:
        e, _, R = pseudo_divmod(N, P, "m")
        reduced.append((e, R))
    top = max(e for e, _ in reduced)
    out = []
    for e, R in reduced:
        out.append(R * c ** (top - e) if top > e else R)
    return out, top


def web_extactic_parts(P: MultiPoly, n: int, cap=DEFAULT_CAP) -> dict:
    """Numerator and bookkeeping of ``Delta^(k(k-1)/2) * sigma_W(v)`` for a slope polynomial.

    Entries of the Wronskian matrix are carried as ``N / (P_m^a * c^b)`` with
    ``N`` reduced modulo P and ``c = lc_m(P)``.
    """
    d = P.degree_in("m")
    k = linear_system_dimension(n)
    if cap is not None and k + 1 > cap:
        raise InputError(f"matrix size {k + 1} exceeds the determinant cap {cap}")
    m = MultiPoly.variable("m", XYM)
    c = P.leading_coeff_in("m")
    Pm = P.diff("m")
    G = P.diff("x") + m * P.diff("y")

    def Dt(N):
        return Pm * (N.diff("x") + m * N.diff("y")) - G * N.diff("m")

    DtPm = Dt(Pm)
    Dc = c.diff("x") + m * c.diff("y")

    row = monomials(n, XYM)
    rows = [row]
    a = b = 0
    A_total = B_total = 0
    for _ in range(k):
        if a == 0 and b == 0 and all(not N.degree_in("m") > 0 for N in row):
            new = [N.diff("x") + m * N.diff("y") for N in row]
        elif a == 0 and b == 0:
            new = [Dt(N) for N in row]
            a = 1
        else:
            new = [c * Pm * Dt(N) - (c * N * DtPm).scale(a) - (Pm * Pm * N * Dc).scale(b) for N in row]
            a, b = a + 2, b + 1
        new, extra = _reduce_row(new, P, c)
        b += extra
        rows.append(new)
        row = new
        A_total += a
        B_total += b
    S_raw = det(rows, cap=None)
    if not S_raw:
        return {"zero": True}
    es, _, S = pseudo_divmod(S_raw, P, "m")
    B_total += es
    if not S:
        return {"zero": True}
    return {
        "zero": False,
        "S": S,
        "A": A_total,
        "B": B_total,
        "c": c,
        "d": d,
        "k": k,
    }


def web_extactic_poly(P: MultiPoly, n: int, cap=DEFAULT_CAP) -> tuple:
    """Return ``(E, pole_order)``: the web extactic polynomial in (x, y) and the
    observed pole order of the normed Wronskian along the discriminant.

    ``E`` is zero when the Wronskian vanishes identically.
    """
    parts = web_extactic_parts(P, n, cap)
    if parts["zero"]:
        return MultiPoly.zero(XY), None
    S, A, B, c, d, k = (parts[key] for key in ("S", "A", "B", "c", "d", "k"))
    M = k * (k + 1) // 2
    half = k * (k - 1) // 2
    resPPm = resultant(P, P.diff("m"), "m")
    Delta = exact_div(resPPm, c)
    norm_S = resultant(P, S, "m")
    deg_S = S.degree_in("m")
    ec = M + (d - 2) * A - deg_S - d * B
    eD = half - A
    num = norm_S
    if ec > 0:
        num = num * c ** ec
    if eD > 0:
        num = num * Delta ** eD
    try:
        if eD < 0:
            num = _divide_power(num, Delta, -eD)
        if ec < 0:
            num = _divide_power(num, c, -ec)
    except InexactDivision as exc:
        raise InvariantViolation(
            "normed Wronskian times Delta^(k(k-1)/2) is not a polynomial"
        ) from exc
    E = _drop_m(num)
    pole = None
    Dxy = _drop_m(Delta)
    if not Dxy.is_constant():
        spare = 0
        rest = E
        while spare < half:
            try:
                rest = exact_div(rest, Dxy)
            except InexactDivision:
                break
            spare += 1
        pole = half - spare
    else:
        pole = 0
    return E, pole


def _divide_power(P: MultiPoly, f: MultiPoly, e: int) -> MultiPoly:
    if f.is_constant():
        return P.scale(1 / f.constant_value() ** e)
    for _ in range(e):
        P = exact_div(P, f)
    return P


def extactic_poly(w, n: int, cap=DEFAULT_CAP) -> tuple:
    """Raw extactic polynomial (x, y) and pole order for a foliation or web."""
    if isinstance(w, AffineFoliation):
        return foliation_extactic_det(w.A, w.B, n, cap), 0
    P = _slope_of(w)
    if P.degree_in("m") == 1:
        f = foliation_from_slope(P, w.declared_degree)
        return foliation_extactic_det(f.A, f.B, n, cap), 0
    return web_extactic_poly(P, n, cap)


# chart changes --------------------------------------------------------------


def _inverse3(G):
    G = [[mpq(v) for v in row] for row in G]
    D = det_field(G)
    if not D:
        raise InputError("singular projective transformation")
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            minor = [[G[r][s] for s in range(3) if s != j] for r in range(3) if r != i]
            cof[i][j] = (-1) ** (i + j) * (minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0])
    return [[cof[j][i] / D for j in range(3)] for i in range(3)]


def transform_slope(P: MultiPoly, G) -> MultiPoly:
    """Slope polynomial of the same web after the projective change ``X' = G X``.

    The result is saturated (content in x, y removed); its degree in m drops
    when the new vertical direction is a branch direction everywhere.
    """
    H = _inverse3(G)
    x, y, m = MultiPoly.gens(XYM)
    one = MultiPoly.one(XYM)
    L = [x.scale(H[i][0]) + y.scale(H[i][1]) + one.scale(H[i][2]) for i in range(3)]
    dL = [(H[i][0], H[i][1]) for i in range(3)]

    def numer(i):
        # L3 * dLi - Li * dL3 along the direction (1, m)
        return L[2] * (one.scale(dL[i][0]) + m.scale(dL[i][1])) - L[i] * (one.scale(dL[2][0]) + m.scale(dL[2][1]))

    Nx, Ny = numer(0), numer(1)
    d = P.degree_in("m")
    D = max(e[0] + e[1] for e, _ in P.items())
    cache = {}

    def pw(key, base, e):
        k = (key, e)
        if k not in cache:
            cache[k] = base ** e
        return cache[k]

    total = MultiPoly.zero(XYM)
    for (i, j, e), coef in P.items():
        term = pw("x", L[0], i) * pw("y", L[1], j) * pw("z", L[2], D - i - j)
        term = term * pw("ny", Ny, e) * pw("nx", Nx, d - e)
        total = total + term.scale(coef)
    return saturate_slope(total)


def saturate_slope(P: MultiPoly) -> MultiPoly:
    content = None
    for c in P.coefficients_in("m").values():
        content = c if content is None else gcd(content, c)
        if content.is_constant():
            break
    if content is not None and not content.is_constant():
        P = exact_div(P, content)
    return normalize(P)


def infinity_chart(seed=None, tries: int = 50):
    """Projective matrices whose new affine chart sees the old line at infinity
    as ``y = 0``: a few sparse ones first, then random ones."""
    for G in ([[1, 0, 0], [0, 0, 1], [0, 1, 0]], [[0, 1, 0], [0, 0, 1], [1, 0, 0]], [[1, 0, 0], [0, 0, 1], [1, 1, 0]]):
        yield G
    rng = as_rng(seed)
    for _ in range(tries):
        g1 = [rng.randint(-3, 3) for _ in range(3)]
        g3 = [rng.randint(-3, 3) for _ in range(3)]
        G = [g1, [0, 0, 1], g3]
        if det_field([[mpq(v) for v in r] for r in G]):
            yield G


def infinity_multiplicity_by_chart(w, n: int, seed=None, cap=DEFAULT_CAP, tries: int = 10) -> tuple:
    """Multiplicity of the line at infinity in the n-extactic, computed in a second chart."""
    P = _slope_of(w)
    d = P.degree_in("m")
    gen = infinity_chart(seed)
    for _ in range(tries):
        G = next(gen)
        P2 = transform_slope(P, G)
        if P2.degree_in("m") != d:
            continue
        if d == 1:
            f = foliation_from_slope(P2, w.declared_degree)
            E2 = foliation_extactic_det(f.A, f.B, n, cap)
        else:
            if not resultant(P2, P2.diff("m"), "m"):
                continue
            E2, _ = web_extactic_poly(P2, n, cap)
        if not E2:
            raise InvariantViolation("extactic vanishes in one chart but not in another")
        return multiplicity(E2, MultiPoly.variable("y", XY)), G
    raise InvariantViolation("no admissible chart found for the line at infinity")


def _extactic(w, n: int, cap=DEFAULT_CAP, chart_check: bool = False, seed=None) -> ExtacticResult:
    if n < 1:
        raise InputError("n must be >= 1")
    E, pole = extactic_poly(w, n, cap)
    formula = degree_formula(n, w.d, w.declared_degree)
    if not E:
        return ExtacticResult(E, mpq(0), None, None, formula, True, "none", None)
    content, affine = E.primitive()
    deg = affine.total_degree()
    inf, G, source = formula - deg, None, "deficit"
    if chart_check:
        seen, G = infinity_multiplicity_by_chart(w, n, seed=seed, cap=cap)
        if seen != inf:
            raise InvariantViolation(
                f"line at infinity has multiplicity {seen} in a second chart but the degree deficit is {inf}"
            )
        source = "chart"
    if inf < 0:
        raise InvariantViolation(f"affine extactic degree {deg} exceeds the formula degree {formula}")
    return ExtacticResult(affine, content, inf, deg + inf, formula, False, source, pole, G)


def extactic_foliation(v: AffineFoliation, n: int, cap=DEFAULT_CAP, chart_check: bool = False, seed=None) -> ExtacticResult:
    """n-extactic divisor of a foliation.

    The multiplicity of the line at infinity is the deficit to the degree
    formula; with ``chart_check`` it is also measured in a second affine chart
    and the two must agree.
    """
    if not isinstance(v, AffineFoliation):
        raise InputError("extactic_foliation expects an AffineFoliation")
    return _extactic(v, n, cap, chart_check, seed)


def extactic_web(w: AffineWeb, n: int, cap=DEFAULT_CAP, chart_check: bool = False, seed=None) -> ExtacticResult:
    if not isinstance(w, AffineWeb):
        raise InputError("extactic_web expects an AffineWeb")
    return _extactic(w, n, cap, chart_check, seed)


# invariant curves -----------------------------------------------------------


def invariant_curve_test(w, f: MultiPoly) -> bool:
    """Is the curve ``f = 0`` invariant (a union of leaves)?"""
    if f.vars != XY:
        raise InputError("curve must be a polynomial in (x, y)")
    if f.is_constant():
        raise InputError("curve equation is constant")
    if isinstance(w, AffineFoliation):
        g = lie_derivative(w, f)
        return not g or _divides(f, g)
    P = _slope_of(w)
    F = f.embed(XYM)
    m = MultiPoly.variable("m", XYM)
    R = resultant(P, F.diff("x") + m * F.diff("y"), "m")
    return not R or _divides(F, R)


def _divides(f: MultiPoly, g: MultiPoly) -> bool:
    try:
        exact_div(g, f)
    except InexactDivision:
        return False
    return True


def invariant_curves_from_extactic(w, n: int, cap=DEFAULT_CAP, result: ExtacticResult | None = None) -> list:
    """Invariant irreducible curves of degree <= n read off the n-extactic.

    Returns ``[(f, multiplicity in E_n)]``; the line at infinity is carried by
    ``infinity_multiplicity`` of the extactic result instead.
    """
    if result is None:
        E, _ = extactic_poly(w, n, cap)
    else:
        E = result.affine_part
    if not E:
        raise InputError("extactic vanishes identically: every leaf lies in a curve of degree <= n")
    if E.is_constant():
        return []
    _, factors = factor_list(E)
    out = []
    for f, e in factors:
        if f.total_degree() <= n and invariant_curve_test(w, f):
            out.append((f, e))
    return out


def restriction_rank(n: int, param) -> int:
    """Dimension of the span of the degree <= n monomials restricted to a parametrised curve.

    ``param`` is a pair of polynomials in one variable ``t``.
    """
    X, Y = param
    vals = []
    for s in monomials(n):
        (i, j), = [e for e, _ in s.items()]
        vals.append(X ** i * Y ** j)
    keys = sorted({e for v in vals for e in v.as_dict()})
    rows = [[v.as_dict().get(k, mpq(0)) for k in keys] for v in vals]
    return _rank(rows)


def _rank(rows) -> int:
    a = [list(r) for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(len(a)):
            if i != rank and a[i][col]:
                f = a[i][col] / p
                a[i] = [u - f * v for u, v in zip(a[i], a[rank])]
        rank += 1
    return rank


def multiples_count(n: int, e: int) -> int:
    """Number of independent degree <= n polynomials divisible by a fixed curve of degree e."""
    if e > n:
        return 0
    s = n - e
    return (s + 1) * (s + 2) // 2


# random generic inputs -------------------------------------------------------


def _random_poly(rng, degree: int, vars=XY, span: int = 5) -> MultiPoly:
    terms = {}
    for deg in range(degree + 1):
        for i in range(deg + 1):
            v = rng.randint(-span, span)
            if v:
                terms[(i, deg - i)] = v
    return MultiPoly(vars, terms)


def random_web(d: int, r: int, seed=None) -> AffineWeb:
    """Generic d-web of degree r:
    ``sum a_ijk(x,y) (-m)^i (x m - y)^k`` over i + j + k = d with deg a_ijk <= r."""
    rng = as_rng(seed)
    x, y, m = MultiPoly.gens(XYM)
    while True:
        P = MultiPoly.zero(XYM)
        for i in range(d + 1):
            for kk in range(d + 1 - i):
                a = _random_poly(rng, r).embed(XYM)
                P = P + a * (-m) ** i * (x * m - y) ** kk
        if P.degree_in("m") != d:
            continue
        try:
            w = AffineWeb(saturate_slope(P), r)
        except InputError:
            continue
        if web_degree(w, rng) == r:
            return w


def random_foliation(r: int, seed=None) -> AffineFoliation:
    """Generic degree-r foliation ``(a + x g) d/dx + (b + y g) d/dy`` with g homogeneous of degree r."""
    rng = as_rng(seed)
    x, y = MultiPoly.gens(XY)
    while True:
        a = _random_poly(rng, r)
        b = _random_poly(rng, r)
        g = MultiPoly(XY, {(i, r - i): rng.randint(-5, 5) for i in range(r + 1)})
        A, B = a + x * g, b + y * g
        if not A and not B:
            continue
        if not gcd(A, B).is_constant():
            continue
        v = AffineFoliation(A, B, r)
        if web_degree(v, rng) == r:
            return v
