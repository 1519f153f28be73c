"""Second fundamental form data on a surface F = 0 in P^3.

At a smooth point x the asymptotic directions are the tangent vectors t with
``t . grad F(x) = 0`` and ``t^T Hess F(x) t = 0``.  Globally the tangent
pencil is parametrised by ``t = u g1 + w g2`` with ``g = F_i e_p - F_p e_i``
for the two indices i other than the pivot p and the omitted index q.  This
parametrisation degenerates where ``F_p = 0`` or ``x_q = 0``; the
corresponding factors are divided out exactly.
"""

from __future__ import annotations

from ..algebra import MultiPoly, exact_div, normalize
from ..errors import InputError, InvariantViolation
from .surface import X4, ModF, ProjSurface, hessian_det


def _surface(F) -> MultiPoly:
    if isinstance(F, ProjSurface):
        return F.F
    return ProjSurface(F).F


def asymptotic_form(F, point=None):
    """The pair (linear form t.grad F, quadratic form t^T Hess F t) in tangent variables t0..t3.

    With ``point`` the forms have rational coefficients; without it the
    coefficients are polynomials in x0..x3 (variables x0..x3, t0..t3).
    """
    F = _surface(F)
    T = ("t0", "t1", "t2", "t3")
    grad = F.gradient()
    hess = [[g.diff(v) for v in X4] for g in grad]
    if point is not None:
        pt = [p for p in point]
        if len(pt) != 4:
            raise InputError("a point of P^3 has four coordinates")
        if F.evaluate(pt) != 0:
            raise InputError("point is not on the surface")
        gvals = [g.evaluate(pt) for g in grad]
        if all(v == 0 for v in gvals):
            raise InputError("singular point of the surface")
        t = MultiPoly.gens(T)
        lin = sum((t[i].scale(gvals[i]) for i in range(4)), MultiPoly.zero(T))
        quad = MultiPoly.zero(T)
        for i in range(4):
            for j in range(4):
                h = hess[i][j].evaluate(pt)
                if h:
                    quad = quad + (t[i] * t[j]).scale(h)
        return lin, quad
    V = X4 + T
    t = [MultiPoly.variable(v, V) for v in T]
    lin = sum((grad[i].embed(V) * t[i] for i in range(4)), MultiPoly.zero(V))
    quad = MultiPoly.zero(V)
    for i in range(4):
        for j in range(4):
            if hess[i][j]:
                quad = quad + hess[i][j].embed(V) * t[i] * t[j]
    return lin, quad


def _pencil(F: MultiPoly, p: int, q: int) -> tuple:
    grad = F.gradient()
    others = [i for i in range(4) if i not in (p, q)]
    gens = []
    for i in others:
        g = [MultiPoly.zero(X4)] * 4
        g[p] = grad[i]
        g[i] = -grad[p]
        gens.append(g)
    return gens


def _bilinear(H, u, v) -> MultiPoly:
    total = MultiPoly.zero(X4)
    for i in range(4):
        if not u[i]:
            continue
        for j in range(4):
            if v[j] and H[i][j]:
                total = total + H[i][j] * u[i] * v[j]
    return total


def _trilinear(D3, u, v, w) -> MultiPoly:
    total = MultiPoly.zero(X4)
    for i in range(4):
        if not u[i]:
            continue
        for j in range(4):
            if not v[j]:
                continue
            for k in range(4):
                if w[k] and D3[i][j][k]:
                    total = total + D3[i][j][k] * u[i] * v[j] * w[k]
    return total


def _binary_forms(F: MultiPoly, p: int, q: int) -> tuple:
    """Coefficients of Q(u,w) (degree 2) and C(u,w) (degree 3), highest power of u first."""
    g1, g2 = _pencil(F, p, q)
    H = [[F.diff(a).diff(b) for b in X4] for a in X4]
    Q = _quadratic_only(F, p, q)
    D3 = [[[H[a][b].diff(X4[c]) for c in range(4)] for b in range(4)] for a in range(4)]
    C = [
        _trilinear(D3, g1, g1, g1),
        _trilinear(D3, g1, g1, g2).scale(3),
        _trilinear(D3, g1, g2, g2).scale(3),
        _trilinear(D3, g2, g2, g2),
    ]
    return Q, C


def binary_resultant(A: list, B: list) -> MultiPoly:
    """Resultant of binary forms given by coefficient lists (highest power first)."""
    from ..algebra import det

    a, b = len(A) - 1, len(B) - 1
    zero = MultiPoly.zero(A[0].vars)
    size = a + b
    rows = []
    for i in range(b):
        rows.append([zero] * i + list(A) + [zero] * (size - a - 1 - i))
    for i in range(a):
        rows.append([zero] * i + list(B) + [zero] * (size - b - 1 - i))
    return det(rows, cap=None)


def _choose_pivot(F: MultiPoly, p=None, q=None) -> tuple:
    grad = F.gradient()
    if p is None:
        p = next(i for i in range(4) if grad[i])
    if q is None:
        q = next(i for i in range(4) if i != p)
    if p == q:
        raise InputError("pivot and omitted index must differ")
    return p, q


def _strip(raw: MultiPoly, F: MultiPoly, p: int, q: int, ep: int, eq: int, target: int, what: str) -> MultiPoly:
    Fp = F.diff(X4[p])
    try:
        for _ in range(ep):
            raw = exact_div(raw, Fp)
    except InvariantViolation as exc:
        raise InvariantViolation(f"{what}: expected factor F_{p}^{ep} missing") from exc
    mod = ModF(F, keep=(X4[q],))
    G = mod.divide_power(raw, X4[q], eq)
    deg = G.total_degree()
    if G and deg != target:
        raise InvariantViolation(f"{what}: reached degree {deg}, expected {target}")
    return G


def discriminant_II(F, p=None, q=None) -> MultiPoly:
    """Discriminant of the asymptotic quadratic form: a representative mod F of degree 4(d-2).

    Proportional modulo F to the Hessian determinant; identically zero on cones.
    """
    F = _surface(F)
    d = F.total_degree()
    if d < 2:
        raise InputError("discriminant of II needs d >= 2")
    p, q = _choose_pivot(F, p, q)
    A, B, C = _quadratic_only(F, p, q)
    raw = B * B - (A * C).scale(4)
    if not raw:
        return raw
    G = _strip(raw, F, p, q, 2, 2, 4 * (d - 2), "discriminant_II")
    return normalize(G) if G else G


def _quadratic_only(F, p, q):
    g1, g2 = _pencil(F, p, q)
    H = [[F.diff(a).diff(b) for b in X4] for a in X4]
    return [_bilinear(H, g1, g1), _bilinear(H, g1, g2).scale(2), _bilinear(H, g2, g2)]


def flecnodal(F, p=None, q=None, with_raw: bool = False):
    """Flecnodal polynomial G of degree 11d - 24 (a representative mod F).

    Raw elimination: resultant of the restricted quadratic and cubic forms,
    of degree 17d - 24; it carries the extraneous factors F_p^6 and x_q^6.
    """
    F = _surface(F)
    d = F.total_degree()
    if d < 3:
        raise InputError("flecnodal divisor needs d >= 3")
    p, q = _choose_pivot(F, p, q)
    Q, C = _binary_forms(F, p, q)
    raw = binary_resultant(Q, C)
    if not raw:
        G = raw
    else:
        G = _strip(raw, F, p, q, 6, 6, 11 * d - 24, "flecnodal")
        G = normalize(G)
    if with_raw:
        return G, {"raw_degree": raw.total_degree(), "removed": {f"F_{p}": 6, f"x{q}": 6}, "pivot": p, "omitted": q}
    return G


def salmon_bound(d: int) -> tuple:
    """Salmon's bound d(11d - 24) with the degree accounting (13d - 26, d - 1, 11d - 24)."""
    if d < 3:
        raise InputError("Salmon's bound needs d >= 3")
    first = 13 * d - 26
    ram = d - 1
    net = first - 2 * ram
    if net != 11 * d - 24:
        raise InvariantViolation("degree accounting for the flecnodal section is inconsistent")
    return d * net, (first, ram, net)


def parabolic_check(F) -> object:
    """Rational c with discriminant_II = c * det Hess(F) modulo F (None if not proportional)."""
    F = _surface(F)
    D = discriminant_II(F)
    H = hessian_det(F)
    return ModF(F).ratio(D, H)
