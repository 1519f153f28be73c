"""Contact structures on P^{2m+1}: involutive lines and planes, bounds, the Rams family.

A constant symplectic form ``sigma(u, v) = u^T L v`` on C^{2m+2} induces the
contact form ``omega = i_R sigma`` with R the Euler field.  A linear subspace
is involutive exactly when its cone is isotropic for ``sigma``; for a line
through a and b this is ``a^T L b = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from gmpy2 import mpq

from .algebra import MultiPoly, det, det_field, exact_div, factor_list, gcd, reduce_mod, resultant
from .errors import ClaimFalsified, InputError, InvariantViolation
from .series import TruncSeries
from .surfaces import X4, Line3, ModF, NumberField, ProjSurface, line_on_surface_check, lines_on_surface
from .surfaces.lines import InfiniteFamily
from .surfaces.numbers import AlgNumber

# symplectic forms -------------------------------------------------------------


@dataclass(frozen=True)
class SymplecticForm:
    matrix: tuple

    def __post_init__(self):
        M = tuple(tuple(mpq(v) for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", M)
        n = len(M)
        if n == 0 or n % 2 or any(len(r) != n for r in M):
            raise InputError("a symplectic form needs an even square matrix")
        for i in range(n):
            for j in range(n):
                if M[i][j] != -M[j][i]:
                    raise InputError("symplectic matrix must be antisymmetric")
        if not det_field([list(r) for r in M]):
            raise InputError("symplectic matrix is degenerate")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def m(self) -> int:
        return self.dim // 2 - 1

    @classmethod
    def standard(cls, m: int = 1) -> "SymplecticForm":
        """``dx0^dx1 + dx2^dx3 + ...``"""
        n = 2 * m + 2
        M = [[0] * n for _ in range(n)]
        for k in range(0, n, 2):
            M[k][k + 1] = 1
            M[k + 1][k] = -1
        return cls(M)

    @classmethod
    def rams(cls) -> "SymplecticForm":
        """``dx0^dx2 + dx1^dx3``"""
        M = [[0] * 4 for _ in range(4)]
        M[0][2], M[2][0] = 1, -1
        M[1][3], M[3][1] = 1, -1
        return cls(M)

    @classmethod
    def parse(cls, text: str) -> "SymplecticForm":
        import json

        key = text.strip().lower()
        if key == "standard":
            return cls.standard(1)
        if key == "rams":
            return cls.rams()
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"symplectic form must be 'standard', 'rams' or a JSON matrix: {exc}") from exc
        return cls([[mpq(str(v)) for v in row] for row in rows])

    def scaled(self, c) -> "SymplecticForm":
        return SymplecticForm([[v * mpq(c) for v in row] for row in self.matrix])

    def pair(self, u, v):
        total = 0
        for i in range(self.dim):
            if not u[i]:
                continue
            for j in range(self.dim):
                if self.matrix[i][j] and v[j]:
                    total = u[i] * v[j] * self.matrix[i][j] + total
        return total

    def to_json(self) -> list:
        return [[str(v) for v in row] for row in self.matrix]


def coordinate_names(n: int) -> tuple:
    return tuple(f"x{i}" for i in range(n))


def contact_form(sigma: SymplecticForm) -> list:
    """Coefficients ``omega_j = sum_i x_i L_ij`` of ``omega = sum_j omega_j dx_j``."""
    vars = coordinate_names(sigma.dim)
    x = MultiPoly.gens(vars)
    out = []
    for j in range(sigma.dim):
        w = MultiPoly.zero(vars)
        for i in range(sigma.dim):
            if sigma.matrix[i][j]:
                w = w + x[i].scale(sigma.matrix[i][j])
        out.append(w)
    return out


# involutive subspaces ------------------------------------------------------------


class MPlane:
    """A projective m-plane spanned by the rows of a rational (m+1) x (2m+2) matrix."""

    def __init__(self, rows):
        rows = [[mpq(v) for v in r] for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise InputError("spanning matrix must be rectangular")
        self.rows = _rref(rows)
        if len(self.rows) != len(rows):
            raise InputError("spanning matrix is not of full rank")

    @property
    def dim(self) -> int:
        return len(self.rows) - 1

    def to_json(self) -> list:
        return [[str(v) for v in r] for r in self.rows]


def _rref(rows: list) -> list:
    a = [list(r) for r in rows]
    r = 0
    ncols = len(a[0])
    for c in range(ncols):
        k = next((i for i in range(r, len(a)) if a[i][c]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        p = a[r][c]
        a[r] = [v / p for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return [row for row in a[:r]]


def is_involutive(P, sigma: SymplecticForm) -> bool:
    """True iff the spanning subspace is isotropic: ``v^T L w = 0`` for all spanning rows."""
    rows = P.span if isinstance(P, Line3) else P.rows
    if len(rows[0]) != sigma.dim:
        raise InputError("dimension mismatch between subspace and symplectic form")
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if sigma.pair(rows[i], rows[j]):
                return False
    return True


def involutive_lines_on_surface(F, sigma: SymplecticForm, lines=None, seed: int = 0):
    """Involutive lines among the lines of the surface; the count is checked against 3d^2 - 4d."""
    S = F if isinstance(F, ProjSurface) else ProjSurface(F)
    if sigma.dim != 4:
        raise InputError("surfaces live in P^3: the symplectic form must be 4x4")
    if lines is None:
        lines = lines_on_surface(S.F, seed=seed)
    if isinstance(lines, InfiniteFamily):
        return lines
    found = [L for L in lines if is_involutive(L, sigma)]
    bound = 3 * S.d ** 2 - 4 * S.d
    if S.d >= 3 and len(found) > bound:
        raise ClaimFalsified(f"{len(found)} involutive lines exceed the bound {bound}")
    return found


def contact_direction(F: MultiPoly, sigma: SymplecticForm, q: int) -> list:
    """Generalised cross product of grad F, omega(x) and e_q: a tangent vector field in ker omega."""
    grad = F.gradient()
    omega = contact_form(sigma)
    zero = MultiPoly.zero(X4)
    one = MultiPoly.one(X4)
    eq = [one if c == q else zero for c in range(4)]
    t = []
    for c in range(4):
        unit = [one if k == c else zero for k in range(4)]
        t.append(det([unit, list(grad), omega, eq], cap=None))
    return t


def tangency_divisor(F, sigma: SymplecticForm, q: int | None = None, with_raw: bool = False):
    """Polynomial T of degree 3d - 4 (mod F) vanishing on every involutive line.

    ``T_raw = t^T Hess(F) t`` for the contact direction t has degree 3d - 2
    and carries the extraneous factor ``x_q^2`` from the normalisation t_q = 0.
    """
    S = F if isinstance(F, ProjSurface) else ProjSurface(F)
    F = S.F
    d = S.d
    if d < 3:
        raise InputError("tangency divisor needs d >= 3")
    if sigma.dim != 4:
        raise InputError("the symplectic form must be 4x4")
    if q is None:
        q = 3
    t = contact_direction(F, sigma, q)
    H = S.hessian()
    raw = MultiPoly.zero(X4)
    for i in range(4):
        for j in range(4):
            if H[i][j] and t[i] and t[j]:
                raw = raw + H[i][j] * t[i] * t[j]
    mod = ModF(F, keep=(X4[q],))
    if not mod.nf(raw):
        T = MultiPoly.zero(X4)
    else:
        T = mod.divide_power(raw, X4[q], 2)
        if T.total_degree() != 3 * d - 4:
            raise InvariantViolation(f"tangency polynomial has degree {T.total_degree()}, expected {3 * d - 4}")
        T = T.primitive()[1]
    if with_raw:
        return T, {"raw_degree": raw.total_degree(), "removed": {f"x{q}": 2}, "omitted": q}
    return T


# characteristic class arithmetic ----------------------------------------------------


def _closed_zero_length(d: int, m: int) -> mpq:
    return mpq((d - 1) ** (2 * m + 2) - 1, d - 2)


def contact_zero_length(d: int, m: int) -> mpq:
    """Length of the zero scheme of the contact section, from the series
    ``d [h^(2m)] (1+h)^(2m+2) / ((1+2h)(1-(d-2)h))``; checked against the closed form."""
    if d < 3 or m < 1:
        raise InputError("contact_zero_length needs d >= 3 and m >= 1")
    N = 2 * m
    h1 = TruncSeries.linear(1, 1, N)
    s = h1 ** (2 * m + 2) / (TruncSeries.linear(1, 2, N) * TruncSeries.linear(1, -(d - 2), N))
    value = d * s[2 * m]
    if value != _closed_zero_length(d, m):
        raise ClaimFalsified(f"series gives {value}, closed form {_closed_zero_length(d, m)}")
    return value


def normal_chern_coefficient(d: int, m: int) -> mpq:
    """``[h^m] (1+h)^(m+1) / (1-(d-2)h)``, checked against ((d-1)^(m+1) - 1)/(d-2)."""
    if d < 3 or m < 1:
        raise InputError("needs d >= 3 and m >= 1")
    s = TruncSeries.linear(1, 1, m) ** (m + 1) / TruncSeries.linear(1, -(d - 2), m)
    c = s[m]
    if c != mpq((d - 1) ** (m + 1) - 1, d - 2):
        raise ClaimFalsified("normal bundle Chern coefficient disagrees with the closed form")
    return c


def disjoint_bound(d: int, m: int) -> int:
    """Maximal number of pairwise disjoint involutive m-planes: (d-1)^(m+1) + 1."""
    length = contact_zero_length(d, m)
    c = normal_chern_coefficient(d, m)
    q = length / c
    bound = int(q.numerator // q.denominator)
    if bound != (d - 1) ** (m + 1) + 1:
        raise ClaimFalsified(f"bound {bound} differs from (d-1)^(m+1)+1")
    return bound


# disjointness and cliques ------------------------------------------------------------


def lines_disjoint(L1: Line3, L2: Line3, dps: int = 60) -> bool:
    """Two lines are disjoint iff the stacked 4x4 spanning matrix is invertible."""
    if L1.field.same(L2.field) or L1.is_rational or L2.is_rational:
        K = L1.field if not L1.field.is_rational else L2.field
        rows = [[K(v.coeffs) if v.field.is_rational else v for v in r] for r in L1.span + L2.span]
        return bool(_field_det(rows))
    with mpmath.workdps(dps):
        M = mpmath.matrix([[v.to_complex() for v in r] for r in L1.span + L2.span])
        val = abs(mpmath.det(M))
        if mpmath.mpf(10) ** (-(dps // 2)) < val < mpmath.mpf(10) ** -10:
            raise InvariantViolation("disjointness test is numerically ambiguous")
        return val >= mpmath.mpf(10) ** -10


def _field_det(rows):
    a = [list(r) for r in rows]
    n = len(a)
    result = None
    sign = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return a[0][0] * 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        p = a[k][k]
        result = p if result is None else result * p
        inv = p.inverse()
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return result if sign > 0 else -result


MAX_CLIQUE_LINES = 64


def max_disjoint_subset(lines: list) -> tuple:
    """Exact maximum set of pairwise disjoint lines: ``(size, witness indices)``."""
    n = len(lines)
    if n > MAX_CLIQUE_LINES:
        raise InputError(f"at most {MAX_CLIQUE_LINES} lines are supported")
    if n == 0:
        return 0, []
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if lines_disjoint(lines[i], lines[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return max_clique(adj)


def max_clique(adj: list) -> tuple:
    """Branch and bound maximum clique on a graph given as adjacency bitmasks."""
    n = len(adj)
    best = [0, 0]

    def expand(clique: int, size: int, cand: int):
        if not cand:
            if size > best[0]:
                best[0], best[1] = size, clique
            return
        if size + bin(cand).count("1") <= best[0]:
            return
        # greedy colouring bound
        order = []
        colours = []
        rest = cand
        colour = 0
        while rest:
            colour += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~(1 << v)
                avail &= ~adj[v]
                rest &= ~(1 << v)
                order.append(v)
                colours.append(colour)
        for idx in range(len(order) - 1, -1, -1):
            if size + colours[idx] <= best[0]:
                return
            v = order[idx]
            expand(clique | (1 << v), size + 1, cand & adj[v])
            cand &= ~(1 << v)

    expand(0, 0, (1 << n) - 1)
    witness = [i for i in range(n) if best[1] >> i & 1]
    return best[0], witness


# the Rams family -------------------------------------------------------------------


@dataclass
class RamsResult:
    d: int
    surface: ProjSurface
    sigma: SymplecticForm
    lines: list
    relation: list
    certificates: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "surface": str(self.surface.F),
            "sigma": self.sigma.to_json(),
            "count": len(self.lines),
            "expected": self.d * (self.d - 2) + 2,
            "relation": [str(c) for c in self.relation],
            "certificates": self.certificates,
        }


def rams_surface(d: int) -> ProjSurface:
    x = MultiPoly.gens(X4)
    F = x[0] ** (d - 1) * x[1] + x[1] ** (d - 1) * x[2] + x[2] ** (d - 1) * x[3] + x[3] ** (d - 1) * x[0]
    return ProjSurface(F)


def rams_family(d: int, dps: int = 60) -> RamsResult:
    """Lines ``(alpha s, beta t, s, t)`` with ``alpha = -beta^(d-1)``, ``beta^N = (-1)^d``,
    ``N = (d-1)^2 + 1`` on the surface ``x0^(d-1) x1 + x1^(d-1) x2 + x2^(d-1) x3 + x3^(d-1) x0``.

    All claims are verified: symbolic incidence and involutivity modulo the
    relation, pairwise disjointness by a resultant certificate and by a
    numeric check of all pairs.
    """
    if d < 3:
        raise InputError("the Rams family needs d >= 3")
    S = rams_surface(d)
    sigma = SymplecticForm.rams()
    N = (d - 1) ** 2 + 1
    sign = -1 if d % 2 else 1
    relation = [mpq(-sign)] + [mpq(0)] * (N - 1) + [mpq(1)]
    certs = {}

    # symbolic incidence and involutivity in Q[beta, s, t]/(R)
    V = ("b", "s", "t")
    b, s, t = MultiPoly.gens(V)
    R = b ** N - sign
    alpha = -(b ** (d - 1))
    images = {"x0": alpha * s, "x1": b * t, "x2": s, "x3": t}
    on = reduce_mod(S.F.compose(images, V), R, "b")
    if on:
        raise ClaimFalsified("Rams lines do not lie on the surface modulo the relation")
    certs["on_surface"] = "symbolic"
    a_vec = [alpha, MultiPoly.zero(V), MultiPoly.one(V), MultiPoly.zero(V)]
    b_vec = [MultiPoly.zero(V), b, MultiPoly.zero(V), MultiPoly.one(V)]
    if reduce_mod(sigma.pair(a_vec, b_vec) + MultiPoly.zero(V), R, "b"):
        raise ClaimFalsified("Rams lines are not involutive")
    certs["involutive"] = "symbolic"

    # disjointness: det = (alpha - alpha')(beta - beta') up to sign
    W = ("b", "c")
    bb, cc = MultiPoly.gens(W)
    rows = [
        [-(bb ** (d - 1)), MultiPoly.zero(W), MultiPoly.one(W), MultiPoly.zero(W)],
        [MultiPoly.zero(W), bb, MultiPoly.zero(W), MultiPoly.one(W)],
        [-(cc ** (d - 1)), MultiPoly.zero(W), MultiPoly.one(W), MultiPoly.zero(W)],
        [MultiPoly.zero(W), cc, MultiPoly.zero(W), MultiPoly.one(W)],
    ]
    D = det(rows, cap=None)
    diff = bb - cc
    Psi = exact_div(exact_div(D, diff), diff)
    Rc = cc ** N - sign
    cert = resultant(Rc, Psi, "c")
    Rb = bb ** N - sign
    g = gcd(Rb, cert)
    if not g.is_constant():
        raise ClaimFalsified("two Rams lines meet: resultant certificate has a common factor")
    certs["disjoint_resultant"] = {"resultant_degree": cert.total_degree(), "gcd": "1"}

    # explicit lines over the factors of the relation
    relation_poly = MultiPoly(("b",), {(k,): c for k, c in enumerate(relation) if c})
    _, factors = factor_list(relation_poly)
    lines = []
    for f, _ in factors:
        fm = f.monic()
        deg = fm.degree_in("b")
        phi = [fm.as_dict().get((k,), mpq(0)) for k in range(deg + 1)]
        for K in NumberField.embeddings(phi):
            beta = K.generator()
            al = -(_power(beta, d - 1))
            L = Line3([[al, K(0), K(1), K(0)], [K(0), beta, K(0), K(1)]], K)
            if not line_on_surface_check(S.F, L):
                raise ClaimFalsified("a Rams line fails the exact on-surface check")
            if not is_involutive(L, sigma):
                raise ClaimFalsified("a Rams line is not involutive")
            lines.append(L)
    if len(lines) != d * (d - 2) + 2:
        raise ClaimFalsified(f"{len(lines)} Rams lines, expected {d * (d - 2) + 2}")

    with mpmath.workdps(dps):
        worst = None
        spans = [L.numeric_span() for L in lines]
        for i in range(len(lines)):
            for j in range(i + 1, len(lines)):
                v = abs(mpmath.det(mpmath.matrix(spans[i] + spans[j])))
                worst = v if worst is None or v < worst else worst
        if worst is not None and worst < mpmath.mpf(10) ** -20:
            raise ClaimFalsified("two Rams lines meet numerically")
        certs["disjoint_numeric"] = {"pairs": len(lines) * (len(lines) - 1) // 2, "min_abs_det": mpmath.nstr(worst, 8)}
    return RamsResult(d, S, sigma, lines, relation, certs)


def _power(x: AlgNumber, e: int) -> AlgNumber:
    r = x.field(1)
    for _ in range(e):
        r = r * x
    return r


# jet differentials ----------------------------------------------------------------


def jet_rank(k: int, m: int) -> int:
    """Rank of the weighted degree m part: sum over i_1 + 2 i_2 + ... + k i_k = m of prod (i_j + 1)."""
    if k < 1 or m < 0:
        raise InputError("jet_rank needs k >= 1 and m >= 0")

    def count(j: int, rest: int) -> int:
        if j == 1:
            return rest + 1
        total = 0
        for i in range(rest // j + 1):
            total += (i + 1) * count(j - 1, rest - i * j)
        return total

    return count(k, m)


def jet_rank_series(k: int, m: int) -> int:
    """The same rank as the coefficient of q^m in prod_{j<=k} (1 - q^j)^(-2)."""
    if k < 1 or m < 0:
        raise InputError("jet_rank needs k >= 1 and m >= 0")
    s = TruncSeries.one(m)
    for j in range(1, k + 1):
        base = [0] * (m + 1)
        base[0] = 1
        if j <= m:
            base[j] = -1
        s = s * TruncSeries(base, m) ** -2
    v = s[m]
    return int(v)

