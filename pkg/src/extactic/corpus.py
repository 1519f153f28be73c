"""The acceptance corpus: twelve concrete checks of the library against known results.

Each check returns a :class:`Outcome`; ``run_corpus`` runs all of them in a
fixed order.  Checks never raise for a failed claim, they report it.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra import MultiPoly, det, multiplicity, parse_poly, resultant
from .contact import (
    SymplecticForm,
    contact_zero_length,
    disjoint_bound,
    involutive_lines_on_surface,
    jet_rank,
    jet_rank_series,
    max_disjoint_subset,
    rams_family,
    tangency_divisor,
)
from .errors import ExtacticError
from .surfaces import (
    InfiniteFamily,
    ProjSurface,
    discriminant_II,
    flecnodal,
    line_on_surface_check,
    lines_on_surface,
    parabolic_check,
    salmon_bound,
)
from .webs import (
    XY,
    XYM,
    AffineFoliation,
    _random_poly,
    degree_formula,
    extactic_foliation,
    extactic_web,
    lie_derivative,
    linear_system_dimension,
    random_foliation,
    random_web,
    restriction_rank,
    web_extactic_poly,
)


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0
    budget: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d}: {self.title} ({self.seconds:.2f} s)"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "budget_seconds": self.budget,
            "detail": self.detail,
        }


def _timed(number: int, title: str, budget: float | None):
    def wrap(fn):
        def run(seed: int = 0) -> Outcome:
            start = time.perf_counter()
            try:
                passed, detail = fn(seed)
            except ExtacticError as exc:
                passed, detail = False, exc.to_json()
            elapsed = time.perf_counter() - start
            if budget is not None and elapsed > budget:
                passed = False
                detail = dict(detail, over_budget=True)
            return Outcome(number, title, passed, detail, elapsed, budget)

        run.number = number
        run.title = title
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


def _poly(text, vars=XY):
    return parse_poly(text, vars)


FERMAT = "x0^3+x1^3+x2^3+x3^3"
PRODUCT_CUBIC = "x0^3-x1^3+x2^3-x3^3"


@_timed(1, "foliation extactic degree and x d/dx + 2y d/dy", 1.0 * 11)
def criterion_1(seed):
    degrees = []
    slow = []
    for s in range(10):
        v = random_foliation(1, seed=seed * 1000 + s)
        t0 = time.perf_counter()
        res = extactic_foliation(v, 1)
        if time.perf_counter() - t0 > 1.0:
            slow.append(s)
        degrees.append(res.total_degree)
    v = AffineFoliation.parse("x;2*y", 1)
    t0 = time.perf_counter()
    res = extactic_foliation(v, 1, chart_check=True)
    ok_example = res.affine_part == _poly("x*y") and res.infinity_multiplicity == 1 and res.total_degree == 3
    if time.perf_counter() - t0 > 1.0:
        slow.append("example")
    passed = all(d == 3 for d in degrees) and ok_example and not slow
    return passed, {
        "generic_total_degrees": degrees,
        "example_affine_part": str(res.affine_part),
        "example_infinity_multiplicity": res.infinity_multiplicity,
        "slow": slow,
    }


@_timed(2, "web extactic polynomiality for y m^2 - 1", 10.0 + 600.0)
def criterion_2(seed):
    P = parse_poly("y*m^2-1", XYM)
    detail = {}
    passed = True
    for n, budget in ((1, 10.0), (2, 600.0)):
        t0 = time.perf_counter()
        E, pole = web_extactic_poly(P, n)
        elapsed = time.perf_counter() - t0
        k = linear_system_dimension(n)
        ok = pole <= k * (k - 1) // 2 and elapsed < budget and bool(E)
        detail[f"n={n}"] = {"pole_order": pole, "bound": k * (k - 1) // 2, "extactic": str(E), "seconds": round(elapsed, 3)}
        passed = passed and ok
    return passed, detail


@_timed(3, "generic (d=2, r=2) web extactic degree 12", 60.0 * 5)
def criterion_3(seed):
    target = degree_formula(1, 2, 2)
    degrees = []
    slow = []
    for s in range(5):
        w = random_web(2, 2, seed=seed * 1000 + s)
        t0 = time.perf_counter()
        res = extactic_web(w, 1)
        if time.perf_counter() - t0 > 60.0:
            slow.append(s)
        degrees.append(res.total_degree)
    return target == 12 and all(d == 12 for d in degrees) and not slow, {"formula": target, "total_degrees": degrees}


@_timed(4, "invariant lines divide E_1 with multiplicity >= k - k_C", None)
def criterion_4(seed):
    v = AffineFoliation.parse("x;2*y", 1)
    E = extactic_foliation(v, 1).affine_part
    k = linear_system_dimension(1)
    T = ("t",)
    t = MultiPoly.variable("t", T)
    zero = MultiPoly.zero(T)
    detail = {}
    passed = True
    for name, param in (("x", (zero, t)), ("y", (t, zero))):
        kc = restriction_rank(1, param) - 1
        mult = multiplicity(E, _poly(name))
        detail[name] = {"multiplicity": mult, "k": k, "k_C": kc}
        passed = passed and mult >= k - kc and k - kc == 1
    return passed, detail


@_timed(5, "Fermat cubic: 27 lines and flecnodal degree 9", 600.0)
def criterion_5(seed):
    S = ProjSurface.parse(FERMAT)
    lines = lines_on_surface(S.F, seed=seed)
    if isinstance(lines, InfiniteFamily):
        return False, {"lines": "infinite family"}
    on = all(line_on_surface_check(S.F, L) for L in lines)
    bound, _ = salmon_bound(3)
    G = flecnodal(S.F)
    divides = all(not L.restrict(G) for L in lines)
    passed = len(lines) == 27 and bound == 27 and on and G.total_degree() == 9 and divides
    return passed, {
        "lines": len(lines),
        "salmon_bound": bound,
        "flecnodal_degree": G.total_degree(),
        "all_on_surface": on,
        "all_divide_flecnodal": divides,
    }


@_timed(6, "quadric and plane flagged; cone has zero discriminant of II", None)
def criterion_6(seed):
    quadric = lines_on_surface(ProjSurface.parse("x0*x3-x1*x2").F)
    plane = lines_on_surface(ProjSurface.parse("x0+x1-2*x3").F)
    cone = discriminant_II(ProjSurface.parse("x0*x1-x2^2").F)
    passed = isinstance(quadric, InfiniteFamily) and isinstance(plane, InfiniteFamily) and not cone
    return passed, {
        "quadric": quadric.to_json() if isinstance(quadric, InfiniteFamily) else len(quadric),
        "plane": plane.to_json() if isinstance(plane, InfiniteFamily) else len(plane),
        "cone_discriminant": str(cone),
    }


@_timed(7, "discriminant of II proportional to det Hess on the Fermat cubic", None)
def criterion_7(seed):
    c = parabolic_check(ProjSurface.parse(FERMAT).F)
    return c is not None and c != 0, {"ratio": None if c is None else str(c)}


@_timed(8, "involutive lines on x0^3-x1^3+x2^3-x3^3 lie in the tangency divisor", None)
def criterion_8(seed):
    S = ProjSurface.parse(PRODUCT_CUBIC)
    sigma = SymplecticForm.standard(1)
    lines = lines_on_surface(S.F, seed=seed)
    inv = involutive_lines_on_surface(S, sigma, lines)
    T = tangency_divisor(S, sigma)
    divides = all(not L.restrict(T) for L in inv)
    bound = 3 * S.d ** 2 - 4 * S.d
    passed = 9 <= len(inv) <= bound and bound == 15 and divides and T.total_degree() == 5
    return passed, {"lines": len(lines), "involutive": len(inv), "bound": bound, "tangency_degree": T.total_degree(), "all_divide": divides}


@_timed(9, "Chern series against closed forms", 1.0)
def criterion_9(seed):
    mismatches = []
    for d in range(3, 13):
        for m in range(1, 5):
            if contact_zero_length(d, m) != mpq((d - 1) ** (2 * m + 2) - 1, d - 2):
                mismatches.append([d, m])
    z = contact_zero_length(3, 1)
    b = disjoint_bound(3, 1)
    return not mismatches and z == 15 and b == 5, {"mismatches": mismatches, "length_3_1": str(z), "bound_3_1": b}


@_timed(10, "Rams family for d = 6: 26 skew involutive lines", 300.0)
def criterion_10(seed):
    R = rams_family(6)
    size, _ = max_disjoint_subset(R.lines)
    bound = disjoint_bound(6, 1)
    passed = len(R.lines) == 26 and size == 26 and bound == 26
    return passed, {"lines": len(R.lines), "max_disjoint": size, "bound": bound, "certificates": R.certificates}


@_timed(11, "jet ranks: k = 1 and two counters", None)
def criterion_11(seed):
    k1 = all(jet_rank(1, m) == m + 1 for m in range(21))
    bad = [[k, m] for k in range(1, 9) for m in range(9) if jet_rank(k, m) != jet_rank_series(k, m)]
    return k1 and not bad, {"k1": k1, "disagreements": bad}


@_timed(12, "property suites: det, resultant, Leibniz, scaling", None)
def criterion_12(seed):
    rng = random.Random(seed)
    detail = {}
    # determinant: two algorithms
    bad = 0
    for _ in range(100):
        M = [[_random_poly(rng, rng.randint(0, 2), XY, 3) for _ in range(4)] for _ in range(4)]
        if det(M, method="bareiss", cap=None) != det(M, method="cofactor", cap=None):
            bad += 1
    detail["det_disagreements"] = bad
    # resultant multiplicativity in m
    V = ("x", "m")
    rbad = 0
    for _ in range(100):
        P, Q, R = (_rand_in_m(rng, V) for _ in range(3))
        if resultant(P, Q * R, "m") != resultant(P, Q, "m") * resultant(P, R, "m"):
            rbad += 1
    detail["resultant_failures"] = rbad
    # Leibniz rule
    lbad = 0
    for _ in range(100):
        A, B = _random_poly(rng, 2, XY, 4), _random_poly(rng, 2, XY, 4)
        if not A and not B:
            A = MultiPoly.one(XY)
        v = AffineFoliation.saturated(A, B, 2)
        f, g = _random_poly(rng, 2, XY, 4), _random_poly(rng, 2, XY, 4)
        if lie_derivative(v, f * g) != f * lie_derivative(v, g) + g * lie_derivative(v, f):
            lbad += 1
    detail["leibniz_failures"] = lbad
    # scaling covariance of the extactic
    v = AffineFoliation.parse("x+y^2;2*y-x*y+1", 2)
    sbad = []
    for n in (1, 2):
        k = linear_system_dimension(n)
        base = extactic_foliation(v, n).raw
        for c in (mpq(2), mpq(-3), mpq(1, 2)):
            if extactic_foliation(v.scaled(c), n).raw != base.scale(c ** (k * (k + 1) // 2)):
                sbad.append([n, str(c)])
    detail["scaling_failures"] = sbad
    return not (bad or rbad or lbad or sbad), detail


def _rand_in_m(rng, V):
    terms = {}
    for e in range(rng.randint(1, 3) + 1):
        for i in range(3):
            c = rng.randint(-4, 4)
            if c:
                terms[(i, e)] = c
    terms[(0, max(k[1] for k in terms) if terms else 1)] = rng.choice([1, 2, -1])
    return MultiPoly(V, terms)


CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
]


def run_corpus(only=None, seed: int = 0, echo=None) -> list:
    """Run the criteria (all, or the numbers in ``only``) in order."""
    out = []
    for check in CRITERIA:
        if only and check.number not in only:
            continue
        result = check(seed)
        if echo:
            echo(result)
        out.append(result)
    return out
