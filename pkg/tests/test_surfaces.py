import itertools
import random

import pytest
from gmpy2 import mpq

from extactic.algebra import MultiPoly, parse_poly
from extactic.errors import InputError
from extactic.surfaces import (
    X4,
    InfiniteFamily,
    Line3,
    ModF,
    NumberField,
    ProjSurface,
    asymptotic_form,
    discriminant_II,
    flecnodal,
    hessian_det,
    line_on_surface_check,
    lines_on_surface,
    parabolic_check,
    salmon_bound,
)
from extactic.surfaces.numbers import poly_roots

FERMAT = "x0^3+x1^3+x2^3+x3^3"
T4 = ("t0", "t1", "t2", "t3")


def S(text):
    return ProjSurface.parse(text)


@pytest.fixture(scope="module")
def fermat_lines():
    return lines_on_surface(S(FERMAT).F)


# surfaces and number fields ---------------------------------------------------------


def test_surface_validation():
    with pytest.raises(InputError):
        S("x0^2+x1")
    with pytest.raises(InputError):
        S("0")
    assert S(FERMAT).d == 3


def test_smoothness_probe():
    assert S(FERMAT).is_probably_smooth()
    assert not S("x0*x1-x2^2").is_probably_smooth()


def test_number_field_arithmetic():
    K = NumberField.embeddings([-2, 0, 1])[0]
    a = K.generator()
    assert a * a == K(2)
    assert (a + 1) * (a - 1) == K(1)
    assert (a + 1) / (a + 1) == K(1)
    assert (a * 3 + 1).minimal_polynomial() == [mpq(-17), mpq(-2), mpq(1)]


def test_poly_roots_keep_precision():
    (r1, r2) = sorted(poly_roots([-2, 0, 1]), key=lambda z: z.real)
    import mpmath

    with mpmath.workdps(100):
        assert abs(r2 - mpmath.sqrt(2)) < mpmath.mpf(10) ** -90


def test_modf_normal_forms():
    F = S(FERMAT).F
    mod = ModF(F, keep=("x3",))
    x = MultiPoly.gens(X4)
    assert mod.is_zero(F * x[0])
    assert mod.equal(x[0] ** 3, -(x[1] ** 3 + x[2] ** 3 + x[3] ** 3))
    assert mod.ratio(F + x[0] * x[1].scale(2), x[0] * x[1]) == 2


# line incidence ------------------------------------------------------------------------


def test_line_on_surface_examples():
    F = S(FERMAT).F
    assert line_on_surface_check(F, Line3([[1, -1, 0, 0], [0, 0, 1, -1]]))
    assert not line_on_surface_check(F, Line3([[1, 0, 0, 0], [0, 1, 0, 0]]))


def test_rams_line_on_sextic():
    F = S("x0^5*x1+x1^5*x2+x2^5*x3+x3^5*x0").F
    phi = [mpq(-1)] + [mpq(0)] * 25 + [mpq(1)]
    # beta^26 = 1; use the primitive factor Phi_26 and one of its roots
    from extactic.algebra import factor_list

    _, fs = factor_list(MultiPoly(("b",), {(k,): c for k, c in enumerate(phi) if c}))
    f = max((g for g, _ in fs), key=lambda g: g.total_degree())
    coeffs = [f.monic().as_dict().get((k,), mpq(0)) for k in range(f.total_degree() + 1)]
    K = NumberField.embeddings(coeffs)[0]
    b = K.generator()
    a = -(b * b * b * b * b)
    assert line_on_surface_check(F, Line3([[a, K(0), K(1), K(0)], [K(0), b, K(0), K(1)]], K))


def test_line_span_is_canonical():
    L1 = Line3([[1, -1, 0, 0], [0, 0, 1, -1]])
    L2 = Line3([[1, -1, 1, -1], [2, -2, -1, 1]])
    assert L1.same_as(L2)
    assert not L1.pluecker_relation()


# lines on surfaces ---------------------------------------------------------------------------


def test_fermat_has_27_lines(fermat_lines):
    F = S(FERMAT).F
    assert len(fermat_lines) == 27 == salmon_bound(3)[0]
    for L in fermat_lines:
        assert line_on_surface_check(F, L)
        assert not L.pluecker_relation()
    for a, b in itertools.combinations(fermat_lines, 2):
        assert not a.same_as(b)


def test_twisted_cubic_surface_has_27_lines():
    F = S("x0^3+x1^3+x2^3+x3^3+2*x0*x1*x2-x1*x2*x3+x0^2*x3").F
    lines = lines_on_surface(F)
    assert len(lines) == 27
    assert all(line_on_surface_check(F, L) for L in lines)


def test_moved_fermat_still_has_27_lines():
    # a linear change of coordinates keeps the count
    F = S(FERMAT).F
    x = MultiPoly.gens(X4)
    G = F.compose({"x0": x[0] + x[1], "x1": x[1] - x[2], "x2": x[2] + x[3].scale(2), "x3": x[3] + x[0]})
    lines = lines_on_surface(G)
    assert len(lines) == 27


def test_degenerate_surfaces_flagged():
    assert isinstance(lines_on_surface(S("x0*x3-x1*x2").F), InfiniteFamily)
    assert isinstance(lines_on_surface(S("x0").F), InfiniteFamily)


def test_cone_over_cubic_flagged():
    res = lines_on_surface(S("x0^3+x1^3+x2^3").F)
    assert isinstance(res, InfiniteFamily)


# second fundamental form ----------------------------------------------------------------


def test_asymptotic_form_quadric():
    lin, quad = asymptotic_form(S("x0*x3-x1*x2"), [1, 0, 0, 0])
    t = MultiPoly.gens(T4)
    assert lin == t[3]
    # on the tangent plane t3 = 0 the form is -2 t1 t2: the two rulings
    assert quad.compose({"t3": MultiPoly.zero(T4)}) == (t[1] * t[2]).scale(-2)


def test_asymptotic_form_plane_vanishes():
    lin, quad = asymptotic_form(S("x0+x1"), [1, -1, 0, 0])
    assert not quad


def test_asymptotic_form_fermat_point():
    lin, quad = asymptotic_form(S(FERMAT), [1, -1, 0, 0])
    assert lin == parse_poly("3*t0+3*t1", T4)
    assert quad == parse_poly("6*t0^2-6*t1^2", T4)


def test_asymptotic_form_rejects_bad_points():
    with pytest.raises(InputError):
        asymptotic_form(S(FERMAT), [1, 0, 0, 0])
    with pytest.raises(InputError):
        asymptotic_form(S("x0*x1-x2^2"), [0, 0, 0, 1])


def test_discriminant_II_examples():
    assert not discriminant_II(S("x0*x1-x2^2"))
    D = discriminant_II(S("x0*x3-x1*x2"))
    assert D.is_constant() and D
    assert discriminant_II(S(FERMAT)) == parse_poly("x0*x1*x2*x3", X4)


def test_parabolic_matches_hessian():
    F = S(FERMAT).F
    assert hessian_det(F) == parse_poly("1296*x0*x1*x2*x3", X4)
    assert parabolic_check(F) == mpq(1, 1296)


def test_fermat_flecnodal(fermat_lines):
    F = S(FERMAT).F
    G, info = flecnodal(F, with_raw=True)
    assert G.total_degree() == 9
    assert info["raw_degree"] == 17 * 3 - 24
    assert ModF(F).ratio(G, parse_poly("(x0^3+x1^3)*(x0^3+x2^3)*(x0^3+x3^3)", X4)) is not None
    for L in fermat_lines:
        assert not L.restrict(G)


def test_non_line_does_not_kill_flecnodal():
    F = S(FERMAT).F
    G = flecnodal(F)
    conic_point_line = Line3([[1, 0, 0, 0], [0, 1, 0, 0]])
    assert conic_point_line.restrict(G)


def test_salmon_accounting():
    assert salmon_bound(3)[0] == 27
    assert salmon_bound(4)[0] == 80
    for d in range(3, 101):
        bound, (first, ram, net) = salmon_bound(d)
        assert first - 2 * ram == net == 11 * d - 24
        assert bound == d * net


@pytest.mark.slow
def test_random_quartic_flecnodal_and_parabolic():
    rng = random.Random(5)
    x = MultiPoly.gens(X4)
    F = sum((x[i] ** 4 for i in range(4)), MultiPoly.zero(X4))
    for _ in range(4):
        i, j, k, l = (rng.randrange(4) for _ in range(4))
        F = F + (x[i] * x[j] * x[k] * x[l]).scale(rng.randint(-3, 3))
    G = flecnodal(F)
    assert G.total_degree() == 20
    assert 4 * G.total_degree() == salmon_bound(4)[0]
    assert parabolic_check(F) not in (None, 0)
