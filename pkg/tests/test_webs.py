import random

import pytest
import sympy
from gmpy2 import mpq

from extactic.algebra import MultiPoly, multiplicity, parse_poly
from extactic.errors import InputError
from extactic.webs import (
    XY,
    XYM,
    AffineFoliation,
    AffineWeb,
    _random_poly,
    check_degree,
    degree_formula,
    extactic_foliation,
    extactic_web,
    foliation_from_slope,
    invariant_curve_test,
    invariant_curves_from_extactic,
    lie_derivative,
    linear_system_dimension,
    multiples_count,
    random_foliation,
    random_web,
    restriction_rank,
    transform_slope,
    web_degree,
    web_discriminant,
    web_extactic_poly,
)


def P(text, vars=XY):
    return parse_poly(text, vars)


def fol(text, r):
    return AffineFoliation.parse(text, r)


WEIGHTED = "x;2*y"
PAPER_WEB = "y*m^2-1"


# basic operations ----------------------------------------------------------------


def test_lie_derivative_examples():
    assert lie_derivative(fol("1;0", 0), P("x")) == P("1")
    assert lie_derivative(fol(WEIGHTED, 1), P("x*y")) == P("3*x*y")
    assert lie_derivative(fol(WEIGHTED, 1), P("(x+y)^2")) == P("2*(x+y)*(x+2*y)")


def test_lie_derivative_leibniz_100_random():
    rng = random.Random(8)
    for _ in range(100):
        A, B = _random_poly(rng, 2), _random_poly(rng, 2)
        if not A and not B:
            continue
        v = AffineFoliation.saturated(A, B, 2)
        f, g = _random_poly(rng, 3), _random_poly(rng, 2)
        assert lie_derivative(v, f * g) == f * lie_derivative(v, g) + g * lie_derivative(v, f)


def test_degree_formula_examples():
    for r in range(6):
        assert degree_formula(1, 1, r) == 3 * r
    assert degree_formula(1, 2, 2) == 12
    assert degree_formula(2, 1, 1) == 12
    assert degree_formula(2, 2, 1) == 49


def test_linear_system_dimension():
    assert [linear_system_dimension(n) for n in (1, 2, 3)] == [2, 5, 9]


def test_foliation_must_be_saturated():
    with pytest.raises(InputError):
        fol("x*y;x", 1)


def test_web_rejections():
    with pytest.raises(InputError):
        AffineWeb(P("m^2-2*m+1", XYM), 0)
    with pytest.raises(InputError):
        AffineWeb(P("y*m-y", XYM), 0)
    with pytest.raises(InputError):
        AffineWeb(P("x*y", XYM), 0)


# degree and discriminant ----------------------------------------------------------


def test_web_degree_examples():
    assert web_degree(fol(WEIGHTED, 1), seed=1) == 1
    assert web_degree(AffineWeb(P(PAPER_WEB, XYM), 1), seed=1) == 1
    assert web_degree(fol("x;y", 0), seed=1) == 0


def test_declared_degree_is_validated():
    with pytest.raises(InputError):
        check_degree(fol(WEIGHTED, 2), seed=0)
    check_degree(fol(WEIGHTED, 1), seed=0)


def test_web_discriminant_examples():
    assert web_discriminant(AffineWeb(P(PAPER_WEB, XYM), 1)) == P("y")
    assert web_discriminant(AffineWeb(P("m^2-1", XYM), 0)).is_constant()


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_generic_discriminant_degree(seed):
    w = random_web(2, 2, seed=seed)
    assert web_discriminant(w).total_degree() == (w.d - 1) * (w.d + 2 * w.declared_degree)


# foliation extactic ----------------------------------------------------------------


def test_parallel_field_has_vanishing_extactic():
    res = extactic_foliation(fol("1;0", 0), 1)
    assert res.vanishes_identically


def test_weighted_field_extactic():
    res = extactic_foliation(fol(WEIGHTED, 1), 1, chart_check=True)
    assert res.affine_part == P("x*y")
    assert res.content == 2
    assert res.infinity_multiplicity == 1
    assert res.infinity_source == "chart"
    assert res.total_degree == 3


@pytest.mark.parametrize("seed", range(5))
def test_generic_foliation_degree(seed):
    v = random_foliation(1, seed=seed)
    res = extactic_foliation(v, 1)
    assert res.total_degree == 3 == degree_formula(1, 1, 1)


def test_generic_foliation_n2_degree_with_chart():
    v = random_foliation(1, seed=3)
    res = extactic_foliation(v, 2, chart_check=True)
    assert res.total_degree == degree_formula(2, 1, 1)


def test_quadratic_field_n2_matches_formula():
    # x' = 1, y' = 2x + y - x^2 has the invariant parabola y = x^2
    v = fol("1;2*x+y-x^2", 2)
    res = extactic_foliation(v, 2, chart_check=True)
    assert not res.vanishes_identically
    assert res.total_degree == degree_formula(2, 1, 2) == 27
    assert multiplicity(res.affine_part, P("y-x^2")) >= 1


def test_parabola_field_n2_vanishes():
    # every leaf of d/dx + 2x d/dy is a parabola y = x^2 + c
    res = extactic_foliation(fol("1;2*x", 1), 2)
    assert res.vanishes_identically
    with pytest.raises(InputError):
        invariant_curves_from_extactic(fol("1;2*x", 1), 2)


@pytest.mark.parametrize("c", [mpq(2), mpq(-3), mpq(1, 2)])
@pytest.mark.parametrize("n", [1, 2])
def test_scaling_covariance(c, n):
    v = fol("x+y^2;2*y-x*y+1", 2)
    k = linear_system_dimension(n)
    base = extactic_foliation(v, n).raw
    assert extactic_foliation(v.scaled(c), n).raw == base.scale(c ** (k * (k + 1) // 2))


# web extactic ------------------------------------------------------------------------


def test_foliation_as_web_agrees():
    v = fol(WEIGHTED, 1)
    w = AffineWeb(v.slope_poly(), 1)
    assert extactic_web(w, 1).affine_part == extactic_foliation(v, 1).affine_part == P("x*y")


def test_slope_to_foliation_roundtrip():
    v = fol(WEIGHTED, 1)
    u = foliation_from_slope(v.slope_poly(), 1)
    assert (u.A, u.B) == (v.A, v.B)


def _sympy_oracle(slope: MultiPoly):
    """Res_m(P, P_x + m P_y) computed by sympy, independent of the library's elimination."""
    x, y, m = sympy.symbols("x y m")
    Ps = sympy.sympify(str(slope).replace("^", "**"))
    Q = sympy.expand(sympy.diff(Ps, x) + m * sympy.diff(Ps, y))
    R = sympy.resultant(Ps, Q, m)
    c = sympy.Poly(Ps, m).LC()
    return sympy.expand(R), sympy.expand(c)


def _matches_up_to_lc_power(E: MultiPoly, R, c) -> bool:
    x, y = sympy.symbols("x y")
    Es = sympy.sympify(str(E).replace("^", "**"))
    for j in range(8):
        q = sympy.cancel(Es * c ** j / R)
        if q.free_symbols == set() and q != 0:
            return True
        q = sympy.cancel(Es / (R * c ** j))
        if q.free_symbols == set() and q != 0:
            return True
    return False


def test_paper_web_n1_against_branch_oracle():
    # with y = t^2 the branches are m = 1/t and m = -1/t; each has
    # m_x + m m_y = -1/(2 t^4), so sigma_1 sigma_2 = 1/(4 y^4)
    t = sympy.symbols("t", positive=True)
    yv = t ** 2
    prod = 1
    for m in (1 / t, -1 / t):
        dm_dy = sympy.diff(m, t) / sympy.diff(yv, t)
        prod *= m * dm_dy
    assert sympy.simplify(prod - 1 / (4 * t ** 8)) == 0
    E, pole = web_extactic_poly(P(PAPER_WEB, XYM), 1)
    # E = Delta * c^3 * sigma_1 sigma_2 up to a constant, with Delta = c = y
    assert E.is_constant() and E
    assert pole == 1
    R, c = _sympy_oracle(P(PAPER_WEB, XYM))
    assert _matches_up_to_lc_power(E, R, c)


def test_paper_web_polynomiality_n2():
    E, pole = web_extactic_poly(P(PAPER_WEB, XYM), 2)
    k = linear_system_dimension(2)
    assert E and E.is_constant()
    assert pole <= k * (k - 1) // 2


def test_paper_web_degrees():
    w = AffineWeb(P(PAPER_WEB, XYM), 1)
    r1 = extactic_web(w, 1, chart_check=True)
    assert r1.total_degree == degree_formula(1, 2, 1) == 7
    r2 = extactic_web(w, 2)
    assert r2.total_degree == degree_formula(2, 2, 1) == 49


@pytest.mark.parametrize("seed", range(3))
def test_generic_web_n1_against_oracle(seed):
    w = random_web(2, 1, seed=seed)
    E, _ = web_extactic_poly(w.slope, 1)
    R, c = _sympy_oracle(w.slope)
    assert _matches_up_to_lc_power(E, R, c)


@pytest.mark.parametrize("seed", range(5))
def test_generic_web_degree_12(seed):
    w = random_web(2, 2, seed=seed)
    res = extactic_web(w, 1)
    assert res.total_degree == 12


def test_generic_web_chart_agrees():
    w = random_web(2, 2, seed=0)
    res = extactic_web(w, 1, chart_check=True)
    assert res.infinity_source == "chart"
    assert res.total_degree == 12


def test_generic_cubic_web_degree():
    w = random_web(3, 1, seed=0)
    res = extactic_web(w, 1)
    assert res.total_degree == degree_formula(1, 3, 1)


@pytest.mark.slow
def test_generic_web_n2_degree():
    w = random_web(2, 1, seed=0)
    res = extactic_web(w, 2)
    assert res.total_degree == degree_formula(2, 2, 1) == 49
    k = linear_system_dimension(2)
    assert res.pole_order <= k * (k - 1) // 2


def test_transform_slope_identity():
    Pw = P(PAPER_WEB, XYM)
    G = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert transform_slope(Pw, G).primitive()[1] == Pw.primitive()[1]


# invariant curves ------------------------------------------------------------------------


def test_invariant_curve_examples():
    assert invariant_curve_test(fol(WEIGHTED, 1), P("y"))
    assert invariant_curve_test(fol("1;2*x", 1), P("y-x^2"))
    assert invariant_curve_test(AffineWeb(P(PAPER_WEB, XYM), 1), P("9*x^2-4*y^3"))
    assert not invariant_curve_test(fol(WEIGHTED, 1), P("x+y"))
    with pytest.raises(InputError):
        invariant_curve_test(fol(WEIGHTED, 1), P("3"))


def test_invariant_curves_from_extactic_weighted():
    curves = invariant_curves_from_extactic(fol(WEIGHTED, 1), 1)
    assert sorted((str(f), e) for f, e in curves) == [("x", 1), ("y", 1)]


def test_invariant_parabola_found():
    curves = invariant_curves_from_extactic(fol("1;2*x+y-x^2", 2), 2)
    assert any(f == P("x^2-y") or f == P("y-x^2") for f, _ in curves)


def test_no_invariant_curves():
    assert invariant_curves_from_extactic(random_foliation(1, seed=4), 1) == []


def _param(X, Y):
    T = ("t",)
    return parse_poly(X, T), parse_poly(Y, T)


def test_restriction_rank_and_multiples():
    assert restriction_rank(1, _param("0", "t")) == 2
    assert restriction_rank(2, _param("t", "t^2")) == 5
    assert restriction_rank(2, _param("t", "t")) == 3
    assert multiples_count(2, 1) == 3
    assert multiples_count(2, 3) == 0


@pytest.mark.parametrize(
    "field,n,curve,param",
    [
        (WEIGHTED, 1, "x", ("0", "t")),
        (WEIGHTED, 1, "y", ("t", "0")),
        ("1;2*x+y-x^2", 2, "y-x^2", ("t", "t^2")),
    ],
)
def test_multiplicity_bound(field, n, curve, param):
    v = fol(field, web_degree(fol(field, 0), seed=0))
    E = extactic_foliation(v, n).affine_part
    k = linear_system_dimension(n)
    kc = restriction_rank(n, _param(*param)) - 1
    assert multiplicity(E, P(curve)) >= k - kc
