import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, strategies as st

from cremona_lab.algebra import MPoly
from cremona_lab.plane import (
    INDETERMINATE,
    PLANE_VARS,
    CurveImage,
    DegenerateError,
    PlaneRatMap,
    PLine,
    PointImage,
    PPoint,
    base_points,
    canonical_linauto,
    collinear,
    compose,
    evaluate,
    image_of_line,
    quadratic_transform,
    std_quadratic,
)
from cremona_lab.selftest import random_triple

from conftest import small_q

E0, E1, E2 = PPoint(1, 0, 0), PPoint(0, 1, 0), PPoint(0, 0, 1)

points = st.tuples(small_q, small_q, small_q).filter(any).map(PPoint)
triples = st.tuples(points, points, points).filter(lambda t: not collinear(*t))


def plane(text):
    return MPoly.parse(text, PLANE_VARS)


def test_point_normalisation_is_canonical():
    assert PPoint(2, 4, 6) == PPoint(mpq(1, 3), mpq(2, 3), 1)
    assert PPoint(0, -2, 4).coords == (0, 1, -2)
    with pytest.raises(ValueError):
        PPoint(0, 0, 0)


def test_incidence():
    L = PLine.through(E0, PPoint(1, 1, 1))
    assert L.contains(PPoint(3, 1, 1)) and not L.contains(E1)


def test_std_quadratic_evaluations():
    q = std_quadratic()
    assert evaluate(q, PPoint(1, 1, 1)) == PPoint(1, 1, 1)
    assert evaluate(q, PPoint(1, 2, 3)) == PPoint(6, 3, 2)
    assert evaluate(q, E0) is INDETERMINATE


def test_std_quadratic_components():
    assert std_quadratic().components == (plane("x1*x2"), plane("x0*x2"), plane("x0*x1"))


def test_linauto_examples():
    assert canonical_linauto(E0, E1, E2).matrix == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    # columns (1,1,1), (0,1,0), (0,0,1); inverse by hand
    M = canonical_linauto(PPoint(1, 1, 1), E1, E2)
    assert M.matrix == ((1, 0, 0), (-1, 1, 0), (-1, 0, 1))
    with pytest.raises(DegenerateError):
        canonical_linauto(E0, E1, PPoint(1, 1, 0))


@given(triples)
def test_linauto_sends_triple_to_coordinate_points(t):
    M = canonical_linauto(*t)
    assert [M.apply(p) for p in t] == [E0, E1, E2]
    assert canonical_linauto(*t).matrix == M.matrix


def test_transform_at_coordinate_points_is_standard():
    assert quadratic_transform(E0, E1, E2) == std_quadratic()


def test_quadratic_transform_rejects_collinear():
    with pytest.raises(DegenerateError):
        quadratic_transform(E0, E1, PPoint(1, 1, 0))


def test_compose_examples():
    q = std_quadratic()
    assert compose(PlaneRatMap.identity(), q) == q
    assert compose(q, q).is_identity()


@given(triples)
def test_transform_is_involution(t):
    T = quadratic_transform(*t)
    assert T.degree == 2
    assert compose(T, T).is_identity()


@given(triples)
def test_base_points_are_the_triple(t):
    assert set(base_points(quadratic_transform(*t))) == set(t)


def _sympy_base_points(T):
    # oracle: solve the three quadrics directly in each affine chart
    x0, x1, x2 = sympy.symbols(PLANE_VARS)
    exprs = []
    for c in T.components:
        e = 0
        for exp, k in c.terms.items():
            e += sympy.Rational(int(k.numerator), int(k.denominator)) * x0 ** exp[0] * x1 ** exp[1] * x2 ** exp[2]
        exprs.append(e)
    found = set()
    for fixed, free in ((x0, (x1, x2)), (x1, (x0, x2)), (x2, (x0, x1))):
        sols = sympy.solve([e.subs(fixed, 1) for e in exprs], free, dict=True)
        for s in sols:
            vals = {fixed: 1, **s}
            found.add(PPoint([mpq(str(sympy.nsimplify(vals[v]))) for v in (x0, x1, x2)]))
    return found


def test_base_points_match_direct_solve():
    rng = random.Random(11)
    for _ in range(3):
        t = random_triple(rng)
        assert set(base_points(quadratic_transform(*t))) == _sympy_base_points(quadratic_transform(*t)) == set(t)


@given(triples)
def test_contracted_lines_go_to_the_opposite_point(t):
    a, b, c = t
    T = quadratic_transform(a, b, c)
    # the line through two base points is blown down onto the third
    for (p, q), r in (((b, c), a), ((a, c), b), ((a, b), c)):
        img = image_of_line(T, PLine.through(p, q))
        assert isinstance(img, PointImage) and img.point == r


def test_image_of_line_examples():
    assert image_of_line(std_quadratic(), PLine(1, 0, 0)) == PointImage(E0)
    assert image_of_line(PlaneRatMap.identity(), PLine(1, 0, 0)) == CurveImage(plane("x0"))
    img = image_of_line(std_quadratic(), PLine.through(PPoint(1, 1, 1), PPoint(1, 2, 5)))
    assert isinstance(img, CurveImage) and img.degree() == 2
    for p in (E0, E1, E2):
        assert img.equation.evaluate(p.coords) == 0


@given(triples, triples, points)
def test_evaluate_commutes_with_compose(s, t, p):
    S, T = quadratic_transform(*s), quadratic_transform(*t)
    inner = evaluate(T, p)
    if inner is INDETERMINATE:
        return
    outer = evaluate(S, inner)
    if outer is INDETERMINATE:
        return
    st_ = compose(S, T)
    assert evaluate(st_, p) == outer


def test_composite_of_two_general_quadratics_has_degree_four():
    rng = random.Random(3)
    S, T = quadratic_transform(*random_triple(rng)), quadratic_transform(*random_triple(rng))
    assert compose(S, T).degree == 4


def test_composite_degree_drops_when_base_points_are_shared():
    a, b, c = PPoint(1, 2, 3), PPoint(1, -1, 2), PPoint(2, 0, 1)
    S = quadratic_transform(a, b, c)
    assert compose(S, S).degree == 1
    assert compose(quadratic_transform(a, b, PPoint(1, 1, 7)), S).degree <= 3


def test_map_json_round_trip():
    T = quadratic_transform(PPoint(1, 2, 3), PPoint(1, -1, 2), PPoint(2, 0, 1))
    assert PlaneRatMap.from_json(T.to_json()) == T
