import json
import random

import pytest
from hypothesis import given, strategies as st

from cremona_lab.algebra import MPoly, RationalFunction, exact_divide
from cremona_lab.ramification import (
    AffineRatMap,
    ChainBroken,
    ChartSwitchRequired,
    ContractedCurve,
    CurveGerm,
    DegenerateJacobian,
    RamificationError,
    check_multiplicativity,
    compose,
    image_in_curve,
    is_contracted,
    is_strongly_ramified,
    jacobian_det,
    ram_index,
    tower_ledger,
)
from cremona_lab.selftest import random_normal_form, random_poly

from conftest import XY, nonzero_q, small_q


def M(f, g):
    return AffineRatMap.parse(f, g)


def G(text):
    return CurveGerm.parse(text)


ID = AffineRatMap.identity()
seeds = st.integers(0, 2**32).map(random.Random)
X0 = G("x")


def test_jacobian_examples():
    assert jacobian_det(M("x^2", "y")) == RationalFunction.parse("2*x", XY)
    assert jacobian_det(ID) == RationalFunction.parse("1", XY)
    assert jacobian_det(M("x/y", "y")) == RationalFunction.parse("1/y", XY)


def test_contraction_examples():
    assert not is_contracted(M("x^2", "y"), X0)
    assert is_contracted(M("x + y", "(x + y)^2"), G("x + y"))
    assert not is_contracted(ID, G("x^2 + y^2 - 1"))


def test_pole_divisor_needs_chart_switch():
    with pytest.raises(ChartSwitchRequired):
        is_contracted(M("1/x", "y"), X0)


def test_index_examples():
    assert ram_index(M("x^2", "y"), X0) == 2
    assert ram_index(ID, G("y - x^2")) == 1
    assert ram_index(M("x^5*(1 + y)", "y + x"), X0) == 5


def test_index_errors():
    with pytest.raises(ContractedCurve):
        ram_index(M("x + y", "(x + y)^2"), G("x + y"))
    with pytest.raises(DegenerateJacobian):
        ram_index(M("x + y", "(x + y)^2"), X0)


def test_strong_ramification_examples():
    assert is_strongly_ramified(M("x^2", "y"), X0)
    assert not is_strongly_ramified(ID, G("x - 3*y"))
    assert not is_strongly_ramified(M("x^2", "y"), G("y"))


def test_image_in_curve_examples():
    assert image_in_curve(M("x^2", "y"), X0, X0)
    assert image_in_curve(M("x + 1", "y"), X0, G("x - 1"))
    assert not image_in_curve(M("x + 1", "y"), X0, X0)


def test_multiplicativity_example():
    rep = check_multiplicativity(M("x^2", "y"), M("x^3", "y"), X0, X0)
    assert (rep.e_inner, rep.e_outer, rep.e_composite, rep.equal) == (2, 3, 6, True)


def test_multiplicativity_with_identity_outer():
    phi = M("x^3*(2 - y)", "y + x")
    rep = check_multiplicativity(phi, ID, X0, X0)
    assert rep.e_composite == rep.e_inner == 3


def test_multiplicativity_rejects_broken_hypothesis():
    with pytest.raises(ChainBroken):
        check_multiplicativity(M("x + 1", "y"), ID, X0, X0)


def test_ledger_examples():
    sq = M("x^2", "y")
    led = tower_ledger([sq, sq, sq], [X0] * 4)
    assert led.indices == (2, 2, 2) and led.composite == 8 and led.bound_holds and led.equal
    assert tower_ledger([sq], [X0, X0]).composite == 2
    assert tower_ledger([sq, ID, sq], [X0] * 4).composite == 4


def test_ledger_reports_broken_level():
    with pytest.raises(ChainBroken) as info:
        tower_ledger([M("x^2", "y"), M("x + 1", "y")], [X0, X0, X0])
    assert info.value.level == 1


def test_germ_must_be_squarefree():
    with pytest.raises(RamificationError):
        G("x^2")


def test_json_formats():
    phi = M("x/y", "y")
    data = json.loads(json.dumps(phi.to_json()))
    assert isinstance(data, list) and set(data[0]) == {"num", "den"}
    assert AffineRatMap.from_json(data) == phi
    g = X0.to_json()
    assert g["asserted_irreducible"] is True
    assert CurveGerm.from_json(g).delta == X0.delta
    with pytest.raises(RamificationError):
        CurveGerm.from_json({k: v for k, v in g.items() if k != "asserted_irreducible"})


@given(st.integers(1, 5), seeds)
def test_normal_form_index_and_jacobian_factor(k, rng):
    phi = random_normal_form(rng, k)
    assert ram_index(phi, X0) == k
    x = MPoly.var("x", XY)
    jac = jacobian_det(phi).num
    F = exact_divide(jac, x ** (k - 1))
    assert not F.specialize({"x": 0}).is_zero()


@given(st.integers(1, 4), st.integers(1, 4), seeds)
def test_product_law(k1, k2, rng):
    phi, psi = random_normal_form(rng, k1, 1), random_normal_form(rng, k2, 1)
    rep = check_multiplicativity(phi, psi, X0, X0)
    assert rep.equal and (rep.e_inner, rep.e_outer) == (k1, k2)


@given(st.integers(1, 4), seeds, nonzero_q, nonzero_q, small_q, small_q)
def test_index_invariant_under_changes_fixing_the_axis(k, rng, alpha, beta, gamma, delta):
    phi = random_normal_form(rng, k)
    x, y = MPoly.gens(XY)
    change = AffineRatMap([x.scale(alpha), y.scale(beta) + x.scale(gamma) + delta])
    assert ram_index(compose(phi, change), X0) == ram_index(phi, X0)


# parametrisations t -> (x(t), y(t)) of some rational germs
PARAMS = {
    "y - 2*x - 1": ("t", "2*t + 1"),
    "y - x^2": ("t", "t^2"),
    "x": ("0", "t"),
    "x^2 + y^2 - 1": ("2*t/(1 + t^2)", "(1 - t^2)/(1 + t^2)"),
}


@pytest.mark.parametrize("germ", sorted(PARAMS))
@given(rng=seeds)
def test_contraction_matches_parametrisation(germ, rng):
    D = G(germ)
    t = ("t",)
    param = [RationalFunction.parse(p, t) for p in PARAMS[germ]]
    # polynomial maps, sometimes built to be constant along D
    f, g = random_poly(rng, 2), random_poly(rng, 2)
    if rng.random() < 0.4:
        f = f * D.delta + MPoly.const(rng.randint(-3, 3), XY)
        g = g * D.delta + MPoly.const(rng.randint(-3, 3), XY)
    phi = AffineRatMap([f, g])
    along = [RationalFunction(c, MPoly.const(1, XY)).substitute(param) for c in (f, g)]
    assert is_contracted(phi, D) == all(a.is_constant() for a in along)
