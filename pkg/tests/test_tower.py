import json

import pytest
from gmpy2 import mpq
from hypothesis import given

from cremona_lab.algebra import MPoly
from cremona_lab.plane import PPoint
from cremona_lab.tower import (
    BASE_VARS,
    Center,
    ChartPoint,
    Tower,
    TowerError,
    blow_up,
    canonical_point,
    exceptional_intersections,
    push_down,
    pushforward_map,
    strict_transform,
    z_sets,
)
from cremona_lab.selftest import factorization_towers

from conftest import nonzero_q, small_q

P0 = Center(0, PPoint(1, 0, 0))


def uv(level):
    return (f"u{level}", f"v{level}")


def test_first_blowup_charts():
    t = Tower.from_centers([P0])
    u, v = MPoly.gens(uv(1))
    assert pushforward_map(t, "L1A") == (u, u * v)
    assert pushforward_map(t, "L1B") == (u * v, v)
    assert t.chart("L1A").exceptional == {1: u}
    assert t.chart("L1B").exceptional == {1: v}
    assert pushforward_map(t, "L0") == MPoly.gens(BASE_VARS)


def test_second_level_atlas_has_five_charts():
    t = Tower.from_centers([P0, Center(1, ChartPoint("L1A", (0, 2)))])
    assert len(t.atlas(2)) == 5


def test_center_off_exceptional_curve_rejected():
    t = Tower.from_centers([P0])
    with pytest.raises(TowerError):
        blow_up(t, Center(1, ChartPoint("L1A", (1, 2))))


def test_unknown_chart_rejected():
    with pytest.raises(TowerError):
        Tower.from_centers([P0, Center(1, ChartPoint("L2A", (0, 0)))])


def test_level_mismatch_rejected():
    with pytest.raises(TowerError):
        Tower.from_centers([Center(1, PPoint(1, 0, 0))])


def test_pushforward_of_two_level_chain():
    t = Tower.from_centers([P0, Center(1, ChartPoint("L1A", (0, 3)))])
    u, v = MPoly.gens(uv(2))
    # (u, v) -> (u, 3 + u v) in L1A, then (u, u (3 + u v)) in the base chart
    assert pushforward_map(t, "L2A") == (u, u * (u * v + 3))


def test_cusp_strict_transform():
    t = Tower.from_centers([P0])
    cusp = MPoly.parse("y^2 - x^3", BASE_VARS)
    st_ = strict_transform(t, 1, cusp)
    assert st_.multiplicities == [2]
    assert st_.equations["L1A"] == MPoly.parse("v1^2 - u1", uv(1))


def test_cusp_resolution_multiplicities():
    t = factorization_towers()["cusp3"]
    st_ = strict_transform(t, 3, MPoly.parse("y^2 - x^3", BASE_VARS))
    assert st_.multiplicities == [2, 1, 1]


def test_line_through_center_meets_exceptional_curve_at_its_slope():
    t = Tower.from_centers([P0])
    st_ = strict_transform(t, 1, MPoly.parse("y - 2*x", BASE_VARS))
    assert st_.multiplicities == [1]
    assert st_.equations["L1A"] == MPoly.parse("v1 - 2", uv(1))


def test_curve_missing_center_is_unchanged():
    t = Tower.from_centers([P0])
    curve = MPoly.parse("x + y - 1", BASE_VARS)
    st_ = strict_transform(t, 1, curve)
    assert st_.multiplicities == [0]
    assert st_.equations["L1A"] == curve.substitute(list(pushforward_map(t, "L1A")), uv(1))


def test_plane_curve_input_uses_base_chart():
    t = Tower.from_centers([P0])
    st_ = strict_transform(t, 1, MPoly.parse("x2^2*x0 - x1^3", ("x0", "x1", "x2")))
    assert st_.multiplicities == [2]


def _pull_down(poly, charts):
    for child in charts:
        poly = poly.substitute(list(child.transition()), child.vars)
    return poly


@pytest.mark.parametrize("name", sorted(factorization_towers()))
def test_total_transform_is_strict_times_exceptional_powers(name):
    t = factorization_towers()[name]
    curve = MPoly.parse("y^2 - x^3 + x*y", BASE_VARS)
    st_ = strict_transform(t, t.n, curve)
    for cid, chart in t.charts.items():
        path = t.path(cid)
        rebuilt = st_.equations[cid]
        for i, c in enumerate(path[1:], start=1):
            e = MPoly.gens(c.vars)[c.exceptional_index()]
            rebuilt = rebuilt * _pull_down(e, path[i + 1 :]) ** st_.removed[c.id]
        assert rebuilt == _pull_down(curve, path[1:])


@pytest.mark.parametrize("name", sorted(factorization_towers()))
@given(u=nonzero_q, v=small_q)
def test_sibling_charts_agree_on_overlap(name, u, v):
    t = factorization_towers()[name]
    for level in range(1, t.n + 1):
        fa = pushforward_map(t, f"L{level}A")
        fb = pushforward_map(t, f"L{level}B")
        # B(u, v) is A(u v, 1/u)
        on_a = [f.evaluate((u * v, 1 / u)) for f in fa]
        on_b = [f.evaluate((u, v)) for f in fb]
        assert on_a == on_b


def test_canonical_point_prefers_a_chart():
    t = Tower.from_centers([P0])
    assert canonical_point(t, ChartPoint("L1B", (2, 0))) == ChartPoint("L1A", (0, mpq(1, 2)))
    assert canonical_point(t, ChartPoint("L1B", (0, 0))) == ChartPoint("L1B", (0, 0))
    assert canonical_point(t, ChartPoint("L1A", (1, 3))) == ChartPoint("L0", (1, 3))


def test_z_sets_single_blowup_empty():
    assert z_sets(Tower.from_centers([P0])) == {1: []}


def test_z_sets_chain_of_two():
    t = Tower.from_centers([P0, Center(1, ChartPoint("L1A", (0, 2)))])
    zs = z_sets(t)
    assert zs[1] == [ChartPoint("L1A", (0, 2))]
    assert len(zs[2]) == 1


def test_z_sets_mixed_three_point_tower():
    t = factorization_towers()["mixed3"]
    zs = z_sets(t)
    assert zs[1] == [ChartPoint("L1A", (0, 1))]
    assert zs[2] == [ChartPoint("L2B", (0, 0))]
    assert zs[3] == [ChartPoint("L3A", (0, 0)), ChartPoint("L3B", (0, 0))]


@pytest.mark.parametrize("name", sorted(factorization_towers()))
def test_z_set_points_lie_on_their_curve(name):
    t = factorization_towers()[name]
    for i, pts in z_sets(t).items():
        for p in pts:
            assert i in t.chart(p.chart).exceptional
            assert t.chart(p.chart).exceptional[i].evaluate(p.coords) == 0


@pytest.mark.parametrize("name", sorted(factorization_towers()))
def test_z_sets_are_symmetric(name):
    t = factorization_towers()[name]
    zs = z_sets(t)
    for i, k, pt in exceptional_intersections(t):
        assert push_down(t, pt, i) in zs[i]
        assert push_down(t, pt, k) in zs[k]


def test_blow_up_leaves_prefix_untouched():
    t1 = Tower.from_centers([P0])
    before = dict(t1.charts)
    t2 = blow_up(t1, Center(1, ChartPoint("L1A", (0, 0))))
    assert t1.charts == before and t1.n == 1
    assert all(t2.charts[k] == v for k, v in before.items())


def test_tower_json_round_trip():
    t = factorization_towers()["satellite4"]
    data = json.loads(json.dumps(t.to_json()))
    assert data["centers"][0] == {"level": 0, "point": ["1", "0", "0"]}
    assert Tower.from_json(data).to_json() == t.to_json()


def test_tower_json_rejects_unknown_keys():
    with pytest.raises(TowerError):
        Tower.from_json({"centers": [], "extra": 1})
    with pytest.raises(TowerError):
        Tower.from_json({"centers": [{"level": 0, "point": ["1", "0", "0"], "colour": "red"}]})
