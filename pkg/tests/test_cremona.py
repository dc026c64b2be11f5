import dataclasses
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from cremona_lab.cremona import (
    FactorizationResult,
    SamplingExhausted,
    UnsupportedTower,
    factor_tower,
    check_transform_on_line,
    verify_factorization,
)
from cremona_lab.plane import PPoint, compose
from cremona_lab.selftest import factorization_towers, random_triple
from cremona_lab.tower import Center, ChartPoint, Tower

E0, E1, E2 = PPoint(1, 0, 0), PPoint(0, 1, 0), PPoint(0, 0, 1)
TOWERS = factorization_towers()


def test_line_images_on_coordinate_triple():
    rep = check_transform_on_line(E0, E1, E2)
    assert rep.domain_ok and rep.iso_ok and rep.tangent_ok
    assert rep.passed
    # b goes to the direction of ac and c to the direction of ab
    assert rep.b_image == rep.dir_ac != rep.dir_ab == rep.c_image


def test_line_images_swapping_b_and_c_swaps_images():
    a, b, c = PPoint(1, 2, 3), PPoint(1, -1, 2), PPoint(2, 0, 1)
    r1, r2 = check_transform_on_line(a, b, c), check_transform_on_line(a, c, b)
    assert r1.passed and r2.passed
    assert (r1.b_image, r1.c_image) == (r2.c_image, r2.b_image)


def test_line_images_rejects_collinear_triple():
    with pytest.raises(ValueError):
        check_transform_on_line(E0, E1, PPoint(1, 1, 0))


@given(st.integers(0, 2**32))
@settings(max_examples=15)
def test_line_images_on_random_triples(seed):
    assert check_transform_on_line(*random_triple(random.Random(seed))).passed


def test_empty_tower_gives_identity():
    res = factor_tower(Tower.from_centers([]))
    assert res.chi.is_identity() and res.triples == [] and res.line_assignment == {}
    assert verify_factorization(Tower.from_centers([]), res).passed


def test_single_point_starts_at_the_center():
    t = TOWERS["point_2m11"]
    res = factor_tower(t, seed=1)
    assert len(res.transforms) == 1 and res.chi.degree == 2
    assert res.triples[0][0] == PPoint(2, -1, 1)
    assert verify_factorization(t, res).passed


def test_two_level_chain():
    res = factor_tower(TOWERS["chain2"], seed=4)
    assert len(res.transforms) == 2
    assert verify_factorization(TOWERS["chain2"], res).passed


def test_mixed_three_point_tower_uses_three_transforms():
    t = TOWERS["mixed3"]
    res = factor_tower(t, seed=0)
    assert len(res.transforms) == 3 and set(res.line_assignment) == {1, 2, 3}
    assert verify_factorization(t, res).passed


@pytest.mark.parametrize("name", sorted(TOWERS))
def test_factorization_properties(name):
    t = TOWERS[name]
    res = factor_tower(t, seed=7)
    rep = verify_factorization(t, res)
    assert rep.passed, [c.to_json() for c in rep.failures()]
    assert res.chi.degree <= 2**t.n
    lines = list(res.line_assignment.values())
    assert len(set(lines)) == len(lines) == t.n
    for T in res.transforms:
        assert compose(T, T).is_identity()
    chi = res.transforms[0]
    for T in res.transforms[1:]:
        chi = compose(chi, T)
    assert chi == res.chi


def test_swapped_tangent_record_fails_verification():
    t = TOWERS["mixed3"]
    res = factor_tower(t, seed=0)
    (b_img, c_img), *rest = res.tangent_images
    bad = dataclasses.replace(res, tangent_images=[(c_img, b_img), *rest])
    failed = {(c.level, c.name) for c in verify_factorization(t, bad).failures()}
    assert failed == {(0, "tangent directions")}


def test_wrong_transform_fails_verification():
    t = TOWERS["chain2"]
    res = factor_tower(t, seed=2)
    bad = dataclasses.replace(res, transforms=res.transforms[::-1])
    assert not verify_factorization(t, bad).passed


def test_same_seed_same_result():
    t = TOWERS["chain3"]
    a = factor_tower(t, seed=123).to_json()
    b = factor_tower(t, seed=123).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_result_json_round_trip():
    t = TOWERS["mixed3"]
    res = factor_tower(t, seed=5)
    back = FactorizationResult.from_json(json.loads(json.dumps(res.to_json())))
    assert back.to_json() == res.to_json()
    assert verify_factorization(t, back).passed


def test_tiny_budget_exhausts():
    with pytest.raises(SamplingExhausted) as info:
        factor_tower(TOWERS["chain4"], budget=1)
    assert isinstance(info.value.violations, dict)


def test_tower_with_unrelated_second_point_is_unsupported():
    p0 = Center(0, PPoint(1, 0, 0))
    t = Tower.from_centers([p0, Center(1, ChartPoint("L0", (5, 5)), infinitely_near=False)])
    with pytest.raises(UnsupportedTower):
        factor_tower(t)
