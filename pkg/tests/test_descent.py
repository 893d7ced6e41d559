import random
from fractions import Fraction

import pytest

from descent import (SCOPE, descent_field, descent_image, descent_parameter, point_search,
                     selmer_to_classgroup, two_descent_rank)
from elliptic_curve import INFINITY, CurveQ, PointQ, add
from errors import InvalidInputError


CURVE = CurveQ(0, 17)


def test_descent_parameter_validation():
    assert descent_parameter(CURVE) == 17
    with pytest.raises(InvalidInputError) as excinfo:
        descent_parameter(CurveQ(1, 1))
    assert excinfo.value.code == "not-pure-cubic"
    with pytest.raises(InvalidInputError) as excinfo:
        descent_parameter(CurveQ(0, 8))
    assert excinfo.value.code == "reducible-cubic"


def test_descent_field_radical_cubes_to_minus_n():
    F = descent_field(CURVE)
    assert F.radical ** 3 == F.element(-17)


def test_point_search_finds_known_points():
    points = point_search(CURVE, 100)
    found = {(P.x, P.y) for P in points}
    expected = [(-2, 3), (-1, 4), (2, 5), (4, 9), (8, 23), (43, 282), (52, 375),
                (Fraction(1, 4), Fraction(33, 8))]
    for x, y in expected:
        assert (x, y) in found
        assert (x, -y) in found
    assert all(CURVE.contains(P) for P in points)
    assert points == sorted(points, key=PointQ.sort_key)


def test_point_search_bounds(fresh_config):
    with pytest.raises(InvalidInputError) as excinfo:
        point_search(CURVE, 0)
    assert excinfo.value.code == "search-bound"
    fresh_config.update_config_value('point_search_limit', 50)
    with pytest.raises(InvalidInputError):
        point_search(CURVE, 100)


def test_descent_image_norms():
    F = descent_field(CURVE)
    for (x, y), norm in [((-2, 3), 9), ((-1, 4), 16), ((2, 5), 25)]:
        cls = descent_image(F, PointQ(x, y))
        assert cls.representative.norm() == norm
    with pytest.raises(InvalidInputError):
        descent_image(F, INFINITY)


def test_descent_image_is_a_homomorphism():
    F = descent_field(CURVE)
    P, Q = CURVE.point(-2, 3), CURVE.point(-1, 4)
    total = add(CURVE, P, Q)
    assert total == PointQ(4, -9)
    product = descent_image(F, P) * descent_image(F, Q)
    assert descent_image(F, total).same_class(product)
    doubled = add(CURVE, P, P)
    assert descent_image(F, doubled).is_trivial()


@pytest.mark.parametrize("points, rank", [
    ([(-2, 3), (2, 5)], 2),
    ([(-2, 3), (-2, -3)], 1),
    ([(-2, 3), (-1, 4), (4, -9)], 2),
    ([], 0),
])
def test_two_descent_rank(points, rank):
    report = two_descent_rank(CURVE, [PointQ(x, y) for x, y in points])
    assert report.f2_rank == rank
    assert report.subgroup_order == 2 ** rank
    assert len(report.basis) == rank
    assert len(report.matrix) == len(points)
    assert all(len(row) == len(report.columns) for row in report.matrix)


def test_two_descent_rank_excludes_infinity_and_rejects_off_curve_points():
    report = two_descent_rank(CURVE, [INFINITY, PointQ(-2, 3)])
    assert report.excluded == (INFINITY,)
    assert report.f2_rank == 1
    with pytest.raises(InvalidInputError) as excinfo:
        two_descent_rank(CURVE, [PointQ(1, 1)])
    assert excinfo.value.code == "off-curve"


def test_selmer_to_classgroup_on_y2_x3_plus_17():
    points = point_search(CURVE, 60)
    report = selmer_to_classgroup(CURVE, points)
    assert report.f2_rank == 2
    assert report.subgroup_order == 4
    assert len(report.class_rows) == 2
    assert all(row.relation_principal for row in report.class_rows)

    document = report.to_dict()
    assert document['scope'] == SCOPE
    assert document['selmer_claim'] == {'claimed_order': 9, 'computed_order': 4, 'scope': SCOPE}
    assert document['class_group']['h'] == report.class_group.h


def test_descent_on_y2_x3_plus_2():
    C = CurveQ(0, 2)
    report = selmer_to_classgroup(C, point_search(C, 20))
    assert report.f2_rank >= 1
    assert report.class_group.h == 1
    assert all(row.order == 1 for row in report.class_rows)


def test_descent_image_homomorphism_on_sampled_pairs():
    F = descent_field(CURVE)
    pool = [P for P in point_search(CURVE, 60) if P.y != 0]
    pairs = []
    for P in pool:
        for Q in pool:
            total = add(CURVE, P, Q)
            if total.is_infinity or total.y == 0:
                continue
            if max(abs(total.x.numerator), total.x.denominator) <= 10 ** 4:
                pairs.append((P, Q, total))
    assert pairs
    random.Random(100).shuffle(pairs)
    images = {}

    def image(P):
        if P not in images:
            images[P] = descent_image(F, P)
        return images[P]

    for P, Q, total in pairs[:100]:
        assert image(total).same_class(image(P) * image(Q))


def test_non_squarefree_n_is_refused_by_name():
    for n in (4, 12, -4):
        with pytest.raises(InvalidInputError) as excinfo:
            two_descent_rank(CurveQ(0, n), [])
        assert excinfo.value.code == "not-squarefree"
        assert f"n = {n}" in str(excinfo.value)


def test_selmer_claim_only_on_y2_x3_plus_17():
    C = CurveQ(0, 2)
    document = selmer_to_classgroup(C, point_search(C, 20)).to_dict()
    assert 'selmer_claim' not in document
    assert 'class_group' in document


def test_rank_grows_monotonically_with_points():
    pool = [P for P in point_search(CURVE, 60) if P.y > 0]
    rng = random.Random(29)
    for _ in range(5):
        rng.shuffle(pool)
        previous = 0
        for k in range(len(pool) + 1):
            rank = two_descent_rank(CURVE, pool[:k]).f2_rank
            assert previous <= rank <= k
            previous = rank
        assert previous == 2


def test_doubled_points_have_trivial_image():
    F = descent_field(CURVE)
    pool = [P for P in point_search(CURVE, 60) if P.y > 0]
    rng = random.Random(31)
    for P in rng.sample(pool, min(6, len(pool))):
        doubled = add(CURVE, P, P)
        assert descent_image(F, doubled).is_trivial()
        assert two_descent_rank(CURVE, [doubled]).f2_rank == 0
