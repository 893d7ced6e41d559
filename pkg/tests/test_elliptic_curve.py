import itertools
import random
from fractions import Fraction

import pytest

from elliptic_curve import (INFINITY, CurveQ, PointQ, add, count_points_mod_p, good_primes,
                            is_good_reduction, multiply, nagell_lutz_candidates, point_order,
                            reduction_gcd, torsion_subgroup)
from errors import InvalidInputError, LimitExceededError


def _xy(points):
    return [(P.x, P.y) for P in points]


def test_singular_curve_rejected():
    with pytest.raises(InvalidInputError) as excinfo:
        CurveQ(-3, 2)
    assert excinfo.value.code == "singular"
    with pytest.raises(InvalidInputError):
        CurveQ(0, 0)


def test_point_must_lie_on_curve():
    C = CurveQ(0, 1)
    with pytest.raises(InvalidInputError) as excinfo:
        C.point(1, 1)
    assert excinfo.value.code == "off-curve"
    with pytest.raises(InvalidInputError):
        add(C, PointQ(1, 1), INFINITY)


def test_group_law_on_y2_x3_plus_1():
    C = CurveQ(0, 1)
    P = C.point(2, 3)
    assert add(C, C.point(-1, 0), P) == PointQ(0, -1)
    assert multiply(C, 2, P) == PointQ(0, 1)
    assert multiply(C, 3, P) == PointQ(-1, 0)
    assert multiply(C, 6, P) == INFINITY
    assert multiply(C, -1, P) == PointQ(2, -3)
    assert add(C, P, -P) == INFINITY
    assert point_order(C, P) == 6


def test_doubling_on_y2_x3_plus_4():
    C = CurveQ(0, 4)
    assert multiply(C, 2, C.point(0, 2)) == PointQ(0, -2)
    assert point_order(C, C.point(0, 2)) == 3


def test_group_law_laws_on_sample_points():
    C = CurveQ(0, 17)
    P1, P2 = C.point(-2, 3), C.point(2, 5)
    pool = [INFINITY]
    for k1, k2 in itertools.product(range(-2, 3), repeat=2):
        pool.append(add(C, multiply(C, k1, P1), multiply(C, k2, P2)))
    assert all(C.contains(P) for P in pool)

    rng = random.Random(17)
    for _ in range(1000):
        P, Q, R = (rng.choice(pool) for _ in range(3))
        assert add(C, P, Q) == add(C, Q, P)
        assert add(C, add(C, P, Q), R) == add(C, P, add(C, Q, R))
        assert add(C, P, INFINITY) == P
        assert add(C, P, -P) == INFINITY


def test_known_points_on_y2_x3_plus_17():
    C = CurveQ(0, 17)
    P = C.point(-2, 3)
    Q = C.point(-1, 4)
    assert add(C, P, Q) == PointQ(4, -9)
    assert multiply(C, 2, P) == PointQ(8, -23)
    assert C.contains(PointQ(Fraction(1, 4), Fraction(33, 8)))
    assert point_order(C, P) is None


def test_nagell_lutz_candidates():
    assert _xy(nagell_lutz_candidates(CurveQ(0, 1))) == [(-1, 0), (0, -1), (0, 1), (2, -3), (2, 3)]
    assert _xy(nagell_lutz_candidates(CurveQ(0, 17))) == [(-2, -3), (-2, 3)]
    assert _xy(nagell_lutz_candidates(CurveQ(0, 4))) == [(0, -2), (0, 2)]


def test_nagell_lutz_needs_integer_coefficients():
    with pytest.raises(InvalidInputError) as excinfo:
        nagell_lutz_candidates(CurveQ(0, Fraction(1, 2)))
    assert excinfo.value.code == "non-integral"


@pytest.mark.parametrize("a, b, structure, affine", [
    (0, 1, (6,), 5),
    (0, 4, (3,), 2),
    (0, -1, (2,), 1),
    (0, 17, (), 0),
    (-1, 0, (2, 2), 3),
])
def test_torsion_subgroup(a, b, structure, affine):
    torsion = torsion_subgroup(CurveQ(a, b))
    assert torsion.structure.elementary_divisors == structure
    assert torsion.order == len(torsion.points)
    assert torsion.to_dict()['affine_point_count'] == affine


def test_torsion_order_divides_reduction_counts():
    for b in (1, 4, -1, 17, -2, 3):
        C = CurveQ(0, b)
        g, counts = reduction_gcd(C)
        assert len(counts) == 3
        assert g % torsion_subgroup(C).order == 0


def test_point_counts_mod_p():
    assert count_points_mod_p(CurveQ(0, 1), 5) == 6
    assert count_points_mod_p(CurveQ(0, 1), 7) == 12
    assert count_points_mod_p(CurveQ(0, 17), 7) == 13


def test_point_counts_respect_hasse_bound():
    for b in (1, 2, 17, -7):
        C = CurveQ(0, b)
        for p in good_primes(C, 10):
            count = count_points_mod_p(C, p)
            assert (count - p - 1) ** 2 <= 4 * p


def test_point_count_rejections(fresh_config):
    C = CurveQ(0, 1)
    assert not is_good_reduction(C, 3)
    assert is_good_reduction(C, 5)
    with pytest.raises(InvalidInputError) as excinfo:
        count_points_mod_p(C, 3)
    assert excinfo.value.code == "bad-reduction"
    with pytest.raises(InvalidInputError):
        count_points_mod_p(C, 9)
    fresh_config.update_config_value('point_count_prime_cap', 100)
    with pytest.raises(LimitExceededError):
        count_points_mod_p(C, 101)


def test_good_primes_skip_bad_primes():
    assert good_primes(CurveQ(0, 1), 3) == [5, 7, 11]
    assert good_primes(CurveQ(0, 17), 3) == [5, 7, 11]
