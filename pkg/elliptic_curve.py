"""Short Weierstrass curves y^2 = x^3 + a*x + b over the rationals."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from sympy import nextprime

from config.settings import get_config
from errors import ConsistencyError, InvalidInputError, LimitExceededError
from exact_arith import (AbelianStructure, WorkBudget, divisors, ensure_budget, is_prime,
                         smith_normal_form, square_divisors)


logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

MAZUR_STRUCTURES = frozenset(
    [()] + [(k,) for k in range(2, 11)] + [(12,)] + [(2, 2 * k) for k in range(1, 5)]
)


@dataclass(frozen=True)
class PointQ:
    """Affine rational point, or the point at infinity when x and y are None."""

    x: Optional[Fraction] = None
    y: Optional[Fraction] = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise InvalidInputError("a point needs both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, 'x', Fraction(self.x))
            object.__setattr__(self, 'y', Fraction(self.y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @property
    def is_integral(self) -> bool:
        return self.is_infinity or (self.x.denominator == 1 and self.y.denominator == 1)

    def __neg__(self) -> 'PointQ':
        if self.is_infinity:
            return self
        return PointQ(self.x, -self.y)

    def sort_key(self) -> Tuple:
        if self.is_infinity:
            return (0,)
        return (1, self.x, self.y)

    def to_dict(self) -> Dict:
        if self.is_infinity:
            return {'infinity': True}
        return {'infinity': False, 'x': self.x, 'y': self.y}

    def __str__(self) -> str:
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = PointQ()


@dataclass(frozen=True)
class CurveQ:
    """y^2 = x^3 + a*x + b with 4a^3 + 27b^2 != 0."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'a', Fraction(self.a))
        object.__setattr__(self, 'b', Fraction(self.b))
        if self.discriminant_quantity == 0:
            raise InvalidInputError(f"singular curve: 4a^3+27b^2 = 0 for a={self.a}, b={self.b}",
                                    code="singular")

    @property
    def discriminant_quantity(self) -> Fraction:
        """D = 4a^3 + 27b^2 (the quantity Nagell-Lutz divides into)."""
        return 4 * self.a ** 3 + 27 * self.b ** 2

    @property
    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def rhs(self, x: Fraction) -> Fraction:
        return x ** 3 + self.a * x + self.b

    def contains(self, P: PointQ) -> bool:
        return P.is_infinity or P.y ** 2 == self.rhs(P.x)

    def point(self, x: Rational, y: Rational) -> PointQ:
        """Build an affine point, checking the curve equation."""
        P = PointQ(Fraction(x), Fraction(y))
        self._require_on_curve(P)
        return P

    def _require_on_curve(self, P: PointQ):
        if not self.contains(P):
            raise InvalidInputError(f"{P} is not on {self}", code="off-curve")

    def to_dict(self) -> Dict:
        return {'a': self.a, 'b': self.b, 'discriminant_quantity': self.discriminant_quantity}

    def __str__(self) -> str:
        return f"y^2 = x^3 + {self.a}x + {self.b}"


def add(C: CurveQ, P: PointQ, Q: PointQ) -> PointQ:
    """Chord-tangent sum on C."""
    C._require_on_curve(P)
    C._require_on_curve(Q)
    return _add(C, P, Q)


def _add(C: CurveQ, P: PointQ, Q: PointQ) -> PointQ:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if P.y + Q.y == 0:
            return INFINITY
        slope = (3 * P.x ** 2 + C.a) / (2 * P.y)
    else:
        slope = (Q.y - P.y) / (Q.x - P.x)
    x3 = slope ** 2 - P.x - Q.x
    y3 = slope * (P.x - x3) - P.y
    return PointQ(x3, y3)


def multiply(C: CurveQ, k: int, P: PointQ) -> PointQ:
    """k*P by double-and-add; negative k multiplies -P."""
    C._require_on_curve(P)
    if k < 0:
        k, P = -k, -P
    result, addend = INFINITY, P
    while k:
        if k & 1:
            result = _add(C, result, addend)
        addend = _add(C, addend, addend)
        k >>= 1
    return result


def point_order(C: CurveQ, P: PointQ, bound: Optional[int] = None) -> Optional[int]:
    """Order of P if it is at most `bound` (Mazur bound by default), else None."""
    C._require_on_curve(P)
    bound = get_config().mazur_order_bound if bound is None else bound
    current = P
    for k in range(1, bound + 1):
        if current.is_infinity:
            return k
        current = _add(C, current, P)
    return None


def _require_integral(C: CurveQ):
    if not C.is_integral:
        raise InvalidInputError(f"{C} does not have integer coefficients", code="non-integral")


def _integer_roots_of_depressed_cubic(a: int, c: int, budget: WorkBudget) -> List[int]:
    """Integer roots of x^3 + a*x + c."""
    if c == 0:
        roots = {0}
        if a <= 0:
            r = isqrt(-a)
            if r * r == -a:
                roots.update({r, -r})
        return sorted(roots)
    roots = []
    for d in divisors(c, budget):
        for x in (d, -d):
            budget.tick()
            if x ** 3 + a * x + c == 0:
                roots.append(x)
    return sorted(set(roots))


def nagell_lutz_candidates(C: CurveQ, budget: Optional[WorkBudget] = None) -> List[PointQ]:
    """Integral points with y = 0 or y^2 | 4a^3 + 27b^2, sorted by (x, y)."""
    _require_integral(C)
    budget = ensure_budget(budget)
    a, b = int(C.a), int(C.b)
    D = int(C.discriminant_quantity)

    points = []
    for y in [0] + square_divisors(D, budget):
        for x in _integer_roots_of_depressed_cubic(a, b - y * y, budget):
            points.append(PointQ(x, y))
            if y:
                points.append(PointQ(x, -y))
    points.sort(key=PointQ.sort_key)
    logger.debug("%d Nagell-Lutz candidates on %s", len(points), C)
    return points


@dataclass(frozen=True)
class TorsionGroup:
    """Rational torsion points of a curve with their group structure."""

    curve: CurveQ
    points: Tuple[PointQ, ...]
    structure: AbelianStructure
    candidates: Tuple[Tuple[PointQ, Optional[int]], ...] = ()

    @property
    def order(self) -> int:
        return len(self.points)

    def to_dict(self) -> Dict:
        return {
            'curve': self.curve.to_dict(),
            'order': self.order,
            'structure': self.structure.to_list(),
            'points': [P.to_dict() for P in self.points],
            'affine_point_count': sum(1 for P in self.points if not P.is_infinity),
            'candidates': [{'point': P.to_dict(), 'order': order} for P, order in self.candidates],
        }


def torsion_subgroup(C: CurveQ, budget: Optional[WorkBudget] = None) -> TorsionGroup:
    """Rational torsion of an integral curve.

    A Nagell-Lutz candidate is torsion iff some k <= 12 kills it; the
    structure is Z/(N/n) x Z/n where n is the largest point order.
    """
    budget = ensure_budget(budget)
    candidates = nagell_lutz_candidates(C, budget)
    orders = []
    for P in candidates:
        budget.tick()
        orders.append((P, point_order(C, P)))

    points = [INFINITY] + [P for P, order in orders if order is not None]
    group_order = len(points)
    max_order = max([1] + [order for _, order in orders if order is not None])
    if group_order % max_order:
        raise ConsistencyError(f"point orders {orders} incompatible with group order {group_order}")

    structure = smith_normal_form([[group_order // max_order, 0], [0, max_order]], budget)
    if structure.elementary_divisors not in MAZUR_STRUCTURES:
        raise ConsistencyError(f"structure {structure.to_list()} is not in Mazur's list")
    for P in points:
        for Q in points:
            if _add(C, P, Q) not in points:
                raise ConsistencyError(f"torsion set not closed: {P} + {Q}")

    return TorsionGroup(C, tuple(points), structure, tuple(orders))


def _reduce_mod(value: Fraction, p: int) -> int:
    return value.numerator * pow(value.denominator, -1, p) % p


def is_good_reduction(C: CurveQ, p: int) -> bool:
    D = C.discriminant_quantity
    bad = 2 * D.numerator * D.denominator * C.a.denominator * C.b.denominator
    return p > 2 and bad % p != 0


def count_points_mod_p(C: CurveQ, p: int) -> int:
    """#E(F_p) including the point at infinity, by direct enumeration."""
    cap = get_config().point_count_prime_cap
    if p > cap:
        raise LimitExceededError("point-count prime cap", cap, f"p = {p}")
    if not is_prime(p) or p == 2:
        raise InvalidInputError(f"{p} is not an odd prime", code="not-prime")
    if not is_good_reduction(C, p):
        raise InvalidInputError(f"{C} has bad reduction at {p}", code="bad-reduction")

    a, b = _reduce_mod(C.a, p), _reduce_mod(C.b, p)
    xs = np.arange(p, dtype=np.int64)
    rhs = ((xs * xs % p) * xs + a * xs + b) % p
    square_counts = np.bincount(xs * xs % p, minlength=p)
    return int(square_counts[rhs].sum()) + 1


def good_primes(C: CurveQ, count: Optional[int] = None) -> List[int]:
    """First `count` odd primes of good reduction."""
    count = get_config().reduction_check_primes if count is None else count
    primes, p = [], 2
    while len(primes) < count:
        p = int(nextprime(p))
        if is_good_reduction(C, p):
            primes.append(p)
    return primes


def reduction_gcd(C: CurveQ, count: Optional[int] = None) -> Tuple[int, Dict[int, int]]:
    """gcd of #E(F_p) over the first good odd primes, with the individual counts."""
    counts = {p: count_points_mod_p(C, p) for p in good_primes(C, count)}
    g = 0
    for n in counts.values():
        g = gcd(g, n)
    return g, counts
