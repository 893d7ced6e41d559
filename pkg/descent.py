"""Rational points on y^2 = x^3 + n and the map P -> x - theta into K*/(K*)^2, K = Q(cbrt(-n))."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import integer_nthroot, legendre_symbol, nextprime
from sympy.ntheory import nthroot_mod

from config.settings import get_config
from cubic_field import (CubicClassGroup, PointClass, PureCubicField, SquareClass, class_from_point,
                         class_group_cubic, make_field, require_irreducible, square_class)
from elliptic_curve import CurveQ, PointQ
from errors import ConsistencyError, InvalidInputError, LimitExceededError
from exact_arith import WorkBudget, ensure_budget, f2_rank, is_squarefree


logger = logging.getLogger(__name__)

SCOPE = "lower-bound subgroup"

# Published Selmer subgroup orders, keyed by n
CLAIMED_SELMER_ORDERS = {17: 9}


def descent_parameter(C: CurveQ) -> int:
    """n for a curve y^2 = x^3 + n with T^3 + n irreducible and n squarefree.

    The cubic field code works with squarefree radicands only, so n = 4 or n = 12 are refused
    even though T^3 + n is irreducible.
    """
    if C.a != 0 or C.b.denominator != 1:
        raise InvalidInputError(f"{C} is not of the form y^2 = x^3 + n", code="not-pure-cubic")
    n = int(C.b)
    require_irreducible(n)
    if not is_squarefree(n):
        raise InvalidInputError(f"descent needs a squarefree n, got n = {n}", code="not-squarefree")
    return n


def descent_field(C: CurveQ) -> PureCubicField:
    """The cubic field generated by a root of T^3 + n, radical cubing to -n."""
    return make_field(-descent_parameter(C))


def point_search(C: CurveQ, H: int, budget: Optional[WorkBudget] = None) -> List[PointQ]:
    """Points with x = u/e^2, gcd(u, e) = 1, |u| <= H and e <= H^(1/4), sorted by (x, y)."""
    n = descent_parameter(C)
    limit = get_config().point_search_limit
    if H < 1:
        raise InvalidInputError(f"search bound must be positive, got {H}", code="search-bound")
    if H > limit:
        raise InvalidInputError(f"search bound {H} exceeds {limit}", code="search-bound")
    budget = ensure_budget(budget)

    e_max = int(integer_nthroot(H, 4)[0])
    points = []
    for e in range(1, e_max + 1):
        e2, e6 = e * e, e ** 6
        for u in range(-H, H + 1):
            budget.tick()
            if gcd(u, e) != 1:
                continue
            value = u ** 3 + n * e6
            if value < 0:
                continue
            r = isqrt(value)
            if r * r != value:
                continue
            x = Fraction(u, e2)
            points.append(PointQ(x, Fraction(r, e * e2)))
            if r:
                points.append(PointQ(x, Fraction(-r, e * e2)))
    points.sort(key=PointQ.sort_key)
    logger.debug("point search on %s up to H=%d: %d points", C, H, len(points))
    return points


def descent_image(F: PureCubicField, P: PointQ, budget: Optional[WorkBudget] = None) -> SquareClass:
    """Square class of x(P) - theta."""
    if P.is_infinity or P.y == 0:
        raise InvalidInputError(f"{P} is outside the domain of x - theta", code="two-torsion")
    return square_class(F, P.x - F.radical, budget)


@dataclass(frozen=True)
class DescentRow:
    point: PointQ
    square_class: SquareClass
    vector: Tuple[int, ...]

    def to_dict(self) -> Dict:
        return {'point': self.point.to_dict(), 'square_class': self.square_class.to_dict(),
                'vector': list(self.vector)}


@dataclass(frozen=True)
class DescentReport:
    """Image of the supplied points in K*/(K*)^2, optionally pushed into Cl(K)."""

    curve: CurveQ
    number_field: PureCubicField = field(compare=False, repr=False)
    points: Tuple[PointQ, ...] = ()
    excluded: Tuple[PointQ, ...] = ()
    columns: Tuple[str, ...] = ()
    rows: Tuple[DescentRow, ...] = ()
    f2_rank: int = 0
    basis: Tuple[PointQ, ...] = ()
    class_group: Optional[CubicClassGroup] = field(default=None, compare=False, repr=False)
    class_rows: Tuple[PointClass, ...] = ()

    @property
    def matrix(self) -> List[List[int]]:
        return [list(row.vector) for row in self.rows]

    @property
    def subgroup_order(self) -> int:
        return 2 ** self.f2_rank

    def to_dict(self) -> Dict:
        result = {
            'curve': self.curve.to_dict(),
            'field': self.number_field.to_dict(),
            'points': [P.to_dict() for P in self.points],
            'excluded': [P.to_dict() for P in self.excluded],
            'columns': list(self.columns),
            'rows': [row.to_dict() for row in self.rows],
            'f2_rank': self.f2_rank,
            'basis': [P.to_dict() for P in self.basis],
            'subgroup_order': self.subgroup_order,
            'scope': SCOPE,
        }
        if self.class_group is not None:
            result['class_group'] = {
                'h': self.class_group.h,
                'divisors': self.class_group.structure.to_list(),
            }
            result['class_rows'] = [row.to_dict() for row in self.class_rows]
            claimed = CLAIMED_SELMER_ORDERS.get(int(self.curve.b))
            if claimed is not None:
                result['selmer_claim'] = {
                    'claimed_order': claimed,
                    'computed_order': self.subgroup_order,
                    'scope': SCOPE,
                }
        return result


def _certified_basis(classes: Sequence[SquareClass], budget: WorkBudget) -> List[int]:
    """Indices of a maximal independent subset, decided by exact squareness of subset products."""
    basis: List[int] = []
    for i, cls in enumerate(classes):
        dependent = False
        for mask in range(1 << len(basis)):
            budget.tick()
            combo = cls
            for j, index in enumerate(basis):
                if mask >> j & 1:
                    combo = combo * classes[index]
            if combo.is_trivial():
                dependent = True
                break
        if not dependent:
            basis.append(i)
    return basis


def _characters(F: PureCubicField, classes: Sequence[SquareClass], avoid: int):
    """Quadratic characters at degree-one primes (q, theta - t), q not dividing `avoid`."""
    q = 3
    while True:
        q = int(nextprime(q))
        if avoid % q == 0:
            continue
        roots = nthroot_mod(F.m % q, 3, q, all_roots=True) or []
        for t in sorted(int(r) for r in roots):
            residues = [F.theta_residue(cls.representative, q, t) for cls in classes]
            if any(r is None or r == 0 for r in residues):
                yield f"chi_{q}_{t}", None
                continue
            yield f"chi_{q}_{t}", tuple(0 if legendre_symbol(r, q) == 1 else 1 for r in residues)


def two_descent_rank(C: CurveQ, points: Sequence[PointQ], budget: Optional[WorkBudget] = None) -> DescentReport:
    """F2-rank of the image of `points` under x - theta.

    Columns are valuation parities over the support, the real sign, and as
    many quadratic characters as needed for the matrix rank to reach the rank
    certified by exact squareness tests.
    """
    budget = ensure_budget(budget)
    n = descent_parameter(C)
    F = make_field(-n)

    affine, excluded = [], []
    for P in points:
        if not C.contains(P):
            raise InvalidInputError(f"{P} is not on {C}", code="off-curve")
        if P.is_infinity or P.y == 0:
            excluded.append(P)
        else:
            affine.append(P)

    classes = [descent_image(F, P, budget) for P in affine]
    primes = sorted({P for cls in classes for P, _ in cls.valuation_parity}, key=lambda P: P.sort_key())
    columns = [P.label for P in primes] + ['sign']
    vectors = [[cls.parity_map().get(P, 0) for P in primes] + [cls.sign] for cls in classes]

    basis = _certified_basis(classes, budget)
    rank = f2_rank(vectors)
    if rank < len(basis):
        limit = get_config().descent_character_limit
        tried = 0
        for label, bits in _characters(F, classes, 6 * n):
            tried += 1
            if tried > limit:
                raise LimitExceededError("descent character limit", limit,
                                         f"matrix rank {rank} below certified rank {len(basis)}")
            budget.tick()
            if bits is None:
                continue
            candidate = [v + [b] for v, b in zip(vectors, bits)]
            new_rank = f2_rank(candidate)
            if new_rank > rank:
                vectors, rank = candidate, new_rank
                columns.append(label)
            if rank == len(basis):
                break
    if rank != len(basis):
        raise ConsistencyError(f"matrix rank {rank} exceeds certified rank {len(basis)}")

    rows = tuple(DescentRow(P, cls, tuple(v)) for P, cls, v in zip(affine, classes, vectors))
    logger.info("descent on %s: %d points, f2_rank %d", C, len(affine), rank)
    return DescentReport(C, F, tuple(points), tuple(excluded), tuple(columns), rows, rank,
                         tuple(affine[i] for i in basis))


def selmer_to_classgroup(C: CurveQ, points: Sequence[PointQ],
                         budget: Optional[WorkBudget] = None) -> DescentReport:
    """Descent report plus, for each independent point, [a] with (x - theta) = a^2 * b in Cl(K)."""
    budget = ensure_budget(budget)
    report = two_descent_rank(C, points, budget)
    F = report.number_field
    group = class_group_cubic(F, budget)

    class_rows = []
    for P in report.basis:
        row = class_from_point(F, P.x, P.y, group, budget)
        if not row.relation_principal:
            raise ConsistencyError(f"[a]^2[b] is not principal for {P}")
        class_rows.append(row)

    return DescentReport(report.curve, F, report.points, report.excluded, report.columns, report.rows,
                         report.f2_rank, report.basis, group, tuple(class_rows))
