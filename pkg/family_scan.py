"""Finite-window scans of l-ranks over Q(sqrt(n - m^3)) and of 3-ranks over Q(cbrt(n))."""
import logging
from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Tuple

from sympy import integer_nthroot

from config.settings import get_config
from cubic_field import class_group_cubic, make_field
from errors import InvalidInputError, LimitExceededError
from exact_arith import WorkBudget, is_prime, is_squarefree, squarefree_kernel
from quad_class import NormPowerClass, QuadClassGroup, QuadField, class_group, norm_power_class


logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_SKIPPED = "skipped"


@dataclass(frozen=True)
class FamilyRow:
    """One member Q(sqrt(n - m^3)) of a quadratic family."""

    m: int
    raw: int
    d: int
    discriminant: int
    status: str = STATUS_OK
    h: Optional[int] = None
    divisors: Tuple[int, ...] = ()
    l_rank: Optional[int] = None
    specialization: Optional[NormPowerClass] = None
    reason: str = ""

    @property
    def rank(self) -> Optional[int]:
        """The l-rank column used by the constancy summary."""
        return self.l_rank

    def to_dict(self) -> Dict:
        result = {
            'm': self.m,
            'raw': self.raw,
            'd': self.d,
            'discriminant': self.discriminant,
            'status': self.status,
            'h': self.h,
            'divisors': list(self.divisors),
            'l_rank': self.l_rank,
            'specialization': 'n/a',
            'reason': self.reason,
        }
        if self.specialization is not None:
            spec = self.specialization
            result['specialization'] = {'u': spec.u, 'w': spec.w, 'order': spec.order,
                                        'form': spec.reduced.to_list()}
        return result


@dataclass(frozen=True)
class CubicFamilyRow:
    """One pure cubic field Q(cbrt(n)) of a cubic scan."""

    n: int
    status: str = STATUS_OK
    discriminant: Optional[int] = None
    h: Optional[int] = None
    divisors: Tuple[int, ...] = ()
    three_rank: Optional[int] = None
    reason: str = ""

    @property
    def rank(self) -> Optional[int]:
        """The 3-rank column used by the constancy summary."""
        return self.three_rank

    def to_dict(self) -> Dict:
        return {
            'n': self.n,
            'status': self.status,
            'discriminant': self.discriminant,
            'h': self.h,
            'divisors': list(self.divisors),
            'three_rank': self.three_rank,
            'reason': self.reason,
        }


@dataclass(frozen=True)
class FamilyReport:
    """Rows of one scan with its parameters and rank summary."""

    kind: str
    parameters: Dict[str, int]
    rows: Tuple = ()
    summary: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            'kind': self.kind,
            'parameters': dict(self.parameters),
            'rows': [row.to_dict() for row in self.rows],
            'summary': dict(self.summary),
        }


def summarize_ranks(rows, key: str) -> Dict:
    """min/max/histogram of the rank column and a literal constancy verdict.

    Counterexamples are the rows whose rank differs from the most common rank
    (the smaller rank wins a tie).
    """
    ranks = [(getattr(row, key), row.rank) for row in rows if row.status == STATUS_OK]
    skipped = [getattr(row, key) for row in rows if row.status == STATUS_SKIPPED]
    summary = {'skipped': skipped, 'row_count': len(rows)}
    if not ranks:
        summary.update({'min': None, 'max': None, 'histogram': {}, 'verdict': 'vacuous', 'counterexamples': []})
        return summary

    histogram = Counter(rank for _, rank in ranks)
    modal = min(histogram, key=lambda rank: (-histogram[rank], rank))
    summary.update({
        'min': min(histogram),
        'max': max(histogram),
        'histogram': {str(rank): histogram[rank] for rank in sorted(histogram)},
        'verdict': 'constant' if len(histogram) == 1 else 'not constant',
        'counterexamples': [k for k, rank in ranks if rank != modal],
    })
    return summary


class FamilyScanEngine:
    """Runs family scans row by row, each row on its own work budget."""

    def __init__(self):
        self.quad_groups: Dict[int, QuadClassGroup] = {}

    def quad_class_group(self, d: int, budget: WorkBudget) -> QuadClassGroup:
        """Class group of Q(sqrt(d)), memoized across rows sharing a kernel d."""
        if d not in self.quad_groups:
            self.quad_groups[d] = class_group(QuadField(d), budget)
        return self.quad_groups[d]

    def find_specialization(self, K: QuadField, l: int, budget: WorkBudget) -> Optional[NormPowerClass]:
        """Smallest u <= U_max with u^2 - d = w^l, w > 1, u + sqrt(d) primitive and prime to w."""
        u_max = get_config().specialization_u_max
        for u in range(1, u_max + 1):
            budget.tick()
            value = u * u - K.d
            w, exact = integer_nthroot(value, l)
            w = int(w)
            if not exact or w <= 1 or gcd(u, w) != 1:
                continue
            if K.discriminant == K.d and u % 2:
                continue
            try:
                return norm_power_class(K, u, w, l, budget)
            except InvalidInputError as exc:
                logger.debug("u=%d skipped in Q(sqrt(%d)): %s", u, K.d, exc)
        return None

    def quadratic_row(self, n: int, l: int, m: int) -> FamilyRow:
        """Row for m; a limit hit marks the row skipped instead of failing the scan."""
        raw = n - m ** 3
        d, _ = squarefree_kernel(raw)
        K = QuadField(d)
        budget = WorkBudget()
        try:
            group = self.quad_class_group(d, budget)
            special = self.find_specialization(K, l, budget)
        except LimitExceededError as exc:
            logger.info("row m=%d skipped: %s", m, exc)
            return FamilyRow(m, raw, d, K.discriminant, STATUS_SKIPPED, reason=str(exc))
        return FamilyRow(m, raw, d, K.discriminant, STATUS_OK, group.h, group.structure.elementary_divisors,
                         group.l_rank(l), special)

    def scan_quadratic(self, n: int, l: int, m_from: int, m_to: int) -> FamilyReport:
        """Rows for m_from..m_to with n - m^3 < 0, in m order."""
        if not is_prime(l):
            raise InvalidInputError(f"l = {l} is not prime", code="not-prime")
        if m_from > m_to:
            raise InvalidInputError(f"empty range: m_from {m_from} > m_to {m_to}", code="bad-range")

        rows, excluded = [], []
        for m in range(m_from, m_to + 1):
            if n - m ** 3 >= 0:
                excluded.append(m)
                continue
            rows.append(self.quadratic_row(n, l, m))

        summary = summarize_ranks(rows, 'm')
        summary['excluded'] = excluded
        logger.info("quadratic scan n=%d l=%d m=[%d,%d]: %d rows, verdict %s",
                    n, l, m_from, m_to, len(rows), summary['verdict'])
        return FamilyReport('quadratic', {'n': n, 'l': l, 'm_from': m_from, 'm_to': m_to},
                            tuple(rows), summary)

    def cubic_row(self, n: int) -> CubicFamilyRow:
        """Row for Q(cbrt(n)); non-squarefree or small n are skipped with a reason."""
        if abs(n) < 2:
            return CubicFamilyRow(n, STATUS_SKIPPED, reason="|n| < 2")
        if not is_squarefree(n):
            return CubicFamilyRow(n, STATUS_SKIPPED, reason="not squarefree")
        F = make_field(n)
        try:
            group = class_group_cubic(F, WorkBudget())
        except LimitExceededError as exc:
            logger.info("row n=%d skipped: %s", n, exc)
            return CubicFamilyRow(n, STATUS_SKIPPED, F.discriminant, reason=str(exc))
        return CubicFamilyRow(n, STATUS_OK, F.discriminant, group.h, group.structure.elementary_divisors,
                              group.l_rank(3))

    def scan_cubic(self, n_from: int, n_to: int) -> FamilyReport:
        """Rows for n_from..n_to in n order."""
        if n_from > n_to:
            raise InvalidInputError(f"empty range: from {n_from} > to {n_to}", code="bad-range")
        rows = [self.cubic_row(n) for n in range(n_from, n_to + 1)]
        summary = summarize_ranks(rows, 'n')
        return FamilyReport('cubic', {'from': n_from, 'to': n_to}, tuple(rows), summary)


def scan_quadratic(n: int, l: int, m_from: int, m_to: int) -> FamilyReport:
    """Quadratic scan on a fresh engine."""
    return FamilyScanEngine().scan_quadratic(n, l, m_from, m_to)


def scan_cubic(n_from: int, n_to: int) -> FamilyReport:
    """Cubic scan on a fresh engine."""
    return FamilyScanEngine().scan_cubic(n_from, n_to)


def quadratic_torsion_claim(report: FamilyReport) -> List[Dict]:
    """Per-row truth of "Cl contains elements of order 2 and 4" for the rows of a scan."""
    result = []
    for row in report.rows:
        if row.status != STATUS_OK:
            continue
        has_two = any(d % 2 == 0 for d in row.divisors)
        has_four = any(d % 4 == 0 for d in row.divisors)
        result.append({'m': row.m, 'd': row.d, 'h': row.h, 'holds': has_two and has_four})
    return result
