"""Class groups of imaginary quadratic fields through reduced binary quadratic forms."""
import logging
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Dict, List, Optional, Tuple

from config.settings import get_config
from errors import ConsistencyError, InvalidInputError, LimitExceededError
from exact_arith import (AbelianStructure, WorkBudget, ensure_budget, is_prime, is_squarefree,
                         smith_decomposition, xgcd)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadField:
    """Q(sqrt(d)) for squarefree d < 0."""

    d: int

    def __post_init__(self):
        if self.d >= 0:
            raise InvalidInputError(f"d must be negative, got {self.d}", code="not-imaginary")
        if not is_squarefree(self.d):
            raise InvalidInputError(f"d = {self.d} is not squarefree", code="not-squarefree")

    @property
    def discriminant(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d


@dataclass(frozen=True, order=True)
class BinQuadForm:
    """a*x^2 + b*x*y + c*y^2."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        return b >= 0 or (abs(b) != a and a != c)

    def inverse(self) -> 'BinQuadForm':
        return reduce_form(BinQuadForm(self.a, -self.b, self.c))

    def to_list(self) -> List[int]:
        return [self.a, self.b, self.c]

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def _validate(f: BinQuadForm):
    if f.discriminant >= 0 or f.a <= 0:
        raise InvalidInputError(f"{f} is not positive definite", code="indefinite")
    if gcd(gcd(f.a, f.b), f.c) != 1:
        raise InvalidInputError(f"{f} is not primitive", code="imprimitive")


def _normalize(a: int, b: int, c: int) -> Tuple[int, int, int]:
    if -a < b <= a:
        return a, b, c
    r = (a - b) // (2 * a)
    return a, b + 2 * r * a, a * r * r + b * r + c


def reduce_form(f: BinQuadForm) -> BinQuadForm:
    """Equivalent reduced form: |b| <= a <= c, and b >= 0 if |b| = a or a = c."""
    _validate(f)
    a, b, c = _normalize(f.a, f.b, f.c)
    while a > c or (a == c and b < 0):
        s = (c + b) // (2 * c)
        a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        a, b, c = _normalize(a, b, c)
    return BinQuadForm(a, b, c)


def principal_form(discriminant: int) -> BinQuadForm:
    """Identity class of the given negative discriminant."""
    if discriminant >= 0 or discriminant % 4 not in (0, 1):
        raise InvalidInputError(f"{discriminant} is not a negative discriminant")
    b = discriminant % 2
    return BinQuadForm(1, b, (b * b - discriminant) // 4)


def compose(f: BinQuadForm, g: BinQuadForm) -> BinQuadForm:
    """Gauss composition, returned reduced."""
    _validate(f)
    _validate(g)
    if f.discriminant != g.discriminant:
        raise InvalidInputError(f"discriminants differ: {f.discriminant} vs {g.discriminant}",
                                code="discriminant-mismatch")
    if f.a > g.a:
        f, g = g, f
    a1, b1, c1 = f.a, f.b, f.c
    a2, b2, c2 = g.a, g.b, g.c
    s = (b1 + b2) // 2
    n = b2 - s

    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, y1, _ = xgcd(a2, a1)

    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = xgcd(s, d)
        y2 = -y2

    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return reduce_form(BinQuadForm(a3, b3, c3))


def form_power(f: BinQuadForm, k: int) -> BinQuadForm:
    """f^k by square-and-multiply; negative k uses the inverse."""
    if k < 0:
        f, k = f.inverse(), -k
    result = principal_form(f.discriminant)
    base = reduce_form(f)
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def form_order(f: BinQuadForm, bound: int, budget: Optional[WorkBudget] = None) -> int:
    """Order of the class of f, searched up to `bound`."""
    budget = ensure_budget(budget)
    identity = principal_form(f.discriminant)
    current = reduce_form(f)
    for k in range(1, bound + 1):
        if current == identity:
            return k
        budget.tick()
        current = compose(current, f)
    raise ConsistencyError(f"order of {f} exceeds {bound}")


def reduced_forms(discriminant: int, budget: Optional[WorkBudget] = None) -> List[BinQuadForm]:
    """All primitive reduced forms of a negative discriminant, sorted by (a, b, c)."""
    limit = get_config().quad_discriminant_limit
    if abs(discriminant) > limit:
        raise LimitExceededError("quadratic discriminant limit", limit, f"|D| = {abs(discriminant)}")
    budget = ensure_budget(budget)
    forms = []
    a_max = isqrt(abs(discriminant) // 3)
    for a in range(1, a_max + 1):
        for b in range(-a + 1, a + 1):
            budget.tick()
            if (b - discriminant) % 2:
                continue
            numerator = b * b - discriminant
            if numerator % (4 * a):
                continue
            c = numerator // (4 * a)
            if c < a or gcd(gcd(a, b), c) != 1:
                continue
            if b < 0 and a == c:
                continue
            forms.append(BinQuadForm(a, b, c))
    return sorted(forms)


@dataclass(frozen=True)
class QuadClassGroup:
    """Cl(D) as elementary divisors with matching generator forms."""

    discriminant: int
    h: int
    structure: AbelianStructure
    generators: Tuple[BinQuadForm, ...]
    forms: Tuple[BinQuadForm, ...]

    def l_rank(self, l: int) -> int:
        return self.structure.l_rank(l)

    def to_dict(self) -> Dict:
        return {
            'discriminant': self.discriminant,
            'h': self.h,
            'divisors': self.structure.to_list(),
            'generators': [g.to_list() for g in self.generators],
            'forms': [f.to_list() for f in self.forms],
        }


def _decompose(forms: List[BinQuadForm], budget: WorkBudget) -> Tuple[List[BinQuadForm], List[List[int]]]:
    """Pick generators in lexicographic order and record one relation per generator.

    Every element of the subgroup built so far is stored with its exponent
    vector over the generators chosen so far, so each new generator's power
    that falls back into the subgroup yields an exact relation row.
    """
    identity = principal_form(forms[0].discriminant)
    known: Dict[BinQuadForm, Tuple[int, ...]] = {identity: ()}
    generators: List[BinQuadForm] = []
    relations: List[List[int]] = []

    for g in forms:
        if g in known:
            continue
        k, power = 1, g
        while power not in known:
            budget.tick()
            power = compose(power, g)
            k += 1
        index = len(generators)
        landing = known[power]
        relations.append([-e for e in landing] + [0] * (index - len(landing)) + [k])

        expanded = {}
        for element, vector in known.items():
            padded = vector + (0,) * (index - len(vector))
            current = element
            for j in range(k):
                budget.tick()
                expanded[current] = padded + (j,)
                current = compose(current, g)
        known = expanded
        generators.append(g)

    width = len(generators)
    relations = [row + [0] * (width - len(row)) for row in relations]
    return generators, relations


def class_group(K: QuadField, budget: Optional[WorkBudget] = None) -> QuadClassGroup:
    """Class group of an imaginary quadratic field by full reduced-form enumeration."""
    budget = ensure_budget(budget)
    discriminant = K.discriminant
    forms = reduced_forms(discriminant, budget)
    h = len(forms)

    class_limit = get_config().quad_structure_class_limit
    if h > class_limit:
        raise LimitExceededError("quadratic structure class limit", class_limit, f"h = {h}")

    if h == 1:
        return QuadClassGroup(discriminant, 1, AbelianStructure(), (), tuple(forms))

    base, relations = _decompose(forms, budget)
    smith = smith_decomposition(relations, budget)
    structure = smith.structure
    if structure.free_rank or structure.order != h:
        raise ConsistencyError(f"relation lattice gives {structure} but h = {h}")

    generators = []
    for i, d in enumerate(smith.diagonal):
        if d == 1:
            continue
        g = principal_form(discriminant)
        for j, e in enumerate(smith.inverse_transform[i]):
            if e % h:
                g = compose(g, form_power(base[j], int(e) % h))
        if form_order(g, d, budget) != d:
            raise ConsistencyError(f"generator {g} does not have order {d}")
        generators.append(g)

    logger.debug("Cl(%d): h=%d structure=%s", discriminant, h, structure.to_list())
    return QuadClassGroup(discriminant, h, structure, tuple(generators), tuple(forms))


@dataclass(frozen=True)
class NormPowerClass:
    """Class of the norm-w ideal through u + sqrt(d), with its exact order."""

    field: QuadField
    u: int
    w: int
    p: int
    form: BinQuadForm
    reduced: BinQuadForm
    order: int

    def to_dict(self) -> Dict:
        return {
            'd': self.field.d,
            'discriminant': self.field.discriminant,
            'u': self.u,
            'w': self.w,
            'p': self.p,
            'form': self.form.to_list(),
            'reduced_form': self.reduced.to_list(),
            'order': self.order,
        }


def _norm_w_middle_coefficient(discriminant: int, d: int, u: int, w: int) -> int:
    """b with b^2 = D mod 4w such that the ideal (w, (b + sqrt(D))/2) contains u + sqrt(d)."""
    if discriminant == 4 * d:
        if gcd(w, 2 * u) != 1:
            raise InvalidInputError(f"gcd(w, 2u) = gcd({w}, {2 * u}) != 1", code="primitivity")
        return 2 * u % (2 * w)
    for b in (u % w, u % w + w):
        if (b - discriminant) % 2 == 0 and (b * b - discriminant) % (4 * w) == 0:
            return b
    raise InvalidInputError(f"no ideal of norm {w} through {u} + sqrt({d})", code="primitivity")


def norm_power_class(K: QuadField, u: int, w: int, p: int,
                     budget: Optional[WorkBudget] = None) -> NormPowerClass:
    """From u^2 - d = w^p, the class of the ideal of norm w containing u + sqrt(d)."""
    budget = ensure_budget(budget)
    if not is_prime(p):
        raise InvalidInputError(f"p = {p} is not prime", code="not-prime")
    if w <= 1:
        raise InvalidInputError(f"w must exceed 1, got {w}", code="norm-equation")
    if u * u - K.d != w ** p:
        raise InvalidInputError(f"{u}^2 - ({K.d}) != {w}^{p}", code="norm-equation")

    discriminant = K.discriminant
    b = _norm_w_middle_coefficient(discriminant, K.d, u, w)
    _, b, c = _normalize(w, b, (b * b - discriminant) // (4 * w))
    if gcd(gcd(w, b), c) != 1:
        raise InvalidInputError(f"form ({w},{b},{c}) is not primitive", code="primitivity")

    form = BinQuadForm(w, b, c)
    if form_power(form, p) != principal_form(discriminant):
        raise ConsistencyError(f"{form}^{p} is not principal")
    order = form_order(form, p, budget)
    return NormPowerClass(K, u, w, p, form, reduce_form(form), order)
