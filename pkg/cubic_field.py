"""Pure cubic fields Q(theta), theta^3 = m squarefree.

Elements are kept on the power basis 1, theta, theta^2 with exact rational
coefficients; ideals are Z-modules in Hermite normal form over the integral
basis 1, theta, w where w = theta^2, or w = (1 + s*theta + theta^2)/3 when
m = s (mod 9) for s = +1 or -1.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import Poly, Rational, multiplicity, primerange, symbols

from config.settings import get_config
from errors import ConsistencyError, InvalidInputError, LimitExceededError
from exact_arith import (AbelianStructure, SmithForm, WorkBudget, ensure_budget, factor,
                         hermite_normal_form, is_prime, is_squarefree, perfect_power,
                         smith_decomposition)


logger = logging.getLogger(__name__)

T = symbols('T')

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class CubicNumber:
    """a + b*theta + c*theta^2 with theta^3 = m."""

    m: int
    coeffs: Tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', tuple(Fraction(c) for c in self.coeffs))

    def _coerce(self, other) -> Optional['CubicNumber']:
        if isinstance(other, CubicNumber):
            if other.m != self.m:
                raise InvalidInputError(f"elements of different fields (m={self.m}, m={other.m})")
            return other
        if isinstance(other, (int, Fraction)):
            return CubicNumber(self.m, (other, 0, 0))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CubicNumber(self.m, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CubicNumber(self.m, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a0, a1, a2 = self.coeffs
        b0, b1, b2 = other.coeffs
        m = self.m
        return CubicNumber(m, (
            a0 * b0 + m * (a1 * b2 + a2 * b1),
            a0 * b1 + a1 * b0 + m * a2 * b2,
            a0 * b2 + a1 * b1 + a2 * b0,
        ))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise InvalidInputError("division by zero")
            return CubicNumber(self.m, tuple(x / other for x in self.coeffs))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = CubicNumber(self.m, (1, 0, 0)), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_rational(self) -> bool:
        return self.coeffs[1] == 0 and self.coeffs[2] == 0

    def trace(self) -> Fraction:
        return 3 * self.coeffs[0]

    def second_symmetric(self) -> Fraction:
        a, b, c = self.coeffs
        return 3 * a * a - 3 * self.m * b * c

    def norm(self) -> Fraction:
        a, b, c = self.coeffs
        m = self.m
        return a ** 3 + m * b ** 3 + m * m * c ** 3 - 3 * m * a * b * c

    def real_sign(self) -> int:
        """Sign at the real embedding; equals the sign of the norm."""
        n = self.norm()
        if n == 0:
            raise InvalidInputError("zero has no sign")
        return 1 if n > 0 else -1

    def charpoly(self) -> List[Fraction]:
        """Coefficients of T^3 - Tr*T^2 + e2*T - N, leading coefficient first."""
        return [Fraction(1), -self.trace(), self.second_symmetric(), -self.norm()]

    def inverse(self) -> 'CubicNumber':
        _, c2, c1, c0 = self.charpoly()
        if c0 == 0:
            raise InvalidInputError("zero is not invertible", code="zero")
        return (self * self + self * c2 + c1) / -c0

    def to_list(self) -> List[Fraction]:
        return list(self.coeffs)

    def __str__(self) -> str:
        a, b, c = self.coeffs
        return f"{a} + {b}*t + {c}*t^2"


@dataclass(frozen=True)
class CubicIdeal:
    """Integral ideal as an upper-triangular HNF over the integral basis."""

    basis: Tuple[Tuple[int, int, int], ...]

    @property
    def norm(self) -> int:
        return self.basis[0][0] * self.basis[1][1] * self.basis[2][2]

    @property
    def is_unit(self) -> bool:
        return self.norm == 1

    def to_dict(self) -> Dict:
        return {'hnf': [list(row) for row in self.basis], 'norm': self.norm}


UNIT_IDEAL = CubicIdeal(((1, 0, 0), (0, 1, 0), (0, 0, 1)))


@dataclass(frozen=True)
class PrimeIdeal:
    """Prime ideal above p with ramification e and residue degree f."""

    p: int
    e: int
    f: int
    ideal: CubicIdeal
    label: str
    theta_residue: Optional[int] = None

    @property
    def norm(self) -> int:
        return self.p ** self.f

    def sort_key(self) -> Tuple:
        return (self.p, self.f, self.ideal.basis)

    def to_dict(self) -> Dict:
        return {'label': self.label, 'p': self.p, 'e': self.e, 'f': self.f, 'ideal': self.ideal.to_dict()}


class PureCubicField:
    """Q(cbrt(m)) for squarefree m with |m| >= 2.

    Q(cbrt(-m)) = Q(cbrt(m)): the field is built on m' = |m| and `radical`
    is the element whose cube is the signed radicand.
    """

    def __init__(self, m: int):
        if abs(m) < 2:
            raise InvalidInputError(f"|m| must be at least 2, got {m}", code="bad-radicand")
        if not is_squarefree(m):
            raise InvalidInputError(f"m = {m} is not squarefree", code="not-squarefree")
        self.radicand = m
        self.m = abs(m)
        self.negated = m < 0
        self.index3 = self.m % 9 in (1, 8)
        self._omega_sign = 1 if self.m % 9 == 1 else -1
        self.discriminant = -3 * self.m ** 2 if self.index3 else -27 * self.m ** 2
        self.minkowski_bound = (4 / math.pi) * (6 / 27) * math.sqrt(abs(self.discriminant))

        self.one = CubicNumber(self.m, (1, 0, 0))
        self.theta = CubicNumber(self.m, (0, 1, 0))
        self.radical = -self.theta if self.negated else self.theta
        if self.index3:
            omega = CubicNumber(self.m, (Fraction(1, 3), Fraction(self._omega_sign, 3), Fraction(1, 3)))
        else:
            omega = CubicNumber(self.m, (0, 0, 1))
        self.basis = (self.one, self.theta, omega)

        self._prime_cache: Dict[int, Tuple[PrimeIdeal, ...]] = {}
        self._power_cache: Dict[Tuple[CubicIdeal, int], CubicIdeal] = {}

    def __repr__(self) -> str:
        return f"PureCubicField({self.radicand})"

    # Elements

    def element(self, value: Union[Scalar, CubicNumber, Sequence[Scalar]]) -> CubicNumber:
        """Coerce an int, Fraction, power-basis triple or CubicNumber into this field."""
        if isinstance(value, CubicNumber):
            if value.m != self.m:
                raise InvalidInputError(f"element of Q(cbrt({value.m})) used in {self!r}")
            return value
        if isinstance(value, (int, Fraction)):
            return CubicNumber(self.m, (value, 0, 0))
        return CubicNumber(self.m, tuple(value))

    def to_integral(self, alpha: CubicNumber) -> Tuple[Fraction, Fraction, Fraction]:
        """Coordinates over the integral basis (integers iff alpha is an algebraic integer)."""
        a, b, c = self.element(alpha).coeffs
        if not self.index3:
            return a, b, c
        return a - c, b - self._omega_sign * c, 3 * c

    def from_integral(self, coords: Sequence[int]) -> CubicNumber:
        x, y, z = coords
        return x * self.basis[0] + y * self.basis[1] + z * self.basis[2]

    def is_integral(self, alpha: CubicNumber) -> bool:
        return all(c.denominator == 1 for c in self.to_integral(alpha))

    def integral_part(self, alpha: CubicNumber) -> Tuple[CubicNumber, int]:
        """(beta, den) with alpha = beta/den, beta integral and den a positive integer."""
        den = 1
        for c in self.to_integral(alpha):
            den = den * c.denominator // math.gcd(den, c.denominator)
        return self.element(alpha) * den, den

    def coords_norm(self, coords: Sequence[int]) -> int:
        """Norm of the integral element with the given integral-basis coordinates."""
        x, y, z = coords
        m = self.m
        if not self.index3:
            return x ** 3 + m * y ** 3 + m * m * z ** 3 - 3 * m * x * y * z
        s = self._omega_sign
        a, b = 3 * x + z, 3 * y + s * z
        return (a ** 3 + m * b ** 3 + m * m * z ** 3 - 3 * m * a * b * z) // 27

    # Ideals

    def _module(self, elements: Sequence[CubicNumber]) -> CubicIdeal:
        rows = []
        for element in elements:
            coords = self.to_integral(element)
            if any(c.denominator != 1 for c in coords):
                raise InvalidInputError(f"{element} is not integral", code="non-integral")
            if any(coords):
                rows.append([int(c) for c in coords])
        hnf = hermite_normal_form(rows)
        if len(hnf) != 3:
            raise InvalidInputError("generators do not span a nonzero ideal", code="zero-ideal")
        return CubicIdeal(tuple(hnf))

    def ideal(self, generators: Sequence[Union[Scalar, CubicNumber]]) -> CubicIdeal:
        """Ideal generated by integral elements."""
        elements = [self.element(g) for g in generators]
        return self._module([g * w for g in elements if not g.is_zero for w in self.basis])

    def principal_ideal(self, alpha: CubicNumber) -> CubicIdeal:
        if self.element(alpha).is_zero:
            raise InvalidInputError("the zero ideal is excluded", code="zero")
        return self.ideal([alpha])

    def multiply(self, I: CubicIdeal, J: CubicIdeal) -> CubicIdeal:
        if I.is_unit:
            return J
        if J.is_unit:
            return I
        products = [self.from_integral(r) * self.from_integral(s) for r in I.basis for s in J.basis]
        return self._module(products)

    def power(self, I: CubicIdeal, k: int) -> CubicIdeal:
        if k < 0:
            raise InvalidInputError("negative ideal powers are not integral")
        key = (I, k)
        if key not in self._power_cache:
            if k == 0:
                result = UNIT_IDEAL
            elif k == 1:
                result = I
            else:
                result = self.multiply(self.power(I, k - 1), I)
            self._power_cache[key] = result
        return self._power_cache[key]

    def contains(self, I: CubicIdeal, alpha: Union[CubicNumber, Sequence[int]]) -> bool:
        """Membership of an element (or integral coordinate vector) in I."""
        if isinstance(alpha, CubicNumber):
            coords = self.to_integral(alpha)
            if any(c.denominator != 1 for c in coords):
                return False
            target = [int(c) for c in coords]
        else:
            target = list(alpha)
        for i, row in enumerate(I.basis):
            if target[i] % row[i]:
                return False
            q = target[i] // row[i]
            target = [t - q * r for t, r in zip(target, row)]
        return not any(target)

    def ideal_contains(self, I: CubicIdeal, J: CubicIdeal) -> bool:
        """True when J is a subset of I."""
        return J.norm % I.norm == 0 and all(self.contains(I, row) for row in J.basis)

    # Primes

    def factor_prime(self, p: int) -> Tuple[PrimeIdeal, ...]:
        """Prime ideals above p, each with (e, f); the product is checked against (p)."""
        if not is_prime(p):
            raise InvalidInputError(f"{p} is not prime", code="not-prime")
        if p not in self._prime_cache:
            if p == 3 and self.index3:
                primes = self._split_three()
            else:
                primes = self._kummer_dedekind(p)
            primes = tuple(sorted(primes, key=PrimeIdeal.sort_key))
            primes = tuple(PrimeIdeal(P.p, P.e, P.f, P.ideal, f"P{p}_{i}", P.theta_residue)
                           for i, P in enumerate(primes))
            self._verify_prime_product(p, primes)
            self._prime_cache[p] = primes
        return self._prime_cache[p]

    def _kummer_dedekind(self, p: int) -> List[PrimeIdeal]:
        _, factors = Poly(T ** 3 - self.m, T, modulus=p).factor_list()
        primes = []
        for g, e in factors:
            coeffs = [int(c) % p for c in reversed(g.all_coeffs())]
            g_theta = sum((c * self.theta ** k for k, c in enumerate(coeffs)), self.element(0))
            residue = (-coeffs[0]) % p if g.degree() == 1 else None
            primes.append(PrimeIdeal(p, int(e), g.degree(), self.ideal([p, g_theta]), "", residue))
        return primes

    def _split_three(self) -> List[PrimeIdeal]:
        """3 = P^2 * Q when m = +-1 (mod 9); both primes have residue degree 1."""
        t = self.m % 3
        found: List[CubicIdeal] = []
        for r in range(3):
            I = self.ideal([3, self.theta - t, self.basis[2] - r])
            if I.norm == 3 and I not in found:
                found.append(I)
        primes = []
        for I in found:
            candidate = PrimeIdeal(3, 1, 1, I, "", t)
            primes.append(PrimeIdeal(3, self.element_valuation(self.element(3), candidate), 1, I, "", t))
        if sorted(P.e for P in primes) != [1, 2]:
            raise ConsistencyError(f"3 does not split as P^2*Q in {self!r}: {[P.e for P in primes]}")
        return primes

    def _verify_prime_product(self, p: int, primes: Sequence[PrimeIdeal]):
        if sum(P.e * P.f for P in primes) != 3:
            raise ConsistencyError(f"sum of e*f over primes above {p} is not 3 in {self!r}")
        product = UNIT_IDEAL
        for P in primes:
            product = self.multiply(product, self.power(P.ideal, P.e))
        if product != self.ideal([p]):
            raise ConsistencyError(f"prime factorization of ({p}) does not multiply back in {self!r}")

    def prime_power(self, P: PrimeIdeal, k: int) -> CubicIdeal:
        return self.power(P.ideal, k)

    def element_valuation(self, alpha: CubicNumber, P: PrimeIdeal) -> int:
        """v_P(alpha) for nonzero alpha."""
        alpha = self.element(alpha)
        if alpha.is_zero:
            raise InvalidInputError("valuation of zero is undefined", code="zero")
        beta, den = self.integral_part(alpha)
        norm = abs(int(beta.norm()))
        k = 0
        while norm % (P.p ** (P.f * (k + 1))) == 0 and self.contains(self.prime_power(P, k + 1), beta):
            k += 1
        return k - P.e * multiplicity(P.p, den)

    def ideal_valuation(self, I: CubicIdeal, P: PrimeIdeal) -> int:
        k = 0
        while self.ideal_contains(self.prime_power(P, k + 1), I):
            k += 1
        return k

    def factor_ideal(self, I: CubicIdeal, budget: Optional[WorkBudget] = None) -> List[Tuple[PrimeIdeal, int]]:
        """Prime ideal factorization of an integral ideal."""
        result = []
        if I.is_unit:
            return result
        for p, exponent in factor(I.norm, budget).factors:
            total = 0
            for P in self.factor_prime(p):
                v = self.ideal_valuation(I, P)
                if v:
                    result.append((P, v))
                    total += v * P.f
            if total != exponent:
                raise ConsistencyError(f"valuations above {p} do not account for the norm of {I}")
        return result

    def element_factorization(self, alpha: CubicNumber,
                              budget: Optional[WorkBudget] = None) -> List[Tuple[PrimeIdeal, int]]:
        """Valuations of alpha at every prime above its norm numerator and denominator, zeros included."""
        alpha = self.element(alpha)
        if alpha.is_zero:
            raise InvalidInputError("zero has no factorization", code="zero")
        beta, den = self.integral_part(alpha)
        support = set()
        for n in (int(beta.norm()), den):
            if abs(n) > 1:
                support.update(factor(n, budget).primes)
        result = []
        for p in sorted(support):
            for P in self.factor_prime(p):
                result.append((P, self.element_valuation(alpha, P)))
        return result

    def ideal_from_exponents(self, exponents: Sequence[Tuple[PrimeIdeal, int]]) -> CubicIdeal:
        result = UNIT_IDEAL
        for P, k in exponents:
            if k:
                result = self.multiply(result, self.prime_power(P, k))
        return result

    # Squares

    def square_root(self, alpha: CubicNumber) -> Optional[CubicNumber]:
        """Exact square root of alpha in the field, or None.

        If beta^2 = alpha and beta has characteristic polynomial
        T^3 - t1*T^2 + t2*T - s, then s^2 = N(alpha), t1^2 - 2*t2 = Tr(alpha)
        and t2^2 - 2*t1*s is alpha's second symmetric function, so t1 is a
        rational root of a quartic and beta = (t1*alpha + s)/(alpha + t2).
        """
        alpha = self.element(alpha)
        if alpha.is_zero:
            return alpha
        if alpha.is_rational:
            root = _rational_sqrt(alpha.coeffs[0])
            return None if root is None else self.element(root)

        s = _rational_sqrt(alpha.norm())
        if s is None:
            return None
        A1 = alpha.trace()
        A2 = alpha.second_symmetric()
        quartic = Poly([1, 0, _sym(-2 * A1), _sym(-8 * s), _sym(A1 * A1 - 4 * A2)], T, domain='QQ')
        for root in sorted(quartic.ground_roots()):
            t1 = Fraction(int(root.p), int(root.q))
            t2 = (t1 * t1 - A1) / 2
            denominator = alpha + t2
            if denominator.is_zero:
                continue
            beta = (alpha * t1 + s) / denominator
            if beta * beta == alpha:
                return beta
        return None

    def is_square(self, alpha: CubicNumber) -> bool:
        return self.square_root(alpha) is not None

    def theta_residue(self, alpha: CubicNumber, q: int, t: int) -> Optional[int]:
        """Image of alpha under theta -> t in F_q, or None when a denominator vanishes mod q."""
        value = 0
        for k, c in enumerate(self.element(alpha).coeffs):
            if c.denominator % q == 0:
                return None
            value += c.numerator * pow(c.denominator, -1, q) * pow(t, k, q)
        return value % q

    def to_dict(self) -> Dict:
        return {
            'm': self.radicand,
            'normalized_m': self.m,
            'negated': self.negated,
            'index3': self.index3,
            'integral_basis': [w.to_list() for w in self.basis],
            'discriminant': self.discriminant,
            'minkowski_bound': self.minkowski_bound,
        }


def _sym(value: Fraction) -> Rational:
    return Rational(value.numerator, value.denominator)


def _rational_sqrt(value: Fraction) -> Optional[Fraction]:
    value = Fraction(value)
    if value < 0:
        return None
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def make_field(m: int) -> PureCubicField:
    """Build Q(cbrt(m)) for squarefree m, |m| >= 2."""
    return PureCubicField(m)


def factor_prime(F: PureCubicField, p: int) -> List[Tuple[PrimeIdeal, int, int]]:
    """(prime ideal, e, f) for every prime above p."""
    return [(P, P.e, P.f) for P in F.factor_prime(p)]


def ideal_from_generators(F: PureCubicField, generators: Sequence[Union[Scalar, CubicNumber]]) -> CubicIdeal:
    return F.ideal(generators)


def multiply_ideals(F: PureCubicField, I: CubicIdeal, J: CubicIdeal) -> CubicIdeal:
    return F.multiply(I, J)


def ideal_power(F: PureCubicField, I: CubicIdeal, k: int) -> CubicIdeal:
    return F.power(I, k)


def contains(F: PureCubicField, I: CubicIdeal, alpha: CubicNumber) -> bool:
    return F.contains(I, alpha)


def valuation(F: PureCubicField, alpha: Union[CubicNumber, CubicIdeal], P: PrimeIdeal) -> int:
    """v_P of a nonzero element or an integral ideal."""
    if isinstance(alpha, CubicIdeal):
        return F.ideal_valuation(alpha, P)
    return F.element_valuation(alpha, P)


def factor_ideal(F: PureCubicField, I: CubicIdeal) -> List[Tuple[PrimeIdeal, int]]:
    return F.factor_ideal(I)


def is_square(F: PureCubicField, alpha: CubicNumber) -> bool:
    return F.is_square(alpha)


@dataclass(frozen=True)
class SquareClass:
    """Class of a nonzero element in K*/(K*)^2."""

    number_field: PureCubicField = field(compare=False, repr=False)
    representative: CubicNumber = None
    valuation_parity: Tuple[Tuple[PrimeIdeal, int], ...] = ()
    sign: int = 0

    def parity_map(self) -> Dict[PrimeIdeal, int]:
        return dict(self.valuation_parity)

    def odd_primes(self) -> List[PrimeIdeal]:
        return sorted((P for P, bit in self.valuation_parity if bit), key=PrimeIdeal.sort_key)

    def __mul__(self, other: 'SquareClass') -> 'SquareClass':
        parity = self.parity_map()
        for P, bit in other.valuation_parity:
            parity[P] = parity.get(P, 0) ^ bit
        ordered = tuple(sorted(parity.items(), key=lambda item: item[0].sort_key()))
        return SquareClass(self.number_field, self.representative * other.representative, ordered, self.sign ^ other.sign)

    def is_trivial(self) -> bool:
        if self.sign or self.odd_primes():
            return False
        return self.number_field.is_square(self.representative)

    def same_class(self, other: 'SquareClass') -> bool:
        """True iff the two representatives differ by a square."""
        if self.sign != other.sign or self.odd_primes() != other.odd_primes():
            return False
        return self.number_field.is_square(self.representative * other.representative)

    def to_dict(self) -> Dict:
        return {
            'representative': self.representative.to_list(),
            'odd_primes': [P.label for P in self.odd_primes()],
            'parity': {P.label: bit for P, bit in self.valuation_parity},
            'sign': self.sign,
        }


def square_class(F: PureCubicField, alpha: CubicNumber, budget: Optional[WorkBudget] = None) -> SquareClass:
    """Square class of a nonzero element with its valuation parities."""
    alpha = F.element(alpha)
    if alpha.is_zero:
        raise InvalidInputError("zero has no square class", code="zero")
    parity = tuple((P, v % 2) for P, v in F.element_factorization(alpha, budget))
    sign = 1 if alpha.real_sign() < 0 else 0
    return SquareClass(F, alpha, parity, sign)


@dataclass(frozen=True)
class CubicClassGroup:
    """Cl(F) from a factor base below the Minkowski bound and harvested relations."""

    number_field: PureCubicField = field(compare=False, repr=False)
    factor_base: Tuple[PrimeIdeal, ...] = ()
    relation_matrix: Tuple[Tuple[int, ...], ...] = ()
    smith: Optional[SmithForm] = field(default=None, compare=False, repr=False)
    sweep_radius: int = 0
    relation_count: int = 0
    _prime_vectors: Dict[PrimeIdeal, Tuple[int, ...]] = field(default_factory=dict, compare=False, repr=False)

    @property
    def structure(self) -> AbelianStructure:
        if self.smith is None:
            return AbelianStructure()
        return self.smith.structure

    @property
    def h(self) -> int:
        return self.structure.order

    def l_rank(self, l: int) -> int:
        return self.structure.l_rank(l)

    def _nontrivial_indices(self) -> List[int]:
        if self.smith is None:
            return []
        return [i for i, d in enumerate(self.smith.diagonal) if d != 1]

    def class_of_vector(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """Class coordinates (one per elementary divisor) of a factor-base exponent vector."""
        if self.smith is None:
            return ()
        coords = self.smith.coordinates(vector)
        return tuple(coords[i] for i in self._nontrivial_indices())

    def order_of(self, cls: Sequence[int]) -> int:
        order = 1
        for c, d in zip(cls, self.structure.elementary_divisors):
            k = d // math.gcd(c, d)
            order = order * k // math.gcd(order, k)
        return order

    def add_classes(self, *classes: Sequence[int]) -> Tuple[int, ...]:
        divisors = self.structure.elementary_divisors
        return tuple(sum(c[i] for c in classes) % d for i, d in enumerate(divisors))

    def scale_class(self, cls: Sequence[int], k: int) -> Tuple[int, ...]:
        return tuple(c * k % d for c, d in zip(cls, self.structure.elementary_divisors))

    def _prime_vector(self, P: PrimeIdeal, budget: WorkBudget) -> Tuple[int, ...]:
        if P in self.factor_base:
            vector = [0] * len(self.factor_base)
            vector[self.factor_base.index(P)] = 1
            return tuple(vector)
        if P not in self._prime_vectors:
            self._prime_vectors[P] = self._express_outside_prime(P, budget)
        return self._prime_vectors[P]

    def _express_outside_prime(self, P: PrimeIdeal, budget: WorkBudget) -> Tuple[int, ...]:
        """Write [P] over the factor base through some alpha in P with N(alpha)/N(P) smooth."""
        F = self.number_field
        fb_primes = sorted({Q.p for Q in self.factor_base})
        max_radius = get_config().cubic_max_sweep_radius
        for x in _sweep(0, max_radius):
            budget.tick()
            coords = [sum(x[i] * P.ideal.basis[i][j] for i in range(3)) for j in range(3)]
            norm = abs(F.coords_norm(coords))
            if norm % P.norm or (norm // P.norm) % P.p == 0:
                continue
            if _smooth_part_remainder(norm // P.norm, fb_primes) != 1:
                continue
            alpha = F.from_integral(coords)
            return tuple(-F.element_valuation(alpha, Q) for Q in self.factor_base)
        raise LimitExceededError("cubic sweep radius", max_radius, f"no smooth element found in {P.label}")

    def ideal_vector(self, I: CubicIdeal, budget: Optional[WorkBudget] = None) -> Tuple[int, ...]:
        budget = ensure_budget(budget)
        vector = [0] * len(self.factor_base)
        for P, k in self.number_field.factor_ideal(I, budget):
            for i, v in enumerate(self._prime_vector(P, budget)):
                vector[i] += k * v
        return tuple(vector)

    def class_of_ideal(self, I: CubicIdeal, budget: Optional[WorkBudget] = None) -> Tuple[int, ...]:
        return self.class_of_vector(self.ideal_vector(I, budget))

    def is_principal(self, I: CubicIdeal, budget: Optional[WorkBudget] = None) -> bool:
        return not any(self.class_of_ideal(I, budget))

    def generators(self) -> List[Dict[str, int]]:
        """Factor-base exponent vectors of generators, one per elementary divisor."""
        result = []
        for i in self._nontrivial_indices():
            row = self.smith.inverse_transform[i]
            result.append({P.label: int(e) for P, e in zip(self.factor_base, row) if e})
        return result

    def to_dict(self) -> Dict:
        return {
            'field': self.number_field.to_dict(),
            'h': self.h,
            'divisors': self.structure.to_list(),
            'three_rank': self.l_rank(3),
            'factor_base': [P.to_dict() for P in self.factor_base],
            'relation_matrix': [list(row) for row in self.relation_matrix],
            'generators': self.generators(),
            'sweep_radius': self.sweep_radius,
            'relation_count': self.relation_count,
        }


def _sweep(radius_from: int, radius_to: int) -> Iterator[Tuple[int, int, int]]:
    """Primitive integer triples with max-norm in (radius_from, radius_to], first nonzero entry positive."""
    for r in range(radius_from + 1, radius_to + 1):
        for v in itertools.product(range(-r, r + 1), repeat=3):
            if max(abs(c) for c in v) != r:
                continue
            lead = next(c for c in v if c)
            if lead < 0 or math.gcd(math.gcd(v[0], v[1]), v[2]) != 1:
                continue
            yield v


def _smooth_part_remainder(n: int, primes: Sequence[int]) -> int:
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def _harvest(F: PureCubicField, factor_base: Sequence[PrimeIdeal], radius_from: int, radius_to: int,
             budget: WorkBudget) -> List[Tuple[int, ...]]:
    fb_primes = sorted({P.p for P in factor_base})
    relations = []
    for coords in _sweep(radius_from, radius_to):
        budget.tick()
        norm = abs(F.coords_norm(coords))
        if norm <= 1 or _smooth_part_remainder(norm, fb_primes) != 1:
            continue
        alpha = F.from_integral(coords)
        vector = tuple(F.element_valuation(alpha, P) for P in factor_base)
        check = 1
        for P, v in zip(factor_base, vector):
            check *= P.norm ** v
        if check != norm:
            raise ConsistencyError(f"valuations of {alpha} do not reproduce its norm {norm}")
        relations.append(vector)
    return relations


def class_group_cubic(F: PureCubicField, budget: Optional[WorkBudget] = None) -> CubicClassGroup:
    """Class group by relation harvesting over a deterministic coefficient sweep.

    The sweep radius doubles until the relation lattice has full rank and a
    further doubling leaves the Smith form unchanged.
    """
    config = get_config()
    if abs(F.discriminant) > config.cubic_discriminant_limit:
        raise LimitExceededError("cubic discriminant limit", config.cubic_discriminant_limit,
                                 f"|disc| = {abs(F.discriminant)}")
    budget = ensure_budget(budget)

    bound = int(math.floor(F.minkowski_bound))
    factor_base = tuple(P for p in primerange(2, bound + 1) for P in F.factor_prime(int(p)))
    if not factor_base:
        return CubicClassGroup(F)

    width = len(factor_base)
    rows: List[Tuple[int, ...]] = []
    for p in sorted({P.p for P in factor_base}):
        rows.append(tuple(P.e if P.p == p else 0 for P in factor_base))

    radius = 0
    target = config.cubic_sweep_radius
    max_radius = config.cubic_max_sweep_radius
    lattice: List[Tuple[int, ...]] = []
    relation_count = len(rows)

    def extend(new_radius: int):
        nonlocal radius, lattice, relation_count
        harvested = _harvest(F, factor_base, radius, new_radius, budget)
        relation_count += len(harvested)
        lattice = hermite_normal_form(lattice + rows + harvested, budget)
        rows.clear()
        radius = new_radius

    extend(min(target, max_radius))
    while len(lattice) < width:
        if radius * 2 > max_radius:
            raise LimitExceededError("cubic sweep radius", max_radius, "relation lattice never reached full rank")
        extend(radius * 2)

    smith = smith_decomposition(lattice, budget)
    while True:
        if radius * 2 > max_radius:
            raise LimitExceededError("cubic sweep radius", max_radius, "class group did not saturate")
        extend(radius * 2)
        saturated = smith_decomposition(lattice, budget)
        if saturated.diagonal == smith.diagonal:
            smith = saturated
            break
        logger.debug("%r: structure moved from %s to %s at radius %d",
                     F, smith.diagonal, saturated.diagonal, radius)
        smith = saturated

    group = CubicClassGroup(F, factor_base, tuple(lattice), smith, radius, relation_count)
    logger.info("%r: h=%d structure=%s radius=%d relations=%d",
                F, group.h, group.structure.to_list(), radius, relation_count)
    return group


@dataclass(frozen=True)
class PointClass:
    """Ideal-class data attached to a rational point through x - theta."""

    x: Fraction
    y: Fraction
    element: CubicNumber
    scale: int
    factorization: Tuple[Tuple[PrimeIdeal, int], ...]
    square_part: CubicIdeal
    obstruction: CubicIdeal
    square_part_class: Tuple[int, ...]
    obstruction_class: Tuple[int, ...]
    order: int
    relation_principal: bool

    def to_dict(self) -> Dict:
        return {
            'point': {'x': self.x, 'y': self.y},
            'element': self.element.to_list(),
            'scale': self.scale,
            'norm': int(self.element.norm()),
            'factorization': [{'prime': P.label, 'exponent': k} for P, k in self.factorization],
            'square_part': self.square_part.to_dict(),
            'obstruction': self.obstruction.to_dict(),
            'square_part_class': list(self.square_part_class),
            'obstruction_class': list(self.obstruction_class),
            'order': self.order,
            'relation_principal': self.relation_principal,
        }


def require_irreducible(n: int):
    """T^3 + n must be irreducible over Q, i.e. n is not a cube."""
    if n == 0:
        raise InvalidInputError("n = 0 gives a singular curve", code="singular")
    power = perfect_power(abs(n)) if abs(n) > 1 else (1, 3)
    if power is not None and power[1] % 3 == 0:
        raise InvalidInputError(f"T^3 + {n} is reducible over Q", code="reducible-cubic")


def class_from_point(F: PureCubicField, x: Fraction, y: Fraction,
                     class_group: Optional[CubicClassGroup] = None,
                     budget: Optional[WorkBudget] = None) -> PointClass:
    """Split (x - theta), theta^3 = F.radicand, as a^2 * b and place [a] in Cl(F).

    For x = u/e^2 the integral ideal (u - e^2*theta) is used; it differs from
    (x - theta) by the square (e)^2.
    """
    budget = ensure_budget(budget)
    x, y = Fraction(x), Fraction(y)
    if y * y != x ** 3 - F.radicand:
        raise InvalidInputError(f"({x}, {y}) is not on y^2 = x^3 + {-F.radicand}", code="off-curve")
    if x ** 3 == F.radicand:
        raise InvalidInputError("x^3 + n = 0: the point is 2-torsion", code="two-torsion")

    scale = math.isqrt(x.denominator)
    if scale * scale != x.denominator:
        raise InvalidInputError(f"denominator of x = {x} is not a square", code="off-curve")
    element = x.numerator - scale * scale * F.radical
    factorization = tuple(F.factor_ideal(F.principal_ideal(element), budget))

    square_part = F.ideal_from_exponents([(P, k // 2) for P, k in factorization])
    obstruction = F.ideal_from_exponents([(P, k % 2) for P, k in factorization])

    if class_group is None:
        class_group = class_group_cubic(F, budget)
    a_class = class_group.class_of_ideal(square_part, budget)
    b_class = class_group.class_of_ideal(obstruction, budget)
    relation = class_group.add_classes(class_group.scale_class(a_class, 2), b_class)

    return PointClass(x, y, element, scale, factorization, square_part, obstruction,
                      a_class, b_class, class_group.order_of(a_class), not any(relation))
