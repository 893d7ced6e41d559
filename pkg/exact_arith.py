"""Exact integer utilities shared by every other module.

Factorization (trial division, then Brent's variant of Pollard rho with a fixed
seed schedule), squarefree and perfect-power decompositions, Hermite and Smith
normal forms over the integers, and rank over F2.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import integer_nthroot, isprime, primerange

from config.settings import get_config
from errors import InvalidInputError, LimitExceededError


logger = logging.getLogger(__name__)

_RHO_BATCH = 128


class WorkBudget:
    """Loop-iteration counter shared by one top-level call."""

    def __init__(self, limit: Optional[int] = None, name: str = "work budget"):
        self.limit = get_config().work_budget if limit is None else limit
        self.name = name
        self.used = 0

    def tick(self, steps: int = 1):
        """Charge `steps` iterations, raising once the limit is passed."""
        self.used += steps
        if self.used > self.limit:
            raise LimitExceededError(self.name, self.limit)

    @property
    def remaining(self) -> int:
        return max(self.limit - self.used, 0)


def ensure_budget(budget: Optional[WorkBudget]) -> WorkBudget:
    """Return `budget`, or a fresh one sized from the configuration."""
    return budget if budget is not None else WorkBudget()


@dataclass(frozen=True)
class Factorization:
    """sign * prod(p**e) for strictly increasing primes p."""

    sign: int
    factors: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidInputError(f"sign must be +1 or -1, got {self.sign}")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise InvalidInputError("factor primes must be strictly increasing")

    @property
    def value(self) -> int:
        result = self.sign
        for p, e in self.factors:
            result *= p ** e
        return result

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    def exponent(self, p: int) -> int:
        """Exponent of p, zero when p does not divide."""
        return dict(self.factors).get(p, 0)

    def to_dict(self) -> Dict:
        return {
            'sign': self.sign,
            'factors': [{'prime': p, 'exponent': e} for p, e in self.factors],
        }


@dataclass(frozen=True)
class AbelianStructure:
    """Finite abelian group Z/d1 x ... x Z/dk with d1 | d2 | ... | dk, plus a free rank."""

    elementary_divisors: Tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        divisors = tuple(int(d) for d in self.elementary_divisors)
        object.__setattr__(self, 'elementary_divisors', divisors)
        if any(d < 2 for d in divisors):
            raise InvalidInputError(f"elementary divisors must be >= 2, got {list(divisors)}")
        for small, large in zip(divisors, divisors[1:]):
            if large % small:
                raise InvalidInputError(f"divisor chain broken: {small} does not divide {large}")

    @property
    def order(self) -> int:
        if self.free_rank:
            raise InvalidInputError("group with free part has infinite order")
        result = 1
        for d in self.elementary_divisors:
            result *= d
        return result

    @property
    def is_trivial(self) -> bool:
        return not self.elementary_divisors and not self.free_rank

    def l_rank(self, l: int) -> int:
        """Number of elementary divisors divisible by l."""
        return sum(1 for d in self.elementary_divisors if d % l == 0)

    def to_list(self) -> List[int]:
        return list(self.elementary_divisors)


@dataclass(frozen=True)
class SmithForm:
    """Smith diagonal of a relation matrix with its column transform.

    Relations are rows; the group is Z^n modulo their span. `transform` (V) and
    `inverse_transform` satisfy U*M*V = diag for some unimodular U, so x -> x*V
    carries exponent vectors to Smith coordinates and row i of V^-1 is the
    generator of the i-th cyclic factor.
    """

    diagonal: Tuple[int, ...]
    rank: int
    columns: int
    transform: np.ndarray = field(compare=False, repr=False)
    inverse_transform: np.ndarray = field(compare=False, repr=False)

    @property
    def structure(self) -> AbelianStructure:
        return AbelianStructure(tuple(d for d in self.diagonal if d != 1), self.columns - self.rank)

    def coordinates(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """Smith coordinates of an exponent vector, reduced modulo each diagonal entry."""
        image = np.array(list(vector), dtype=object).dot(self.transform)
        coords = []
        for i in range(self.columns):
            value = int(image[i])
            if i < self.rank:
                coords.append(value % self.diagonal[i])
            else:
                coords.append(value)
        return tuple(coords)


@lru_cache(maxsize=4)
def _trial_primes(bound: int) -> Tuple[int, ...]:
    return tuple(primerange(2, bound + 1))


def is_prime(n: int) -> bool:
    """Primality; deterministic below 2**64, BPSW-probable above."""
    return n > 1 and bool(isprime(n))


def _pollard_brent(n: int, budget: WorkBudget) -> int:
    """Nontrivial factor of odd composite n; constants c = 1, 2, ... tried in order."""
    c = 0
    while True:
        c += 1
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            budget.tick(r)
            k = 0
            while k < r and g == 1:
                ys = y
                steps = min(_RHO_BATCH, r - k)
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                budget.tick(steps)
                g = gcd(q, n)
                k += steps
            r *= 2
        if g == n:
            # batch overshot; walk back one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
                budget.tick()
        if g != n:
            return g
        logger.debug("rho with c=%d failed on %d, retrying", c, n)


def factor(n: int, budget: Optional[WorkBudget] = None) -> Factorization:
    """Factor a nonzero integer below the configured bit limit."""
    if n == 0:
        raise InvalidInputError("cannot factor zero", code="zero")
    config = get_config()
    if abs(n).bit_length() > config.factor_bit_limit:
        raise InvalidInputError(f"|n| must be below 2^{config.factor_bit_limit}", code="too-large")
    budget = ensure_budget(budget)

    sign = -1 if n < 0 else 1
    remaining = abs(n)
    counts: Dict[int, int] = {}

    for p in _trial_primes(config.trial_division_bound):
        if p * p > remaining:
            break
        budget.tick()
        while remaining % p == 0:
            counts[p] = counts.get(p, 0) + 1
            remaining //= p

    pending = [remaining] if remaining > 1 else []
    while pending:
        q = pending.pop()
        if q == 1:
            continue
        if is_prime(q):
            counts[q] = counts.get(q, 0) + 1
            continue
        power = perfect_power(q)
        if power is not None:
            base, exp = power
            pending.extend([base] * exp)
            continue
        d = _pollard_brent(q, budget)
        pending.extend([d, q // d])

    return Factorization(sign, tuple(sorted(counts.items())))


def squarefree_kernel(n: int, budget: Optional[WorkBudget] = None) -> Tuple[int, int]:
    """Return (d, s) with n = d*s^2, d squarefree and of the sign of n."""
    if n == 0:
        raise InvalidInputError("squarefree kernel of zero is undefined", code="zero")
    fac = factor(n, budget)
    d, s = fac.sign, 1
    for p, e in fac.factors:
        if e % 2:
            d *= p
        s *= p ** (e // 2)
    return d, s


def is_squarefree(n: int, budget: Optional[WorkBudget] = None) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factor(n, budget).factors)


def perfect_power(n: int) -> Optional[Tuple[int, int]]:
    """(base, exp) with n = base**exp and exp >= 2 maximal, or None."""
    if n <= 1:
        raise InvalidInputError(f"perfect_power needs n > 1, got {n}")
    for exp in range(n.bit_length(), 1, -1):
        root, exact = integer_nthroot(n, exp)
        if exact and root > 1:
            return int(root), exp
    return None


def divisors(n: int, budget: Optional[WorkBudget] = None) -> List[int]:
    """Sorted positive divisors of |n|."""
    result = [1]
    for p, e in factor(n, budget).factors:
        result = [d * p ** k for d in result for k in range(e + 1)]
    return sorted(result)


def square_divisors(n: int, budget: Optional[WorkBudget] = None) -> List[int]:
    """Sorted positive y with y^2 dividing n."""
    result = [1]
    for p, e in factor(n, budget).factors:
        result = [d * p ** k for d in result for k in range(e // 2 + 1)]
    return sorted(result)


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(rows: Iterable[Sequence[int]], budget: Optional[WorkBudget] = None) -> List[Tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    Zero rows are dropped; pivots are positive and entries above each pivot lie
    in [0, pivot). Works for any rank.
    """
    budget = ensure_budget(budget)
    rows = [list(r) for r in rows]
    if not rows:
        return []
    A = np.array(rows, dtype=object)
    nrows, ncols = A.shape
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        while True:
            budget.tick()
            live = [(abs(A[i, col]), i) for i in range(r, nrows) if A[i, col] != 0]
            if not live:
                break
            _, i = min(live)
            if i != r:
                A[[r, i]] = A[[i, r]]
            done = True
            for i in range(r + 1, nrows):
                if A[i, col] != 0:
                    A[i] = A[i] - (A[i, col] // A[r, col]) * A[r]
                    if A[i, col] != 0:
                        done = False
            if done:
                break
        if A[r, col] == 0:
            continue
        if A[r, col] < 0:
            A[r] = -A[r]
        for i in range(r):
            A[i] = A[i] - (A[i, col] // A[r, col]) * A[r]
        r += 1
    return [tuple(int(v) for v in A[i]) for i in range(r)]


def _swap_columns(A, V, Vinv, a: int, b: int):
    if a == b:
        return
    A[:, [a, b]] = A[:, [b, a]]
    V[:, [a, b]] = V[:, [b, a]]
    Vinv[[a, b]] = Vinv[[b, a]]


def smith_decomposition(matrix: Sequence[Sequence[int]], budget: Optional[WorkBudget] = None) -> SmithForm:
    """Smith normal form of a relation matrix (relations as rows) with column transforms."""
    budget = ensure_budget(budget)
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        raise InvalidInputError("smith_normal_form needs a matrix with at least one row and column")
    if any(len(r) != len(rows[0]) for r in rows):
        raise InvalidInputError("ragged matrix")
    A = np.array(rows, dtype=object)
    nrows, ncols = A.shape
    V = np.eye(ncols, dtype=int).astype(object)
    Vinv = np.eye(ncols, dtype=int).astype(object)

    t = 0
    while t < min(nrows, ncols):
        live = [(abs(A[i, j]), i, j) for i in range(t, nrows) for j in range(t, ncols) if A[i, j] != 0]
        if not live:
            break
        _, i, j = min(live)
        if i != t:
            A[[t, i]] = A[[i, t]]
        _swap_columns(A, V, Vinv, t, j)

        while True:
            budget.tick()
            pivot = A[t, t]
            for i in range(t + 1, nrows):
                if A[i, t] != 0:
                    A[i] = A[i] - (A[i, t] // pivot) * A[t]
            for j in range(t + 1, ncols):
                if A[t, j] != 0:
                    q = A[t, j] // pivot
                    A[:, j] = A[:, j] - q * A[:, t]
                    V[:, j] = V[:, j] - q * V[:, t]
                    Vinv[t] = Vinv[t] + q * Vinv[j]

            leftovers = [(abs(A[i, t]), i, t) for i in range(t + 1, nrows) if A[i, t] != 0]
            leftovers += [(abs(A[t, j]), t, j) for j in range(t + 1, ncols) if A[t, j] != 0]
            if leftovers:
                _, i, j = min(leftovers)
                if j == t:
                    A[[t, i]] = A[[i, t]]
                else:
                    _swap_columns(A, V, Vinv, t, j)
                continue

            stray = next((i for i in range(t + 1, nrows) for j in range(t + 1, ncols)
                          if A[i, j] % A[t, t] != 0), None)
            if stray is not None:
                A[t] = A[t] + A[stray]
                continue
            break
        t += 1

    diagonal = tuple(abs(int(A[k, k])) for k in range(t))
    return SmithForm(diagonal, t, ncols, V, Vinv)


def smith_normal_form(matrix: Sequence[Sequence[int]], budget: Optional[WorkBudget] = None) -> AbelianStructure:
    """Structure of Z^n modulo the row span of `matrix`."""
    return smith_decomposition(matrix, budget).structure


def f2_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over F2 of a 0/1 matrix."""
    if not rows or not len(rows[0]):
        return 0
    A = np.array(rows, dtype=np.uint8) % 2
    nrows, ncols = A.shape
    rank = 0
    for col in range(ncols):
        pivots = np.nonzero(A[rank:, col])[0]
        if pivots.size == 0:
            continue
        p = rank + int(pivots[0])
        if p != rank:
            A[[rank, p]] = A[[p, rank]]
        mask = A[:, col].astype(bool)
        mask[rank] = False
        A[mask] ^= A[rank]
        rank += 1
        if rank == nrows:
            break
    return rank
