"""Finite fields GF(p^e) with elements encoded as integers.

An element of GF(p^e) = GF(p)[x]/(m(x)) is the polynomial c_0 + c_1 x + ... +
c_{e-1} x^{e-1}; its index is sum(c_i * p**i).  The prime subfield is therefore
the set of indices 0..p-1, and index order is the canonical element order used
everywhere else in the package.

For q <= 128 full addition and multiplication tables are built; these are
numpy arrays, so they can be indexed with whole arrays of elements at once.
Larger fields fall back to polynomial arithmetic on digit vectors.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

TABLE_LIMIT = 128


class FieldError(ValueError):
    pass


class NonPrimeCharacteristic(FieldError):
    pass


class ReduciblePolynomial(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


class EvenOrderField(FieldError):
    pass


class NonSquareOrder(FieldError):
    pass


class ZeroLeadingCoefficient(FieldError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


# Monic moduli, coefficients low degree first.  Each one is primitive, so the
# element with index p (the class of x) generates the multiplicative group.
DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),  # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),  # x^3 + x + 1
    (3, 2): (2, 2, 1),  # x^2 + 2x + 2
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
    (5, 2): (2, 4, 1),  # x^2 + 4x + 2
    (3, 3): (1, 2, 0, 1),  # x^3 + 2x + 1
    (7, 2): (3, 6, 1),  # x^2 + 6x + 3
    (3, 4): (2, 0, 0, 2, 1),  # x^4 + 2x^3 + 2
    (11, 2): (2, 7, 1),  # x^2 + 7x + 2
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**e; raise NonPrimeCharacteristic if q is not a prime power."""
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            n = q
            while n % p == 0:
                n //= p
                e += 1
            if n != 1 or not is_prime(p):
                break
            return p, e
    raise NonPrimeCharacteristic(f"{q} is not a prime power")


# -- polynomials over GF(p), coefficient lists low degree first -------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    e = len(m) - 1
    for d in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if not _poly_mod(list(m), list(tail) + [1], p):
                return False
    return True


def _find_irreducible(p: int, e: int) -> tuple[int, ...]:
    for tail in itertools.product(range(p), repeat=e):
        m = list(reversed(tail)) + [1]
        if m[0] != 0 and _is_irreducible(m, p):
            return tuple(m)
    raise ReduciblePolynomial(f"no irreducible polynomial of degree {e} over GF({p})")


class QuadClass(enum.Enum):
    ZERO = "zero"
    SQUARE = "square"
    NONSQUARE = "nonsquare"


class QuadraticValueCounts(NamedTuple):
    zeros: int
    squares: int
    nonsquares: int


class FiniteField:
    """The field GF(p^e).

    Scalar operations take and return integer indices.  The table attributes
    ``add_table``, ``mul_table``, ``neg_table`` and ``inv_table`` (inv of 0 is
    stored as 0) accept numpy index arrays for vectorised work.
    """

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not is_prime(p):
            raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
        if e < 1:
            raise FieldError("extension degree must be at least 1")
        self.p = p
        self.e = e
        self.q = p**e
        if modulus is None:
            if e == 1:
                modulus = (0, 1)
            else:
                modulus = DEFAULT_MODULI.get((p, e)) or _find_irreducible(p, e)
        m = [int(c) % p for c in modulus]
        if len(_trim(list(m))) != e + 1:
            raise ReduciblePolynomial(f"modulus must have degree {e}")
        if m[-1] != 1:
            inv = pow(m[-1], p - 2, p)
            m = [c * inv % p for c in m]
        if not _is_irreducible(m, p):
            raise ReduciblePolynomial(f"{m} is reducible over GF({p})")
        self.modulus = tuple(m)
        self._pows = [p**i for i in range(e)]
        if self.q <= TABLE_LIMIT:
            self._build_tables()
        else:
            self._tables = False
        if self.q > 2 and not any(self.order(a) == self.q - 1 for a in range(1, self.q)):
            raise FieldError("multiplicative group is not cyclic; modulus is bad")

    # -- encoding ---------------------------------------------------------

    def digits(self, a: int) -> list[int]:
        return [(a // pw) % self.p for pw in self._pows]

    def from_digits(self, d) -> int:
        return sum((c % self.p) * pw for c, pw in zip(d, self._pows))

    def _poly_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(self.digits(a)):
            if x:
                for j, y in enumerate(self.digits(b)):
                    prod[i + j] += x * y
        return self.from_digits(_poly_mod(prod, list(self.modulus), self.p))

    def _poly_add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def _build_tables(self):
        q = self.q
        idx = np.arange(q)
        dig = np.array([self.digits(a) for a in range(q)], dtype=np.int64)
        summed = (dig[:, None, :] + dig[None, :, :]) % self.p
        self.add_table = summed @ np.array(self._pows, dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(1, q):
            for b in range(a, q):
                mul[a, b] = mul[b, a] = self._poly_mul(a, b)
        self.mul_table = mul
        self.neg_table = np.argmin(self.add_table, axis=1)
        inv = np.zeros(q, dtype=np.int64)
        rows, cols = np.nonzero(mul == 1)
        inv[rows] = cols
        self.inv_table = inv
        self.sub_table = self.add_table[idx[:, None], self.neg_table[None, :]]
        self._tables = True

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._tables:
            return int(self.add_table[a, b])
        return self._poly_add(a, b)

    def neg(self, a: int) -> int:
        if self._tables:
            return int(self.neg_table[a])
        return self.from_digits([-c for c in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._tables:
            return int(self.mul_table[a, b])
        return self._poly_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no inverse")
        if self._tables:
            return int(self.inv_table[a])
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def order(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no multiplicative order")
        n, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            n += 1
        return n

    def generator(self) -> int:
        """Least-index primitive element."""
        return next(a for a in range(1, self.q) if self.order(a) == self.q - 1)

    # -- vectorised arithmetic ---------------------------------------------------

    def vadd(self, a, b):
        if self._tables:
            return self.add_table[a, b]
        return np.vectorize(self.add, otypes=[np.int64])(a, b)

    def vmul(self, a, b):
        if self._tables:
            return self.mul_table[a, b]
        return np.vectorize(self.mul, otypes=[np.int64])(a, b)

    def vneg(self, a):
        if self._tables:
            return self.neg_table[a]
        return np.vectorize(self.neg, otypes=[np.int64])(a)

    def vinv(self, a):
        if self._tables:
            return self.inv_table[a]
        return np.vectorize(lambda x: self.inv(x) if x else 0, otypes=[np.int64])(a)

    def dot(self, rows, vec):
        """Row-wise dot products of an (n, k) array with a length-k vector."""
        rows = np.asarray(rows)
        acc = np.zeros(rows.shape[:-1], dtype=np.int64)
        for k, c in enumerate(vec):
            if c:
                acc = self.vadd(acc, self.vmul(rows[..., k], int(c)))
        return acc

    def matmul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for k in range(a.shape[1]):
            out = self.vadd(out, self.vmul(a[:, k][:, None], b[k][None, :]))
        return out

    # -- squares, conjugation ----------------------------------------------------

    @cached_property
    def square_mask(self) -> np.ndarray:
        """Boolean array: True at the non-zero squares."""
        mask = np.zeros(self.q, dtype=bool)
        for b in range(1, self.q):
            mask[self.mul(b, b)] = True
        return mask

    def quad_class(self, a: int) -> QuadClass:
        if self.p == 2:
            raise EvenOrderField("quadratic classes are only used for odd q")
        if a == 0:
            return QuadClass.ZERO
        return QuadClass.SQUARE if self.square_mask[a] else QuadClass.NONSQUARE

    def least_nonsquare(self) -> int:
        if self.p == 2:
            raise EvenOrderField("every element of GF(2^e) is a square")
        return next(a for a in range(1, self.q) if not self.square_mask[a])

    @property
    def sqrt_q(self) -> int:
        if self.e % 2:
            raise NonSquareOrder(f"q = {self.q} is not a square")
        return self.p ** (self.e // 2)

    def frobenius_sqrt_q(self, a: int) -> int:
        """a -> a**sqrt(q), the involutory automorphism of GF(q), q square."""
        return self.pow(a, self.sqrt_q)

    @cached_property
    def conj_table(self) -> np.ndarray:
        return np.array([self.frobenius_sqrt_q(a) for a in range(self.q)], dtype=np.int64)

    # -- misc ----------------------------------------------------------------------

    def __call__(self, a) -> FieldElement:
        if isinstance(a, FieldElement):
            if a.field != self:
                raise FieldMismatch("element belongs to a different field")
            return a
        a = int(a)
        if not 0 <= a < self.q:
            raise FieldError(f"index {a} out of range for GF({self.q})")
        return FieldElement(self, a)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, a) for a in range(self.q)]

    def _key(self):
        return (self.p, self.e, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.q})"
        return f"GF({self.p}^{self.e}, modulus={list(self.modulus)})"


@dataclass(frozen=True)
class FieldElement:
    field: FiniteField
    index: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.index
        if isinstance(other, (int, np.integer)):
            return self.field.from_digits([int(other)])
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.add(self.index, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(self.index, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(b, self.index))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.mul(self.index, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.div(self.index, b))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.index, n))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.index))

    def quad_class(self) -> QuadClass:
        return self.field.quad_class(self.index)

    def conjugate(self) -> FieldElement:
        return FieldElement(self.field, self.field.frobenius_sqrt_q(self.index))

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"{self.index}@GF({self.field.q})"


def field_new(p: int, e: int = 1, modulus=None) -> FiniteField:
    return FiniteField(p, e, modulus)


_cache: dict[int, FiniteField] = {}


def GF(q: int) -> FiniteField:
    """Field of order q with the default modulus (cached)."""
    if q not in _cache:
        p, e = prime_power(q)
        _cache[q] = FiniteField(p, e)
    return _cache[q]


def quad_class(a: FieldElement) -> QuadClass:
    return a.field.quad_class(a.index)


def frobenius_sqrt_q(a: FieldElement) -> FieldElement:
    return a.conjugate()


def quadratic_value_distribution(a: FieldElement, b: FieldElement, c: FieldElement) -> QuadraticValueCounts:
    """Classify the list [a, f(x_0), ..., f(x_{q-1})] for f = a x^2 + b x + c."""
    F = a.field
    if F.p == 2:
        raise EvenOrderField("needs odd q")
    a, b, c = F(a), F(b), F(c)
    if a.index == 0:
        raise ZeroLeadingCoefficient("a must be non-zero")
    values = [a] + [a * x * x + b * x + c for x in F.elements()]
    classes = [v.quad_class() for v in values]
    return QuadraticValueCounts(
        classes.count(QuadClass.ZERO),
        classes.count(QuadClass.SQUARE),
        classes.count(QuadClass.NONSQUARE),
    )
