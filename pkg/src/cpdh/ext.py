"""Arithmetic in F_{p^3} = F_p[X]/(chi), with alpha = X mod chi."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cubic import CubicParams, _det3
from .errors import DomainError, NotInvertibleError, UnfactoredError
from .factor import factorint, merge_factors
from .field import FieldElement, FieldParams


@dataclass(frozen=True)
class ExtElement:
    """b0 + b1*alpha + b2*alpha^2."""

    b0: FieldElement
    b1: FieldElement
    b2: FieldElement

    @classmethod
    def from_ints(cls, field: FieldParams, a: int, b: int, c: int) -> "ExtElement":
        return cls(field(a), field(b), field(c))

    @classmethod
    def from_vector(cls, v: Sequence[FieldElement]) -> "ExtElement":
        return cls(*v)

    @classmethod
    def one(cls, field: FieldParams) -> "ExtElement":
        return cls(field.one, field.zero, field.zero)

    @classmethod
    def alpha(cls, field: FieldParams) -> "ExtElement":
        return cls(field.zero, field.one, field.zero)

    @property
    def field(self) -> FieldParams:
        return self.b0.params

    @property
    def values(self) -> tuple[int, int, int]:
        return self.b0.value, self.b1.value, self.b2.value

    def is_zero(self) -> bool:
        return self.values == (0, 0, 0)

    def __iter__(self):
        return iter((self.b0, self.b1, self.b2))


@dataclass(frozen=True)
class ExtOrderData:
    """p^3 - 1 and its factorization."""

    n_ext: int
    prime_factors: tuple[tuple[int, int], ...] | None

    @classmethod
    def from_factors(cls, p: int, factors) -> "ExtOrderData":
        items = tuple(sorted(dict(factors).items()))
        return cls(p**3 - 1, items)

    @property
    def primes(self) -> list[int]:
        if self.prime_factors is None:
            raise UnfactoredError(f"{self.n_ext} has no known factorization")
        return [r for r, _ in self.prime_factors]


def ext_order(p: int | FieldParams) -> ExtOrderData:
    """Factor p^3 - 1 as (p - 1)(p^2 + p + 1), piecewise."""
    p = p.p if isinstance(p, FieldParams) else p
    facs = merge_factors(factorint(p - 1), factorint(p * p + p + 1))
    return ExtOrderData(p**3 - 1, tuple(facs.items()))


def _mul_ints(a, b, c1: int, c2: int, c3: int, p: int) -> tuple[int, int, int]:
    a0, a1, a2 = a
    b0, b1, b2 = b
    d0 = a0 * b0
    d1 = a0 * b1 + a1 * b0
    d2 = a0 * b2 + a1 * b1 + a2 * b0
    d3 = a1 * b2 + a2 * b1
    d4 = a2 * b2
    # alpha^4 = c1 alpha^3 + c2 alpha^2 + c3 alpha
    d3 += c1 * d4
    d2 += c2 * d4
    d1 += c3 * d4
    # alpha^3 = c1 alpha^2 + c2 alpha + c3
    d2 += c1 * d3
    d1 += c2 * d3
    d0 += c3 * d3
    return d0 % p, d1 % p, d2 % p


def ext_mul(c: CubicParams, a: ExtElement, b: ExtElement) -> ExtElement:
    """Polynomial product reduced modulo chi."""
    F = c.field
    return ExtElement.from_ints(F, *_mul_ints(a.values, b.values, *c.coeffs, F.p))


def ext_pow(c: CubicParams, b: ExtElement, e: int) -> ExtElement:
    if e < 0:
        return ext_pow(c, ext_inv(c, b), -e)
    F = c.field
    p = F.p
    c1, c2, c3 = c.coeffs
    acc = (1, 0, 0)
    base = b.values
    while e:
        if e & 1:
            acc = _mul_ints(acc, base, c1, c2, c3, p)
        base = _mul_ints(base, base, c1, c2, c3, p)
        e >>= 1
    return ExtElement.from_ints(F, *acc)


def ext_inv(c: CubicParams, b: ExtElement) -> ExtElement:
    """b^(p^3 - 2); valid when chi is irreducible."""
    if b.is_zero():
        raise NotInvertibleError("zero has no inverse in the extension")
    inv = ext_pow(c, b, c.p**3 - 2)
    if ext_mul(c, inv, b).values != (1, 0, 0):
        raise NotInvertibleError(f"{b.values} is a zero divisor (chi reducible)")
    return inv


def multiplication_matrix(c: CubicParams, b: ExtElement):
    """Matrix of xi -> b*xi in the basis 1, alpha, alpha^2 (columns are images)."""
    F = c.field
    cols = [
        _mul_ints(b.values, basis, *c.coeffs, F.p)
        for basis in ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    ]
    return tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))


def ext_norm(c: CubicParams, b: ExtElement) -> FieldElement:
    """N(b) = det of multiplication by b."""
    return c.field(_det3(multiplication_matrix(c, b), c.p))


def ext_is_generator(c: CubicParams, b: ExtElement, order: ExtOrderData) -> bool:
    """True iff b generates (F_{p^3})^*."""
    primes = order.primes
    if b.is_zero():
        raise DomainError("zero is not in the multiplicative group")
    one = (1, 0, 0)
    if ext_pow(c, b, order.n_ext).values != one:
        return False
    return all(ext_pow(c, b, order.n_ext // r).values != one for r in primes)
