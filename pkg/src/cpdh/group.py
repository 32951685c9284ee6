"""The group law on F_p^3 and its projectivization to F_pP^2 minus the cubic curve."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .cubic import CubicParams, q_eval
from .errors import DomainError, NotInvertibleError, ParameterError, ScaleError, UnfactoredError
from .factor import factorint
from .field import FieldElement, FieldParams, fp_inv

COUNT_LIMIT = 2**14


class GroupVector:
    """A triple (x1, x2, x3) of field elements."""

    __slots__ = ("x1", "x2", "x3")

    def __init__(self, x1: FieldElement, x2: FieldElement, x3: FieldElement):
        self.x1, self.x2, self.x3 = x1, x2, x3

    @classmethod
    def from_ints(cls, field: FieldParams, a: int, b: int, c: int) -> "GroupVector":
        return cls(field(a), field(b), field(c))

    @property
    def field(self) -> FieldParams:
        return self.x1.params

    @property
    def values(self) -> tuple[int, int, int]:
        return self.x1.value, self.x2.value, self.x3.value

    def is_zero(self) -> bool:
        return not (self.x1.value or self.x2.value or self.x3.value)

    def scale(self, lam: FieldElement | int) -> "GroupVector":
        return GroupVector(self.x1 * lam, self.x2 * lam, self.x3 * lam)

    def __iter__(self):
        yield self.x1
        yield self.x2
        yield self.x3

    def __eq__(self, other):
        if not isinstance(other, GroupVector):
            return NotImplemented
        return self.values == other.values and self.field.p == other.field.p

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"GroupVector{self.values}"


@dataclass(frozen=True)
class ProjPoint:
    """Projective class of a nonzero vector; ``rep`` has its last nonzero coordinate equal to 1.

    Build instances with :func:`canonicalize` or :func:`parse_point`.
    """

    rep: GroupVector

    @property
    def values(self) -> tuple[int, int, int]:
        return self.rep.values

    @property
    def field(self) -> FieldParams:
        return self.rep.field

    def encode(self) -> str:
        return format_triple(self.values)

    def __str__(self):
        return self.encode()

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.rep == other.rep

    def __hash__(self):
        return hash(self.values)


def format_triple(values: Sequence[int]) -> str:
    return "[" + ",".join(str(int(v)) for v in values) + "]"


def parse_triple(text: str) -> tuple[int, int, int]:
    """Parse ``[a,b,c]`` (decimal, no sign) into three ints."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"not a bracketed triple: {text!r}")
    parts = s[1:-1].split(",")
    if len(parts) != 3 or not all(p.strip().isdigit() for p in parts):
        raise ValueError(f"not a bracketed triple: {text!r}")
    a, b, c = (int(p) for p in parts)
    return a, b, c


def parse_point(field: FieldParams, text: str, strict: bool = True) -> ProjPoint:
    """Parse a point in ``[x1,x2,x3]`` form.

    With ``strict`` the coordinates must already be canonical residues in
    canonical projective form; otherwise the vector is reduced and rescaled.
    """
    vals = parse_triple(text)
    if strict:
        if any(v >= field.p for v in vals):
            raise ParameterError(f"coordinate out of range for p={field.p}: {text}")
        pt = canonicalize(GroupVector.from_ints(field, *vals))
        if pt.values != vals:
            raise ParameterError(f"point is not in canonical form: {text}")
        return pt
    return canonicalize(GroupVector.from_ints(field, *vals))


@dataclass(frozen=True)
class GroupOrder:
    """ell = p^2 + p + 1 with its factorization (None when unavailable)."""

    ell: int
    prime_factors: tuple[tuple[int, int], ...] | None

    @property
    def primes(self) -> list[int]:
        if self.prime_factors is None:
            raise UnfactoredError(f"order {self.ell} has no known factorization")
        return [r for r, _ in self.prime_factors]

    @property
    def is_prime(self) -> bool:
        return self.prime_factors is not None and self.prime_factors == ((self.ell, 1),)


# --- the law ------------------------------------------------------------


def law(x1, x2, x3, y1, y2, y3, c1, c2, c3, c1c3, c1c2_c3, c1sq_c2):
    """Coordinates of x (+) y on any ring operands.

    Fixed schedule: 15 multiplications, 10 additions.
    """
    t = x2 * y3 + x3 * y2
    s = x3 * y3
    z1 = x1 * y1 + c3 * t + c1c3 * s
    z2 = x1 * y2 + x2 * y1 + c2 * t + c1c2_c3 * s
    z3 = x2 * y2 + x1 * y3 + x3 * y1 + c1 * t + c1sq_c2 * s
    return z1, z2, z3


def oplus(c: CubicParams, x: GroupVector, y: GroupVector) -> GroupVector:
    """x (+) y. Total on all of F_p^3 x F_p^3."""
    pc = c.precomp
    return GroupVector(
        *law(x.x1, x.x2, x.x3, y.x1, y.x2, y.x3, c.c1, c.c2, c.c3, pc.c1c3, pc.c1c2_c3, pc.c1sq_c2)
    )


def invert(c: CubicParams, x: GroupVector) -> GroupVector:
    """The vector y with x (+) y = (1, 0, 0)."""
    q = q_eval(c, x)
    if q.value == 0:
        raise NotInvertibleError(f"Q{x.values} = 0: vector lies on the cubic curve")
    c1, c2, c3 = c.c1, c.c2, c.c3
    pc = c.precomp
    x1, x2, x3 = x
    n1 = (
        c1 * (x1 * x2) + pc.c1sq_2c2 * (x1 * x3) - pc.c1c2_c3 * (x2 * x3)
        + x1 * x1 - c2 * (x2 * x2) + (pc.c2sq - pc.c1c3) * (x3 * x3)
    )
    n2 = -(x1 * x2 + (c1 * c1) * (x2 * x3) + c1 * (x2 * x2) - pc.c1c2_c3 * (x3 * x3))
    n3 = -(x1 * x3) + c1 * (x2 * x3) + x2 * x2 - c2 * (x3 * x3)
    qi = fp_inv(q)
    return GroupVector(n1 * qi, n2 * qi, n3 * qi)


def canonicalize(v: GroupVector) -> ProjPoint:
    if v.x3.value:
        lead = v.x3
    elif v.x2.value:
        lead = v.x2
    elif v.x1.value:
        lead = v.x1
    else:
        raise DomainError("the zero vector has no projective class")
    if lead.value == 1:
        return ProjPoint(v)
    inv = fp_inv(lead)
    F = v.field
    one = F.one
    if lead is v.x3:
        return ProjPoint(GroupVector(v.x1 * inv, v.x2 * inv, one))
    if lead is v.x2:
        return ProjPoint(GroupVector(v.x1 * inv, one, F.zero))
    return ProjPoint(GroupVector(one, F.zero, F.zero))


def identity(field: FieldParams) -> ProjPoint:
    return ProjPoint(GroupVector(field.one, field.zero, field.zero))


def padd(c: CubicParams, a: ProjPoint, b: ProjPoint) -> ProjPoint:
    """Projective group operation."""
    return canonicalize(oplus(c, a.rep, b.rep))


def pneg(c: CubicParams, a: ProjPoint) -> ProjPoint:
    return canonicalize(invert(c, a.rep))


def scalar_mul(c: CubicParams, n: int, g: ProjPoint) -> ProjPoint:
    """[n]g by left-to-right double-and-add, canonicalizing each step.

    For irreducible chi the exponent is reduced modulo p^2 + p + 1 first;
    negative exponents are then allowed.
    """
    if c.irreducible:
        n %= c.ell
    elif n < 0:
        raise DomainError("negative multiples need an invertible base")
    if n == 0:
        return identity(c.field)
    acc = g
    for bit in bin(n)[3:]:
        acc = padd(c, acc, acc)
        if bit == "1":
            acc = padd(c, acc, g)
    return acc


def group_order(field: FieldParams | int) -> GroupOrder:
    p = field.p if isinstance(field, FieldParams) else field
    ell = p * p + p + 1
    return GroupOrder(ell, tuple(factorint(ell).items()))


def is_identity(g: ProjPoint) -> bool:
    return g.values == (1, 0, 0)


def is_generator(c: CubicParams, g: ProjPoint, order: GroupOrder) -> bool:
    """True iff g has order exactly ``order.ell``."""
    primes = order.primes
    if order.ell == 1:
        return True
    if is_identity(g):
        return False
    if not is_identity(scalar_mul(c, order.ell, g)):
        return False
    return all(not is_identity(scalar_mul(c, order.ell // r, g)) for r in primes)


def element_order(c: CubicParams, g: ProjPoint, order: GroupOrder) -> int:
    """Exact order of g, given that it divides ``order.ell``."""
    n = order.ell
    if order.prime_factors is None:
        raise UnfactoredError(f"order {n} has no known factorization")
    for r, e in order.prime_factors:
        for _ in range(e):
            if is_identity(scalar_mul(c, n // r, g)):
                n //= r
            else:
                break
    return n


def find_generator(
    c: CubicParams,
    order: GroupOrder,
    ext_order_factors: dict[int, int] | Sequence[tuple[int, int]] | None,
    rng: random.Random | int | None = None,
) -> ProjPoint:
    """Project a random generator of (F_{p^3})^* onto the projective plane.

    Requires chi irreducible and both factorizations (of ell and of p^3 - 1).
    """
    from .ext import ExtElement, ExtOrderData, ext_is_generator

    if order.prime_factors is None or ext_order_factors is None:
        raise UnfactoredError("find_generator needs the factorizations of ell and p^3 - 1")
    if not c.irreducible:
        raise ParameterError("chi must be irreducible to search generators")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    ext_order = ExtOrderData.from_factors(c.p, ext_order_factors)
    p = c.p
    while True:
        vals = (rng.randrange(p), rng.randrange(p), rng.randrange(p))
        if vals == (0, 0, 0):
            continue
        beta = ExtElement.from_ints(c.field, *vals)
        if ext_is_generator(c, beta, ext_order):
            return canonicalize(GroupVector(beta.b0, beta.b1, beta.b2))


def iter_projective(field: FieldParams) -> Iterator[GroupVector]:
    """Canonical representatives: [1,0,0]; [a,1,0]; [a,b,1]."""
    F = field
    p = F.p
    one, zero = F.one, F.zero
    yield GroupVector(one, zero, zero)
    for a in range(p):
        yield GroupVector(F(a), one, zero)
    for b in range(p):
        fb = F(b)
        for a in range(p):
            yield GroupVector(F(a), fb, one)


def orbit(c: CubicParams, g: ProjPoint, limit: int | None = None) -> list[ProjPoint]:
    """[1]g, [2]g, ... up to and including the identity."""
    limit = limit if limit is not None else c.ell + 1
    out = [g]
    cur = g
    while not is_identity(cur):
        if len(out) > limit:
            raise ScaleError("orbit exceeded its limit")
        cur = padd(c, cur, g)
        out.append(cur)
    return out


def count_cubic_points(c: CubicParams, field: FieldParams | None = None) -> tuple[int, int]:
    """(points on Q = 0, points off it) over the whole projective plane."""
    field = field or c.field
    if field.p != c.p:
        raise ParameterError("field does not match the cubic's field")
    p = field.p
    if p > COUNT_LIMIT:
        raise ScaleError(f"p={p} exceeds the enumeration limit {COUNT_LIMIT}")
    c1, c2, c3 = (np.int64(v) for v in c.coeffs)
    pc = c.precomp
    k_c1c3, k_c2c3, k_c3sq = (np.int64(v.value) for v in (pc.c1c3, pc.c2c3, pc.c3sq))
    k_mix, k_a, k_b = (np.int64(v.value) for v in (pc.c1c2_3c3, pc.c1sq_2c2, pc.c2sq_2c1c3))
    a = np.arange(p, dtype=np.int64)
    a2 = a * a % p

    def qrow(x2: int, x3: int) -> np.ndarray:
        x2, x3 = np.int64(x2), np.int64(x3)
        x2s, x3s = x2 * x2 % p, x3 * x3 % p
        t1 = a2 * ((a + c1 * x2 + k_a * x3) % p) % p
        t2 = x2s * ((c3 * x2 - c2 * a + k_c1c3 * x3) % p) % p
        t3 = x3s * ((k_c3sq * x3 + k_b * a - k_c2c3 * x2) % p) % p
        t4 = k_mix * (a * (x2 * x3 % p) % p) % p
        return (t1 + t2 + t3 - t4) % p

    on_curve = int(np.count_nonzero(qrow(1, 0) == 0))
    for b in range(p):
        on_curve += int(np.count_nonzero(qrow(b, 1) == 0))
    total = p * p + p + 1
    return on_curve, total - on_curve
