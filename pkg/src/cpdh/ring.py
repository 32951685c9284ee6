"""The same group law over R = Z/mZ with m = p*q, handled through the CRT split.

When chi is irreducible modulo both primes, the projective group is
F_pP^2 x F_qP^2 of order a*b with a = p^2+p+1, b = q^2+q+1; it is cyclic
exactly when gcd(a, b) = 1, and a generator on each side joins to an
element of order a*b/gcd(a, b).
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .cubic import CubicParams, q_form
from .dlog import crt
from .errors import DomainError, InconsistencyError, ParameterError, RetryExhaustedError
from .ext import ext_order
from .factor import factorint
from .field import FieldParams
from .formats import dump_kv, parse_kv, require_keys
from .group import (
    GroupVector,
    canonicalize,
    find_generator,
    format_triple,
    group_order,
    law,
    parse_triple,
)


@dataclass(frozen=True)
class RingParams:
    p: int
    q: int
    c1: int
    c2: int
    c3: int

    def __post_init__(self):
        if self.p == self.q:
            raise ParameterError("p and q must be distinct primes")
        FieldParams(self.p), FieldParams(self.q)  # validates both
        m = self.p * self.q
        for name in ("c1", "c2", "c3"):
            object.__setattr__(self, name, getattr(self, name) % m)

    @property
    def m(self) -> int:
        return self.p * self.q

    @property
    def a(self) -> int:
        return self.p * self.p + self.p + 1

    @property
    def b(self) -> int:
        return self.q * self.q + self.q + 1

    @property
    def d(self) -> int:
        return math.gcd(self.a, self.b)

    @cached_property
    def cubic_p(self) -> CubicParams:
        return CubicParams.from_ints(self.p, self.c1, self.c2, self.c3)

    @cached_property
    def cubic_q(self) -> CubicParams:
        return CubicParams.from_ints(self.q, self.c1, self.c2, self.c3)

    @property
    def both_irreducible(self) -> bool:
        return self.cubic_p.irreducible and self.cubic_q.irreducible

    @cached_property
    def _consts(self) -> tuple[int, ...]:
        m, c1, c2, c3 = self.m, self.c1, self.c2, self.c3
        return (c1 * c3 % m, (c1 * c2 + c3) % m, (c1 * c1 + c2) % m)

    @cached_property
    def _q_consts(self) -> tuple[int, ...]:
        m, c1, c2, c3 = self.m, self.c1, self.c2, self.c3
        return (
            c1 * c3 % m, c2 * c3 % m, c3 * c3 % m, (c1 * c2 + 3 * c3) % m,
            (c1 * c1 + 2 * c2) % m, (c2 * c2 - 2 * c1 * c3) % m,
        )


@dataclass(frozen=True)
class RingPoint:
    x1: int
    x2: int
    x3: int

    @property
    def values(self) -> tuple[int, int, int]:
        return self.x1, self.x2, self.x3

    def encode(self) -> str:
        return format_triple(self.values)

    def __iter__(self):
        return iter(self.values)


class RingOrder(NamedTuple):
    order: int
    cyclic: bool
    cyclic_subgroup_order: int


def ring_point(rp: RingParams, a: int, b: int, c: int) -> RingPoint:
    m = rp.m
    return RingPoint(a % m, b % m, c % m)


def ring_identity(rp: RingParams) -> RingPoint:
    return RingPoint(1, 0, 0)


def ring_oplus(rp: RingParams, x: RingPoint, y: RingPoint) -> RingPoint:
    m = rp.m
    z = law(*x.values, *y.values, rp.c1, rp.c2, rp.c3, *rp._consts)
    return RingPoint(z[0] % m, z[1] % m, z[2] % m)


def ring_q(rp: RingParams, x: RingPoint) -> int:
    return q_form(*x.values, rp.c1, rp.c2, rp.c3, *rp._q_consts) % rp.m


def crt_split(rp: RingParams, x: RingPoint) -> tuple[GroupVector, GroupVector]:
    Fp, Fq = rp.cubic_p.field, rp.cubic_q.field
    return GroupVector.from_ints(Fp, *x.values), GroupVector.from_ints(Fq, *x.values)


def crt_join(rp: RingParams, xp: GroupVector, xq: GroupVector) -> RingPoint:
    coords = [crt([a, b], [rp.p, rp.q])[0] for a, b in zip(xp.values, xq.values)]
    return RingPoint(*coords)


def ring_membership(rp: RingParams, x: RingPoint) -> bool:
    """Q(x) is a unit of Z/mZ."""
    return math.gcd(ring_q(rp, x), rp.m) == 1


def ring_canonicalize(rp: RingParams, x: RingPoint) -> RingPoint:
    """Canonical representative of the class of x modulo (Z/mZ)^*.

    Each nonzero CRT component is put in its own canonical projective form
    (last nonzero coordinate 1); a zero component stays zero.
    """
    xp, xq = crt_split(rp, x)
    if xp.is_zero() and xq.is_zero():
        raise DomainError("the zero vector has no projective class")
    cp = xp if xp.is_zero() else canonicalize(xp).rep
    cq = xq if xq.is_zero() else canonicalize(xq).rep
    return crt_join(rp, cp, cq)


def ring_group_order(rp: RingParams) -> RingOrder:
    if not rp.both_irreducible:
        raise ParameterError("ring group order needs chi irreducible modulo p and modulo q")
    a, b, d = rp.a, rp.b, rp.d
    return RingOrder(a * b, d == 1, a * b // d)


def ring_exponent_factors(rp: RingParams) -> dict[int, int]:
    """Factorization of lcm(a, b) = a*b/d."""
    fa, fb = factorint(rp.a), factorint(rp.b)
    return {r: max(fa.get(r, 0), fb.get(r, 0)) for r in sorted(set(fa) | set(fb))}


def ring_scalar_mul(rp: RingParams, n: int, g: RingPoint) -> RingPoint:
    """[n]g over R by double-and-add, canonicalizing each step."""
    if not ring_membership(rp, g):
        raise DomainError(f"{g.encode()} is not a group member (Q not a unit)")
    if rp.both_irreducible:
        n %= rp.a * rp.b // rp.d
    elif n < 0:
        raise DomainError("negative multiples need the group exponent")
    if n == 0:
        return ring_identity(rp)
    g = ring_canonicalize(rp, g)
    acc = g
    for bit in bin(n)[3:]:
        acc = ring_canonicalize(rp, ring_oplus(rp, acc, acc))
        if bit == "1":
            acc = ring_canonicalize(rp, ring_oplus(rp, acc, g))
    return acc


def ring_element_order(rp: RingParams, g: RingPoint) -> int:
    """Exact order of a member g (both chi reductions irreducible)."""
    n = rp.a * rp.b // rp.d
    ident = ring_identity(rp)
    for r, e in ring_exponent_factors(rp).items():
        for _ in range(e):
            if ring_scalar_mul(rp, n // r, g) == ident:
                n //= r
            else:
                break
    return n


def find_ring_cubic(p: int, q: int, seed: int | None = None, max_trials: int = 1000) -> RingParams:
    """Random coefficients mod pq whose reductions are irreducible mod p and mod q."""
    rng = random.Random(seed)

    def pick(prime):
        for _ in range(max_trials):
            c = CubicParams.from_ints(prime, rng.randrange(prime), rng.randrange(prime), rng.randrange(1, prime))
            if c.irreducible:
                return c.coeffs
        raise RetryExhaustedError(f"no irreducible cubic mod {prime} in {max_trials} trials")

    cp, cq = pick(p), pick(q)
    coeffs = [crt([u, v], [p, q])[0] for u, v in zip(cp, cq)]
    return RingParams(p, q, *coeffs)


def paired_generator(rp: RingParams, seed: int | None = None) -> RingPoint:
    """CRT join of generators of F_pP^2 and F_qP^2; its order is a*b/d."""
    rng = random.Random(seed)
    sides = []
    for c in (rp.cubic_p, rp.cubic_q):
        order = group_order(c.field)
        ext = dict(ext_order(c.p).prime_factors)
        sides.append(find_generator(c, order, ext, rng).rep)
    return crt_join(rp, *sides)


def ring_digest(point: RingPoint) -> bytes:
    return hashlib.sha256(point.encode().encode("ascii")).digest()


def ring_dh_exchange(rp: RingParams, n_a: int, n_b: int, g: RingPoint) -> RingPoint:
    """Run both sides of the exchange and return the agreed (canonical) point."""
    pub_a = ring_scalar_mul(rp, n_a, g)
    pub_b = ring_scalar_mul(rp, n_b, g)
    k_a = ring_scalar_mul(rp, n_a, pub_b)
    k_b = ring_scalar_mul(rp, n_b, pub_a)
    if k_a != k_b:
        raise InconsistencyError(f"ring exchange disagrees: {k_a.encode()} vs {k_b.encode()}")
    return k_a


# --- parameter files ----------------------------------------------------

RING_KEYS = ("p", "q", "c1", "c2", "c3", "g")


@dataclass(frozen=True)
class RingSystem:
    params: RingParams
    generator: RingPoint

    def to_fields(self) -> dict[str, str]:
        rp = self.params
        return {
            "p": str(rp.p), "q": str(rp.q), "c1": str(rp.c1), "c2": str(rp.c2),
            "c3": str(rp.c3), "g": self.generator.encode(),
        }


def ring_system_from_fields(kv: dict[str, str]) -> RingSystem:
    require_keys(kv, RING_KEYS)
    rp = RingParams(*(int(kv[k]) for k in ("p", "q", "c1", "c2", "c3")))
    vals = parse_triple(kv["g"])
    if any(v >= rp.m for v in vals):
        raise ParameterError("generator coordinates must be residues mod m")
    g = RingPoint(*vals)
    validate_ring_system(RingSystem(rp, g))
    return RingSystem(rp, g)


def validate_ring_system(rs: RingSystem) -> None:
    rp = rs.params
    if not rp.both_irreducible:
        raise ParameterError("chi must be irreducible modulo p and modulo q")
    if not ring_membership(rp, rs.generator):
        raise ParameterError("generator is not a group member")
    if ring_canonicalize(rp, rs.generator) != rs.generator:
        raise ParameterError("generator is not in canonical form")
    if ring_element_order(rp, rs.generator) != rp.a * rp.b // rp.d:
        raise ParameterError("generator does not have order a*b/d")


def load_ring_system(text: str) -> RingSystem:
    return ring_system_from_fields(parse_kv(text))


def dump_ring_system(rs: RingSystem) -> str:
    return dump_kv(rs.to_fields(), header="ring parameters over Z/pqZ")


def ring_setup(p: int, q: int, seed: int | None = None) -> RingSystem:
    rp = find_ring_cubic(p, q, seed)
    return RingSystem(rp, paired_generator(rp, seed))


__all__ = [
    "RingParams", "RingPoint", "RingOrder", "RingSystem", "ring_point", "ring_identity",
    "ring_oplus", "ring_q", "crt_split", "crt_join", "ring_membership", "ring_canonicalize",
    "ring_group_order", "ring_scalar_mul", "ring_element_order", "find_ring_cubic",
    "paired_generator", "ring_dh_exchange", "ring_digest", "load_ring_system",
    "dump_ring_system", "ring_setup", "validate_ring_system",
]
