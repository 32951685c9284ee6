"""Desk-scale discrete logarithm solvers on the projective group and on (F_{p^3})^*.

Conventions: :func:`dlog_bruteforce` returns the smallest n >= 1 (so the
identity has logarithm ell); the modular solvers return n in [0, ell).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence, TypeVar

from .cubic import CubicParams
from .errors import InconsistencyError, NoSolutionError, ScaleError, UnfactoredError
from .ext import ExtElement, ExtOrderData, _mul_ints, ext_order
from .group import GroupOrder, GroupVector, ProjPoint, canonicalize, padd, scalar_mul

T = TypeVar("T")

BRUTE_CAP_LIMIT = 10**7
BSGS_LIMIT = 2**64


@dataclass(frozen=True)
class DlogInstance:
    params: CubicParams
    base: ProjPoint
    target: ProjPoint
    order: GroupOrder


def crt(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int]:
    """Combine x = r_i mod m_i for pairwise coprime m_i; returns (x, prod m_i)."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        g = math.gcd(m, mi)
        if g != 1:
            raise ValueError("moduli must be pairwise coprime")
        t = (r - x) * pow(m, -1, mi) % mi
        x += m * t
        m *= mi
    return x % m, m


def bsgs(
    g: T,
    h: T,
    n: int,
    mul: Callable[[T, T], T],
    power: Callable[[T, int], T],
    key: Callable[[T], Hashable],
) -> int:
    """Smallest x in [0, n) with g^x = h, where the order of g divides n."""
    m = math.isqrt(n - 1) + 1 if n > 1 else 1
    table: dict[Hashable, int] = {}
    cur = power(g, 0)
    for j in range(m):
        table.setdefault(key(cur), j)
        cur = mul(cur, g)
    step = power(g, (n - m) % n)  # g^-m
    gamma = h
    for i in range(m + 1):
        j = table.get(key(gamma))
        if j is not None:
            x = (i * m + j) % n
            if key(power(g, x)) == key(h):
                return x
        gamma = mul(gamma, step)
    raise NoSolutionError("target is not in the subgroup generated by the base")


def pohlig_hellman(
    g: T,
    h: T,
    factors: Sequence[tuple[int, int]],
    mul: Callable[[T, T], T],
    power: Callable[[T, int], T],
    key: Callable[[T], Hashable],
) -> int:
    """x mod n (n = prod r^e) with g^x = h, via prime-power sub-logs and CRT."""
    n = 1
    for r, e in factors:
        n *= r**e
    residues, moduli = [], []
    for r, e in factors:
        re = r**e
        gi = power(g, n // re)
        hi = power(h, n // re)
        gamma = power(gi, re // r)  # order r (or 1)
        x = 0
        for k in range(e):
            # strip known digits, then project into the order-r subgroup
            hk = power(mul(hi, power(gi, (re - x) % re)), r ** (e - 1 - k))
            d = bsgs(gamma, hk, r, mul, power, key)
            x += d * r**k
        residues.append(x)
        moduli.append(re)
    x, _ = crt(residues, moduli)
    if key(power(g, x)) != key(h):
        raise NoSolutionError("target is not in the subgroup generated by the base")
    return x


def _group_ops(c: CubicParams):
    return (
        lambda a, b: padd(c, a, b),
        lambda a, n: scalar_mul(c, n, a),
        lambda a: a.encode(),
    )


def dlog_bruteforce(inst: DlogInstance, cap: int = BRUTE_CAP_LIMIT) -> int | None:
    """Smallest n >= 1 with [n]base = target, or None if none is <= cap."""
    if cap > BRUTE_CAP_LIMIT:
        raise ScaleError(f"cap {cap} exceeds {BRUTE_CAP_LIMIT}")
    c = inst.params
    cur = inst.base
    for n in range(1, cap + 1):
        if cur == inst.target:
            return n
        cur = padd(c, cur, inst.base)
    return None


def dlog_bsgs(inst: DlogInstance) -> int:
    ell = inst.order.ell
    if ell > BSGS_LIMIT:
        raise ScaleError(f"group order {ell} exceeds the BSGS guard")
    return bsgs(inst.base, inst.target, ell, *_group_ops(inst.params))


def dlog_pohlig_hellman(inst: DlogInstance) -> int:
    if inst.order.prime_factors is None:
        raise UnfactoredError("Pohlig-Hellman needs the factored group order")
    return pohlig_hellman(
        inst.base, inst.target, inst.order.prime_factors, *_group_ops(inst.params)
    )


def ext_dlog(c: CubicParams, gamma: ExtElement, beta: ExtElement, order: ExtOrderData) -> int:
    """k in [0, p^3 - 1) with gamma^k = beta in (F_{p^3})^*."""
    if order.prime_factors is None:
        raise UnfactoredError("extension order is not factored")
    c1, c2, c3 = c.coeffs
    p = c.p

    def mul(a, b):
        return _mul_ints(a, b, c1, c2, c3, p)

    def power(a, e):
        acc = (1, 0, 0)
        while e:
            if e & 1:
                acc = mul(acc, a)
            a = mul(a, a)
            e >>= 1
        return acc

    return pohlig_hellman(gamma.values, beta.values, order.prime_factors, mul, power, lambda a: a)


def dlog_via_extension(
    inst: DlogInstance, ext_gen: ExtElement, ext_order_data: ExtOrderData | None = None
) -> int:
    """Solve in (F_{p^3})^* and read the answer modulo ell.

    Every scalar multiple lambda*target is a lift of the target class. The
    scalars F_p^* form the subgroup generated by ext_gen^ell, so all lifts
    have logarithms congruent modulo ell and solving any single lift
    suffices. The result is cross-checked on the projective side.
    """
    c = inst.params
    base_proj = canonicalize(GroupVector(ext_gen.b0, ext_gen.b1, ext_gen.b2))
    if base_proj != inst.base:
        raise InconsistencyError(
            f"extension generator projects to {base_proj}, not to base {inst.base}"
        )
    order = ext_order_data or ext_order(c.p)
    beta = ExtElement.from_vector(inst.target.rep)
    try:
        k = ext_dlog(c, ext_gen, beta, order)
    except NoSolutionError as exc:
        raise InconsistencyError("no lift of the target is a power of ext_gen") from exc
    n = k % inst.order.ell
    if scalar_mul(c, n, inst.base) != inst.target:
        raise InconsistencyError("extension logarithm does not transfer to the group")
    return n


def generator_lift(
    c: CubicParams, base: ProjPoint, ext_order_data: ExtOrderData | None = None
) -> ExtElement | None:
    """A scalar multiple of ``base`` that generates (F_{p^3})^*, if one exists.

    Such a lift need not exist: a projective generator can have every lift
    of order a proper divisor of p^3 - 1.
    """
    from .ext import ext_is_generator

    order = ext_order_data or ext_order(c.p)
    F = c.field
    for lam in range(1, c.p):
        cand = ExtElement.from_vector(base.rep.scale(F(lam)))
        if ext_is_generator(c, cand, order):
            return cand
    return None


def dlog_via_extension_general(
    inst: DlogInstance, ext_gen: ExtElement, ext_order_data: ExtOrderData | None = None
) -> int:
    """Extension-side logarithm for any base of order ell.

    With gamma an arbitrary generator of (F_{p^3})^*, take logs of lifts of
    base and target, then divide modulo ell.
    """
    c = inst.params
    order = ext_order_data or ext_order(c.p)
    ell = inst.order.ell
    kb = ext_dlog(c, ext_gen, ExtElement.from_vector(inst.base.rep), order) % ell
    kt = ext_dlog(c, ext_gen, ExtElement.from_vector(inst.target.rep), order) % ell
    if math.gcd(kb, ell) != 1:
        raise InconsistencyError("base does not have order ell")
    n = kt * pow(kb, -1, ell) % ell
    if scalar_mul(c, n, inst.base) != inst.target:
        raise InconsistencyError("extension logarithm does not transfer to the group")
    return n


def dlog_extension(inst: DlogInstance, rng: random.Random | int | None = None) -> int:
    """Extension route for any base: lift it to a generator if possible, else go general."""
    from .ext import ext_is_generator

    c = inst.params
    order = ext_order(c.p)
    lift = generator_lift(c, inst.base, order)
    if lift is not None:
        return dlog_via_extension(inst, lift, order)
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    p = c.p
    while True:
        gamma = ExtElement.from_ints(c.field, rng.randrange(p), rng.randrange(p), rng.randrange(p))
        if not gamma.is_zero() and ext_is_generator(c, gamma, order):
            return dlog_via_extension_general(inst, gamma, order)
