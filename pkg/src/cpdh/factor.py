"""Primality testing and integer factorization (trial division + Brent's rho)."""

from __future__ import annotations

import math
import random
from functools import lru_cache

from .errors import UnfactoredError

# Bases 2..41 make Miller-Rabin deterministic below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_EXTRA_ROUNDS = 64  # 4**-64 = 2**-128

TRIAL_LIMIT = 10**6
RHO_BUDGET = 2_000_000


@lru_cache(maxsize=None)
def small_primes(limit: int = TRIAL_LIMIT) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _mr_witness(n: int, a: int, d: int, s: int) -> bool:
    """True if ``a`` proves ``n`` composite."""
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, error < 2**-128 above."""
    if n < 2:
        return False
    for sp in _MR_BASES:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if any(_mr_witness(n, a, d, s) for a in _MR_BASES):
        return False
    if n < _MR_DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(n)
    return not any(
        _mr_witness(n, rng.randrange(2, n - 1), d, s) for _ in range(_MR_EXTRA_ROUNDS)
    )


def pollard_brent(n: int, seed: int = 1, budget: int = RHO_BUDGET) -> int:
    """Return a nontrivial factor of the composite ``n``.

    Brent's cycle detection with batched gcds. Raises UnfactoredError when
    ``budget`` iterations elapse without success across all restarts.
    """
    if n % 2 == 0:
        return 2
    rng = random.Random(seed)
    spent = 0
    while spent < budget:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
            if spent > budget:
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise UnfactoredError(f"Pollard rho budget exhausted on {n}")


def factorint(n: int, seed: int = 1, budget: int = RHO_BUDGET) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` as ``{prime: multiplicity}``."""
    if n < 1:
        raise ValueError("factorint needs a positive integer")
    out: dict[int, int] = {}
    for sp in small_primes():
        if sp * sp > n:
            break
        while n % sp == 0:
            out[sp] = out.get(sp, 0) + 1
            n //= sp
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        f = pollard_brent(m, seed, budget)
        stack += [f, m // f]
    return dict(sorted(out.items()))


def merge_factors(*parts: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for part in parts:
        for pr, e in part.items():
            out[pr] = out.get(pr, 0) + e
    return dict(sorted(out.items()))
