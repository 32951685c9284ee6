import math
import random

import pytest

from cpdh.errors import UnfactoredError
from cpdh.factor import factorint, is_prime, pollard_brent, small_primes


def naive_is_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def test_is_prime_small_exhaustive():
    assert [n for n in range(2000) if is_prime(n)] == [n for n in range(2000) if naive_is_prime(n)]


@pytest.mark.parametrize(
    "n,expected",
    [
        (17293, True), (2**31 - 1, True), (2**61 - 1, True), (2**127 - 1, True),
        (3215031751, False),  # strong pseudoprime to bases 2,3,5,7
        (3317044064679887385961981, False),
        (2**521 - 1, True), ((2**89 - 1) * (2**61 - 1), False),
    ],
)
def test_is_prime_known(n, expected):
    assert is_prime(n) is expected


@pytest.mark.parametrize(
    "n,expected",
    [
        (183, {3: 1, 61: 1}), (31, {31: 1}), (17293, {17293: 1}), (3783, {3: 1, 13: 1, 97: 1}),
        (2**10, {2: 10}), (1, {}),
    ],
)
def test_factorint_known(n, expected):
    assert factorint(n) == expected


def test_factorint_beyond_trial_division():
    a, b = 1000003, 2147483647
    assert factorint(a * b * b) == {a: 1, b: 2}
    p, q = 4294967311, 4294967357
    assert factorint(p * q) == {p: 1, q: 1}


def test_factorint_random_products():
    r = random.Random(5)
    for _ in range(20):
        n = r.randrange(2, 10**15)
        f = factorint(n)
        assert math.prod(pr**e for pr, e in f.items()) == n
        assert all(is_prime(pr) for pr in f)


def test_small_primes_prefix():
    assert small_primes()[:10] == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def test_rho_budget_exhaustion():
    p, q = 2**61 - 1, 2**89 - 1
    with pytest.raises(UnfactoredError):
        pollard_brent(p * q, budget=1000)
