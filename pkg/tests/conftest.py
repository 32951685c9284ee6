import random

import pytest

from cpdh.cubic import CubicParams
from cpdh.field import FieldParams
from cpdh.group import GroupVector, parse_point

TOY_P = 131
TOY_COEFFS = (13, 18, 73)
TOY_G = "[126,16,1]"
TOY_CHAIN = [
    "[126,16,1]", "[117,130,1]", "[11,15,1]", "[71,56,1]", "[16,98,1]",
    "[72,62,1]", "[111,125,1]", "[110,130,1]", "[130,114,1]", "[86,120,1]",
]
P31 = 2147483647  # 2^31 - 1


def first_irreducible(p: int) -> CubicParams:
    """Lexicographically first irreducible chi with c3 != 0, found by brute-force root scan."""
    F = FieldParams(p)
    for c1 in range(p):
        for c2 in range(p):
            for c3 in range(1, p):
                if all((h**3 - c1 * h * h - c2 * h - c3) % p for h in range(p)):
                    return CubicParams.from_ints(F, c1, c2, c3)
    raise AssertionError("unreachable")


def random_irreducible(p: int, rng: random.Random) -> CubicParams:
    while True:
        c = CubicParams.from_ints(p, rng.randrange(p), rng.randrange(p), rng.randrange(1, p))
        if c.irreducible:
            return c


def random_vector(F: FieldParams, rng: random.Random, nonzero: bool = True) -> GroupVector:
    while True:
        v = GroupVector.from_ints(F, rng.randrange(F.p), rng.randrange(F.p), rng.randrange(F.p))
        if not nonzero or not v.is_zero():
            return v


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def toy():
    return CubicParams.from_ints(TOY_P, *TOY_COEFFS)


@pytest.fixture(scope="session")
def toy_g(toy):
    return parse_point(toy.field, TOY_G)


@pytest.fixture(scope="session")
def cubic5():
    return first_irreducible(5)


@pytest.fixture(scope="session")
def cubic13():
    return first_irreducible(13)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, f"rep_{rep.when}", rep)
