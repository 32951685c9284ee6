import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cpdh.cubic import CompanionMatrix, CubicParams, q_eval
from cpdh.errors import DomainError, NotInvertibleError, ParameterError, ScaleError, UnfactoredError
from cpdh.ext import ext_order
from cpdh.field import FieldParams, OpCounter
from cpdh.group import (
    GroupOrder,
    GroupVector,
    canonicalize,
    count_cubic_points,
    element_order,
    find_generator,
    group_order,
    identity,
    invert,
    is_generator,
    is_identity,
    iter_projective,
    oplus,
    orbit,
    padd,
    parse_point,
    scalar_mul,
)

from conftest import TOY_CHAIN, random_vector


def matrix_oplus(c, x, y):
    A = CompanionMatrix.of(c)
    return A.coords(A.mul(A.combo(*x.values), A.combo(*y.values)))


def test_toy_doubling(toy, toy_g):
    z = oplus(toy, toy_g.rep, toy_g.rep)
    assert canonicalize(z).encode() == "[117,130,1]"


def test_identity_vector(toy, rng):
    e = GroupVector.from_ints(toy.field, 1, 0, 0)
    for _ in range(50):
        x = random_vector(toy.field, rng)
        assert oplus(toy, x, e) == x


def test_oplus_matches_matrix_product_p5(cubic5, rng):
    F = cubic5.field
    for _ in range(1000):
        x, y = random_vector(F, rng, False), random_vector(F, rng, False)
        assert oplus(cubic5, x, y).values == matrix_oplus(cubic5, x, y)


@pytest.mark.parametrize("p", [131, 1009])
def test_oplus_matches_matrix_product_random_chi(p):
    r = random.Random(p)
    F = FieldParams(p)
    for _ in range(200):
        c = CubicParams.from_ints(F, r.randrange(p), r.randrange(p), r.randrange(p))
        x, y = random_vector(F, r, False), random_vector(F, r, False)
        assert oplus(c, x, y).values == matrix_oplus(c, x, y)


def test_oplus_total_on_curve_points():
    c = CubicParams.from_ints(7, 2, 6, 2)  # (X-2)(X^2+1)
    F = c.field
    on_curve = [v for v in iter_projective(F) if q_eval(c, v).value == 0]
    assert on_curve
    for v in on_curve[:10]:
        w = oplus(c, v, v)  # never raises
        assert q_eval(c, w).value == 0
        with pytest.raises(NotInvertibleError):
            invert(c, v)


def test_invert_examples(toy, toy_g):
    e = identity(toy.field)
    assert invert(toy, e.rep).values == (1, 0, 0)
    assert canonicalize(oplus(toy, invert(toy, toy_g.rep), toy_g.rep)) == e
    g2 = parse_point(toy.field, "[117,130,1]")
    assert canonicalize(invert(toy, g2.rep)) == scalar_mul(toy, 17291, toy_g)


def test_invert_exact_identity(toy, rng):
    for _ in range(200):
        x = random_vector(toy.field, rng)
        assert oplus(toy, x, invert(toy, x)).values == (1, 0, 0)


def test_canonicalize_examples():
    F = FieldParams(131)
    assert canonicalize(GroupVector.from_ints(F, 2, 0, 0)).encode() == "[1,0,0]"
    assert canonicalize(GroupVector.from_ints(F, 121, 32, 2)).encode() == "[126,16,1]"
    assert canonicalize(GroupVector.from_ints(F, 0, 5, 0)).encode() == "[0,1,0]"
    with pytest.raises(DomainError):
        canonicalize(GroupVector.from_ints(F, 0, 0, 0))


def test_canonicalize_idempotent_and_scale_invariant(rng):
    F = FieldParams(1009)
    for _ in range(300):
        v = random_vector(F, rng)
        cv = canonicalize(v)
        assert canonicalize(cv.rep) == cv
        assert canonicalize(v.scale(rng.randrange(1, 1009))) == cv


def test_parse_point_strict(toy):
    F = toy.field
    assert parse_point(F, "[126,16,1]").values == (126, 16, 1)
    for bad in ("[121,32,2]", "[131,0,1]", "126,16,1", "[1,2]", "[-1,2,1]", "[0,0,0]"):
        with pytest.raises((ParameterError, ValueError, DomainError)):
            parse_point(F, bad)
    assert parse_point(F, "[121,32,2]", strict=False).values == (126, 16, 1)


def test_scalar_mul_toy_chain(toy, toy_g):
    assert [scalar_mul(toy, n, toy_g).encode() for n in range(1, 11)] == TOY_CHAIN
    assert scalar_mul(toy, 0, toy_g) == identity(toy.field)
    assert scalar_mul(toy, 1, toy_g) == toy_g


def test_scalar_mul_matches_repeated_addition(toy, toy_g):
    acc = toy_g
    for n in range(2, 60):
        acc = padd(toy, acc, toy_g)
        assert scalar_mul(toy, n, toy_g) == acc


def test_scalar_mul_reduces_mod_ell(toy, toy_g):
    ell = 17293
    assert scalar_mul(toy, ell + 5, toy_g) == scalar_mul(toy, 5, toy_g)
    assert scalar_mul(toy, -1, toy_g) == scalar_mul(toy, ell - 1, toy_g)


def test_group_order_examples():
    assert group_order(FieldParams(131)) == GroupOrder(17293, ((17293, 1),))
    assert group_order(FieldParams(5)) == GroupOrder(31, ((31, 1),))
    assert group_order(FieldParams(13)).prime_factors == ((3, 1), (61, 1))
    assert 13 * 13 + 13 + 1 == 183 == 3 * 61


def test_is_generator_examples(toy, toy_g, cubic5):
    order = group_order(toy.field)
    assert not is_generator(toy, identity(toy.field), order)
    assert is_generator(toy, toy_g, order)
    o5 = group_order(cubic5.field)
    pts = [canonicalize(v) for v in iter_projective(cubic5.field)]
    assert len(pts) == 31
    for g in pts:
        assert is_generator(cubic5, g, o5) is (not is_identity(g))
        # exhaustive order: orbit length
        assert len(orbit(cubic5, g)) == (1 if is_identity(g) else 31)


def test_is_generator_needs_factorization(toy, toy_g):
    with pytest.raises(UnfactoredError):
        is_generator(toy, toy_g, GroupOrder(17293, None))


def test_find_generator(toy, cubic5):
    for c in (toy, cubic5):
        order = group_order(c.field)
        g = find_generator(c, order, dict(ext_order(c.p).prime_factors), rng=7)
        assert is_generator(c, g, order)
        assert q_eval(c, g.rep).value != 0
    g5 = find_generator(cubic5, group_order(cubic5.field), dict(ext_order(5).prime_factors), 1)
    assert is_identity(scalar_mul(cubic5, 31, g5)) and not is_identity(g5)
    with pytest.raises(UnfactoredError):
        find_generator(toy, group_order(toy.field), None)


def test_element_order(cubic13):
    order = group_order(cubic13.field)
    for v in itertools.islice(iter_projective(cubic13.field), 0, 183, 7):
        g = canonicalize(v)
        assert element_order(cubic13, g, order) == len(orbit(cubic13, g))


def test_iter_projective_counts():
    for p in (5, 7):
        F = FieldParams(p)
        pts = list(iter_projective(F))
        assert len(pts) == p * p + p + 1
        assert len({canonicalize(v).values for v in pts}) == len(pts)
        allv = {canonicalize(GroupVector.from_ints(F, *v)).values for v in itertools.product(range(p), repeat=3) if any(v)}
        assert allv == {v.values for v in pts}


def count_bruteforce(c):
    return sum(1 for v in iter_projective(c.field) if q_eval(c, v).value == 0)


def test_count_examples(toy):
    assert count_cubic_points(toy) == (0, 17293)
    c7 = CubicParams.from_ints(7, 2, 6, 2)
    curve, group = count_cubic_points(c7)
    assert curve == count_bruteforce(c7)
    assert curve in {9, 15, 21, 8}
    assert curve + group == 57


@pytest.mark.parametrize("p", [5, 7, 11, 13, 31])
def test_count_matches_bruteforce(p):
    r = random.Random(p)
    for _ in range(8):
        c = CubicParams.from_ints(p, r.randrange(p), r.randrange(p), r.randrange(p))
        curve, group = count_cubic_points(c)
        assert curve == count_bruteforce(c)
        assert curve + group == p * p + p + 1


def test_count_scale_refusal():
    with pytest.raises(ScaleError):
        count_cubic_points(CubicParams.from_ints(16411, 1, 2, 3))


def test_op_budget_single_call(toy, toy_g):
    x = toy_g.rep
    y = GroupVector.from_ints(toy.field, 3, 4, 5)
    with OpCounter() as ctr:
        oplus(toy, x, y)
    assert (ctr.adds, ctr.muls, ctr.inversions) == (10, 15, 0)
    with OpCounter() as ctr:
        canonicalize(GroupVector.from_ints(toy.field, 121, 32, 2))
    assert (ctr.muls, ctr.inversions) == (2, 1)


@settings(max_examples=200, deadline=None)
@given(
    st.tuples(*[st.integers(0, 1008)] * 3),
    st.tuples(*[st.integers(0, 1008)] * 3),
    st.tuples(*[st.integers(0, 1008)] * 3),
    st.integers(1, 1008),
    st.integers(1, 1008),
)
def test_group_law_properties(xs, ys, zs, lam, mu):
    c = CubicParams.from_ints(1009, 5, 7, 11)
    F = c.field
    x, y, z = (GroupVector.from_ints(F, *v) for v in (xs, ys, zs))
    assert oplus(c, oplus(c, x, y), z) == oplus(c, x, oplus(c, y, z))
    assert oplus(c, x, y) == oplus(c, y, x)
    assert q_eval(c, oplus(c, x, y)) == q_eval(c, x) * q_eval(c, y)
    if not x.is_zero() and not y.is_zero() and q_eval(c, x).value and q_eval(c, y).value:
        assert canonicalize(oplus(c, x.scale(lam), y.scale(mu))) == canonicalize(oplus(c, x, y))
