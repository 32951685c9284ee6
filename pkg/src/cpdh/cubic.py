"""The cubic chi(X) = X^3 - c1 X^2 - c2 X - c3 and its invariant form Q.

``Q(x) = det(x1 I + x2 A + x3 A^2)`` for any 3x3 matrix ``A`` whose
characteristic polynomial is chi; :func:`q_eval` uses the expanded
10-term form, :func:`q_via_matrix` the companion matrix determinant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from dataclasses import field as dc_field
from functools import cached_property
from typing import NamedTuple, Sequence

from .errors import DomainError, ParameterError
from .field import FieldElement, FieldParams

SCAN_LIMIT = 2**16


class Precomp(NamedTuple):
    """Coefficient combinations reused by the group law and by Q."""

    c1c3: FieldElement
    c1c2_c3: FieldElement  # c1*c2 + c3
    c1sq_c2: FieldElement  # c1^2 + c2
    c2sq: FieldElement
    c2c3: FieldElement
    c3sq: FieldElement
    c1c2_3c3: FieldElement  # c1*c2 + 3*c3
    c1sq_2c2: FieldElement  # c1^2 + 2*c2
    c2sq_2c1c3: FieldElement  # c2^2 - 2*c1*c3


@dataclass(frozen=True)
class CubicParams:
    field: FieldParams
    c1: FieldElement
    c2: FieldElement
    c3: FieldElement
    precomp: Precomp = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for c in (self.c1, self.c2, self.c3):
            if not isinstance(c, FieldElement) or c.params.p != self.field.p:
                raise ParameterError("cubic coefficients must be elements of the field")
        p = self.field.p
        a, b, c = self.c1.value, self.c2.value, self.c3.value
        F = self.field
        pc = Precomp(
            F(a * c), F(a * b + c), F(a * a + b), F(b * b), F(b * c), F(c * c),
            F(a * b + 3 * c), F(a * a + 2 * b), F(b * b - 2 * a * c),
        )
        object.__setattr__(self, "precomp", pc)

    @classmethod
    def from_ints(cls, p: int | FieldParams, c1: int, c2: int, c3: int) -> "CubicParams":
        F = p if isinstance(p, FieldParams) else FieldParams(p)
        return cls(F, F(c1), F(c2), F(c3))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def coeffs(self) -> tuple[int, int, int]:
        return self.c1.value, self.c2.value, self.c3.value

    @cached_property
    def irreducible(self) -> bool:
        return chi_is_irreducible(self)

    @property
    def ell(self) -> int:
        """p^2 + p + 1, the number of points of the projective plane."""
        p = self.field.p
        return p * p + p + 1

    def chi_at(self, h: int) -> int:
        """chi(h) mod p."""
        a, b, c = self.coeffs
        return (((h - a) * h - b) * h - c) % self.field.p

    def chi_poly(self) -> list[int]:
        """chi as a coefficient list, lowest degree first."""
        p = self.field.p
        a, b, c = self.coeffs
        return [(-c) % p, (-b) % p, (-a) % p, 1]


# --- Q -----------------------------------------------------------------


def q_form(x1, x2, x3, c1, c2, c3, c1c3, c2c3, c3sq, c1c2_3c3, c1sq_2c2, c2sq_2c1c3):
    """The cubic form Q on any operands supporting + - * (field elements or ints)."""
    x1s = x1 * x1
    x2s = x2 * x2
    x3s = x3 * x3
    return (
        x1s * (x1 + c1 * x2 + c1sq_2c2 * x3)
        + x2s * (c3 * x2 - c2 * x1 + c1c3 * x3)
        + x3s * (c3sq * x3 + c2sq_2c1c3 * x1 - c2c3 * x2)
        - c1c2_3c3 * (x1 * x2 * x3)
    )


def q_eval(c: CubicParams, x: Sequence[FieldElement]) -> FieldElement:
    x1, x2, x3 = x
    pc = c.precomp
    return q_form(
        x1, x2, x3, c.c1, c.c2, c.c3,
        pc.c1c3, pc.c2c3, pc.c3sq, pc.c1c2_3c3, pc.c1sq_2c2, pc.c2sq_2c1c3,
    )


# --- companion matrix oracle --------------------------------------------

Matrix = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]


def _matmul(a: Matrix, b: Matrix, p: int) -> Matrix:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) % p for j in range(3))
        for i in range(3)
    )


def _det3(m: Matrix, p: int) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    ) % p


@dataclass(frozen=True)
class CompanionMatrix:
    """Companion matrix A of chi (A e1 = e2, A e2 = e3, A e3 = c3 e1 + c2 e2 + c1 e3)."""

    p: int
    rows: Matrix

    @classmethod
    def of(cls, c: CubicParams) -> "CompanionMatrix":
        a, b, k = c.coeffs
        return cls(c.p, ((0, 0, k), (1, 0, b), (0, 1, a)))

    @property
    def identity(self) -> Matrix:
        return ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def squared(self) -> Matrix:
        return _matmul(self.rows, self.rows, self.p)

    def mul(self, a: Matrix, b: Matrix) -> Matrix:
        return _matmul(a, b, self.p)

    def combo(self, x1: int, x2: int, x3: int) -> Matrix:
        """x1 I + x2 A + x3 A^2."""
        I, A, A2 = self.identity, self.rows, self.squared()
        return tuple(
            tuple((x1 * I[i][j] + x2 * A[i][j] + x3 * A2[i][j]) % self.p for j in range(3))
            for i in range(3)
        )

    def coords(self, m: Matrix) -> tuple[int, int, int]:
        """Read (z1, z2, z3) back from a matrix in span{I, A, A^2}.

        With the companion layout, the first column of z1 I + z2 A + z3 A^2
        is exactly (z1, z2, z3).
        """
        return m[0][0], m[1][0], m[2][0]

    def det(self, m: Matrix) -> int:
        return _det3(m, self.p)


def q_via_matrix(c: CubicParams, x: Sequence[FieldElement]) -> FieldElement:
    A = CompanionMatrix.of(c)
    vals = [int(v) for v in x]
    return c.field(A.det(A.combo(*vals)))


# --- polynomials over F_p (coefficient lists, low degree first) ---------


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_divmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    f = _trim([v % p for v in f])
    g = _trim([v % p for v in g])
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        shift = len(f) - len(g)
        coef = f[-1] * inv_lead % p
        q[shift] = coef
        for i, gv in enumerate(g):
            f[shift + i] = (f[shift + i] - coef * gv) % p
        _trim(f)
    return _trim(q), f


def poly_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    """Monic gcd."""
    f = _trim([v % p for v in f])
    g = _trim([v % p for v in g])
    while g:
        f, g = g, poly_divmod(f, g, p)[1]
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [v * inv % p for v in f]


def poly_mulmod(f: list[int], g: list[int], mod: list[int], p: int) -> list[int]:
    prod = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                prod[i + j] += a * b
    return poly_divmod(prod, mod, p)[1]


def poly_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = poly_mulmod(result, base, mod, p)
        base = poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _split_part(c: CubicParams) -> list[int]:
    """gcd(X^p - X, chi): the product of chi's distinct linear factors."""
    p = c.p
    chi = c.chi_poly()
    xp = poly_powmod([0, 1], p, chi, p)
    r = list(xp) + [0] * (2 - len(xp) + 1)
    r[1] = (r[1] - 1) % p
    r = _trim(r)
    if not r:
        return poly_gcd(chi, chi, p)
    return poly_gcd(chi, r, p)


def chi_is_irreducible(c: CubicParams) -> bool:
    """A cubic is irreducible over F_p iff it has no root, i.e. gcd(X^p - X, chi) = 1."""
    return len(_split_part(c)) == 1


def _roots_of_split(f: list[int], p: int, rng: random.Random) -> list[int]:
    """Roots of a squarefree product of distinct linear factors (Cantor-Zassenhaus)."""
    f = _trim(list(f))
    deg = len(f) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [(-f[0]) * pow(f[1], -1, p) % p]
    while True:
        delta = rng.randrange(p)
        h = poly_powmod([delta, 1], (p - 1) // 2, f, p)
        h = list(h) + [0]
        h[0] = (h[0] - 1) % p
        g = poly_gcd(f, _trim(h), p)
        if 0 < len(g) - 1 < deg:
            rest = poly_divmod(f, g, p)[0]
            return _roots_of_split(g, p, rng) + _roots_of_split(rest, p, rng)


def find_root(c: CubicParams) -> FieldElement | None:
    """Smallest root of chi in F_p (by canonical residue), or None."""
    p = c.p
    if p <= SCAN_LIMIT:
        for h in range(p):
            if c.chi_at(h) == 0:
                return c.field(h)
        return None
    split = _split_part(c)
    if len(split) == 1:
        return None
    roots = _roots_of_split(split, p, random.Random(p))
    return c.field(min(roots))


def q_factorization(c: CubicParams, h: FieldElement) -> tuple[FieldElement, FieldElement]:
    """(k, l) with chi = (X - h)(X^2 + k X + l).

    Then Q(x) = [x1^2 + (k^2 - 2l) x1 x3 + l x2^2 - k l x2 x3 + l^2 x3^2 - k x1 x2]
                * [x1 + h x2 + h^2 x3].
    """
    if c.chi_at(h.value) != 0:
        raise DomainError(f"{h.value} is not a root of chi")
    k = h - c.c1
    l = h * k - c.c2
    return k, l


def factored_q(c: CubicParams, h: FieldElement, x: Sequence[FieldElement]) -> FieldElement:
    """Evaluate Q through its (quadratic) * (linear) factorization at a root ``h``."""
    k, l = q_factorization(c, h)
    x1, x2, x3 = x
    quad = (
        x1 * x1 + (k * k - 2 * l) * (x1 * x3) + l * (x2 * x2) - k * l * (x2 * x3)
        + l * l * (x3 * x3) - k * (x1 * x2)
    )
    return quad * (x1 + h * x2 + h * h * x3)
