"""Prime-field arithmetic F_p with optional operation counting.

Every addition/subtraction/negation counts as one ``S`` and every
multiplication as one ``P`` on the active :class:`OpCounter`, if any.
Counters are activated with ``with OpCounter() as ctr:`` and are local to
the current thread/context.
"""

from __future__ import annotations

from contextvars import ContextVar
from dataclasses import dataclass, field

from .errors import DomainError, NotInvertibleError, ParameterError
from .factor import is_prime

_active: ContextVar["OpCounter | None"] = ContextVar("cpdh_op_counter", default=None)


@dataclass
class OpCounter:
    adds: int = 0
    muls: int = 0
    inversions: int = 0
    _token: object = field(default=None, repr=False, compare=False)

    @property
    def S(self) -> int:
        return self.adds

    @property
    def P(self) -> int:
        return self.muls

    def reset(self) -> None:
        self.adds = self.muls = self.inversions = 0

    def snapshot(self) -> tuple[int, int, int]:
        return self.adds, self.muls, self.inversions

    def __enter__(self) -> "OpCounter":
        self._token = _active.set(self)
        return self

    def __exit__(self, *exc) -> None:
        _active.reset(self._token)
        self._token = None


def active_counter() -> OpCounter | None:
    return _active.get()


@dataclass(frozen=True)
class FieldParams:
    """The prime field F_p; p must be a prime other than 2 and 3."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 5:
            raise ParameterError(f"field modulus must be a prime >= 5, got {self.p!r}")
        if self.p % 2 == 0 or self.p % 3 == 0:
            raise ParameterError(f"characteristic must differ from 2 and 3 (p={self.p})")
        if not is_prime(self.p):
            raise ParameterError(f"{self.p} is not prime")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def parse(self, text: str) -> "FieldElement":
        """Parse a decimal residue; values outside [0, p) are rejected."""
        v = int(text.strip(), 10)
        if not 0 <= v < self.p:
            raise ParameterError(f"{v} is not a canonical residue mod {self.p}")
        return FieldElement(v, self)


class FieldElement:
    """Residue modulo ``params.p``, always stored canonically in [0, p)."""

    __slots__ = ("value", "params")

    def __init__(self, value: int, params: FieldParams):
        self.value = value % params.p
        self.params = params

    @classmethod
    def _raw(cls, value: int, params: FieldParams) -> "FieldElement":
        obj = object.__new__(cls)
        obj.value = value
        obj.params = params
        return obj

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.params.p != self.params.p:
                raise ParameterError(
                    f"modulus mismatch: {self.params.p} vs {other.params.p}"
                )
            return other
        if isinstance(other, int):
            return FieldElement(other, self.params)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return fp_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return fp_sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return fp_sub(other, self)

    def __neg__(self):
        ctr = _active.get()
        if ctr is not None:
            ctr.adds += 1
        p = self.params.p
        return FieldElement._raw((-self.value) % p, self.params)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return fp_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return fp_mul(self, fp_inv(other))

    def __pow__(self, e: int):
        return fp_pow(self, e)

    def inverse(self) -> "FieldElement":
        return fp_inv(self)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.params.p == other.params.p
        if isinstance(other, int):
            return self.value == other % self.params.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.params.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"FieldElement({self.value}, p={self.params.p})"


def _check_same(a: FieldElement, b: FieldElement) -> None:
    if a.params.p != b.params.p:
        raise ParameterError(f"modulus mismatch: {a.params.p} vs {b.params.p}")


def fp_add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    ctr = _active.get()
    if ctr is not None:
        ctr.adds += 1
    s = a.value + b.value
    p = a.params.p
    return FieldElement._raw(s - p if s >= p else s, a.params)


def fp_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    ctr = _active.get()
    if ctr is not None:
        ctr.adds += 1
    s = a.value - b.value
    return FieldElement._raw(s + a.params.p if s < 0 else s, a.params)


def fp_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    ctr = _active.get()
    if ctr is not None:
        ctr.muls += 1
    return FieldElement._raw(a.value * b.value % a.params.p, a.params)


def inv_mod(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m`` by the extended Euclidean algorithm."""
    old_r, r = a % m, m
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise NotInvertibleError(f"{a} is not invertible modulo {m}")
    return old_s % m


def fp_inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise NotInvertibleError("zero has no multiplicative inverse")
    ctr = _active.get()
    if ctr is not None:
        ctr.inversions += 1
    return FieldElement._raw(inv_mod(a.value, a.params.p), a.params)


def fp_pow(a: FieldElement, e: int) -> FieldElement:
    """Left-to-right square-and-multiply."""
    if e < 0:
        return fp_pow(fp_inv(a), -e)
    if e == 0:
        if a.value == 0:
            raise DomainError("0**0 is undefined")
        return FieldElement._raw(1, a.params)
    acc = a
    for bit in bin(e)[3:]:
        acc = fp_mul(acc, acc)
        if bit == "1":
            acc = fp_mul(acc, a)
    return acc
