"""Field handles, rational scalars and the generic ``field_arith`` entry point.

Rationals are ``fractions.Fraction`` (always reduced, denominator positive, zero
is 0/1). Every other element type carries its field handle as ``.parent``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal, Protocol

from sympy import integer_nthroot, isprime

from width_lab.errors import DivisionByZero, MixedFieldHandles, NotPrime

log = logging.getLogger(__name__)

RationalScalar = Fraction
ArithOp = Literal["add", "sub", "mul", "div"]


class Field(Protocol):
    """What polynomial and matrix code needs from a field handle."""

    name: str

    def zero(self) -> Any: ...

    def one(self) -> Any: ...

    def coerce(self, x: Any) -> Any: ...


@dataclass(frozen=True)
class RationalField:
    name: str = "Q"

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def coerce(self, x: Any) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise MixedFieldHandles(f"cannot coerce {type(x).__name__} into Q")

    def text(self, x: Fraction) -> str:
        return str(x)


QQ = RationalField()


def field_of(x: Any) -> Any:
    if isinstance(x, (Fraction, int)):
        return QQ
    parent = getattr(x, "parent", None)
    if parent is None:
        raise MixedFieldHandles(f"{type(x).__name__} is not a field element")
    return parent


def to_text(x: Any) -> str:
    """Canonical text of any field element (base-10 integers, lowest-first lists)."""
    if isinstance(x, (Fraction, int)):
        return str(Fraction(x))
    return x.text()


def field_arith(a: Any, b: Any, op: ArithOp) -> Any:
    if field_of(a) != field_of(b):
        raise MixedFieldHandles(f"{field_of(a).name} vs {field_of(b).name}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise DivisionByZero(f"division of {to_text(a)} by zero")
        return a / b
    raise ValueError(f"unknown op {op!r}")


# --- rational helpers ---

def require_prime(p: int) -> int:
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    return p


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a rational, or None when q is not a square in Q."""
    if q < 0:
        return None
    num, num_exact = integer_nthroot(q.numerator, 2)
    den, den_exact = integer_nthroot(q.denominator, 2)
    if num_exact and den_exact:
        return Fraction(int(num), int(den))
    return None


def multiplicity(n: int, p: int) -> int:
    """Exponent of p in the nonzero integer n."""
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k
