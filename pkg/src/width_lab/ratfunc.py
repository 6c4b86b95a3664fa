"""The rational function field Q(t) in reduced form with monic denominators."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from width_lab.errors import DivisionByZero, MixedFieldHandles
from width_lab.fields import QQ, rational_sqrt
from width_lab.polynomials import UniPolynomial

_ZERO = UniPolynomial.zero(QQ)
_ONE = UniPolynomial.constant(Fraction(1), QQ)


def poly_sqrt(f: UniPolynomial) -> UniPolynomial | None:
    """Exact square root over Q (positive leading coefficient), or None."""
    if f.is_zero():
        return f
    if f.degree % 2:
        return None
    top = rational_sqrt(f.leading)
    if top is None:
        return None
    n = f.degree // 2
    g: list[Fraction] = [Fraction(0)] * (n + 1)
    g[n] = top
    for k in range(n - 1, -1, -1):
        s = sum((g[i] * g[n + k - i] for i in range(k + 1, n)), Fraction(0))
        g[k] = (f[n + k] - s) / (2 * top)
    root = UniPolynomial(tuple(g), QQ)
    return root if root * root == f else None


def _reduce(num: UniPolynomial, den: UniPolynomial) -> tuple[UniPolynomial, UniPolynomial]:
    if den.is_zero():
        raise DivisionByZero("rational function with zero denominator")
    if num.is_zero():
        return _ZERO, _ONE
    if den.is_monomial():
        # denominators that are powers of t dominate in practice; cancel t directly
        s = min(den.degree, num.order_at_zero())
        num, den = num.shift(-s), den.shift(-s)
    else:
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num // g, den // g
    lc = den.leading
    if lc != 1:
        num, den = num * (1 / lc), den * (1 / lc)
    return num, den


@dataclass(frozen=True, slots=True)
class RationalFunctionField:
    name: str = "Q(t)"

    def zero(self) -> RationalFunction:
        return RationalFunction(_ZERO, _ONE, _reduced=True)

    def one(self) -> RationalFunction:
        return RationalFunction(_ONE, _ONE, _reduced=True)

    def coerce(self, x: Any) -> RationalFunction:
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, (int, Fraction)):
            return RationalFunction.constant(x)
        raise MixedFieldHandles(f"cannot coerce {type(x).__name__} into Q(t)")

    def t(self) -> RationalFunction:
        return RationalFunction.t_power(1)


QT = RationalFunctionField()


class RationalFunction:
    """numerator/denominator over Q with gcd 1 and monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: UniPolynomial, den: UniPolynomial | None = None, *, _reduced: bool = False) -> None:
        den = _ONE if den is None else den
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self._hash: int | None = None

    # --- constructors ---

    @classmethod
    def constant(cls, c: int | Fraction) -> RationalFunction:
        return cls(UniPolynomial.constant(Fraction(c), QQ), _ONE, _reduced=True)

    @classmethod
    def t_power(cls, k: int, c: int | Fraction = 1) -> RationalFunction:
        mono = UniPolynomial.monomial(Fraction(c), abs(k), QQ)
        if k >= 0:
            return cls(mono, _ONE, _reduced=True)
        return cls(UniPolynomial.constant(Fraction(c), QQ), UniPolynomial.monomial(Fraction(1), -k, QQ), _reduced=True)

    @classmethod
    def from_coeffs(cls, num: list[int | Fraction], den: list[int | Fraction] | None = None) -> RationalFunction:
        den_poly = _ONE if den is None else UniPolynomial(tuple(den), QQ)
        return cls(UniPolynomial(tuple(num), QQ), den_poly)

    @property
    def parent(self) -> RationalFunctionField:
        return QT

    # --- queries ---

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def order_at_zero(self) -> int:
        return self.num.order_at_zero() - self.den.order_at_zero()

    def constant_value(self) -> Fraction | None:
        if self.den.degree == 0 and self.num.degree <= 0:
            return self.num[0]
        return None

    def sqrt(self) -> RationalFunction | None:
        top = poly_sqrt(self.num)
        if top is None:
            return None
        bottom = poly_sqrt(self.den)
        if bottom is None:
            return None
        return RationalFunction(top, bottom)

    # --- arithmetic ---

    @staticmethod
    def _lift(other: Any) -> RationalFunction | None:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other)
        return None

    def __add__(self, other: Any) -> RationalFunction:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other: Any) -> RationalFunction:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> RationalFunction:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any) -> RationalFunction:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise DivisionByZero("inverse of zero in Q(t)")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other: Any) -> RationalFunction:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> RationalFunction:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> RationalFunction:
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num**k, self.den**k, _reduced=True)

    def __eq__(self, other: object) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if self._hash is None:
            c = self.constant_value()
            # constants hash like the equal Fraction or int
            self._hash = hash(Fraction(c)) if c is not None else hash((self.num.coeffs, self.den.coeffs))
        return self._hash

    def text(self) -> str:
        return f"{self.num.text()}/{self.den.text()}"

    def __repr__(self) -> str:
        return f"RationalFunction({self.text()})"
