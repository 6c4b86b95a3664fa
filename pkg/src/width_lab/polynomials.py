"""Dense univariate polynomials over any field handle (coefficients lowest first)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

from width_lab.errors import DivisionByZero
from width_lab.fields import Field, to_text


@dataclass(frozen=True, slots=True)
class UniPolynomial:
    coeffs: tuple[Any, ...]
    base: Field

    def __post_init__(self) -> None:
        coeffs = tuple(self.base.coerce(c) for c in self.coeffs)
        zero = self.base.zero()
        end = len(coeffs)
        while end and coeffs[end - 1] == zero:
            end -= 1
        object.__setattr__(self, "coeffs", coeffs[:end])

    # --- constructors ---

    @classmethod
    def zero(cls, base: Field) -> UniPolynomial:
        return cls((), base)

    @classmethod
    def constant(cls, c: Any, base: Field) -> UniPolynomial:
        return cls((c,), base)

    @classmethod
    def x(cls, base: Field) -> UniPolynomial:
        return cls((base.zero(), base.one()), base)

    @classmethod
    def monomial(cls, c: Any, k: int, base: Field) -> UniPolynomial:
        return cls((base.zero(),) * k + (c,), base)

    @classmethod
    def from_roots(cls, roots: Iterable[Any], base: Field) -> UniPolynomial:
        out = cls.constant(base.one(), base)
        for r in roots:
            out = out * cls((-base.coerce(r), base.one()), base)
        return out

    # --- queries ---

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Any:
        return self.coeffs[-1] if self.coeffs else self.base.zero()

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.base.one()

    def is_monomial(self) -> bool:
        zero = self.base.zero()
        return bool(self.coeffs) and all(c == zero for c in self.coeffs[:-1])

    def order_at_zero(self) -> int:
        """Index of the lowest nonzero coefficient (multiplicity of the root 0)."""
        zero = self.base.zero()
        for i, c in enumerate(self.coeffs):
            if c != zero:
                return i
        raise DivisionByZero("order of the zero polynomial")

    def __getitem__(self, i: int) -> Any:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.base.zero()

    def __call__(self, x: Any) -> Any:
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return self.base.zero() if acc is None else acc

    # --- arithmetic ---

    def _wrap(self, coeffs: Iterable[Any]) -> UniPolynomial:
        return UniPolynomial(tuple(coeffs), self.base)

    def _lift(self, other: Any) -> UniPolynomial:
        if isinstance(other, UniPolynomial):
            return other
        return UniPolynomial.constant(other, self.base)

    def __add__(self, other: Any) -> UniPolynomial:
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return self._wrap(tuple(x + y for x, y in zip(a, b)) + a[len(b):])

    __radd__ = __add__

    def __neg__(self) -> UniPolynomial:
        return self._wrap(-c for c in self.coeffs)

    def __sub__(self, other: Any) -> UniPolynomial:
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> UniPolynomial:
        return self._lift(other) - self

    def __mul__(self, other: Any) -> UniPolynomial:
        if not isinstance(other, UniPolynomial):
            return self._wrap(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPolynomial.zero(self.base)
        out = [self.base.zero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return self._wrap(out)

    def __rmul__(self, other: Any) -> UniPolynomial:
        return self._wrap(other * c for c in self.coeffs)

    def __pow__(self, k: int) -> UniPolynomial:
        out = UniPolynomial.constant(self.base.one(), self.base)
        acc = self
        while k:
            if k & 1:
                out = out * acc
            acc = acc * acc
            k >>= 1
        return out

    def __divmod__(self, other: UniPolynomial) -> tuple[UniPolynomial, UniPolynomial]:
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        a, b = list(self.coeffs), other.coeffs
        if len(a) < len(b):
            return UniPolynomial.zero(self.base), self
        inv_lc = self.base.one() / b[-1]
        zero = self.base.zero()
        q = [zero] * (len(a) - len(b) + 1)
        for i in range(len(q) - 1, -1, -1):
            c = a[i + len(b) - 1] * inv_lc
            q[i] = c
            if c != zero:
                for j, bc in enumerate(b):
                    a[i + j] = a[i + j] - c * bc
        return self._wrap(q), self._wrap(a[: len(b) - 1])

    def __floordiv__(self, other: UniPolynomial) -> UniPolynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: UniPolynomial) -> UniPolynomial:
        return divmod(self, other)[1]

    def monic(self) -> UniPolynomial:
        if self.is_zero():
            return self
        return self * (self.base.one() / self.leading)

    def gcd(self, other: UniPolynomial) -> UniPolynomial:
        """Monic gcd (zero only when both inputs are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def shift(self, k: int) -> UniPolynomial:
        """Multiply by X^k (k >= 0) or drop the k lowest coefficients (k < 0)."""
        if k >= 0:
            return self._wrap((self.base.zero(),) * k + self.coeffs)
        return self._wrap(self.coeffs[-k:])

    def derivative(self) -> UniPolynomial:
        return self._wrap(c * i for i, c in enumerate(self.coeffs) if i)

    def map_coeffs(self, fn: Any, base: Field) -> UniPolynomial:
        return UniPolynomial(tuple(fn(c) for c in self.coeffs), base)

    def text(self) -> str:
        return "[" + ", ".join(to_text(c) for c in self.coeffs) + "]"

    def __str__(self) -> str:
        return self.text()
