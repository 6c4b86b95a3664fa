"""Finite fields F_{p^n} = F_p[X]/(modulus) and explicit embeddings between them.

Polynomials over F_p are plain int lists (lowest degree first) in this module;
elements are fixed-length coefficient tuples reduced modulo the field modulus.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Iterator

import numpy as np

from width_lab.errors import (
    CapExceeded,
    DegreeNotDividing,
    DivisionByZero,
    EmbeddingCheckFailed,
    MixedFieldHandles,
    NoRootFound,
    PreconditionViolation,
)
from width_lab.fields import require_prime

log = logging.getLogger(__name__)

IntPoly = list[int]


# --- int-list polynomial helpers over F_p ---

def _strip(a: IntPoly) -> IntPoly:
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a: IntPoly, b: IntPoly, p: int) -> IntPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _strip(out)


def _psub(a: IntPoly, b: IntPoly, p: int) -> IntPoly:
    return _padd(a, [(-c) % p for c in b], p)


def _pmul(a: IntPoly, b: IntPoly, p: int) -> IntPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip([c % p for c in out])


def _pdivmod(a: IntPoly, b: IntPoly, p: int) -> tuple[IntPoly, IntPoly]:
    a = _strip(list(a))
    if not b:
        raise ZeroDivisionError("division by the zero polynomial over F_p")
    inv = pow(b[-1], -1, p)
    if len(a) < len(b):
        return [], a
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] * inv % p
        q[i] = c
        if c:
            for j, bc in enumerate(b):
                a[i + j] = (a[i + j] - c * bc) % p
    return _strip(q), _strip(a[: len(b) - 1])


def _pmod(a: IntPoly, b: IntPoly, p: int) -> IntPoly:
    return _pdivmod(a, b, p)[1]


def _pgcd(a: IntPoly, b: IntPoly, p: int) -> IntPoly:
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(a: IntPoly, k: int, mod: IntPoly, p: int) -> IntPoly:
    out: IntPoly = [1]
    acc = _pmod(a, mod, p)
    while k:
        if k & 1:
            out = _pmod(_pmul(out, acc, p), mod, p)
        acc = _pmod(_pmul(acc, acc, p), mod, p)
        k >>= 1
    return out


def is_irreducible(f: IntPoly, p: int) -> bool:
    """Ben-Or test: f of degree n is irreducible iff gcd(X^{p^i} - X, f) = 1 for i <= n/2."""
    f = _strip(list(f))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    power = x
    for _ in range(n // 2):
        power = _ppowmod(power, p, f, p)
        if len(_pgcd(_psub(power, x, p), f, p)) > 1:
            return False
    return True


# --- fields and elements ---

@dataclass(frozen=True, slots=True)
class FiniteField:
    p: int
    n: int
    modulus: tuple[int, ...]

    @property
    def name(self) -> str:
        return f"F_{self.p}^{self.n}"

    @property
    def cardinality(self) -> int:
        return self.p**self.n

    def element(self, coeffs: Any) -> FFElement:
        """Reduce an arbitrary coefficient list into the field."""
        reduced = _pmod([int(c) % self.p for c in coeffs], list(self.modulus), self.p)
        return FFElement(self, tuple(reduced) + (0,) * (self.n - len(reduced)))

    def zero(self) -> FFElement:
        return FFElement(self, (0,) * self.n)

    def one(self) -> FFElement:
        return self.element([1])

    def coerce(self, x: Any) -> FFElement:
        if isinstance(x, FFElement):
            if x.field != self:
                raise MixedFieldHandles(f"{x.field.name} vs {self.name}")
            return x
        if isinstance(x, int):
            return self.element([x])
        raise MixedFieldHandles(f"cannot coerce {type(x).__name__} into {self.name}")

    def generator(self) -> FFElement:
        """The class of X; for the prime field (modulus X) this is 1 instead."""
        return self.one() if self.n == 1 else self.element([0, 1])

    def elements(self) -> Iterator[FFElement]:
        for coeffs in itertools.product(range(self.p), repeat=self.n):
            yield FFElement(self, tuple(reversed(coeffs)))

    def random_element(self, rng: np.random.Generator) -> FFElement:
        return FFElement(self, tuple(int(c) for c in rng.integers(0, self.p, size=self.n)))

    def power_basis(self) -> list[FFElement]:
        """1, X, ..., X^{n-1}: the F_p-basis used for coordinates."""
        return [self.element([0] * i + [1]) for i in range(self.n)]


class FFElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, fld: FiniteField, coeffs: tuple[int, ...]) -> None:
        self.field = fld
        self.coeffs = coeffs

    @property
    def parent(self) -> FiniteField:
        return self.field

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def vector(self) -> tuple[int, ...]:
        """Coordinates over F_p in the power basis."""
        return self.coeffs

    def _other(self, other: Any) -> FFElement | None:
        if isinstance(other, FFElement):
            if other.field != self.field:
                raise MixedFieldHandles(f"{self.field.name} vs {other.field.name}")
            return other
        if isinstance(other, int):
            return self.field.element([other])
        return None

    def __add__(self, other: Any) -> FFElement:
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FFElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> FFElement:
        p = self.field.p
        return FFElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other: Any) -> FFElement:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> FFElement:
        return (-self) + other

    def __mul__(self, other: Any) -> FFElement:
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        prod = _pmul(_strip(list(self.coeffs)), _strip(list(o.coeffs)), p)
        return self.field.element(prod)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> FFElement:
        if k < 0:
            return self.inverse() ** (-k)
        out, acc = self.field.one(), self
        while k:
            if k & 1:
                out = out * acc
            acc = acc * acc
            k >>= 1
        return out

    def inverse(self) -> FFElement:
        if self.is_zero():
            raise DivisionByZero(f"inverse of zero in {self.field.name}")
        return self ** (self.field.cardinality - 2)

    def __truediv__(self, other: Any) -> FFElement:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> FFElement:
        return self.inverse() * other

    def frobenius(self, k: int = 1) -> FFElement:
        return self ** (self.field.p**k)

    def in_subfield(self, e: int) -> bool:
        """True iff self lies in the unique subfield F_{p^e} (Frobenius fixed point)."""
        return self.frobenius(e) == self

    def trace_to(self, e: int) -> FFElement:
        """Trace from F_{p^n} down to F_{p^e}: sum of the conjugates y^{p^{e i}}."""
        if self.field.n % e:
            raise DegreeNotDividing(f"{e} does not divide {self.field.n}")
        out, y = self.field.zero(), self
        for _ in range(self.field.n // e):
            out = out + y
            y = y.frobenius(e)
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = self.field.element([other])
        if not isinstance(other, FFElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def text(self) -> str:
        return "[" + ", ".join(str(c) for c in _strip(list(self.coeffs))) + "]"

    def __repr__(self) -> str:
        return f"FFElement({self.field.name}, {self.text()})"


def finite_field_make(p: int, n: int, seed: int = 0, *, max_attempts: int = 100_000) -> FiniteField:
    require_prime(p)
    if n < 1:
        raise PreconditionViolation(f"extension degree must be >= 1, got {n}")
    if n == 1:
        return FiniteField(p, 1, (0, 1))
    rng = np.random.default_rng([seed, p, n])
    for attempt in range(1, max_attempts + 1):
        tail = [int(c) for c in rng.integers(0, p, size=n)]
        cand = tail + [1]
        if is_irreducible(cand, p):
            log.debug("F_%d^%d modulus %s after %d samples", p, n, cand, attempt)
            return FiniteField(p, n, tuple(cand))
    raise CapExceeded(f"no irreducible polynomial of degree {n} over F_{p} in {max_attempts} samples")


# --- embeddings ---

@dataclass(frozen=True, slots=True)
class FieldEmbedding:
    source: FiniteField
    target: FiniteField
    image_of_generator: FFElement
    _basis_images: tuple[FFElement, ...] = field(default=(), compare=False, repr=False)

    def __call__(self, x: FFElement | int) -> FFElement:
        x = self.source.coerce(x)
        out = self.target.zero()
        for c, b in zip(x.coeffs, self.basis_images()):
            if c:
                out = out + b * c
        return out

    def basis_images(self) -> tuple[FFElement, ...]:
        """Images of the power basis 1, X, ..., X^{e-1} of the source."""
        if not self._basis_images:
            imgs = [self.target.one()]
            root = self.image_of_generator if self.source.n > 1 else self.target.one()
            for _ in range(1, self.source.n):
                imgs.append(imgs[-1] * root)
            object.__setattr__(self, "_basis_images", tuple(imgs))
        return self._basis_images

    def contains(self, y: FFElement) -> bool:
        return y.in_subfield(self.source.n)


def _find_root(src: FiniteField, dst: FiniteField, rng: np.random.Generator, exhaustive_cap: int) -> FFElement:
    mod = src.modulus

    def is_root(z: FFElement) -> bool:
        acc = dst.zero()
        for c in reversed(mod):
            acc = acc * z + c
        return acc.is_zero()

    if dst.cardinality <= exhaustive_cap:
        for z in dst.elements():
            if is_root(z):
                return z
        raise NoRootFound(f"{list(mod)} has no root in {dst.name}")
    # every root lies in the subfield F_{p^e}; the trace lands there uniformly
    budget = 200 * src.cardinality
    for _ in range(budget):
        z = dst.random_element(rng).trace_to(src.n)
        if is_root(z):
            return z
    raise NoRootFound(f"no root of {list(mod)} in {dst.name} after {budget} trace samples")


def finite_field_embed(
    src: FiniteField,
    dst: FiniteField,
    seed: int = 0,
    *,
    spot_checks: int = 32,
    exhaustive_cap: int = 4096,
) -> FieldEmbedding:
    if src.p != dst.p:
        raise PreconditionViolation(f"characteristics differ: {src.p} vs {dst.p}")
    if dst.n % src.n:
        raise DegreeNotDividing(f"{src.n} does not divide {dst.n}")
    rng = np.random.default_rng([seed, src.p, src.n, dst.n])
    if src.n == 1:
        image = dst.one()
    else:
        image = _find_root(src, dst, rng, exhaustive_cap)
    emb = FieldEmbedding(src, dst, image)
    for _ in range(spot_checks):
        a, b = src.random_element(rng), src.random_element(rng)
        if emb(a + b) != emb(a) + emb(b) or emb(a * b) != emb(a) * emb(b):
            raise EmbeddingCheckFailed(f"embedding {src.name} -> {dst.name} failed the homomorphism check on ({a.text()}, {b.text()})")
    log.debug("embedded %s into %s via %s", src.name, dst.name, image.text())
    return emb


# --- linear algebra over F_p ---

def rank_mod_p(rows: list[tuple[int, ...]] | list[list[int]], p: int) -> int:
    """Rank over F_p by Gaussian elimination on a copy of ``rows``."""
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col] % p), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [c * inv % p for c in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] % p:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def solve_mod_p(basis: list[tuple[int, ...]], target: tuple[int, ...], p: int) -> list[int]:
    """Coordinates c with sum c_i * basis[i] = target over F_p (basis must be independent)."""
    n, k = len(target), len(basis)
    # augmented system: columns are basis vectors
    m = [[basis[j][i] % p for j in range(k)] + [target[i] % p] for i in range(n)]
    row = 0
    pivots: list[int] = []
    for col in range(k):
        pivot = next((i for i in range(row, n) if m[i][col]), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = pow(m[row][col], -1, p)
        m[row] = [c * inv % p for c in m[row]]
        for i in range(n):
            if i != row and m[i][col]:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
    if any(m[i][k] for i in range(row, n)):
        raise PreconditionViolation("target is not in the span of the basis")
    coords = [0] * k
    for r, col in enumerate(pivots):
        coords[col] = m[r][k]
    return coords
