"""Towers of square-root extensions over Q or Q(t).

An element of a tower with L levels is stored as a balanced binary tree of
depth L ("raw" form): at level j it is a pair (u, v) meaning u + v*sqrt(d_j)
with u, v raw elements of level j-1; at level 0 it is a base-field element.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from width_lab.errors import DivisionByZero, MixedFieldHandles, ZeroRadicand
from width_lab.fields import QQ, Field, rational_sqrt, to_text
from width_lab.polynomials import UniPolynomial
from width_lab.ratfunc import QT, RationalFunction

log = logging.getLogger(__name__)

Raw = Any


# --- raw arithmetic (level-indexed, radicands passed explicitly) ---

def _zero(base: Field, level: int) -> Raw:
    z = base.zero()
    for _ in range(level):
        z = (z, z)
    return z


def _const(c: Any, base: Field, level: int) -> Raw:
    r = base.coerce(c)
    for lv in range(level):
        r = (r, _zero(base, lv))
    return r


def _is_zero(a: Raw, level: int) -> bool:
    if level == 0:
        return a == 0
    return _is_zero(a[0], level - 1) and _is_zero(a[1], level - 1)


def _add(a: Raw, b: Raw, level: int) -> Raw:
    if level == 0:
        return a + b
    return (_add(a[0], b[0], level - 1), _add(a[1], b[1], level - 1))


def _neg(a: Raw, level: int) -> Raw:
    if level == 0:
        return -a
    return (_neg(a[0], level - 1), _neg(a[1], level - 1))


def _sub(a: Raw, b: Raw, level: int) -> Raw:
    if level == 0:
        return a - b
    return (_sub(a[0], b[0], level - 1), _sub(a[1], b[1], level - 1))


def _mul(a: Raw, b: Raw, level: int, rads: tuple[Raw, ...]) -> Raw:
    if level == 0:
        return a * b
    (u1, v1), (u2, v2) = a, b
    lv = level - 1
    if _is_zero(v1, lv) and _is_zero(v2, lv):
        return (_mul(u1, u2, lv, rads), v1)
    if _is_zero(v2, lv):
        return (_mul(u1, u2, lv, rads), _mul(v1, u2, lv, rads))
    if _is_zero(v1, lv):
        return (_mul(u1, u2, lv, rads), _mul(u1, v2, lv, rads))
    uu = _mul(u1, u2, lv, rads)
    vv = _mul(v1, v2, lv, rads)
    cross = _mul(_add(u1, v1, lv), _add(u2, v2, lv), lv, rads)
    return (
        _add(uu, _mul(rads[lv], vv, lv, rads), lv),
        _sub(_sub(cross, uu, lv), vv, lv),
    )


def _norm_down(a: Raw, level: int, rads: tuple[Raw, ...]) -> Raw:
    """N(u + v*sqrt(d)) = u^2 - d*v^2, a raw element one level down."""
    u, v = a
    lv = level - 1
    return _sub(_mul(u, u, lv, rads), _mul(rads[lv], _mul(v, v, lv, rads), lv, rads), lv)


def _inv(a: Raw, level: int, rads: tuple[Raw, ...], base: Field) -> Raw:
    if level == 0:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return base.one() / a
    u, v = a
    lv = level - 1
    n_inv = _inv(_norm_down(a, level, rads), lv, rads, base)
    return (_mul(u, n_inv, lv, rads), _neg(_mul(v, n_inv, lv, rads), lv))


def _base_sqrt(x: Any) -> Any | None:
    if isinstance(x, RationalFunction):
        return x.sqrt()
    return rational_sqrt(Fraction(x))


def _sqrt(a: Raw, level: int, rads: tuple[Raw, ...], base: Field) -> Raw | None:
    """Exact square root inside the tower, or None if a is not a square there."""
    if level == 0:
        return _base_sqrt(a)
    u, v = a
    lv = level - 1
    zero = _zero(base, lv)
    if _is_zero(v, lv):
        r = _sqrt(u, lv, rads, base)
        if r is not None:
            return (r, zero)
        if _is_zero(u, lv):
            return (zero, zero)
        r = _sqrt(_mul(u, _inv(rads[lv], lv, rads, base), lv, rads), lv, rads, base)
        return None if r is None else (zero, r)
    n = _sqrt(_norm_down(a, level, rads), lv, rads, base)
    if n is None:
        return None
    half = _const(Fraction(1, 2), base, lv)
    for s in (n, _neg(n, lv)):
        r = _sqrt(_mul(_add(u, s, lv), half, lv, rads), lv, rads, base)
        if r is not None and not _is_zero(r, lv):
            b = _mul(v, _inv(_add(r, r, lv), lv, rads, base), lv, rads)
            return (r, b)
    return None


def _text(a: Raw, level: int) -> str:
    if level == 0:
        return to_text(a)
    return f"({_text(a[0], level - 1)}, {_text(a[1], level - 1)})"


def _lift_raw(a: Raw, from_level: int, to_level: int, base: Field) -> Raw:
    for lv in range(from_level, to_level):
        a = (a, _zero(base, lv))
    return a


# --- the tower handle ---

@dataclass(frozen=True, slots=True)
class TowerField:
    base: Field
    radicands: tuple[Raw, ...] = ()

    @property
    def levels(self) -> int:
        return len(self.radicands)

    @property
    def degree(self) -> int:
        return 2**self.levels

    @property
    def name(self) -> str:
        return f"{self.base.name}[sqrt^{self.levels}]"

    def truncate(self, levels: int) -> TowerField:
        return TowerField(self.base, self.radicands[:levels])

    def extends(self, other: TowerField) -> bool:
        return self.base == other.base and self.radicands[: other.levels] == other.radicands

    def element(self, raw: Raw) -> TowerElement:
        return TowerElement(self, raw)

    def zero(self) -> TowerElement:
        return TowerElement(self, _zero(self.base, self.levels))

    def one(self) -> TowerElement:
        return TowerElement(self, _const(1, self.base, self.levels))

    def radicand(self, level: int) -> TowerElement:
        """d_level (1-based) as an element of this tower."""
        return self.truncate(level - 1).element(self.radicands[level - 1]).lift(self)

    def generator(self, level: int | None = None) -> TowerElement:
        """sqrt(d_level) (1-based, default top level) as an element of this tower."""
        level = self.levels if level is None else level
        sub = self.truncate(level)
        raw = (_zero(self.base, level - 1), _const(1, self.base, level - 1))
        return sub.element(raw).lift(self)

    def coerce(self, x: Any) -> TowerElement:
        if isinstance(x, TowerElement):
            if x.tower == self:
                return x
            if self.extends(x.tower):
                return x.lift(self)
            raise MixedFieldHandles(f"{x.tower.name} does not embed into {self.name}")
        return TowerElement(self, _const(x, self.base, self.levels))

    def random_element(self, rng: np.random.Generator, *, height: int = 3, sparsity: float = 0.3) -> TowerElement:
        def draw(level: int) -> Raw:
            if level == 0:
                if rng.random() < sparsity:
                    return self.base.zero()
                return random_base_element(self.base, rng, height=height)
            return (draw(level - 1), draw(level - 1))

        return TowerElement(self, draw(self.levels))


def random_base_element(base: Field, rng: np.random.Generator, *, height: int = 3) -> Any:
    num = int(rng.integers(-height, height, endpoint=True))
    den = int(rng.integers(1, height, endpoint=True))
    c = Fraction(num, den)
    if base == QT:
        e = int(rng.integers(-2, 2, endpoint=True))
        extra = int(rng.integers(-height, height, endpoint=True))
        return RationalFunction.t_power(e, c) + RationalFunction.t_power(e + 1, extra)
    return c


class TowerElement:
    __slots__ = ("tower", "raw")

    def __init__(self, tower: TowerField, raw: Raw) -> None:
        self.tower = tower
        self.raw = raw

    @property
    def parent(self) -> TowerField:
        return self.tower

    @property
    def level(self) -> int:
        return self.tower.levels

    def is_zero(self) -> bool:
        return _is_zero(self.raw, self.level)

    def lift(self, tower: TowerField) -> TowerElement:
        if not tower.extends(self.tower):
            raise MixedFieldHandles(f"{self.tower.name} does not embed into {tower.name}")
        return TowerElement(tower, _lift_raw(self.raw, self.level, tower.levels, tower.base))

    def components(self) -> tuple[TowerElement, TowerElement]:
        """(u, v) with self = u + v*sqrt(d_top), both in the tower one level down."""
        sub = self.tower.truncate(self.level - 1)
        return sub.element(self.raw[0]), sub.element(self.raw[1])

    def base_value(self) -> Any | None:
        """The base-field value when self lies in the base field, else None."""
        raw, level = self.raw, self.level
        while level:
            if not _is_zero(raw[1], level - 1):
                return None
            raw, level = raw[0], level - 1
        return raw

    def sqrt(self) -> TowerElement | None:
        r = _sqrt(self.raw, self.level, self.tower.radicands, self.tower.base)
        return None if r is None else TowerElement(self.tower, r)

    def norm_down(self) -> TowerElement:
        sub = self.tower.truncate(self.level - 1)
        return sub.element(_norm_down(self.raw, self.level, self.tower.radicands))

    # --- arithmetic ---

    def _pair(self, other: Any) -> tuple[TowerField, Raw, Raw] | None:
        if isinstance(other, TowerElement):
            if other.tower == self.tower:
                return self.tower, self.raw, other.raw
            if self.tower.extends(other.tower):
                return self.tower, self.raw, other.lift(self.tower).raw
            if other.tower.extends(self.tower):
                return other.tower, self.lift(other.tower).raw, other.raw
            raise MixedFieldHandles(f"{self.tower.name} vs {other.tower.name}")
        if isinstance(other, (int, Fraction, RationalFunction)):
            return self.tower, self.raw, self.tower.coerce(other).raw
        return None

    def __add__(self, other: Any) -> TowerElement:
        p = self._pair(other)
        if p is None:
            return NotImplemented
        t, a, b = p
        return TowerElement(t, _add(a, b, t.levels))

    __radd__ = __add__

    def __neg__(self) -> TowerElement:
        return TowerElement(self.tower, _neg(self.raw, self.level))

    def __sub__(self, other: Any) -> TowerElement:
        p = self._pair(other)
        if p is None:
            return NotImplemented
        t, a, b = p
        return TowerElement(t, _sub(a, b, t.levels))

    def __rsub__(self, other: Any) -> TowerElement:
        return (-self) + other

    def __mul__(self, other: Any) -> TowerElement:
        p = self._pair(other)
        if p is None:
            return NotImplemented
        t, a, b = p
        return TowerElement(t, _mul(a, b, t.levels, t.radicands))

    __rmul__ = __mul__

    def inverse(self) -> TowerElement:
        return TowerElement(self.tower, _inv(self.raw, self.level, self.tower.radicands, self.tower.base))

    def __truediv__(self, other: Any) -> TowerElement:
        p = self._pair(other)
        if p is None:
            return NotImplemented
        t, a, b = p
        return TowerElement(t, _mul(a, _inv(b, t.levels, t.radicands, t.base), t.levels, t.radicands))

    def __rtruediv__(self, other: Any) -> TowerElement:
        return self.inverse() * other

    def __pow__(self, k: int) -> TowerElement:
        if k < 0:
            return self.inverse() ** (-k)
        out, acc = self.tower.one(), self
        while k:
            if k & 1:
                out = out * acc
            acc = acc * acc
            k >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        try:
            p = self._pair(other)
        except MixedFieldHandles:
            return False
        if p is None:
            return NotImplemented
        t, a, b = p
        return _is_zero(_sub(a, b, t.levels), t.levels)

    def __hash__(self) -> int:
        base = self.base_value()
        if base is not None:
            return hash(base)
        return hash((self.tower, self.raw))

    def text(self) -> str:
        return _text(self.raw, self.level)

    def __repr__(self) -> str:
        return f"TowerElement({self.text()})"


# --- operations ---

@dataclass(frozen=True, slots=True)
class Adjunction:
    tower: TowerField
    root: TowerElement
    reused: bool


def base_tower(base: Field) -> TowerField:
    return TowerField(base)


Q_TOWER = TowerField(QQ)
QT_TOWER = TowerField(QT)


def tower_adjoin_sqrt(tower: TowerField, radicand: Any) -> Adjunction:
    d = tower.coerce(radicand)
    if d.is_zero():
        raise ZeroRadicand("cannot adjoin the square root of zero")
    root = d.sqrt()
    if root is not None:
        log.debug("radicand %s is a square in %s; reusing tower", d.text(), tower.name)
        return Adjunction(tower, root, reused=True)
    extended = TowerField(tower.base, tower.radicands + (d.raw,))
    log.debug("adjoined sqrt(%s): %s has degree %d", d.text(), extended.name, extended.degree)
    return Adjunction(extended, extended.generator(), reused=False)


def characteristic_poly(x: TowerElement | Any) -> UniPolynomial:
    """Characteristic polynomial over the base field of multiplication by x.

    Computed as the iterated norm of X - x down the tower: at each level the
    polynomial P = P_u + P_v*sqrt(d) is replaced by P_u^2 - d*P_v^2.
    """
    if not isinstance(x, TowerElement):
        x = TowerField(QT if isinstance(x, RationalFunction) else QQ).coerce(x)
    tower, base = x.tower, x.tower.base
    rads = tower.radicands
    poly: list[Raw] = [_neg(x.raw, tower.levels), _const(1, base, tower.levels)]
    for level in range(tower.levels, 0, -1):
        lv = level - 1
        pu = [c[0] for c in poly]
        pv = [c[1] for c in poly]
        uu = _raw_poly_mul(pu, pu, lv, rads, base)
        vv = _raw_poly_mul(pv, pv, lv, rads, base)
        poly = [_sub(a, _mul(rads[lv], b, lv, rads), lv) for a, b in zip(uu, vv)]
    return UniPolynomial(tuple(poly), base)


def _raw_poly_mul(a: list[Raw], b: list[Raw], level: int, rads: tuple[Raw, ...], base: Field) -> list[Raw]:
    out = [_zero(base, level) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if _is_zero(x, level):
            continue
        for j, y in enumerate(b):
            out[i + j] = _add(out[i + j], _mul(x, y, level, rads), level)
    return out
