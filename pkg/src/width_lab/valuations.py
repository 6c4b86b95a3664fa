"""Discrete valuations on Q(t) and Q, and their extensions to square-root towers.

Norms derived from a valuation are kept in the log domain: |x| = exp(-w(x)) is
represented by w(x) itself and nothing is ever exponentiated.
"""
from __future__ import annotations

import enum
import functools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal

import numpy as np

from width_lab.errors import MixedFieldHandles, NonUniqueExtension, PreconditionViolation
from width_lab.fields import QQ, multiplicity, rational_sqrt, require_prime
from width_lab.ratfunc import QT, RationalFunction
from width_lab.towers import TowerElement, TowerField, random_base_element

log = logging.getLogger(__name__)

ValuationKind = Literal["t_adic", "p_adic"]


@functools.total_ordering
@dataclass(frozen=True, slots=True)
class ValuationValue:
    """A dyadic rational valuation or INFINITY (value None, the valuation of 0)."""

    value: Fraction | None

    @classmethod
    def of(cls, v: int | Fraction | None) -> ValuationValue:
        return cls(None if v is None else Fraction(v))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __add__(self, other: ValuationValue | int | Fraction) -> ValuationValue:
        other = other if isinstance(other, ValuationValue) else ValuationValue.of(other)
        if self.value is None or other.value is None:
            return INFINITY
        return ValuationValue(self.value + other.value)

    __radd__ = __add__

    def __mul__(self, k: int | Fraction) -> ValuationValue:
        return self if self.value is None else ValuationValue(self.value * k)

    __rmul__ = __mul__

    def half(self) -> ValuationValue:
        return self * Fraction(1, 2)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, ValuationValue):
            other = ValuationValue.of(other)  # type: ignore[arg-type]
        if self.value is None:
            return False
        if other.value is None:
            return True
        return self.value < other.value

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.value == other
        if not isinstance(other, ValuationValue):
            return NotImplemented
        return self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def abs_le(self, r: Fraction) -> bool:
        """|w| <= r, with INFINITY (the zero element) counting as inside."""
        return self.value is None or abs(self.value) <= r

    def text(self) -> str:
        if self.value is None:
            return "inf"
        return f"{self.value.numerator}/{self.value.denominator}"

    def __str__(self) -> str:
        return self.text()


INFINITY = ValuationValue(None)


@functools.total_ordering
@dataclass(frozen=True, slots=True)
class LogNorm:
    """|x| = exp(-neg_log); ordered as norms, i.e. reversed on the valuation."""

    neg_log: ValuationValue

    def __lt__(self, other: LogNorm) -> bool:
        return other.neg_log < self.neg_log

    def is_zero(self) -> bool:
        return self.neg_log.is_infinite

    def exceeds_one(self) -> bool:
        return not self.is_zero() and self.neg_log.value < 0  # type: ignore[operator]

    def __mul__(self, other: LogNorm) -> LogNorm:
        return LogNorm(self.neg_log + other.neg_log)

    def text(self) -> str:
        return "0" if self.is_zero() else f"exp({-self.neg_log.value})"  # type: ignore[operator]


class Membership(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"


# --- base valuations ---

def t_adic_valuation(x: RationalFunction | int | Fraction) -> ValuationValue:
    """Order of vanishing at t = 0 (so w(t) = 1 and w(t^-1) = -1)."""
    if isinstance(x, (int, Fraction)):
        return INFINITY if x == 0 else ValuationValue(Fraction(0))
    if x.is_zero():
        return INFINITY
    return ValuationValue(Fraction(x.order_at_zero()))


def p_adic_valuation(x: Fraction | int, p: int) -> ValuationValue:
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return ValuationValue(Fraction(multiplicity(x.numerator, p) - multiplicity(x.denominator, p)))


# --- extension to towers ---

LevelKind = Literal["ramified", "inert", "validated_by_sampling"]


@dataclass(frozen=True, slots=True)
class LevelCertificate:
    level: int
    kind: LevelKind
    radicand_valuation: ValuationValue
    samples: int = 0

    def as_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "kind": self.kind,
            "radicand_valuation": self.radicand_valuation.text(),
            "samples": self.samples,
        }


@dataclass(frozen=True, slots=True)
class ValuationMap:
    kind: ValuationKind
    tower: TowerField
    p: int | None = None
    per_level_uniqueness: tuple[LevelCertificate, ...] = ()
    # w(d_j) for each level, in the truncated tower below it
    radicand_values: tuple[ValuationValue, ...] = field(default=(), repr=False)

    @property
    def name(self) -> str:
        return "t-adic" if self.kind == "t_adic" else f"{self.p}-adic"

    def base_value(self, x: Any) -> ValuationValue:
        if self.kind == "t_adic":
            return t_adic_valuation(x)
        return p_adic_valuation(x, self.p)  # type: ignore[arg-type]

    def uniformizer(self) -> Any:
        return RationalFunction.t_power(1) if self.kind == "t_adic" else Fraction(self.p)  # type: ignore[arg-type]

    def element_with_value(self, k: int) -> TowerElement:
        """An element of valuation k (surjectivity of the base valuation onto Z)."""
        if self.kind == "t_adic":
            return self.tower.coerce(RationalFunction.t_power(k))
        return self.tower.coerce(Fraction(self.p) ** k)  # type: ignore[operator]

    def granularity(self, levels: int | None = None) -> int:
        """Number of ramified levels among the first ``levels``; values lie in 2^-r Z."""
        certs = self.per_level_uniqueness[: self.tower.levels if levels is None else levels]
        return sum(1 for c in certs if c.kind == "ramified")

    def __call__(self, x: Any) -> ValuationValue:
        return tower_valuation(self, x)

    def log_norm(self, x: Any) -> LogNorm:
        return LogNorm(tower_valuation(self, x))


def base_valuation_map(kind: ValuationKind, *, p: int | None = None) -> ValuationMap:
    if kind == "t_adic":
        return ValuationMap("t_adic", TowerField(QT))
    if p is None:
        raise PreconditionViolation("p-adic valuation needs a prime p")
    require_prime(p)
    return ValuationMap("p_adic", TowerField(QQ), p=p)


def _raw_valuation(vmap: ValuationMap, raw: Any, level: int) -> ValuationValue:
    if level == 0:
        return vmap.base_value(raw)
    u, v = raw
    lv = level - 1
    wu = _raw_valuation(vmap, u, lv)
    wv = _raw_valuation(vmap, v, lv)
    if wv.is_infinite:
        return wu
    wv = wv + vmap.radicand_values[lv].half()
    if wu.is_infinite:
        return wv
    if wu != wv:
        return min(wu, wv)
    tower = vmap.tower.truncate(level)
    norm = tower.element(raw).norm_down()
    return _raw_valuation(vmap, norm.raw, lv).half()


def tower_valuation(vmap: ValuationMap, x: Any) -> ValuationValue:
    """w(u + v*sqrt(d)) = min(w(u), w(v) + w(d)/2) when these differ, else w(N(x))/2."""
    if not isinstance(x, TowerElement):
        x = vmap.tower.coerce(x)
    if not vmap.tower.extends(x.tower):
        raise MixedFieldHandles(f"{x.tower.name} is not covered by the {vmap.name} map on {vmap.tower.name}")
    return _raw_valuation(vmap, x.raw, x.level)


def _residue(vmap: ValuationMap, d: Any, k: int) -> Fraction | int | None:
    """Residue class of d / pi^k for a base-field radicand d of even valuation k."""
    if vmap.kind == "t_adic":
        unit = d * RationalFunction.t_power(-k) if isinstance(d, RationalFunction) else Fraction(d)
        if isinstance(unit, RationalFunction):
            return unit.num[0] / unit.den[0]
        return unit
    p = vmap.p
    if p == 2:
        return None
    unit = Fraction(d) / Fraction(p) ** k  # type: ignore[operator]
    return unit.numerator * pow(unit.denominator, -1, p) % p  # type: ignore[arg-type]


def _inert_base_radicand(vmap: ValuationMap, d: Any, k: int) -> bool:
    res = _residue(vmap, d, k)
    if res is None:
        return False
    if vmap.kind == "t_adic":
        return rational_sqrt(Fraction(res)) is None
    p = vmap.p
    return pow(int(res), (p - 1) // 2, p) == p - 1  # type: ignore[operator]


def _split_base_radicand(vmap: ValuationMap, d: Any, k: int) -> bool:
    """d / pi^k is a square in the completion, so sqrt(d) gives two extensions."""
    if vmap.kind == "p_adic" and vmap.p == 2:
        unit = Fraction(d) / Fraction(2) ** k
        return unit.numerator * unit.denominator % 8 == 1
    res = _residue(vmap, d, k)
    if vmap.kind == "t_adic":
        return rational_sqrt(Fraction(res)) is not None  # type: ignore[arg-type]
    p = vmap.p
    return pow(int(res), (p - 1) // 2, p) == 1  # type: ignore[arg-type, operator]


def _sample_level(tower: TowerField, rng: np.random.Generator) -> TowerElement:
    density = min(1.0, 3 / tower.degree)
    return tower.random_element(rng, height=2, sparsity=1 - density)


def _validate_level(vmap: ValuationMap, level: int, samples: int, seed: int) -> None:
    tower = vmap.tower.truncate(level)
    rng = np.random.default_rng([seed, level])
    g = tower.generator()
    for i in range(samples):
        if i % 4 == 0:
            # conjugate pairs u +- v*sqrt(d) expose split residue behaviour
            u = _sample_level(tower.truncate(level - 1), rng).lift(tower)
            v = random_base_element(tower.base, rng, height=2)
            x, y = u + g * v, u - g * v
        else:
            x, y = _sample_level(tower, rng), _sample_level(tower, rng)
        wx, wy = vmap(x), vmap(y)
        ok = vmap(x * y) == wx + wy
        s = vmap(x + y)
        ok = ok and s >= min(wx, wy) and (wx == wy or s == min(wx, wy))
        if not ok:
            raise NonUniqueExtension(
                f"norm-based extension fails at level {level}",
                level=level,
                witness={"x": x.text(), "y": y.text()},
            )


def extend_to_tower(
    base_val: ValuationMap,
    tower: TowerField,
    *,
    samples: int = 500,
    seed: int = 0,
) -> ValuationMap:
    """Extend ``base_val`` level by level to ``tower``, certifying each new level."""
    if not tower.extends(base_val.tower):
        raise MixedFieldHandles(f"{tower.name} does not extend {base_val.tower.name}")
    vmap = base_val
    for level in range(base_val.tower.levels + 1, tower.levels + 1):
        sub = tower.truncate(level - 1)
        d = sub.element(tower.radicands[level - 1])
        wd = tower_valuation(vmap, d)
        r = vmap.granularity()
        scaled = wd.value * 2**r  # type: ignore[operator]
        partial = ValuationMap(
            vmap.kind,
            tower.truncate(level),
            vmap.p,
            vmap.per_level_uniqueness,
            vmap.radicand_values + (wd,),
        )
        if scaled.denominator == 1 and scaled.numerator % 2:
            cert = LevelCertificate(level, "ramified", wd)
        elif level == 1 and _split_base_radicand(vmap, d.raw, int(wd.value)):  # type: ignore[arg-type]
            raise NonUniqueExtension(
                f"sqrt({d.text()}) splits over the completion of {vmap.name}",
                level=level,
                witness={"radicand": d.text()},
            )
        elif level == 1 and _inert_base_radicand(vmap, d.raw, int(wd.value)):  # type: ignore[arg-type]
            cert = LevelCertificate(level, "inert", wd)
        else:
            _validate_level(partial, level, samples, seed)
            cert = LevelCertificate(level, "validated_by_sampling", wd, samples)
        log.debug("%s extension to level %d: %s, w(d) = %s", vmap.name, level, cert.kind, wd.text())
        vmap = ValuationMap(
            vmap.kind,
            tower.truncate(level),
            vmap.p,
            vmap.per_level_uniqueness + (cert,),
            vmap.radicand_values + (wd,),
        )
    return vmap


def norm_compare(vmap: ValuationMap, x: Any, bound: LogNorm | ValuationValue | Fraction | int) -> Membership:
    """Membership in the ball |w(x)| <= r (the zero element is inside)."""
    if isinstance(bound, LogNorm):
        r = bound.neg_log.value
    elif isinstance(bound, ValuationValue):
        r = bound.value
    else:
        r = Fraction(bound)
    if r is None or r < 0:
        raise PreconditionViolation("ball radius must be a finite non-negative rational")
    return Membership.INSIDE if tower_valuation(vmap, x).abs_le(r) else Membership.OUTSIDE
