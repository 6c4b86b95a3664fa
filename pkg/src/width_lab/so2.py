"""Rotations [[a, b], [-b, a]] with a^2 + b^2 = 1: dyadic square roots and witness families."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal

from width_lab.certificates import GeneratorSpec, Word, is_in_S, radius_growth_k, word_evaluate
from width_lab.errors import KMaxExceeded, PreconditionViolation
from width_lab.galois_norm import RadiusEnclosure, eisenstein_near, galois_radius
from width_lab.matrices import GroupMatrix, so2
from width_lab.ratfunc import RationalFunction
from width_lab.towers import Q_TOWER, QT_TOWER, TowerElement, TowerField, tower_adjoin_sqrt
from width_lab.valuations import extend_to_tower

log = logging.getLogger(__name__)

WitnessMode = Literal["valuation", "galois"]
# rho(x) lies within this of 2 for the Eisenstein witness x
GALOIS_RADIUS_EPS = Fraction(1, 100)


def _tower_of(x: Any) -> TowerField:
    if isinstance(x, TowerElement):
        return x.tower
    return QT_TOWER if isinstance(x, RationalFunction) else Q_TOWER


def _common_tower(a: Any, b: Any) -> TowerField:
    ta, tb = _tower_of(a), _tower_of(b)
    return ta if ta.extends(tb) else tb


def so2_sqrt(z: GroupMatrix) -> tuple[GroupMatrix, TowerField]:
    """w with w^2 = z: a' = sqrt((1 + a)/2) adjoined to the tower, b' = b/(2a')."""
    a, b = z[0, 0], z[0, 1]
    tower = _common_tower(a, b)
    a, b = tower.coerce(a), tower.coerce(b)
    if z.is_identity():
        return so2(a, b), tower
    if a == -1:
        return so2(tower.zero(), tower.one()), tower
    radicand = (1 + a) * Fraction(1, 2)
    adj = tower_adjoin_sqrt(tower, radicand)
    root = adj.root
    # b/(2a') = b a' / (2 a'^2) = b a' / (1 + a); the inverse stays one level down
    b_root = b.lift(adj.tower) * root * (1 / (1 + a)).lift(adj.tower)
    return so2(root, b_root), adj.tower


def _align(z: GroupMatrix, spec: GeneratorSpec, samples: int, seed: int) -> tuple[GroupMatrix, GeneratorSpec]:
    """Put z over the valuation map's base field and extend the map to cover z's tower."""
    if spec.mode != "valuation_ball":
        return z, spec
    vmap = spec.vmap
    a, b = z[0, 0], z[0, 1]
    tower = _common_tower(a, b)
    if tower.levels == 0 and tower.base != vmap.tower.base:  # type: ignore[union-attr]
        a, b = (x.base_value() if isinstance(x, TowerElement) else x for x in (a, b))
        z = so2(vmap.tower.coerce(a), vmap.tower.coerce(b))  # type: ignore[union-attr]
        tower = vmap.tower  # type: ignore[union-attr]
    if not vmap.tower.extends(tower):  # type: ignore[union-attr]
        spec = spec.with_vmap(extend_to_tower(vmap, tower, samples=samples, seed=seed))  # type: ignore[arg-type]
    return z, spec


def so2_generate(z: GroupMatrix, spec: GeneratorSpec, k_max: int, *, validation_samples: int = 500, seed: int = 0) -> Word:
    """2^k copies of a 2^k-th root of z that lies in S.

    At least one square root is taken for any z other than the identity, so
    that -1 comes out as two quarter turns.
    """
    if z.is_identity():
        return Word.of([z])
    z, spec = _align(z, spec, validation_samples, seed)
    w, k = z, 0
    while True:
        if k >= k_max:
            raise KMaxExceeded(f"no 2^k-th root of z in S with k <= {k_max}", history=[{"k": k}])
        w, tower = so2_sqrt(w)
        k += 1
        if spec.mode == "valuation_ball" and not spec.vmap.tower.extends(tower):  # type: ignore[union-attr]
            spec = spec.with_vmap(extend_to_tower(spec.vmap, tower, samples=validation_samples, seed=seed))  # type: ignore[arg-type]
        if is_in_S(w, spec):
            break
    log.info("so2_generate: root in S after k=%d square roots (tower degree %d)", k, _tower_of(w[0, 0]).degree)
    return Word.of([w] * 2**k)


@dataclass(frozen=True)
class SO2Witness:
    n: int
    mode: WitnessMode
    matrix: GroupMatrix
    x: Any

    @property
    def tower(self) -> TowerField:
        return _tower_of(self.matrix[0, 0])


def so2_witness(n: int, mode: WitnessMode = "valuation") -> GroupMatrix:
    return so2_witness_data(n, mode).matrix


def so2_witness_data(n: int, mode: WitnessMode = "valuation") -> SO2Witness:
    """a = x^(2^n), b = sqrt(1 - a^2) with x = t^-1 or the Eisenstein small root near 1/2."""
    if n < 0:
        raise PreconditionViolation("n must be >= 0")
    if mode == "valuation":
        x: Any = RationalFunction.t_power(-1)
        a: Any = QT_TOWER.coerce(RationalFunction.t_power(-(2**n)))
    else:
        q = eisenstein_near(Fraction(1, 2), Fraction(2), Fraction(1, 1000), 2)
        x = q.small_root()
        a = x ** (2**n)
    tower = _tower_of(a)
    adj = tower_adjoin_sqrt(tower, 1 - a * a)
    a = a.lift(adj.tower)
    g = so2(a, adj.root)
    g.check()
    return SO2Witness(n, mode, g, x)


@dataclass(frozen=True)
class GaloisWitnessCheck:
    n: int
    radius: RadiusEnclosure
    k_range: tuple[int, int]

    @property
    def radius_grows(self) -> bool:
        return self.radius.lower >= (2 - GALOIS_RADIUS_EPS) ** (2**self.n)

    def admits(self, lower_bound: int) -> bool:
        lo, hi = self.k_range
        return lo <= lower_bound <= hi


def galois_witness_check(
    data: SO2Witness,
    C: Fraction | int = 2,
    *,
    tol: Fraction = Fraction(1, 1000),
    max_doublings: int = 16,
) -> GaloisWitnessCheck:
    """rho(a) for a = x^(2^n), enclosed from x directly, and the radius-ball bounds it allows.

    The radius-ball bound of a matrix with entry a, computed at the same
    tolerance, lies between the growth indices of the two ends.
    """
    if data.mode != "galois":
        raise PreconditionViolation("the radius check applies to the galois witness family")
    enc = galois_radius(data.x ** (2**data.n), tol, max_doublings=max_doublings)
    # any other enclosure of rho(a) at this tolerance starts no lower than this
    floor = enc.lower * (1 - 2 * tol)
    return GaloisWitnessCheck(data.n, enc, (radius_growth_k(floor, C), radius_growth_k(enc.upper, C)))
