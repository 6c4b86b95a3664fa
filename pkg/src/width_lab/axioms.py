"""Sample-based checks of the norm axioms (identity of indiscernibles, subadditivity,
submultiplicativity, compatibility with squaring, a small element of large norm).

Works for valuation log-norms (exact) and Galois-radius enclosures, where a check
only fails when the enclosures prove the violation.
"""
from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Literal

import numpy as np

from width_lab.errors import PreconditionViolation
from width_lab.fields import to_text
from width_lab.galois_norm import RadiusEnclosure, eisenstein_near, galois_radius
from width_lab.ratfunc import RationalFunction
from width_lab.towers import Q_TOWER, QT_TOWER, TowerField, tower_adjoin_sqrt
from width_lab.valuations import LogNorm, ValuationMap, base_valuation_map, extend_to_tower

log = logging.getLogger(__name__)

Verdict = Literal["pass", "fail", "inconclusive"]
NormValue = LogNorm | RadiusEnclosure
NormFn = Callable[[Any], NormValue]
PairSampler = Callable[[np.random.Generator], tuple[Any, Any]]


@dataclass(frozen=True, slots=True)
class AxiomCheck:
    axiom: str
    index: int
    inputs: dict[str, str]
    verdict: Verdict
    enclosures: dict[str, str] = field(default_factory=dict)

    def as_record(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class AxiomReport:
    norm_name: str
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def violations(self) -> list[AxiomCheck]:
        return [c for c in self.checks if c.verdict == "fail"]

    @property
    def passed(self) -> bool:
        return not self.violations

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "inconclusive": 0}
        for c in self.checks:
            out[c.verdict] += 1
        return out

    def records(self) -> list[dict[str, Any]]:
        return [c.as_record() for c in sorted(self.checks, key=lambda c: (c.index, c.axiom))]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records())


# --- comparisons in the two norm representations ---

def _text(v: NormValue) -> str:
    return v.text() if isinstance(v, RadiusEnclosure) else v.neg_log.text()


def _is_zero(v: NormValue) -> bool:
    return v.is_zero()


def _subadditive(s: NormValue, x: NormValue, y: NormValue) -> Verdict:
    if isinstance(s, LogNorm):
        # ultrametric form of |x+y| <= |x| + |y|
        lo = min(x.neg_log, y.neg_log)  # type: ignore[union-attr]
        return "pass" if s.neg_log >= lo else "fail"
    bound = x + y  # type: ignore[operator]
    if s.lower > bound.upper:
        return "fail"
    return "pass" if s.upper <= bound.lower else "inconclusive"


def _submultiplicative(p: NormValue, x: NormValue, y: NormValue) -> Verdict:
    if isinstance(p, LogNorm):
        return "pass" if p.neg_log == x.neg_log + y.neg_log else "fail"  # type: ignore[union-attr]
    bound = x * y  # type: ignore[operator]
    if p.lower > bound.upper:
        return "fail"
    return "pass" if p.upper <= bound.lower else "inconclusive"


def _squaring(sq: NormValue, x: NormValue) -> Verdict:
    if isinstance(sq, LogNorm):
        return "pass" if sq.neg_log == x.neg_log * 2 else "fail"  # type: ignore[union-attr]
    return "fail" if sq.disjoint(x.square()) else "pass"  # type: ignore[union-attr]


def _exceeds_one(v: NormValue) -> Verdict:
    if isinstance(v, LogNorm):
        return "pass" if v.exceeds_one() else "fail"
    if v.lower > 1:
        return "pass"
    return "fail" if v.upper <= 1 else "inconclusive"


def _is_one(v: NormValue) -> Verdict:
    if isinstance(v, LogNorm):
        return "pass" if v.neg_log == 0 else "fail"
    return "pass" if v.contains(1) else "fail"


def norm_axiom_suite(
    norm: NormFn,
    sampler: PairSampler,
    witness: Any,
    *,
    one: Any = 1,
    samples: int = 1000,
    seed: int = 0,
    name: str = "norm",
) -> AxiomReport:
    """Run axioms (i)-(iv) on ``samples`` pairs and (v) on the witness.

    The caller attests that ``witness`` represents a real number in [0, 1].
    Sub-seeds are drawn per pair from ``(seed, index)``, so the report does not
    depend on how the pairs are scheduled.
    """
    report = AxiomReport(name)
    wv = norm(witness)
    report.checks.append(AxiomCheck("v", -1, {"witness": to_text(witness)}, _exceeds_one(wv), {"witness": _text(wv)}))
    nv = norm(one)
    report.checks.append(AxiomCheck("unit", -1, {"x": "1"}, _is_one(nv), {"x": _text(nv)}))
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        x, y = sampler(rng)
        nx, ny = norm(x), norm(y)
        inputs = {"x": to_text(x), "y": to_text(y)}
        encl = {"x": _text(nx), "y": _text(ny)}
        zero_ok = _is_zero(nx) == (x == 0) and _is_zero(ny) == (y == 0)
        report.checks.append(AxiomCheck("i", i, inputs, "pass" if zero_ok else "fail", encl))
        ns, np_, nsq = norm(x + y), norm(x * y), norm(x * x)
        report.checks.append(AxiomCheck("ii", i, inputs, _subadditive(ns, nx, ny), {**encl, "x+y": _text(ns)}))
        report.checks.append(AxiomCheck("iii", i, inputs, _submultiplicative(np_, nx, ny), {**encl, "xy": _text(np_)}))
        report.checks.append(AxiomCheck("iv", i, inputs, _squaring(nsq, nx), {**encl, "x^2": _text(nsq)}))
    counts = report.counts()
    log.info("%s axiom suite: %d checks, %d violations, %d inconclusive", name, len(report.checks), counts["fail"], counts["inconclusive"])
    return report


def norm_constant(norm: NormFn) -> Fraction:
    """C = 4|1/2| as an exact rational (so C = 2 for the Galois radius and 4 for exp-norms)."""
    half = norm(Fraction(1, 2))
    if isinstance(half, RadiusEnclosure):
        if half.lower != half.upper:
            raise PreconditionViolation("|1/2| is not exact")
        return 4 * half.lower
    if half.neg_log != 0:
        raise PreconditionViolation("|1/2| is not a rational number for this exp-norm")
    return Fraction(4)


# --- ready-made norms, towers and samplers ---

def valuation_norm(vmap: ValuationMap) -> NormFn:
    return vmap.log_norm


def radius_norm(tol: Fraction = Fraction(1, 1000), max_doublings: int = 16) -> NormFn:
    def norm(x: Any) -> RadiusEnclosure:
        return galois_radius(x, tol, max_doublings=max_doublings)

    return norm


def standard_qt_towers() -> list[TowerField]:
    """Q(t), Q(t)(sqrt(t^3)) and Q(t)(sqrt(1 - t^-4))."""
    t3 = tower_adjoin_sqrt(QT_TOWER, RationalFunction.t_power(3)).tower
    unit = tower_adjoin_sqrt(QT_TOWER, 1 - RationalFunction.t_power(-4)).tower
    return [QT_TOWER, t3, unit]


def standard_q_towers() -> list[TowerField]:
    """Q(sqrt 2), Q(sqrt 2, sqrt 3), Q(sqrt 2, sqrt 3, sqrt 5) and Q(i)."""
    towers = []
    tower = Q_TOWER
    for d in (2, 3, 5):
        tower = tower_adjoin_sqrt(tower, d).tower
        towers.append(tower)
    towers.append(tower_adjoin_sqrt(Q_TOWER, -1).tower)
    return towers


def tower_pair_sampler(towers: list[TowerField], *, height: int = 3) -> PairSampler:
    def sample(rng: np.random.Generator) -> tuple[Any, Any]:
        tower = towers[int(rng.integers(0, len(towers)))]
        return (
            tower.random_element(rng, height=height),
            tower.random_element(rng, height=height),
        )

    return sample


def valuation_suite(kind: str = "t_adic", *, p: int = 2, samples: int = 1000, seed: int = 0, validation_samples: int = 500) -> list[AxiomReport]:
    """The exp-norm suite on the base field and on each standard tower."""
    reports = []
    if kind == "t_adic":
        base = base_valuation_map("t_adic")
        towers = standard_qt_towers()
        witness: Any = RationalFunction.t_power(-1)
    else:
        base = base_valuation_map("p_adic", p=p)
        towers = [Q_TOWER, tower_adjoin_sqrt(Q_TOWER, p).tower, tower_adjoin_sqrt(Q_TOWER, _inert_radicand(p)).tower]
        witness = Fraction(1, p)
    for tower in towers:
        vmap = extend_to_tower(base, tower, samples=validation_samples, seed=seed)
        reports.append(
            norm_axiom_suite(
                vmap.log_norm,
                tower_pair_sampler([tower]),
                tower.coerce(witness),
                samples=samples,
                seed=seed,
                name=f"{vmap.name} on {tower.name}",
            )
        )
    return reports


def galois_suite(*, samples: int = 1000, seed: int = 0, tol: Fraction = Fraction(1, 32)) -> AxiomReport:
    """Galois radius on random Q-towers; witness is the Eisenstein small root near 1/2."""
    q = eisenstein_near(Fraction(1, 2), Fraction(2), Fraction(1, 1000), 2)
    return norm_axiom_suite(
        radius_norm(tol),
        tower_pair_sampler(standard_q_towers(), height=2),
        q.small_root(),
        samples=samples,
        seed=seed,
        name="galois radius",
    )


def _inert_radicand(p: int) -> int:
    """A unit radicand with a unique extension at p: 3 for p = 2, else the least non-residue."""
    if p == 2:
        return 3
    return next(n for n in range(2, p) if pow(n, (p - 1) // 2, p) == p - 1)
