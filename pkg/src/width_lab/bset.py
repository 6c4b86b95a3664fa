"""Additive generating sets B over algebraic extensions of F_p.

A level extends F_{p^e} to F_{p^{ef}} by a sampled tuple F that spans an
F_p-complement of the embedded subfield and keeps every substituted polynomial
r in P_E away from that subfield on F. Stacking levels gives B_0 c B_1 c ...
with B_i an F_p-basis of F_{p^{b_i}}. Everything here is exact and seeded;
per-trial generators come from ``default_rng([*seed, trial])`` so trial i
does not depend on how earlier trials went.
"""
from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from width_lab.certificates import Word
from width_lab.errors import BudgetExhausted, CapExceeded, PreconditionViolation
from width_lab.finite_fields import (
    FFElement,
    FieldEmbedding,
    FiniteField,
    finite_field_embed,
    finite_field_make,
    rank_mod_p,
    solve_mod_p,
)
from width_lab.galois_norm import root_floor
from width_lab.matrices import E as E12
from width_lab.multipoly import MPoly, PolySet, SubstitutedSet, substitute_set

log = logging.getLogger(__name__)

Seed = int | Sequence[int]


def _seed_seq(seed: Seed) -> list[int]:
    return [int(seed)] if isinstance(seed, int) else [int(s) for s in seed]


# --- complement samples ---

@dataclass(frozen=True)
class ComplementSample:
    elements: tuple[FFElement, ...]
    trial: int = -1

    def texts(self) -> list[str]:
        return [x.text() for x in self.elements]


def _spans_complement(sub_vectors: Sequence[tuple[int, ...]], elements: Sequence[FFElement], p: int, n: int) -> bool:
    rows = list(sub_vectors) + [x.vector() for x in elements]
    return len(rows) == n and rank_mod_p(rows, p) == n


def sample_complement(e: int, f: int, embedding: FieldEmbedding, rng: np.random.Generator) -> ComplementSample | None:
    """e(f-1) uniform elements of F_{p^{ef}}, or None when they miss a complement."""
    big = embedding.target
    if embedding.source.n != e or big.n != e * f:
        raise PreconditionViolation(f"embedding {embedding.source.name} -> {big.name} does not match e={e}, f={f}")
    elements = tuple(big.random_element(rng) for _ in range(e * (f - 1)))
    sub = [b.vector() for b in embedding.basis_images()]
    return ComplementSample(elements) if _spans_complement(sub, elements, big.p, big.n) else None


@dataclass(frozen=True)
class PortionBound:
    exact: Fraction
    lower: Fraction

    @property
    def holds(self) -> bool:
        return self.exact >= self.lower


def complement_portion(p: int, e: int, f: int, *, bits: int = 40) -> PortionBound:
    """prod_{i=1}^{e(f-1)} (1 - p^-i) and a rational lower bound for 4^(-1/(p-1))."""
    if e < 1 or f < 1:
        raise PreconditionViolation("e and f must be >= 1")
    exact = Fraction(1)
    for i in range(1, e * (f - 1) + 1):
        exact *= 1 - Fraction(1, p**i)
    if p == 2:
        lower = Fraction(1, 4)
    elif p == 3:
        lower = Fraction(1, 2)
    else:
        lower = root_floor(Fraction(1, 4), p - 1, bits)
    bound = PortionBound(exact, lower)
    if not bound.holds:
        raise ArithmeticError(f"complement portion {exact} fell below {lower}")
    return bound


@dataclass(frozen=True)
class CensusResult:
    p: int
    e: int
    f: int
    accepted: int
    total: int

    @property
    def portion(self) -> Fraction:
        return Fraction(self.accepted, self.total)


def _fields_for(p: int, e: int, f: int, seed: int) -> FieldEmbedding:
    small = finite_field_make(p, e, seed)
    big = finite_field_make(p, e * f, seed)
    return finite_field_embed(small, big, seed)


def complement_census(p: int, e: int, f: int, *, cap: int = 1 << 16, seed: int = 0) -> CensusResult:
    """Exact acceptance count over every e(f-1)-tuple of F_{p^{ef}}."""
    k = e * (f - 1)
    total = p ** (e * f * k)
    if total > cap:
        raise CapExceeded(f"census of {total} tuples exceeds cap {cap}", history=[{"p": p, "e": e, "f": f, "tuples": total}])
    emb = _fields_for(p, e, f, seed)
    sub = [b.vector() for b in emb.basis_images()]
    elements = list(emb.target.elements())
    accepted = sum(
        1 for tup in itertools.product(elements, repeat=k) if _spans_complement(sub, tup, p, e * f)
    )
    log.info("complement census p=%d e=%d f=%d: %d/%d accepted", p, e, f, accepted, total)
    return CensusResult(p, e, f, accepted, total)


def _within_3_sigma(count: int, trials: int, prob: Fraction) -> bool:
    """|count - N pi| <= 3 sqrt(N pi (1 - pi)), compared on squares."""
    dev = count - trials * prob
    return dev * dev <= 9 * trials * prob * (1 - prob)


@dataclass(frozen=True)
class RateReport:
    p: int
    e: int
    f: int
    accepted: int
    trials: int
    bound: PortionBound

    @property
    def empirical(self) -> Fraction:
        return Fraction(self.accepted, self.trials)

    @property
    def within_3_sigma(self) -> bool:
        return _within_3_sigma(self.accepted, self.trials, self.bound.exact)

    @property
    def above_lower(self) -> bool:
        return self.empirical >= self.bound.lower


def complement_acceptance_rate(p: int, e: int, f: int, *, trials: int = 10_000, seed: int = 0) -> RateReport:
    emb = _fields_for(p, e, f, seed)
    accepted = 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, p, e, f, trial])
        if sample_complement(e, f, emb, rng) is not None:
            accepted += 1
    report = RateReport(p, e, f, accepted, trials, complement_portion(p, e, f))
    log.info("complement rate p=%d e=%d f=%d: %d/%d (exact %s)", p, e, f, accepted, trials, report.bound.exact)
    return report


# --- avoiding search ---

def sz_failure_bound(P_E: SubstitutedSet | int, e: int, f: int, n_deg: int, m: int, *, p: int | None = None) -> Fraction:
    """|P_E| (e(f-1))^m n / p^{e(f-1)}; may exceed 1."""
    if isinstance(P_E, SubstitutedSet):
        size, p = len(P_E), P_E.base.p
    else:
        size = P_E
    if p is None:
        raise PreconditionViolation("p is required when P_E is given as a count")
    k = e * (f - 1)
    return Fraction(size * k**m * n_deg, p**k)


@dataclass(frozen=True)
class SuccessBound:
    d_lower: Fraction
    failure_exact: Fraction
    failure_coarse: Fraction

    @property
    def success_exact(self) -> Fraction:
        return self.d_lower - self.failure_exact

    @property
    def success_coarse(self) -> Fraction:
        return self.d_lower - self.failure_coarse

    def as_dict(self) -> dict[str, str]:
        return {
            "d_lower": str(self.d_lower),
            "failure_exact": str(self.failure_exact),
            "failure_coarse": str(self.failure_coarse),
            "success_exact": str(self.success_exact),
            "success_coarse": str(self.success_coarse),
        }


def lemma3_success_bound(P: PolySet, P_E: SubstitutedSet, e: int, f: int) -> SuccessBound:
    """d minus the failure bound, with |P_E| counted exactly and as (e+1)^m |P|."""
    m, n_deg, p = P.m, P.n_deg, P.p
    d = complement_portion(p, e, f).lower
    coarse = sz_failure_bound((e + 1) ** m * len(P), e, f, n_deg, m, p=p)
    return SuccessBound(d, sz_failure_bound(P_E, e, f, n_deg, m), coarse)


@dataclass
class SearchOutcome:
    sample: ComplementSample | None
    trials: int = 0
    acceptances: int = 0
    violations: int = 0
    P_E_size: int = 0

    @property
    def exhausted(self) -> bool:
        return self.sample is None

    def stats(self) -> dict[str, int]:
        return {"trials": self.trials, "acceptances": self.acceptances, "violations": self.violations, "P_E": self.P_E_size}


def _first_hit(P_E: SubstitutedSet, F: Sequence[FFElement], e: int) -> tuple[MPoly, tuple[FFElement, ...], FFElement] | None:
    """First (r, point, value) with r(point) in F_{p^e}, or None."""
    for r in P_E:
        free = r.free_variables()
        for point in itertools.product(F, repeat=len(free)):
            value = r.evaluate(dict(zip(free, point)))
            if value.in_subfield(e):
                return r, point, value
    return None


def lemma3_search(
    P: PolySet,
    E: Sequence[FFElement],
    e: int,
    f: int,
    budget: int,
    seed: Seed = 0,
    *,
    embedding: FieldEmbedding,
) -> SearchOutcome:
    """Rejection-sample complements until every r in P_E avoids F_{p^e} on F.

    ``E`` lives in ``embedding.target``. Trial i uses ``default_rng([*seed, i])``.
    """
    P_E = substitute_set(P, E, embedding.target)
    outcome = SearchOutcome(None, P_E_size=len(P_E))
    base = _seed_seq(seed)
    for trial in range(max(budget, 0)):
        outcome.trials += 1
        rng = np.random.default_rng([*base, trial])
        sample = sample_complement(e, f, embedding, rng)
        if sample is None:
            continue
        outcome.acceptances += 1
        if _first_hit(P_E, sample.elements, e) is not None:
            outcome.violations += 1
            continue
        outcome.sample = ComplementSample(sample.elements, trial)
        break
    log.info(
        "lemma3 search e=%d f=%d |P_E|=%d: %s after %d trials (%d accepted, %d violating)",
        e, f, len(P_E), "found" if outcome.sample else "exhausted", outcome.trials, outcome.acceptances, outcome.violations,
    )
    return outcome


@dataclass(frozen=True)
class PositivityCheck:
    bound: SuccessBound
    budget: int | None
    outcome: SearchOutcome | None

    @property
    def applicable(self) -> bool:
        return self.bound.success_exact > 0

    @property
    def passed(self) -> bool:
        return not self.applicable or (self.outcome is not None and not self.outcome.exhausted)


def lemma3_positivity(P: PolySet, e: int, f: int, *, seed: int = 0) -> PositivityCheck:
    """When the exact success bound is positive, search must succeed within 10/bound trials."""
    emb = _fields_for(P.p, e, f, seed)
    E = [emb(b) for b in emb.source.power_basis()]
    P_E = substitute_set(P, E, emb.target)
    bound = lemma3_success_bound(P, P_E, e, f)
    if bound.success_exact <= 0:
        return PositivityCheck(bound, None, None)
    budget = math.ceil(10 / bound.success_exact)
    outcome = lemma3_search(P, E, e, f, budget, (seed, e, f), embedding=emb)
    return PositivityCheck(bound, budget, outcome)


# --- nested bases ---

@dataclass(frozen=True)
class BLevel:
    b: int
    field: FiniteField
    basis: tuple[FFElement, ...]
    new: tuple[FFElement, ...]
    embedding: FieldEmbedding | None = None
    f: int = 1

    def as_dict(self) -> dict[str, Any]:
        return {
            "b": self.b,
            "f": self.f,
            "modulus": list(self.field.modulus),
            "embedding_image": self.embedding.image_of_generator.text() if self.embedding else None,
            "B": [x.text() for x in self.basis],
            "new": [x.text() for x in self.new],
        }


@dataclass
class BBuildState:
    p: int
    levels: list[BLevel]
    history: list[dict[str, Any]] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def embed(self, x: FFElement, src: int, dst: int) -> FFElement:
        """Carry an element of level ``src`` up to level ``dst``."""
        if dst < src:
            raise PreconditionViolation(f"cannot embed level {src} into level {dst}")
        for j in range(src + 1, dst + 1):
            x = self.levels[j].embedding(x)  # type: ignore[misc]
        return x

    def basis_in(self, i: int, j: int) -> list[FFElement]:
        return [self.embed(x, i, j) for x in self.levels[i].basis]

    def as_dict(self) -> dict[str, Any]:
        return {"p": self.p, "levels": [lv.as_dict() for lv in self.levels], "history": self.history}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"


def corollary4_build(
    p: int,
    P_family: Sequence[PolySet],
    depth: int,
    e0: int,
    f_schedule: Sequence[int] = (2, 3),
    budget: int = 10_000,
    seed: int = 0,
) -> BBuildState:
    """B_0 = power basis of F_{p^{e0}}; B_{i+1} = B_i plus an avoiding sample for P_family[i].

    ``budget`` counts trials over the whole build. Each f in the schedule is
    tried in turn at a level until one succeeds.
    """
    if depth < 1:
        raise PreconditionViolation("depth must be >= 1")
    if len(P_family) < depth:
        raise PreconditionViolation(f"need {depth} polynomial stages, got {len(P_family)}")
    field0 = finite_field_make(p, e0, seed)
    basis0 = tuple(field0.power_basis())
    state = BBuildState(p, [BLevel(e0, field0, basis0, basis0)])
    spent = 0
    for i in range(depth):
        cur = state.levels[-1]
        P = P_family[i]
        for f in f_schedule:
            big = finite_field_make(p, cur.b * f, seed)
            emb = finite_field_embed(cur.field, big, seed)
            E = [emb(x) for x in cur.basis]
            outcome = lemma3_search(P, E, cur.b, f, budget - spent, (seed, i, f), embedding=emb)
            spent += outcome.trials
            state.history.append({"level": i + 1, "e": cur.b, "f": f, **outcome.stats(), "found": not outcome.exhausted})
            if outcome.sample is not None:
                new = outcome.sample.elements
                state.levels.append(BLevel(cur.b * f, big, tuple(E) + new, new, emb, f))
                log.info("B level %d: b=%d (f=%d) after %d trials", i + 1, cur.b * f, f, outcome.trials)
                break
        else:
            raise BudgetExhausted(f"level {i + 1} not built within {budget} trials", history=state.history)
    return state


@dataclass
class StratificationReport:
    checks: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)
    per_level: list[dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _stage(P: PolySet | Sequence[PolySet], i: int) -> PolySet:
    if isinstance(P, PolySet):
        return P
    return P[min(i, len(P) - 1)]


def _evaluation_count(polys: Sequence[MPoly], size: int) -> int:
    return sum(size ** len(r.free_variables()) for r in polys)


def verify_stratification(
    state: BBuildState,
    P: PolySet | Sequence[PolySet],
    m_level: int = 0,
    *,
    cap: int = 1_000_000,
) -> StratificationReport:
    """Exhaustively recheck every level transition of a built state.

    For i >= m_level: no value r(s), r in P_{B_i}, s over B_{i+1} minus B_i, lies in
    the embedded F_{p^{b_i}}. Each B_i must be a basis of its field and contained
    in B_{i+1}. At the base, P(B_{m_level}) is checked to lie in F_{p^{b_m}} inside
    the top field.
    """
    report = StratificationReport()
    top = state.depth
    p = state.p
    for i, lv in enumerate(state.levels):
        if rank_mod_p([x.vector() for x in lv.basis], p) != lv.b or len(lv.basis) != lv.b:
            report.violations.append({"kind": "basis", "level": i})
    base_P = _stage(P, m_level)
    B_m = state.basis_in(m_level, top)
    if _evaluation_count(base_P.polys, len(B_m)) > cap:
        raise CapExceeded(f"base check exceeds {cap} evaluations", history=[{"level": m_level}])
    b_m = state.levels[m_level].b
    for r in base_P:
        free = r.free_variables()
        for point in itertools.product(B_m, repeat=len(free)):
            report.checks += 1
            value = r.evaluate(dict(zip(free, point)))
            if not value.in_subfield(b_m):
                report.violations.append({"kind": "base", "level": m_level, "poly": r.text(), "value": value.text()})
    for i in range(m_level, top):
        cur, nxt = state.levels[i], state.levels[i + 1]
        E = [nxt.embedding(x) for x in cur.basis]  # type: ignore[misc]
        if not set(E) <= set(nxt.basis):
            report.violations.append({"kind": "monotone", "level": i + 1})
        new = [x for x in nxt.basis if x not in set(E)]
        P_E = substitute_set(_stage(P, i), E, nxt.field)
        if _evaluation_count(P_E.polys, len(new)) > cap:
            raise CapExceeded(f"level {i + 1} check exceeds {cap} evaluations", history=[{"level": i + 1, "P_E": len(P_E)}])
        checks = 0
        bad = 0
        for r in P_E:
            free = r.free_variables()
            for point in itertools.product(new, repeat=len(free)):
                checks += 1
                value = r.evaluate(dict(zip(free, point)))
                if value.in_subfield(cur.b):
                    bad += 1
                    report.violations.append(
                        {
                            "kind": "stratification",
                            "level": i + 1,
                            "poly": r.text(),
                            "point": [x.text() for x in point],
                            "value": value.text(),
                        }
                    )
        report.checks += checks
        report.per_level.append({"level": i + 1, "P_E": len(P_E), "checks": checks, "violations": bad})
    log.info("stratification: %d checks, %d violations", report.checks, len(report.violations))
    return report


@dataclass
class CountingReport:
    rows: list[dict[str, Any]] = field(default_factory=list)

    @property
    def separating_level(self) -> int | None:
        return next((r["level"] for r in self.rows if r["separating"]), None)

    @property
    def passed(self) -> bool:
        return all(r["count"] <= r["bound"] for r in self.rows)


def counting_check(state: BBuildState, P: PolySet, *, cap: int = 1_000_000) -> CountingReport:
    """|P(B_i)| by enumeration against |P| b_i^m and p^{b_i}."""
    report = CountingReport()
    for i, lv in enumerate(state.levels):
        if _evaluation_count(P.polys, lv.b) > cap:
            raise CapExceeded(f"counting at level {i} exceeds {cap} evaluations", history=report.rows)
        values: set[FFElement] = set()
        for r in P:
            free = r.free_variables()
            for point in itertools.product(lv.basis, repeat=len(free)):
                values.add(r.evaluate(dict(zip(free, point))))
        bound = len(P) * lv.b**P.m
        size = state.p**lv.b
        report.rows.append({"level": i, "b": lv.b, "count": len(values), "bound": bound, "field_size": size, "separating": bound < size})
    return report


# --- Schwartz-Zippel and additive words ---

@dataclass(frozen=True)
class SZReport:
    p: int
    e: int
    f: int
    m: int
    n_deg: int
    hits: int
    trials: int
    bound: Fraction

    @property
    def rate(self) -> Fraction:
        return Fraction(self.hits, self.trials)

    @property
    def within_bound(self) -> bool:
        prob = min(self.bound, Fraction(1))
        return self.hits <= self.trials * prob or _within_3_sigma(self.hits, self.trials, prob)


def _random_poly(rng: np.random.Generator, m: int, n_deg: int, p: int) -> MPoly:
    exps = [exp for exp in itertools.product(range(n_deg + 1), repeat=m) if sum(exp) <= n_deg]
    terms: dict[tuple[int, ...], Any] = {exp: int(rng.integers(0, p)) for exp in exps}
    top = [exp for exp in exps if sum(exp) == n_deg]
    lead = top[int(rng.integers(0, len(top)))]
    terms[lead] = int(rng.integers(1, p)) if p > 2 else 1
    return MPoly.from_dict(terms, m, p)


def schwartz_zippel_rate(p: int, e: int, f: int, m: int, n_deg: int, trials: int, seed: int = 0) -> SZReport:
    """How often a random degree-n_deg r over F_p lands in F_{p^e} at a uniform point of F_{p^{ef}}^m."""
    if n_deg < 1:
        raise PreconditionViolation("n_deg must be >= 1")
    big = finite_field_make(p, e * f, seed)
    hits = 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        r = _random_poly(rng, m, n_deg, p)
        point = [big.random_element(rng) for _ in range(m)]
        if r.evaluate(point).in_subfield(e):
            hits += 1
    return SZReport(p, e, f, m, n_deg, hits, trials, Fraction(n_deg, p ** (e * (f - 1))))


def additive_factor_E12(alpha: FFElement | int, state: BBuildState, level: int) -> Word:
    """E12(alpha) as a product of E12(b), b in B_level, one factor per unit of each coordinate."""
    lv = state.levels[level]
    alpha = lv.field.coerce(alpha)
    coords = solve_mod_p([b.vector() for b in lv.basis], alpha.vector(), state.p)
    factors = [E12(b) for b, c in zip(lv.basis, coords) for _ in range(c)]
    return Word.of(factors, n=2, one=lv.field.one())
