"""Generating sets S, explicit words (upper bounds) and valuation/norm lower bounds on word length.

Conjugation convention: g^h = h^{-1} g h, so that E_12(mu)^{D(lam)} = E_12(lam^2 mu).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Literal

import numpy as np

from width_lab.errors import (
    DimensionMismatch,
    EnclosureInconclusive,
    LambdaNotUniformizer,
    NotSL,
    PreconditionViolation,
    Singular,
)
from width_lab.fields import field_of, to_text
from width_lab.galois_norm import RadiusEnclosure, galois_radius
from width_lab.matrices import D, GroupMatrix, GroupTag, diagonal, elementary, identity
from width_lab.ratfunc import RationalFunction
from width_lab.valuations import ValuationMap, ValuationValue, base_valuation_map, tower_valuation

log = logging.getLogger(__name__)

BallMode = Literal["valuation_ball", "radius_ball"]


@dataclass(frozen=True)
class GeneratorSpec:
    """S = matrices of the group whose entries lie in the ball B (plus diag(lam, 1, ...) for GL)."""

    mode: BallMode
    group_tag: GroupTag = "SL"
    vmap: ValuationMap | None = None
    r: Fraction = Fraction(1)
    C: Fraction = Fraction(2)
    extra_gl_diagonals: bool = False
    tol: Fraction = Fraction(1, 1000)
    refine_cap: int = 4
    max_doublings: int = 16

    @classmethod
    def valuation_ball(
        cls,
        vmap: ValuationMap | None = None,
        r: Fraction | int = 1,
        *,
        group_tag: GroupTag = "SL",
        extra_gl_diagonals: bool = False,
    ) -> GeneratorSpec:
        r = Fraction(r)
        if r < 1:
            raise PreconditionViolation(f"valuation ball radius must be >= 1, got {r}")
        vmap = vmap if vmap is not None else base_valuation_map("t_adic")
        return cls("valuation_ball", group_tag, vmap, r=r, extra_gl_diagonals=extra_gl_diagonals)

    @classmethod
    def radius_ball(
        cls,
        C: Fraction | int = 2,
        *,
        group_tag: GroupTag = "SO2",
        tol: Fraction = Fraction(1, 1000),
        refine_cap: int = 4,
        max_doublings: int = 16,
    ) -> GeneratorSpec:
        C = Fraction(C)
        if C < 2:
            raise PreconditionViolation(f"norm ball constant must be >= 2, got {C}")
        return cls("radius_ball", group_tag, C=C, tol=Fraction(tol), refine_cap=refine_cap, max_doublings=max_doublings)

    def with_vmap(self, vmap: ValuationMap) -> GeneratorSpec:
        return replace(self, vmap=vmap)

    def as_dict(self) -> dict[str, Any]:
        if self.mode == "valuation_ball":
            return {"mode": self.mode, "group": self.group_tag, "valuation": self.vmap.name, "r": str(self.r)}  # type: ignore[union-attr]
        return {"mode": self.mode, "group": self.group_tag, "C": str(self.C), "tol": str(self.tol)}

    # --- per-entry evaluation ---

    def valuation(self, x: Any) -> ValuationValue:
        return tower_valuation(self.vmap, x)  # type: ignore[arg-type]

    def radius(self, x: Any, tol: Fraction | None = None) -> RadiusEnclosure:
        return galois_radius(x, tol or self.tol, max_doublings=self.max_doublings)

    def entry_in_ball(self, x: Any) -> bool:
        if self.mode == "valuation_ball":
            return self.valuation(x).abs_le(self.r)
        tol = self.tol
        for _ in range(self.refine_cap + 1):
            try:
                enc = self.radius(x, tol)
            except EnclosureInconclusive:
                break
            if enc.upper <= self.C:
                return True
            if enc.lower > self.C:
                return False
            tol = tol / 16
        raise EnclosureInconclusive(f"radius of {to_text(x)} straddles C = {self.C}")


# --- words and certificates ---

@dataclass(frozen=True)
class Word:
    factors: tuple[GroupMatrix, ...]
    n: int
    one: Any = Fraction(1)

    @classmethod
    def of(cls, factors: list[GroupMatrix] | tuple[GroupMatrix, ...], *, n: int | None = None, one: Any = None) -> Word:
        factors = tuple(factors)
        if n is None:
            if not factors:
                raise DimensionMismatch("the dimension of an empty word must be given")
            n = factors[0].n
        if one is None:
            one = factors[0].one() if factors else Fraction(1)
        return cls(factors, n, one)

    def __len__(self) -> int:
        return len(self.factors)

    def __add__(self, other: Word) -> Word:
        if other.n != self.n:
            raise DimensionMismatch(f"words of dimension {self.n} and {other.n}")
        return Word(self.factors + other.factors, self.n, self.one)

    def texts(self) -> list[str]:
        return [g.text() for g in self.factors]


def word_evaluate(w: Word) -> GroupMatrix:
    """Ordered product of the factors, left to right; the empty word is the identity."""
    for g in w.factors:
        if g.n != w.n:
            raise DimensionMismatch(f"factor of dimension {g.n} in a word of dimension {w.n}")
    if not w.factors:
        return identity(w.n, w.one)
    out = w.factors[0]
    for g in w.factors[1:]:
        out = out @ g
    return out


def is_in_S(g: GroupMatrix, spec: GeneratorSpec) -> bool:
    if g.is_identity():
        return True
    if spec.group_tag == "GL":
        if spec.extra_gl_diagonals and _is_gl_diagonal_generator(g):
            return spec.entry_in_ball(g[0, 0])
        # the remaining GL generators are the SL ones
        if g.det() != 1:
            return False
    return all(spec.entry_in_ball(x) for x in g.entries())


def _is_gl_diagonal_generator(g: GroupMatrix) -> bool:
    return all(
        (x == 0) if i != j else (i == 0 or x == 1)
        for i, row in enumerate(g.rows)
        for j, x in enumerate(row)
    ) and g[0, 0] != 1


@dataclass
class WidthCertificate:
    target: GroupMatrix
    lower_bound: int
    spec: GeneratorSpec
    upper_word: Word | None = None

    def verified(self) -> bool:
        """Recomputed from the raw factors every time."""
        if self.upper_word is None:
            return True
        if len(self.upper_word) < self.lower_bound:
            return False
        if not all(is_in_S(g, self.spec) for g in self.upper_word.factors):
            return False
        return word_evaluate(self.upper_word) == self.target

    def as_dict(self) -> dict[str, Any]:
        return {
            "target": self.target.text(),
            "spec": self.spec.as_dict(),
            "lower_bound": self.lower_bound,
            "word": self.upper_word.texts() if self.upper_word is not None else None,
            "verified": self.verified(),
        }


def certify(target: GroupMatrix, spec: GeneratorSpec, word: Word | None) -> WidthCertificate:
    return WidthCertificate(target, width_lower_bound(target, spec), spec, word)


# --- conjugation ---

def conjugate(g: GroupMatrix, h: GroupMatrix) -> GroupMatrix:
    """g^h = h^{-1} g h."""
    return h.inverse() @ g @ h


def conjugation_convention_check(*, samples: int = 16, seed: int = 0) -> list[dict[str, Any]]:
    """E_12(mu)^{D(lam_1)...D(lam_m)} = E_12((lam_1 ... lam_m)^2 mu) on Q(t) samples."""
    t = RationalFunction.t_power(1)
    cases: list[tuple[list[Any], Any]] = [([t], RationalFunction.constant(1)), ([RationalFunction.constant(1)], t), ([t], t**-2)]
    rng = np.random.default_rng([seed])
    for _ in range(samples):
        m = int(rng.integers(1, 4, endpoint=True))
        lams = [RationalFunction.t_power(int(rng.integers(-2, 2, endpoint=True)), int(rng.integers(1, 5, endpoint=True))) for _ in range(m)]
        mu = RationalFunction.t_power(int(rng.integers(-3, 3, endpoint=True)), int(rng.integers(-5, 5, endpoint=True)) or 1)
        cases.append((lams, mu))
    records = []
    for lams, mu in cases:
        h = D(lams[0])
        for lam in lams[1:]:
            h = h @ D(lam)
        prod = lams[0]
        for lam in lams[1:]:
            prod = prod * lam
        expected = elementary(1, 2, prod * prod * mu)
        got = conjugate(elementary(1, 2, mu), h)
        records.append(
            {
                "lambdas": [to_text(x) for x in lams],
                "mu": to_text(mu),
                "expected": expected.text(),
                "verified": got == expected,
            }
        )
    return records


# --- factorizations ---

def _choose_n(v: Fraction) -> int:
    """Integer n with |v - 2n| <= 1 and minimal |n|."""
    lo = math.ceil((v - 1) / 2)
    hi = math.floor((v + 1) / 2)
    if lo <= 0 <= hi:
        return 0
    return lo if lo > 0 else hi


def factor_E12(
    alpha: Any,
    lam: Any,
    spec: GeneratorSpec,
    *,
    i: int = 1,
    j: int = 2,
    n: int = 2,
) -> Word:
    """E_ij(alpha) as D(lam^-1)^k E_ij(mu) D(lam)^k with mu = alpha lam^{-2k} (k may be negative)."""
    if spec.mode != "valuation_ball":
        raise PreconditionViolation("factor_E12 needs a valuation-ball generating set")
    if spec.valuation(lam) != 1:
        raise LambdaNotUniformizer(f"w({to_text(lam)}) = {spec.valuation(lam).text()}, expected 1")
    one = field_of(lam).one()
    if alpha == 0:
        return Word.of([identity(n, one)], n=n, one=one)
    v = spec.valuation(alpha).value
    k = _choose_n(v)  # type: ignore[arg-type]
    mu = alpha * lam ** (-2 * k)
    core = elementary(i, j, mu, n, one=one)
    inner, outer = D(1 / lam, n, i, j), D(lam, n, i, j)
    if k < 0:
        inner, outer = outer, inner
    return Word.of([inner] * abs(k) + [core] + [outer] * abs(k), n=n, one=one)


Transvection = tuple[int, int, Any]


def elementary_decomposition(g: GroupMatrix) -> list[Transvection]:
    """Transvections (i, j, mu), 1-based, whose ordered product E_ij(mu)... equals g.

    Row-reduces g to the identity using only "add a multiple of one row to
    another"; a pivot is made exactly 1 by adding a lower row, never by swaps.
    """
    n = g.n
    if g.det() != 1:
        raise NotSL(f"det = {to_text(g.det())}")
    m = [list(r) for r in g.rows]
    ops: list[Transvection] = []

    def add_row(dst: int, src: int, mu: Any) -> None:
        m[dst] = [a + mu * b for a, b in zip(m[dst], m[src])]
        # left multiplication by E(dst, src, mu); its inverse goes into the product
        ops.append((dst + 1, src + 1, -mu))

    for c in range(n - 1):
        if m[c][c] != 1:
            r = next((r for r in range(c + 1, n) if m[r][c] != 0), None)
            if r is None:
                add_row(c + 1, c, 1)
                r = c + 1
            add_row(c, r, (1 - m[c][c]) / m[r][c])
        for r in range(c + 1, n):
            if m[r][c] != 0:
                add_row(r, c, -m[r][c])
    for c in range(n - 1, 0, -1):
        for r in range(c):
            if m[r][c] != 0:
                add_row(r, c, -m[r][c])
    return ops


def factor_slN(g: GroupMatrix, spec: GeneratorSpec, lam: Any) -> Word:
    one = g.one()
    if g.is_identity():
        return Word.of([], n=g.n, one=one)
    if is_in_S(g, spec):
        return Word.of([g], n=g.n, one=one)
    word = Word.of([], n=g.n, one=one)
    for i, j, mu in elementary_decomposition(g):
        word = word + factor_E12(mu, lam, spec, i=i, j=j, n=g.n)
    return word


def factor_glN(g: GroupMatrix, spec: GeneratorSpec, lam: Any) -> Word:
    """g = diag(det g, 1, ..., 1) h with h in SL_n; the diagonal uses bounded generators."""
    if not spec.extra_gl_diagonals:
        raise PreconditionViolation("GL factorization needs extra_gl_diagonals in the generating set")
    det = g.det()
    if det == 0:
        raise Singular("cannot factor a singular matrix")
    one = g.one()
    n = g.n
    word = Word.of([], n=n, one=one)
    if det != 1:
        v = spec.valuation(det).value
        steps = int(abs(v))  # type: ignore[arg-type]
        step = lam if v > 0 else 1 / lam  # type: ignore[operator]
        word = word + Word.of([diagonal([step] + [one] * (n - 1))] * steps, n=n, one=one)
        unit = det * step ** (-steps)
        if unit != 1:
            word = word + Word.of([diagonal([unit] + [one] * (n - 1))], n=n, one=one)
    h = diagonal([1 / det] + [one] * (n - 1)) @ g
    return word + factor_slN(h.retag("SL"), spec, lam)


# --- lower bounds ---

def width_lower_bound(g: GroupMatrix, spec: GeneratorSpec) -> int:
    """Least word length compatible with the growth of entries in S^{*k}.

    Valuation ball: every entry of a product of k elements of S has
    w >= -k r, hence k >= max(-w(g_ij)) / r. Radius ball: entries of
    S^{*k} have norm at most 2^{k-1} C^k.
    """
    if g.is_identity():
        return 0
    if spec.mode == "valuation_ball":
        worst = Fraction(0)
        for x in g.entries():
            w = spec.valuation(x)
            if not w.is_infinite and -w.value > worst:  # type: ignore[operator]
                worst = -w.value  # type: ignore[operator]
        return math.ceil(worst / spec.r)
    return radius_growth_k(max(spec.radius(x).lower for x in g.entries()), spec.C)


def radius_growth_k(M: Fraction, C: Fraction | int) -> int:
    """Least k >= 1 with 2^(k-1) C^k >= M."""
    k = 1
    while Fraction(2) ** (k - 1) * C**k < M:
        k += 1
    return k


# --- growth bounds ---

@dataclass(frozen=True)
class GrowthBound:
    k: int
    kind: Literal["log", "archimedean", "embedded_circle"]
    value: Fraction
    formula: str

    def as_dict(self) -> dict[str, Any]:
        return {"k": self.k, "kind": self.kind, "value": str(self.value), "formula": self.formula}


def entry_growth_bound(k: int, spec: GeneratorSpec, *, n: int | None = None, D_const: Fraction | int | None = None) -> GrowthBound:
    if k < 1:
        raise PreconditionViolation("k must be >= 1")
    if spec.mode == "valuation_ball":
        return GrowthBound(k, "log", k * spec.r, "-w(entry) <= k r")
    C = spec.C
    if n is not None and D_const is not None:
        c = n * n * Fraction(D_const) ** 2 * C
        return GrowthBound(k, "embedded_circle", Fraction(n) ** (k - 1) * c**k, "n^(k-1) c^k, c = n^2 D^2 C")
    return GrowthBound(k, "archimedean", Fraction(2) ** (k - 1) * C**k, "2^(k-1) C^k")


@dataclass
class GrowthReport:
    k: int
    samples: int
    bound: GrowthBound
    worst: Fraction = Fraction(0)
    violations: list[dict[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _random_valuation_generator(rng: np.random.Generator, r: Fraction) -> GroupMatrix:
    e_max = math.floor(r)
    e = int(rng.integers(-e_max, e_max, endpoint=True))
    c = Fraction(int(rng.integers(1, 5, endpoint=True)) * int(rng.choice([-1, 1])), int(rng.integers(1, 3, endpoint=True)))
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return D(RationalFunction.t_power(e if e else 1, c))
    x = RationalFunction.t_power(e, c)
    return elementary(1, 2, x) if kind == 1 else elementary(2, 1, x)


def _random_rotation(rng: np.random.Generator) -> GroupMatrix:
    m = int(rng.integers(1, 6, endpoint=True))
    k = int(rng.integers(0, m))
    denom = m * m + k * k
    a, b = Fraction(m * m - k * k, denom), Fraction(2 * m * k, denom)
    rot = GroupMatrix(((a, b), (-b, a)), "SO2")
    # conjugate by a random signed permutation
    perm = [GroupMatrix(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))), "GL"), GroupMatrix(((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))), "GL")]
    p = perm[int(rng.integers(0, 2))]
    s = diagonal([Fraction(int(rng.choice([-1, 1]))), Fraction(int(rng.choice([-1, 1])))])
    h = p @ s
    return h.inverse() @ rot @ h


def check_entry_growth(spec: GeneratorSpec, k: int, *, samples: int = 500, seed: int = 0) -> GrowthReport:
    """Multiply k random elements of S and test every product entry against the bound."""
    bound = entry_growth_bound(k, spec)
    report = GrowthReport(k, samples, bound)
    for s in range(samples):
        rng = np.random.default_rng([seed, k, s])
        if spec.mode == "valuation_ball":
            factors = [_random_valuation_generator(rng, spec.r) for _ in range(k)]
        else:
            factors = [_random_rotation(rng) for _ in range(k)]
        prod = word_evaluate(Word.of(factors))
        for x in prod.entries():
            if spec.mode == "valuation_ball":
                w = spec.valuation(x)
                size = Fraction(0) if w.is_infinite else -w.value  # type: ignore[operator]
            else:
                size = abs(Fraction(x))
            report.worst = max(report.worst, size)
            if size > bound.value:
                report.violations.append({"sample": str(s), "entry": to_text(x), "bound": str(bound.value)})
    log.info("growth check k=%d: worst %s against bound %s, %d violations", k, report.worst, bound.value, len(report.violations))
    return report


def two_factor_witness(k: int, spec: GeneratorSpec | None = None) -> WidthCertificate:
    """E_12(t^k) = E_12(1 + t) E_12(t^k - 1 - t): two factors of S, whatever k >= 2 is."""
    if k < 2:
        raise PreconditionViolation("the witness needs k >= 2")
    spec = spec or GeneratorSpec.valuation_ball()
    t = RationalFunction.t_power(1)
    first = 1 + t
    second = t**k - first
    word = Word.of([elementary(1, 2, first), elementary(1, 2, second)])
    return certify(elementary(1, 2, t**k), spec, word)
