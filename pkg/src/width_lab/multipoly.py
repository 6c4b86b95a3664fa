"""Sparse multivariate polynomials over F_p or F_{p^n}, and substituted polynomial sets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Sequence

from width_lab.errors import PreconditionViolation
from width_lab.finite_fields import FFElement, FiniteField

Exponent = tuple[int, ...]


def _is_zero(c: Any, p: int) -> bool:
    return c.is_zero() if isinstance(c, FFElement) else c % p == 0


@dataclass(frozen=True)
class MPoly:
    """Terms as sorted (exponent tuple, coefficient) pairs; ints are read mod p."""

    terms: tuple[tuple[Exponent, Any], ...]
    m: int
    p: int

    @classmethod
    def from_dict(cls, terms: dict[Exponent, Any], m: int, p: int) -> MPoly:
        acc: dict[Exponent, Any] = {}
        for exp, c in terms.items():
            if len(exp) != m:
                raise PreconditionViolation(f"exponent {exp} does not have {m} entries")
            acc[exp] = acc[exp] + c if exp in acc else c
        clean = []
        for exp in sorted(acc):
            c = acc[exp]
            c = c % p if isinstance(c, int) else c
            if not _is_zero(c, p):
                clean.append((exp, c))
        return cls(tuple(clean), m, p)

    @classmethod
    def monomial(cls, exp: Exponent, p: int, coeff: Any = 1) -> MPoly:
        return cls.from_dict({tuple(exp): coeff}, len(exp), p)

    @classmethod
    def variable(cls, i: int, m: int, p: int) -> MPoly:
        """X_i, 1-based."""
        return cls.monomial(tuple(1 if j == i - 1 else 0 for j in range(m)), p)

    @property
    def total_degree(self) -> int:
        return max((sum(exp) for exp, _ in self.terms), default=-1)

    def is_constant(self) -> bool:
        return self.total_degree <= 0

    def free_variables(self) -> tuple[int, ...]:
        """0-based indices of variables that occur with positive exponent."""
        return tuple(i for i in range(self.m) if any(exp[i] for exp, _ in self.terms))

    def lift(self, field: FiniteField) -> MPoly:
        return MPoly(tuple((exp, field.coerce(c)) for exp, c in self.terms), self.m, self.p)

    def substitute(self, assignment: dict[int, FFElement]) -> MPoly:
        """Replace variables (0-based index -> value); indices of the others are kept."""
        acc: dict[Exponent, Any] = {}
        for exp, c in self.terms:
            coeff = c
            new_exp = list(exp)
            for i, value in assignment.items():
                if exp[i]:
                    coeff = value ** exp[i] * coeff
                    new_exp[i] = 0
            key = tuple(new_exp)
            acc[key] = acc[key] + coeff if key in acc else coeff
        return MPoly.from_dict(acc, self.m, self.p)

    def evaluate(self, values: Sequence[FFElement] | dict[int, FFElement]) -> FFElement:
        """Value at a point; ``values`` is indexed by 0-based variable."""
        total: Any = None
        for exp, c in self.terms:
            term: Any = c
            for i, e in enumerate(exp):
                if e:
                    term = values[i] ** e * term
            total = term if total is None else total + term
        if total is None:
            raise PreconditionViolation("evaluating the zero polynomial")
        return total

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.terms:
            mono = "*".join(f"X{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exp) if e)
            coeff = c.text() if isinstance(c, FFElement) else str(c)
            parts.append(mono if coeff in ("1", "[1]") and mono else f"{coeff}*{mono}" if mono else coeff)
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class PolySet:
    polys: tuple[MPoly, ...]
    m: int
    n_deg: int
    p: int

    def __post_init__(self) -> None:
        for r in self.polys:
            if r.is_constant():
                raise PreconditionViolation(f"constant polynomial {r.text()} in a polynomial set")
            if r.total_degree > self.n_deg:
                raise PreconditionViolation(f"{r.text()} exceeds degree {self.n_deg}")
            if r.m != self.m:
                raise PreconditionViolation(f"{r.text()} is in {r.m} variables, expected {self.m}")

    @classmethod
    def of(cls, polys: Iterable[MPoly], m: int, n_deg: int, p: int) -> PolySet:
        return cls(tuple(polys), m, n_deg, p)

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self) -> Iterator[MPoly]:
        return iter(self.polys)


@dataclass(frozen=True)
class SubstitutedSet:
    base: PolySet
    E: tuple[FFElement, ...]
    polys: tuple[MPoly, ...]

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self) -> Iterator[MPoly]:
        return iter(self.polys)


def substitute_set(P: PolySet, E: Sequence[FFElement], field: FiniteField | None = None) -> SubstitutedSet:
    """All non-constant results of substituting any subset of variables by elements of E."""
    if field is None and E:
        field = E[0].field
    out: list[MPoly] = []
    seen: set[MPoly] = set()
    for r in P:
        base = r.lift(field) if field is not None else r
        for size in range(P.m + 1):
            if size and not E:
                break
            for subset in itertools.combinations(range(P.m), size):
                for values in itertools.product(E, repeat=size):
                    s = base.substitute(dict(zip(subset, values)))
                    if s.is_constant() or s in seen:
                        continue
                    seen.add(s)
                    out.append(s)
    return SubstitutedSet(P, tuple(E), tuple(out))


def monomials(m: int, max_deg: int, p: int) -> list[MPoly]:
    """All non-constant monomials in m variables of total degree <= max_deg."""
    out = []
    for deg in range(1, max_deg + 1):
        for exp in itertools.product(range(deg + 1), repeat=m):
            if sum(exp) == deg:
                out.append(MPoly.monomial(exp, p))
    return sorted(out, key=lambda r: (r.total_degree, tuple(-e for e in r.terms[0][0])))


def default_family(depth: int, p: int) -> list[PolySet]:
    """Stage i: monomials in min(i+1, 2) variables of total degree <= min(i+1, 2)."""
    family = []
    for i in range(depth):
        k = min(i + 1, 2)
        family.append(PolySet.of(monomials(k, k, p), k, k, p))
    return family
