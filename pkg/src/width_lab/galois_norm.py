"""The Galois radius rho(x) = max modulus of the conjugates of x, with certified enclosures.

Conjugates are the roots of the characteristic polynomial of x in its tower, so
rho(x) is the largest root modulus of that polynomial. It is bracketed by
Graeffe root squaring on integer coefficients followed by outward-rounded
rational square roots.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from sympy import integer_nthroot

from width_lab.errors import (
    EnclosureInconclusive,
    PreconditionViolation,
    TolTooTight,
    ZeroPolynomial,
)
from width_lab.fields import QQ, rational_sqrt, require_prime
from width_lab.polynomials import UniPolynomial
from width_lab.towers import Q_TOWER, TowerElement, characteristic_poly, tower_adjoin_sqrt

log = logging.getLogger(__name__)

DEFAULT_MAX_DOUBLINGS = 16


@dataclass(frozen=True)
class AlgebraicNumber:
    element: TowerElement

    @classmethod
    def of(cls, x: TowerElement | Fraction | int) -> AlgebraicNumber:
        if not isinstance(x, TowerElement):
            x = Q_TOWER.coerce(x)
        if x.tower.base != QQ:
            raise PreconditionViolation("the Galois radius is defined on towers over Q")
        return cls(x)

    @cached_property
    def charpoly(self) -> UniPolynomial:
        return characteristic_poly(self.element)

    def text(self) -> str:
        return self.element.text()


@dataclass(frozen=True, slots=True)
class RadiusEnclosure:
    lower: Fraction
    upper: Fraction

    @classmethod
    def exact(cls, value: Fraction) -> RadiusEnclosure:
        return cls(value, value)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def relative_width(self) -> Fraction:
        return self.width / max(self.lower, Fraction(1))

    def contains(self, q: Fraction | int) -> bool:
        return self.lower <= q <= self.upper

    def is_zero(self) -> bool:
        return self.upper == 0

    def __mul__(self, other: RadiusEnclosure) -> RadiusEnclosure:
        return RadiusEnclosure(self.lower * other.lower, self.upper * other.upper)

    def __add__(self, other: RadiusEnclosure) -> RadiusEnclosure:
        return RadiusEnclosure(self.lower + other.lower, self.upper + other.upper)

    def square(self) -> RadiusEnclosure:
        return self * self

    def disjoint(self, other: RadiusEnclosure) -> bool:
        return self.upper < other.lower or other.upper < self.lower

    def text(self) -> str:
        return f"[{self.lower}, {self.upper}]"


# --- outward-rounded rational roots ---

def root_floor(q: Fraction, k: int, bits: int) -> Fraction:
    """A dyadic lower bound for q^(1/k) with ``bits`` fractional bits."""
    n = (q.numerator << (k * bits)) // q.denominator
    r, _ = integer_nthroot(n, k)
    return Fraction(int(r), 1 << bits)


def root_ceil(q: Fraction, k: int, bits: int) -> Fraction:
    """A dyadic upper bound for q^(1/k) with ``bits`` fractional bits."""
    num = q.numerator << (k * bits)
    n = -(-num // q.denominator)
    r, exact = integer_nthroot(n, k)
    return Fraction(int(r) + (0 if exact else 1), 1 << bits)


# --- integer polynomial helpers ---

def _integer_primitive(poly: UniPolynomial) -> list[int]:
    """Content-free integer coefficients (lowest first) with positive leading coefficient."""
    lcm = 1
    for c in poly.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in poly.coeffs]
    return _normalize(ints)


def _normalize(a: list[int]) -> list[int]:
    g = 0
    for c in a:
        g = math.gcd(g, c)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _conv(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def graeffe_step(a: list[int]) -> list[int]:
    """Integer polynomial whose roots are the squares of the roots of ``a``."""
    d = len(a) - 1
    even, odd = a[0::2], a[1::2]
    g = [0] * (d + 1)
    for i, c in enumerate(_conv(even, even)):
        g[i] += c
    if odd:
        for i, c in enumerate(_conv(odd, odd)):
            g[i + 1] -= c
    if d % 2:
        g = [-c for c in g]
    return _normalize(g)


def _single_root(a: list[int]) -> Fraction | None:
    """r when a is a constant multiple of (X - r)^d with r rational, else None."""
    d = len(a) - 1
    r = Fraction(-a[d - 1], d * a[d])
    expect = UniPolynomial.from_roots([r] * d, QQ) * a[d]
    return r if list(expect.coeffs) == [Fraction(c) for c in a] else None


RootData = list[tuple[Fraction, int]]


def _modulus_bounds(a: list[int]) -> tuple[RootData, RootData]:
    """Lower (Vieta) and upper (Fujiwara) bounds for the largest root modulus, as k-th-root data."""
    d = len(a) - 1
    lead = abs(a[d])
    lowers: RootData = []
    uppers: RootData = []
    for k in range(1, d + 1):
        c = abs(a[d - k])
        if not c:
            continue
        lowers.append((Fraction(c, math.comb(d, k) * lead), k))
        uppers.append((Fraction(c, lead * (2 if k == d else 1)), k))
    return lowers, uppers


def polynomial_radius(
    poly: UniPolynomial,
    tol: Fraction,
    *,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> RadiusEnclosure:
    """Enclosure of the maximum complex-root modulus of a polynomial over Q."""
    tol = Fraction(tol)
    if tol <= 0:
        raise PreconditionViolation("tolerance must be positive")
    if poly.is_zero():
        raise ZeroPolynomial("the zero polynomial has no root radius")
    if poly.degree == 0:
        return RadiusEnclosure.exact(Fraction(0))
    poly = poly.shift(-poly.order_at_zero())
    if poly.degree == 0:
        return RadiusEnclosure.exact(Fraction(0))
    a = _integer_primitive(poly)
    bits = 64 + 2 * tol.denominator.bit_length() + tol.numerator.bit_length()
    for j in range(max_doublings + 1):
        r = _single_root(a)
        if r is not None:
            m = abs(r)
            exact = m
            for _ in range(j):
                exact = rational_sqrt(exact) if exact is not None else None
            if exact is not None:
                return RadiusEnclosure.exact(exact)
            lo = hi = m
        else:
            lowers, uppers = _modulus_bounds(a)
            lo = max(root_floor(q, k, bits) for q, k in lowers)
            hi = 2 * max(root_ceil(q, k, bits) for q, k in uppers)
        for _ in range(j):
            lo, hi = root_floor(lo, 2, bits), root_ceil(hi, 2, bits)
        enc = RadiusEnclosure(lo, hi)
        if enc.relative_width() <= tol:
            log.debug("radius enclosure %s after %d doublings", enc.text(), j)
            return enc
        a = graeffe_step(a)
    raise EnclosureInconclusive(f"tolerance {tol} not met after {max_doublings} doublings")


def galois_radius(
    x: AlgebraicNumber | TowerElement | Fraction | int,
    tol: Fraction,
    *,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> RadiusEnclosure:
    if not isinstance(x, AlgebraicNumber):
        x = AlgebraicNumber.of(x)
    return polynomial_radius(x.charpoly, tol, max_doublings=max_doublings)


# --- Eisenstein approximations ---

@dataclass(frozen=True, slots=True)
class EisensteinQuadratic:
    """q(X) = X^2 + (alpha/gamma) X + beta/gamma, irreducible by Eisenstein at ``ell``."""

    alpha: int
    beta: int
    gamma: int
    ell: int
    epsilon: Fraction = Fraction(0)

    def poly(self) -> UniPolynomial:
        return UniPolynomial((Fraction(self.beta, self.gamma), Fraction(self.alpha, self.gamma), 1), QQ)

    @property
    def discriminant(self) -> Fraction:
        s = Fraction(self.alpha, self.gamma)
        return s * s - 4 * Fraction(self.beta, self.gamma)

    def eisenstein_holds(self) -> bool:
        # over Z the polynomial is gamma X^2 + alpha X + beta
        ell = self.ell
        return (
            self.gamma > 0
            and self.gamma % ell != 0
            and self.alpha % ell == 0
            and self.beta % ell == 0
            and self.beta % (ell * ell) != 0
            and self.discriminant != 0
        )

    def root_enclosures(self, bits: int = 96) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        """Rational intervals around the small and the large real root."""
        s = Fraction(-self.alpha, self.gamma)
        disc = self.discriminant
        lo, hi = root_floor(disc, 2, bits), root_ceil(disc, 2, bits)
        return ((s - hi) / 2, (s - lo) / 2), ((s + lo) / 2, (s + hi) / 2)

    def small_root(self) -> TowerElement:
        """The smaller real root as an element of Q(sqrt(discriminant))."""
        adj = tower_adjoin_sqrt(Q_TOWER, self.discriminant)
        return (adj.root * -1 + Fraction(-self.alpha, self.gamma)) * Fraction(1, 2)

    def as_dict(self) -> dict[str, str | int]:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "ell": self.ell,
            "epsilon": str(self.epsilon),
        }


def _nearest_multiples(target: Fraction, ell: int, *, avoid_ell_squared: bool) -> list[int]:
    """Multiples ell*m of ell ordered by distance to target (ell not dividing m if requested)."""
    m0 = round(target / ell)
    out = []
    for m in sorted(range(m0 - 2, m0 + 3), key=lambda m: (abs(ell * m - target), m)):
        if avoid_ell_squared and m % ell == 0:
            continue
        out.append(ell * m)
    return out


def eisenstein_near(
    a: Fraction,
    b: Fraction,
    tol: Fraction,
    ell: int,
    *,
    gamma_cap: int = 1_000_000,
) -> EisensteinQuadratic:
    a, b, tol = Fraction(a), Fraction(b), Fraction(tol)
    require_prime(ell)
    if not (0 < a < 1 < b):
        raise PreconditionViolation(f"need 0 < a < 1 < b, got a={a}, b={b}")
    if tol <= 0:
        raise PreconditionViolation("tolerance must be positive")
    # the integer search only has a chance once ell/(2 gamma) <= tol
    start = max(1, math.floor(ell / (2 * tol)))
    for gamma in range(start, gamma_cap + 1):
        if gamma % ell == 0:
            continue
        alpha = _nearest_multiples(-(a + b) * gamma, ell, avoid_ell_squared=False)[0]
        if abs(Fraction(alpha, gamma) + (a + b)) > tol:
            continue
        for beta in _nearest_multiples(a * b * gamma, ell, avoid_ell_squared=True):
            if abs(Fraction(beta, gamma) - a * b) > tol:
                break
            q = EisensteinQuadratic(alpha, beta, gamma, ell)
            if not q.eisenstein_holds() or q.discriminant <= 0:
                continue
            (s_lo, s_hi), (l_lo, l_hi) = q.root_enclosures()
            eps = max(abs(s_lo - a), abs(s_hi - a), abs(l_lo - b), abs(l_hi - b))
            if eps > tol:
                continue
            q = EisensteinQuadratic(alpha, beta, gamma, ell, eps)
            log.info("Eisenstein quadratic near (%s, %s): gamma=%d, epsilon=%s", a, b, gamma, float(eps))
            return q
    raise TolTooTight(f"no Eisenstein quadratic within {tol} for gamma <= {gamma_cap}")
