"""Square matrices over the exact fields, tagged with the group they are meant to live in.

Positions in the public constructors (``elementary``, ``D``) are 1-based, as in
E_12 or E_13; ``rows`` is a plain 0-based tuple of tuples.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Literal, Sequence

from width_lab.errors import DimensionMismatch, NotSL, PreconditionViolation, Singular
from width_lab.fields import field_of, to_text

GroupTag = Literal["SL", "GL", "SO2"]


def _is_zero(x: Any) -> bool:
    return x.is_zero() if hasattr(x, "is_zero") else x == 0


@dataclass(frozen=True)
class GroupMatrix:
    rows: tuple[tuple[Any, ...], ...]
    group_tag: GroupTag = "SL"

    def __post_init__(self) -> None:
        n = len(self.rows)
        if n == 0 or any(len(r) != n for r in self.rows):
            raise DimensionMismatch("matrix must be square and non-empty")

    @classmethod
    def of(cls, rows: Sequence[Sequence[Any]], group_tag: GroupTag = "SL") -> GroupMatrix:
        """Build and check the group invariant exactly."""
        g = cls(tuple(tuple(r) for r in rows), group_tag)
        g.check()
        return g

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Any:
        i, j = ij
        return self.rows[i][j]

    def entries(self) -> Iterator[Any]:
        for r in self.rows:
            yield from r

    def one(self) -> Any:
        return field_of(self.rows[0][0]).one()

    def zero(self) -> Any:
        return field_of(self.rows[0][0]).zero()

    def retag(self, group_tag: GroupTag) -> GroupMatrix:
        return GroupMatrix(self.rows, group_tag)

    # --- algebra ---

    def __matmul__(self, other: GroupMatrix) -> GroupMatrix:
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n}x{self.n} times {other.n}x{other.n}")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = None
                for x, y in zip(r, c):
                    if _is_zero(x) or _is_zero(y):
                        continue
                    acc = x * y if acc is None else acc + x * y
                row.append(self.zero() if acc is None else acc)
            out.append(tuple(row))
        tag = self.group_tag if self.group_tag == other.group_tag else "GL"
        return GroupMatrix(tuple(out), tag)

    def det(self) -> Any:
        n = self.n
        if n == 1:
            return self.rows[0][0]
        if n == 2:
            (a, b), (c, d) = self.rows
            return a * d - b * c
        m = [list(r) for r in self.rows]
        det = self.one()
        for col in range(n):
            pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
            if pivot is None:
                return self.zero()
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
                det = -det
            p = m[col][col]
            det = det * p
            inv = 1 / p
            for i in range(col + 1, n):
                if m[i][col] != 0:
                    f = m[i][col] * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[col])]
        return det

    def inverse(self) -> GroupMatrix:
        n = self.n
        if n == 2:
            (a, b), (c, d) = self.rows
            det = a * d - b * c
            if det == 0:
                raise Singular("matrix is singular")
            if det == 1:
                return GroupMatrix(((d, -b), (-c, a)), self.group_tag)
            inv = 1 / det
            return GroupMatrix(((d * inv, -b * inv), (-c * inv, a * inv)), self.group_tag)
        one, zero = self.one(), self.zero()
        m = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
            if pivot is None:
                raise Singular("matrix is singular")
            m[col], m[pivot] = m[pivot], m[col]
            inv = 1 / m[col][col]
            m[col] = [x * inv for x in m[col]]
            for i in range(n):
                if i != col and m[i][col] != 0:
                    f = m[i][col]
                    m[i] = [a - f * b for a, b in zip(m[i], m[col])]
        return GroupMatrix(tuple(tuple(r[n:]) for r in m), self.group_tag)

    def transpose(self) -> GroupMatrix:
        return GroupMatrix(tuple(zip(*self.rows)), self.group_tag)

    def is_identity(self) -> bool:
        return all((x == 1) if i == j else (x == 0) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupMatrix):
            return NotImplemented
        if other.n != self.n:
            return False
        return all(x == y for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))

    def __hash__(self) -> int:
        return hash(self.text())

    def check(self) -> None:
        if self.group_tag == "SL":
            if self.det() != 1:
                raise NotSL(f"det = {to_text(self.det())}, expected 1")
        elif self.group_tag == "GL":
            if self.det() == 0:
                raise Singular("GL matrix with zero determinant")
        else:
            if self.n != 2:
                raise DimensionMismatch("SO2 matrices are 2x2")
            (a, b), (c, d) = self.rows
            if not (d == a and c == -b and a * a + b * b == 1):
                raise PreconditionViolation("not of the form [[a, b], [-b, a]] with a^2 + b^2 = 1")

    def text(self) -> str:
        return "[" + ", ".join("[" + ", ".join(to_text(x) for x in r) + "]" for r in self.rows) + "]"

    def __repr__(self) -> str:
        return f"GroupMatrix({self.group_tag}, {self.text()})"


# --- constructors ---

def identity(n: int, one: Any = 1, group_tag: GroupTag = "SL") -> GroupMatrix:
    fld = field_of(one)
    one, zero = fld.coerce(one), fld.zero()
    return GroupMatrix(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), group_tag)


def elementary(i: int, j: int, mu: Any, n: int = 2, *, one: Any = None) -> GroupMatrix:
    """E_ij(mu): identity plus mu at (i, j), 1-based."""
    if i == j:
        raise PreconditionViolation("transvections need i != j")
    g = identity(n, one if one is not None else field_of(mu).one())
    rows = [list(r) for r in g.rows]
    rows[i - 1][j - 1] = mu
    return GroupMatrix(tuple(tuple(r) for r in rows), "SL")


def E(mu: Any, n: int = 2) -> GroupMatrix:
    """E_12(mu)."""
    return elementary(1, 2, mu, n)


def D(lam: Any, n: int = 2, i: int = 1, j: int = 2) -> GroupMatrix:
    """lam^{-1} at (i, i), lam at (j, j), 1 elsewhere on the diagonal."""
    one = field_of(lam).one()
    diag = [one] * n
    diag[i - 1] = 1 / lam
    diag[j - 1] = lam
    return diagonal(diag, "SL")


def diagonal(entries: Sequence[Any], group_tag: GroupTag = "GL") -> GroupMatrix:
    zero = field_of(entries[0]).zero()
    n = len(entries)
    return GroupMatrix(tuple(tuple(entries[i] if i == j else zero for j in range(n)) for i in range(n)), group_tag)


def so2(a: Any, b: Any) -> GroupMatrix:
    return GroupMatrix(((a, b), (-b, a)), "SO2")
