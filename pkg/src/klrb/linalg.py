"""Dense exact linear algebra over the rationals.

Everything here works with `fractions.Fraction` entries and is fully
deterministic: pivots are chosen by position, never by magnitude.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction


class Mat:
    """An immutable dense matrix over Q."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[Fraction | int]], ncols: int | None = None):
        self.rows = tuple(tuple(Q(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @staticmethod
    def zeros(n: int, m: int) -> "Mat":
        return Mat([[0] * m for _ in range(n)], ncols=m)

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def from_cols(cols: Sequence[Sequence[Fraction]], nrows: int) -> "Mat":
        return Mat([[cols[j][i] for j in range(len(cols))] for i in range(nrows)])

    def __getitem__(self, rc):
        r, c = rc
        return self.rows[r][c]

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.rows == other.rows
                and self.ncols == other.ncols)

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other: "Mat") -> "Mat":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in +")
        return Mat([[a + b for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.rows, other.rows)], ncols=self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        return Mat([[-a for a in r] for r in self.rows], ncols=self.ncols)

    def scale(self, c) -> "Mat":
        c = Q(c)
        return Mat([[c * a for a in r] for r in self.rows], ncols=self.ncols)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in @")
        if self.nrows == 0 or other.ncols == 0 or self.ncols == 0:
            return Mat.zeros(self.nrows, other.ncols)
        cols = list(zip(*other.rows))
        return Mat([[sum(a * b for a, b in zip(row, col) if a and b)
                     for col in cols] for row in self.rows], ncols=other.ncols)

    def __pow__(self, n: int) -> "Mat":
        if self.nrows != self.ncols:
            raise ValueError("power of non-square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        out = Mat.identity(self.nrows)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def transpose(self) -> "Mat":
        if self.nrows == 0 or self.ncols == 0:
            return Mat.zeros(self.ncols, self.nrows)
        return Mat(list(zip(*self.rows)), ncols=self.nrows)

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.nrows)), Q(0))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def is_nilpotent(self) -> bool:
        p = self
        for _ in range(self.nrows):
            if p.is_zero():
                return True
            p = p @ self
        return p.is_zero()

    def commutes_with(self, other: "Mat") -> bool:
        return (self @ other) == (other @ self)

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def rref(self) -> tuple["Mat", list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        rows = [list(r) for r in self.rows]
        pivots: list[int] = []
        pr = 0
        for pc in range(self.ncols):
            pivot = next((r for r in range(pr, self.nrows) if rows[r][pc] != 0), None)
            if pivot is None:
                continue
            rows[pr], rows[pivot] = rows[pivot], rows[pr]
            inv = Q(1) / rows[pr][pc]
            rows[pr] = [inv * a for a in rows[pr]]
            for r in range(self.nrows):
                if r != pr and rows[r][pc] != 0:
                    f = rows[r][pc]
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[pr])]
            pivots.append(pc)
            pr += 1
            if pr == self.nrows:
                break
        return Mat(rows), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def inverse(self) -> "Mat":
        if self.nrows != self.ncols:
            raise ValueError("inverse of non-square matrix")
        n = self.nrows
        aug = Mat([list(r) + [1 if i == j else 0 for j in range(n)]
                   for i, r in enumerate(self.rows)])
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ValueError("singular matrix")
        return Mat([r[n:] for r in red.rows])

    def nullspace(self) -> list[tuple]:
        """Basis of the right kernel, echelonized, as column tuples."""
        red, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for fc in free:
            v = [Q(0)] * self.ncols
            v[fc] = Q(1)
            for pr, pc in enumerate(pivots):
                v[pc] = -red.rows[pr][fc]
            basis.append(tuple(v))
        return basis

    def solve(self, rhs: Sequence[Fraction]) -> list[Fraction] | None:
        """One solution of self @ x = rhs, or None."""
        aug = Mat([list(r) + [rhs[i]] for i, r in enumerate(self.rows)])
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [Q(0)] * self.ncols
        for pr, pc in enumerate(pivots):
            x[pc] = red.rows[pr][-1]
        return x

    def __repr__(self):
        return "Mat(%s)" % (list(list(map(str, r)) for r in self.rows),)


def column_space_basis(vectors: Iterable[Sequence[Fraction]]) -> list[tuple]:
    """Echelonized basis of the span of the given vectors."""
    sb = SpanBasis()
    for v in vectors:
        sb.add(tuple(v))
    return sb.vectors()


class SpanBasis:
    """Incrementally maintained echelonized basis of a span of Q-vectors.

    Vectors are kept with their leading (first nonzero) coordinate
    normalized to 1; reduction is full, so membership testing is exact.
    """

    def __init__(self):
        self._rows: dict[int, list[Fraction]] = {}  # pivot index -> vector

    def reduce(self, vec: Sequence[Fraction]) -> list[Fraction]:
        v = [Q(x) for x in vec]
        for piv in sorted(self._rows):
            if piv < len(v) and v[piv] != 0:
                f = v[piv]
                row = self._rows[piv]
                for i in range(piv, len(v)):
                    v[i] -= f * row[i]
        return v

    def add(self, vec: Sequence[Fraction]) -> bool:
        """Add a vector; returns True if it enlarged the span."""
        v = self.reduce(vec)
        piv = next((i for i, a in enumerate(v) if a != 0), None)
        if piv is None:
            return False
        inv = Q(1) / v[piv]
        v = [inv * a for a in v]
        for p, row in self._rows.items():
            if row[piv] != 0:
                f = row[piv]
                self._rows[p] = [a - f * b for a, b in zip(row, v)]
        self._rows[piv] = v
        return True

    def contains(self, vec: Sequence[Fraction]) -> bool:
        return all(a == 0 for a in self.reduce(vec))

    def dim(self) -> int:
        return len(self._rows)

    def vectors(self) -> list[tuple]:
        return [tuple(self._rows[p]) for p in sorted(self._rows)]
