"""Exact linear algebra over Q and Q(i): matrices, RREF, kernels, subspaces.

The canonical representation of a linear subspace is its reduced row echelon
basis, so two subspaces are equal iff their basis matrices are equal entry by
entry.  All structures are immutable after construction; every operation is a
pure function, which keeps golden tests byte-stable.

Elimination is plain exact Gaussian elimination with pivot normalisation.
No fraction-free or modular tricks: dimensions here are desk scale and the
acceptance values are exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .field import qdiv


class AmbientMismatch(ValueError):
    """Two subspaces of different ambient spaces were combined."""


def _rref_rows(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduce `rows` in place to RREF; return (nonzero rows, pivot columns)."""
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        if piv != 1:
            inv_row = rows[r]
            for j in range(c, ncols):
                if inv_row[j] != 0:
                    inv_row[j] = qdiv(inv_row[j], piv)
        top = rows[r]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f == 0:
                continue
            row = rows[i]
            for j in range(c, ncols):
                t = top[j]
                if t != 0:
                    row[j] = row[j] - f * t
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


@dataclass(frozen=True)
class Matrix:
    """Dense row-major matrix of exact scalars."""

    nrows: int
    ncols: int
    rows: tuple = field(default=())

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if len(rows) != self.nrows or any(len(r) != self.ncols for r in rows):
            raise ValueError("entry count does not match declared shape")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows, ncols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty matrix")
            ncols = len(rows[0])
        return cls(len(rows), ncols, rows)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(nrows, ncols, [[0] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def row_list(self) -> list[list]:
        return [list(r) for r in self.rows]

    def apply(self, vec) -> list:
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match column count")
        out = []
        for row in self.rows:
            s = 0
            for a, x in zip(row, vec):
                if a != 0 and x != 0:
                    s = s + a * x
            out.append(s)
        return out

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions do not match")
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for row in self.rows:
            new = [0] * other.ncols
            for j, a in enumerate(row):
                if a == 0:
                    continue
                orow = other.rows[j]
                for c, b in enumerate(orow):
                    if b != 0:
                        new[c] = new[c] + a * b
            out.append(new)
        return Matrix(self.nrows, other.ncols, out)

    def transpose(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows, [list(c) for c in zip(*self.rows)] if self.rows else [[] for _ in range(self.ncols)] if self.ncols else [])

    def rank(self) -> int:
        rows, _ = _rref_rows(self.row_list(), self.ncols)
        return len(rows)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)


def rref(m: Matrix) -> tuple[int, Matrix]:
    """Row-reduce: returns (rank, canonical RREF basis of the row space)."""
    rows, _ = _rref_rows(m.row_list(), m.ncols)
    return len(rows), Matrix(len(rows), m.ncols, rows)


def rank_of_rows(rows, ncols: int) -> int:
    reduced, _ = _rref_rows([list(r) for r in rows], ncols)
    return len(reduced)


def kernel_rows(rows, ncols: int) -> list[list]:
    """Basis of {x : M x = 0} for M given by `rows`, not yet canonicalised."""
    reduced, pivots = _rref_rows([list(r) for r in rows], ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, p in enumerate(pivots):
            coef = reduced[r][f]
            if coef != 0:
                v[p] = -coef
        basis.append(v)
    return basis


@dataclass(frozen=True)
class Subspace:
    """A linear subspace stored as an RREF basis (rows = basis vectors)."""

    ambient: int
    basis: tuple = field(default=())
    pivots: tuple = field(default=())

    @classmethod
    def span(cls, vectors, ambient: int) -> "Subspace":
        rows, pivots = _rref_rows([list(v) for v in vectors], ambient)
        return cls(ambient, tuple(tuple(r) for r in rows), tuple(pivots))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, (), ())

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        eye = tuple(tuple(1 if i == j else 0 for j in range(ambient)) for i in range(ambient))
        return cls(ambient, eye, tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_full(self) -> bool:
        return self.dim == self.ambient

    def is_zero(self) -> bool:
        return self.dim == 0

    def reduce(self, vec) -> list:
        """Residual of `vec` after elimination against the basis.

        The residual is supported on non-pivot columns; it is zero iff the
        vector lies in the subspace.  Works for Q(i) vectors against a
        rational basis.
        """
        if len(vec) != self.ambient:
            raise AmbientMismatch("vector/ambient mismatch")
        v = list(vec)
        for row, p in zip(self.basis, self.pivots):
            f = v[p]
            if f != 0:
                for j in range(p, self.ambient):
                    t = row[j]
                    if t != 0:
                        v[j] = v[j] - f * t
        return v

    def contains_vector(self, vec) -> bool:
        return all(x == 0 for x in self.reduce(vec))

    def coords(self, vec) -> list | None:
        """Coefficients of `vec` in the RREF basis, or None if not a member."""
        if not self.contains_vector(vec):
            return None
        return [vec[p] for p in self.pivots]

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains_vector(v) for v in other.basis)

    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient:
            raise AmbientMismatch(
                f"ambient dimensions differ: {self.ambient} != {other.ambient}"
            )

    def add(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient)

    __or__ = add

    def intersect(self, other: "Subspace") -> "Subspace":
        """Largest subspace contained in both, via the left-kernel of
        the stacked basis matrix [A; -B]."""
        self._check(other)
        a, b = self.dim, other.dim
        if a == 0 or b == 0:
            return Subspace.zero(self.ambient)
        if self.is_full():
            return other
        if other.is_full():
            return self
        stacked = [list(r) for r in self.basis] + [[-x for x in r] for r in other.basis]
        # columns of the transpose = rows of `stacked`
        transposed = [[stacked[i][c] for i in range(a + b)] for c in range(self.ambient)]
        vectors = []
        for y in kernel_rows(transposed, a + b):
            v = [0] * self.ambient
            for i in range(a):
                c = y[i]
                if c != 0:
                    row = self.basis[i]
                    for j in range(self.ambient):
                        if row[j] != 0:
                            v[j] = v[j] + c * row[j]
            vectors.append(v)
        return Subspace.span(vectors, self.ambient)

    __and__ = intersect

    def quotient_dim_by(self, other: "Subspace") -> int:
        """dim(self) - dim(self & other); equals dim(self/other) when other <= self."""
        return self.dim - self.intersect(other).dim

    def complement_coords(self) -> list[int]:
        """Ambient coordinates that survive in the quotient by this subspace."""
        pivot_set = set(self.pivots)
        return [c for c in range(self.ambient) if c not in pivot_set]

    def reduce_unit(self, coord: int) -> list:
        """reduce() of the `coord`-th unit vector, computed without allocation
        of the full vector path; used to assemble quotient-projection rows."""
        v = [0] * self.ambient
        v[coord] = 1
        for row, p in zip(self.basis, self.pivots):
            if p == coord:
                for j in range(p, self.ambient):
                    if row[j] != 0:
                        v[j] = v[j] - row[j]
                break
            if p > coord:
                break
        return v


def sum_contains_quotient(a: Subspace, b: Subspace) -> tuple[Subspace, bool, int]:
    """(a + b, b <= a, dim a - dim(a & b)) in one call."""
    s = a.add(b)
    contains = s.dim == a.dim
    quotient = a.dim - (a.dim + b.dim - s.dim)
    return s, contains, quotient


def kernel(m: Matrix) -> Subspace:
    """{x : m x = 0} as a canonical subspace; dim = ncols - rank."""
    return Subspace.span(kernel_rows(m.rows, m.ncols), m.ncols)


def image(m: Matrix) -> Subspace:
    """Column space of m, canonicalised (vectors = columns of m)."""
    cols = [[m.rows[i][j] for i in range(m.nrows)] for j in range(m.ncols)]
    return Subspace.span(cols, m.nrows)


def image_of_rows(rows, ncols: int) -> Subspace:
    """Span of the given row vectors."""
    return Subspace.span(rows, ncols)


def solve(m: Matrix, target) -> list | None:
    """One solution x of m x = target, or None if inconsistent."""
    aug = [list(r) + [t] for r, t in zip(m.rows, target)]
    reduced, pivots = _rref_rows(aug, m.ncols + 1)
    x = [0] * m.ncols
    for row, p in zip(reduced, pivots):
        if p == m.ncols:
            return None
        x[p] = row[m.ncols]
    return x
