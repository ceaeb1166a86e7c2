"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`; vectors are tuples of Fractions;
matrices are immutable row-major tables. Rank, kernel and solve share one
fraction-free (Bareiss) elimination on integer-scaled rows.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

from .errors import ComplexError, InputError

Vector = tuple

__all__ = [
    "Fraction",
    "Matrix",
    "SparseMatrix",
    "Subspace",
    "as_fraction",
    "format_rational",
    "kernel_basis",
    "quotient_dim",
    "rank",
    "solve",
    "unit",
    "vadd",
    "vscale",
    "vsub",
    "zero_vector",
]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would smuggle rounding into exact arithmetic.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational number: {value!r}") from exc
    raise InputError(f"not a rational number: {value!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if k == i else Fraction(0) for k in range(n))


def vadd(x: Sequence, y: Sequence) -> Vector:
    if len(x) != len(y):
        raise InputError(f"length mismatch: {len(x)} vs {len(y)}")
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: Sequence, y: Sequence) -> Vector:
    if len(x) != len(y):
        raise InputError(f"length mismatch: {len(x)} vs {len(y)}")
    return tuple(a - b for a, b in zip(x, y))


def vscale(c, x: Sequence) -> Vector:
    c = as_fraction(c)
    return tuple(c * a for a in x)


class Matrix:
    """Immutable dense matrix with Fraction entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[Iterable]):
        table = tuple(tuple(as_fraction(e) for e in row) for row in entries)
        if len(table) != rows or any(len(r) != cols for r in table):
            raise InputError(f"entries do not form a {rows}x{cols} table")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", table)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = list(rows)
        if cols is None:
            if not rows:
                raise InputError("cannot infer the column count of an empty matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = list(columns)
        for c in columns:
            if len(c) != rows:
                raise InputError(f"column of length {len(c)}, expected {rows}")
        return cls(rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [self.column(j) for j in range(self.cols)])

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise InputError(f"vector of length {len(v)} applied to {self.rows}x{self.cols} matrix")
        out = []
        for row in self.entries:
            s = Fraction(0)
            for a, b in zip(row, v):
                if a and b:
                    s += a * b
            out.append(s)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise InputError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return Matrix.from_columns([self.apply(c) for c in cols], self.rows) if cols else Matrix.zeros(self.rows, 0)
        return self.apply(other)

    def _check_same(self, other: "Matrix"):
        if not isinstance(other, Matrix) or self.shape != other.shape:
            raise InputError("matrix shape mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.rows, self.cols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.rows, self.cols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = as_fraction(c)
        return Matrix(self.rows, self.cols, [[c * a for a in r] for r in self.entries])

    def is_zero(self) -> bool:
        return not any(a for r in self.entries for a in r)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise InputError("vstack needs equal column counts")
        return Matrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(a) for a in r) for r in self.entries)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        m = 1
        for a in row:
            m = lcm(m, Fraction(a).denominator)
        out.append([int(Fraction(a) * m) for a in row])
    return out


def _bareiss(rows: list[list[int]], ncols: int, pivot_limit: Optional[int] = None):
    """Fraction-free row echelon form, in place.

    Returns the list of pivot columns. Entries stay integral because every
    intermediate value is a minor of the input; the division by the previous
    pivot is exact. Pivots are only sought in columns ``< pivot_limit``.
    """
    limit = ncols if pivot_limit is None else pivot_limit
    nrows = len(rows)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(limit):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        prow = rows[r]
        for i in range(r + 1, nrows):
            row = rows[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (piv * row[j] - f * prow[j]) // prev
            row[c] = 0
        # rows above the pivot row keep their old scale; only rows below move
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def _as_rows(m: Matrix) -> list[list[int]]:
    return _integer_rows(m.entries)


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_bareiss(_as_rows(m), m.cols))


def _back_substitute(rows, pivots, ncols, rhs_col=None, free_values=None) -> list[Fraction]:
    x = [Fraction(0)] * ncols
    if free_values:
        for j, v in free_values.items():
            x[j] = Fraction(v)
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = rows[r]
        s = Fraction(row[rhs_col]) if rhs_col is not None else Fraction(0)
        for j in range(c + 1, ncols):
            if row[j] and x[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x


def kernel_basis(m: Matrix) -> "Subspace":
    """Basis of ``{v : m v = 0}``: one vector per free column."""
    n = m.cols
    if m.rows == 0:
        return Subspace(n, [unit(n, j) for j in range(n)])
    rows = _as_rows(m)
    pivots = _bareiss(rows, n)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        x = _back_substitute(rows, pivots, n, free_values={f: 1})
        basis.append(tuple(x))
    return Subspace(n, basis, _trusted=True)


def solve(m: Matrix, b: Sequence) -> Optional[Vector]:
    """Some ``x`` with ``m x = b``, or ``None`` when ``b`` is outside the column span."""
    if len(b) != m.rows:
        raise InputError(f"right-hand side of length {len(b)} for {m.rows} rows")
    b = [as_fraction(v) for v in b]
    if m.cols == 0:
        return () if not any(b) else None
    aug = _integer_rows([list(row) + [bi] for row, bi in zip(m.entries, b)])
    pivots = _bareiss(aug, m.cols + 1, pivot_limit=m.cols)
    r = len(pivots)
    if any(aug[i][m.cols] for i in range(r, m.rows)):
        return None
    return tuple(_back_substitute(aug, pivots, m.cols, rhs_col=m.cols))


class Subspace:
    """A subspace of Q^n given by a basis of linearly independent vectors.

    Equality is equality of subspaces, not of bases.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Iterable[Sequence] = (), _trusted: bool = False):
        vecs = tuple(tuple(as_fraction(a) for a in v) for v in basis)
        for v in vecs:
            if len(v) != ambient_dim:
                raise InputError(f"basis vector of length {len(v)} in ambient dimension {ambient_dim}")
        if not _trusted and vecs and rank(Matrix.from_rows(vecs, ambient_dim)) != len(vecs):
            raise InputError("basis vectors are linearly dependent")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", vecs)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        """Subspace spanned by arbitrary vectors; keeps a maximal independent subset."""
        kept: list[Vector] = []
        r = 0
        for v in vectors:
            v = tuple(as_fraction(a) for a in v)
            if len(v) != ambient_dim:
                raise InputError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            if not any(v):
                continue
            trial = kept + [v]
            if rank(Matrix.from_rows(trial, ambient_dim)) > r:
                kept = trial
                r += 1
        return cls(ambient_dim, kept, _trusted=True)

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, [unit(n, i) for i in range(n)], _trusted=True)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, [], _trusted=True)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        """Basis vectors as the columns of an ``ambient_dim x dim`` matrix."""
        return Matrix.from_columns(self.basis, self.ambient_dim)

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise InputError("vector and subspace live in different dimensions")
        if not any(as_fraction(a) for a in v):
            return True
        if not self.basis:
            return False
        return solve(self.matrix(), v) is not None

    def coordinates(self, v: Sequence) -> Optional[Vector]:
        if not self.basis:
            return () if not any(v) else None
        return solve(self.matrix(), v)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient_dim)
        # a - b = 0 with a in self, b in other
        stacked = Matrix.from_columns(
            list(self.basis) + [vscale(-1, v) for v in other.basis], self.ambient_dim)
        ker = kernel_basis(stacked)
        a = self.matrix()
        return Subspace.span([a.apply(k[: self.dim]) for k in ker.basis], self.ambient_dim)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.dim == other.dim
                and self.is_subspace_of(other))

    __hash__ = None

    def __repr__(self):
        vecs = ", ".join("(" + ",".join(format_rational(a) for a in v) + ")" for v in self.basis)
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim}: {vecs})"


def quotient_dim(z: Subspace, b: Subspace) -> int:
    """``dim z - dim b`` after checking ``b`` is contained in ``z``."""
    if z.ambient_dim != b.ambient_dim:
        raise InputError("subspaces live in different ambient spaces")
    for v in b.basis:
        if not z.contains(v):
            raise ComplexError("boundaries are not contained in cycles")
    return z.dim - b.dim


class SparseMatrix:
    """A matrix stored as sparse columns ``{row: Fraction}``.

    Used for cochain boundary maps, which are large and mostly zero.
    """

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns: Sequence[dict]):
        if len(columns) != cols:
            raise InputError(f"{len(columns)} columns given for {cols}")
        clean = []
        for col in columns:
            c = {int(i): as_fraction(a) for i, a in col.items() if a}
            if any(not 0 <= i < rows for i in c):
                raise InputError("row index out of range")
            clean.append(c)
        self.rows, self.cols, self.columns = rows, cols, clean

    @classmethod
    def from_matrix(cls, m: Matrix) -> "SparseMatrix":
        return cls(m.rows, m.cols, [{i: a for i, a in enumerate(col) if a} for col in m.columns()])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_matrix(self) -> Matrix:
        return Matrix.from_columns([tuple(c.get(i, Fraction(0)) for i in range(self.rows)) for c in self.columns],
                                   self.rows)

    def column(self, j: int) -> Vector:
        c = self.columns[j]
        return tuple(c.get(i, Fraction(0)) for i in range(self.rows))

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def apply_sparse(self, v: dict) -> dict:
        out: dict = {}
        for j, a in v.items():
            for i, b in self.columns[j].items():
                s = out.get(i, 0) + a * b
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise InputError(f"vector of length {len(v)} for {self.cols} columns")
        out = self.apply_sparse({j: as_fraction(a) for j, a in enumerate(v) if a})
        return tuple(out.get(i, Fraction(0)) for i in range(self.rows))

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.shape} by {other.shape}")
        return SparseMatrix(self.rows, other.cols, [self.apply_sparse(c) for c in other.columns])

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.columns == other.columns

    __hash__ = None

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"

    def _echelon(self) -> dict:
        # incremental elimination of the columns; pivot vectors have leading coefficient 1
        pivots: dict = {}
        for col in self.columns:
            lead, vec = _reduce_sparse(col, pivots)
            if lead is not None:
                inv = 1 / vec[lead]
                pivots[lead] = {i: a * inv for i, a in vec.items()}
        return pivots

    def rank(self) -> int:
        return len(self._echelon())

    def solve(self, b: Sequence) -> Optional[Vector]:
        """Some ``x`` with ``self x = b``, or ``None``; delegates to the dense solver."""
        return solve(self.to_matrix(), b)


def _reduce_sparse(vec: dict, pivots: dict):
    v = dict(vec)
    while v:
        lead = min(v)
        p = pivots.get(lead)
        if p is None:
            return lead, v
        f = v[lead]
        for i, a in p.items():
            s = v.get(i, 0) - f * a
            if s:
                v[i] = s
            else:
                v.pop(i, None)
    return None, v
