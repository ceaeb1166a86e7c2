"""3-Lie algebras given by structure constants.

The bracket is stored on strictly increasing basis triples; every other
ordered triple is reached by sign extension, so total skew-symmetry holds by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Any, Mapping, Optional, Sequence

from . import _sparse as sp
from .errors import InputError
from .linalg import Matrix, Subspace, as_fraction, kernel_basis

__all__ = [
    "LinearMap",
    "ThreeLieAlgebra",
    "VerificationReport",
    "adjoint_rep",
    "bracket_eval",
    "center",
    "check_fundamental_identity",
    "derived_algebra",
    "is_homomorphism",
    "is_subalgebra",
]


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of an identity check.

    ``witness`` is the first failing basis tuple in lexicographic order,
    with the two sides of the identity in ``lhs``/``rhs``.
    """

    check: str
    ok: bool
    witness: Optional[tuple] = None
    lhs: Any = None
    rhs: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls, check: str, detail: str = "") -> "VerificationReport":
        return cls(check, True, detail=detail)

    @classmethod
    def failed(cls, check: str, witness, lhs=None, rhs=None, detail: str = "") -> "VerificationReport":
        return cls(check, False, tuple(witness), lhs, rhs, detail)


def _perm_sign_3(i, j, k):
    """Sort a distinct triple; return (sorted triple, sign of the sorting permutation)."""
    sign = 1
    a, b, c = i, j, k
    if a > b:
        a, b, sign = b, a, -sign
    if b > c:
        b, c, sign = c, b, -sign
    if a > b:
        a, b, sign = b, a, -sign
    return (a, b, c), sign


class ThreeLieAlgebra:
    """A totally skew ternary bracket on Q^dim.

    ``sc`` maps increasing triples ``(i, j, k)`` to the coefficient vector of
    ``[e_i, e_j, e_k]``. Triples that are absent are zero. Whether the
    Fundamental Identity holds is a separate question answered by
    :func:`check_fundamental_identity`.
    """

    def __init__(self, dim: int, sc: Mapping = None, basis_names: Sequence[str] = None):
        if dim < 0:
            raise InputError("dimension must be non-negative")
        names = tuple(basis_names) if basis_names is not None else tuple(f"e{i + 1}" for i in range(dim))
        if len(names) != dim:
            raise InputError(f"{len(names)} basis names for dimension {dim}")
        table = {}
        for key, value in (sc or {}).items():
            i, j, k = key
            if not (0 <= i < j < k < dim):
                raise InputError(f"bracket index triple {key} must satisfy 0 <= i < j < k < {dim}")
            vec = _coerce_vector(value, dim)
            if any(vec):
                table[(i, j, k)] = vec
        self.dim = dim
        self.basis_names = names
        self.sc = table

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping, basis_names=None) -> "ThreeLieAlgebra":
        """Build from brackets on arbitrary distinct ordered triples (sign-normalised).

        Values may be dense vectors or ``{index: coefficient}`` dicts. A
        triple given in two orders must agree up to sign.
        """
        table: dict = {}
        for key, value in brackets.items():
            if len(set(key)) != 3:
                raise InputError(f"bracket with a repeated index {key} is zero and cannot be set")
            srt, sign = _perm_sign_3(*key)
            vec = tuple(sign * a for a in _coerce_vector(value, dim))
            if srt in table and table[srt] != vec:
                raise InputError(f"inconsistent values for the triple {srt}")
            table[srt] = vec
        return cls(dim, table, basis_names)

    @classmethod
    def abelian(cls, dim: int, basis_names=None) -> "ThreeLieAlgebra":
        return cls(dim, {}, basis_names)

    def __eq__(self, other):
        if not isinstance(other, ThreeLieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.sc == other.sc

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.sc.items()))))

    def __repr__(self):
        return f"ThreeLieAlgebra(dim={self.dim}, nonzero_brackets={len(self.sc)})"

    @cached_property
    def _full(self) -> dict:
        # every ordered distinct triple -> sparse vector
        full = {}
        for (i, j, k), vec in self.sc.items():
            v = sp.from_dense(vec)
            for (a, b, c), s in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                                  ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
                full[(a, b, c)] = v if s == 1 else sp.scaled(v, -1)
        return full

    def basis_bracket(self, i: int, j: int, k: int) -> dict:
        """Sparse value of ``[e_i, e_j, e_k]`` (shared, do not mutate)."""
        return self._full.get((i, j, k), {})

    def bracket_sparse(self, x: dict, y: dict, z: dict) -> dict:
        out: dict = {}
        full = self._full
        if not full:
            return out
        for i, xi in x.items():
            for j, yj in y.items():
                if i == j:
                    continue
                xy = xi * yj
                for k, zk in z.items():
                    v = full.get((i, j, k))
                    if v:
                        sp.add_into(out, v, xy * zk)
        return out

    def bracket(self, x, y, z) -> tuple:
        for v in (x, y, z):
            if len(v) != self.dim:
                raise InputError(f"vector of length {len(v)} in a {self.dim}-dimensional algebra")
        return sp.to_dense(self.bracket_sparse(sp.from_dense(x), sp.from_dense(y), sp.from_dense(z)), self.dim)

    def is_abelian(self) -> bool:
        return not self.sc


def _coerce_vector(value, dim: int) -> tuple:
    if isinstance(value, Mapping):
        vec = [Fraction(0)] * dim
        for idx, c in value.items():
            idx = int(idx)
            if not 0 <= idx < dim:
                raise InputError(f"coefficient index {idx} out of range for dimension {dim}")
            vec[idx] = as_fraction(c)
        return tuple(vec)
    vec = tuple(as_fraction(c) for c in value)
    if len(vec) != dim:
        raise InputError(f"vector of length {len(vec)}, expected {dim}")
    return vec


@dataclass(frozen=True)
class LinearMap:
    """A linear map Q^source_dim -> Q^target_dim; ``matrix`` is target x source."""

    source_dim: int
    target_dim: int
    matrix: Matrix = field(repr=False)

    def __post_init__(self):
        if self.matrix.shape != (self.target_dim, self.source_dim):
            raise InputError(
                f"matrix shape {self.matrix.shape} does not match a map "
                f"Q^{self.source_dim} -> Q^{self.target_dim}")

    @classmethod
    def from_rows(cls, rows, source_dim: int = None, target_dim: int = None) -> "LinearMap":
        rows = [list(r) for r in rows]
        t = len(rows) if target_dim is None else target_dim
        s = (len(rows[0]) if rows else 0) if source_dim is None else source_dim
        return cls(s, t, Matrix(t, s, rows))

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(n, n, Matrix.identity(n))

    @classmethod
    def zero(cls, source_dim: int, target_dim: int) -> "LinearMap":
        return cls(source_dim, target_dim, Matrix.zeros(target_dim, source_dim))

    def __call__(self, v) -> tuple:
        return self.matrix.apply(v)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self o other``."""
        if other.target_dim != self.source_dim:
            raise InputError("maps cannot be composed")
        return LinearMap(other.source_dim, self.target_dim, self.matrix @ other.matrix)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.source_dim, self.target_dim, self.matrix + other.matrix)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.source_dim, self.target_dim, self.matrix - other.matrix)

    def scale(self, c) -> "LinearMap":
        return LinearMap(self.source_dim, self.target_dim, self.matrix.scale(c))

    @cached_property
    def sparse_columns(self) -> list:
        return [sp.from_dense(c) for c in self.matrix.columns()]

    def apply_sparse(self, v: dict) -> dict:
        return sp.apply_columns(self.sparse_columns, v)


def bracket_eval(a: ThreeLieAlgebra, x, y, z) -> tuple:
    """Trilinear, totally skew extension of the structure constants."""
    return a.bracket(x, y, z)


def check_fundamental_identity(a: ThreeLieAlgebra) -> VerificationReport:
    """Fundamental Identity on basis tuples with x1<x2 and x3<x4<x5.

    Both sides are skew in (x1, x2) and in (x3, x4, x5), so these tuples
    suffice.
    """
    n = a.dim
    e = [sp.unit(i) for i in range(n)]
    for x1, x2 in combinations(range(n), 2):
        for x3, x4, x5 in combinations(range(n), 3):
            lhs = a.bracket_sparse(e[x1], e[x2], a.basis_bracket(x3, x4, x5))
            rhs: dict = {}
            sp.add_into(rhs, a.bracket_sparse(a.basis_bracket(x1, x2, x3), e[x4], e[x5]))
            sp.add_into(rhs, a.bracket_sparse(e[x3], a.basis_bracket(x1, x2, x4), e[x5]))
            sp.add_into(rhs, a.bracket_sparse(e[x3], e[x4], a.basis_bracket(x1, x2, x5)))
            if lhs != rhs:
                return VerificationReport.failed(
                    "fundamental_identity", (x1, x2, x3, x4, x5),
                    sp.to_dense(lhs, n), sp.to_dense(rhs, n))
    return VerificationReport.passed("fundamental_identity")


def center(a: ThreeLieAlgebra) -> Subspace:
    """Kernel of the stacked maps ``x -> [x, e_j, e_k]`` over ``j < k``."""
    n = a.dim
    rows = []
    for j, k in combinations(range(n), 2):
        cols = [sp.to_dense(a.basis_bracket(i, j, k), n) for i in range(n)]
        for r in range(n):
            rows.append([c[r] for c in cols])
    if not rows:
        return Subspace.whole(n)
    return kernel_basis(Matrix.from_rows(rows, n))


def derived_algebra(a: ThreeLieAlgebra) -> Subspace:
    return Subspace.span(
        [sp.to_dense(a.basis_bracket(i, j, k), a.dim) for i, j, k in combinations(range(a.dim), 3)],
        a.dim)


def is_subalgebra(a: ThreeLieAlgebra, s: Subspace) -> bool:
    if s.ambient_dim != a.dim:
        raise InputError("subspace and algebra dimensions differ")
    # fewer than three basis vectors: every bracket is alternating in them, hence zero
    basis = [sp.from_dense(v) for v in s.basis]
    for p, q, r in combinations(range(len(basis)), 3):
        val = a.bracket_sparse(basis[p], basis[q], basis[r])
        if val and not s.contains(sp.to_dense(val, a.dim)):
            return False
    return True


def is_homomorphism(f: LinearMap, a: ThreeLieAlgebra, b: ThreeLieAlgebra) -> bool:
    if f.source_dim != a.dim or f.target_dim != b.dim:
        raise InputError("map dimensions do not match the algebras")
    img = [f.apply_sparse(sp.unit(i)) for i in range(a.dim)]
    for i, j, k in combinations(range(a.dim), 3):
        lhs = f.apply_sparse(a.basis_bracket(i, j, k))
        rhs = b.bracket_sparse(img[i], img[j], img[k])
        if lhs != rhs:
            return False
    return True


def adjoint_rep(a: ThreeLieAlgebra):
    """``ad(e_i, e_j) = [e_i, e_j, .]`` as a PairMap of ``a`` on itself."""
    from .actions import PairMap

    n = a.dim
    rho = {}
    for i, j in combinations(range(n), 2):
        cols = [sp.to_dense(a.basis_bracket(i, j, x), n) for x in range(n)]
        m = Matrix.from_columns(cols, n)
        if not m.is_zero():
            rho[(i, j)] = m
    return PairMap(n, n, rho)
