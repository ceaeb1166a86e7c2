"""Relative Rota-Baxter operators of weight lambda between 3-Lie algebras."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Sequence

from . import _sparse as sp
from .actions import ActionData, semidirect_product
from .algebra import (
    LinearMap,
    ThreeLieAlgebra,
    VerificationReport,
    adjoint_rep,
    check_fundamental_identity,
    derived_algebra,
    is_homomorphism,
    is_subalgebra,
)
from .errors import ComplexError, InputError
from .linalg import Matrix, Subspace, as_fraction, rank, solve

__all__ = [
    "RBHomomorphism",
    "RBOperator",
    "check_nijenhuis",
    "check_rb",
    "check_rb_via_graph",
    "check_rb_via_nijenhuis",
    "descendent_algebra",
    "is_rb_homomorphism",
    "lift_nijenhuis",
    "projection_rb",
    "search_rb",
]

SEARCH_BUDGET = 10 ** 7


@dataclass(frozen=True)
class RBOperator:
    """A linear map ``t: h -> g`` over an action, with weight ``lam``."""

    action: ActionData
    t: LinearMap
    lam: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", as_fraction(self.lam))
        if self.t.source_dim != self.action.h.dim or self.t.target_dim != self.action.g.dim:
            raise InputError(
                f"operator must map Q^{self.action.h.dim} -> Q^{self.action.g.dim}, "
                f"got Q^{self.t.source_dim} -> Q^{self.t.target_dim}")

    @property
    def g(self) -> ThreeLieAlgebra:
        return self.action.g

    @property
    def h(self) -> ThreeLieAlgebra:
        return self.action.h

    @property
    def rho(self):
        return self.action.rho

    @cached_property
    def report(self) -> VerificationReport:
        return check_rb(self)

    def require_valid(self):
        rep = self.report
        if not rep.ok:
            raise InputError(f"not a relative Rota-Baxter operator: fails at h-basis triple {rep.witness}")

    def with_map(self, t: LinearMap) -> "RBOperator":
        return RBOperator(self.action, t, self.lam)

    def images(self) -> list:
        """Sparse images ``T e_u`` of the h-basis."""
        return self.t.sparse_columns


@dataclass(frozen=True)
class RBHomomorphism:
    psi_g: LinearMap
    psi_h: LinearMap


def _rb_sides(op: RBOperator, u: int, v: int, w: int):
    rho, t = op.rho, op.t
    tu, tv, tw = (t.sparse_columns[i] for i in (u, v, w))
    eu, ev, ew = sp.unit(u), sp.unit(v), sp.unit(w)
    lhs = op.g.bracket_sparse(tu, tv, tw)
    inner: dict = {}
    sp.add_into(inner, rho.act_sparse(tu, tv, ew))
    sp.add_into(inner, rho.act_sparse(tv, tw, eu))
    sp.add_into(inner, rho.act_sparse(tw, tu, ev))
    if op.lam:
        sp.add_into(inner, op.h.basis_bracket(u, v, w), op.lam)
    rhs = t.apply_sparse(inner)
    return lhs, rhs


def check_rb(op: RBOperator) -> VerificationReport:
    """The Rota-Baxter identity on h-basis triples ``u < v < w``.

    Both sides are totally skew in (u, v, w).
    """
    op.action.require_valid()
    n = op.g.dim
    for u, v, w in combinations(range(op.h.dim), 3):
        lhs, rhs = _rb_sides(op, u, v, w)
        if lhs != rhs:
            return VerificationReport.failed("rota_baxter", (u, v, w), sp.to_dense(lhs, n), sp.to_dense(rhs, n))
    return VerificationReport.passed("rota_baxter")


def graph(op: RBOperator) -> Subspace:
    """``{T u + u}`` inside ``g + h``."""
    m, n = op.g.dim, op.h.dim
    cols = op.t.matrix.columns()
    vecs = [tuple(cols[u]) + tuple(Fraction(1 if k == u else 0) for k in range(n)) for u in range(n)]
    return Subspace(m + n, vecs, _trusted=True)


def check_rb_via_graph(op: RBOperator) -> bool:
    op.action.require_valid()
    return is_subalgebra(semidirect_product(op.action, op.lam), graph(op))


def descendent_algebra(op: RBOperator) -> ThreeLieAlgebra:
    """The bracket ``[u,v,w]_T`` on ``h``; re-verified before it is returned."""
    op.require_valid()
    rho, cols = op.rho, op.t.sparse_columns
    n = op.h.dim
    sc = {}
    for u, v, w in combinations(range(n), 3):
        val: dict = {}
        sp.add_into(val, rho.act_sparse(cols[u], cols[v], sp.unit(w)))
        sp.add_into(val, rho.act_sparse(cols[v], cols[w], sp.unit(u)))
        sp.add_into(val, rho.act_sparse(cols[w], cols[u], sp.unit(v)))
        if op.lam:
            sp.add_into(val, op.h.basis_bracket(u, v, w), op.lam)
        if val:
            sc[(u, v, w)] = sp.to_dense(val, n)
    out = ThreeLieAlgebra(n, sc, op.h.basis_names)
    if not check_fundamental_identity(out).ok:
        raise ComplexError("descendent bracket violates the Fundamental Identity")
    if not is_homomorphism(op.t, out, op.g):
        raise ComplexError("operator is not a homomorphism from its descendent algebra")
    return out


def check_nijenhuis(a: ThreeLieAlgebra, n: LinearMap) -> bool:
    """Nijenhuis identity on basis triples ``i < j < k`` (both sides are totally skew)."""
    if n.source_dim != a.dim or n.target_dim != a.dim:
        raise InputError("Nijenhuis candidate must be square on the algebra")
    N = n.apply_sparse
    e = [sp.unit(i) for i in range(a.dim)]
    ne = [N(x) for x in e]
    br = a.bracket_sparse
    for i, j, k in combinations(range(a.dim), 3):
        lhs = br(ne[i], ne[j], ne[k])
        first: dict = {}
        sp.add_into(first, br(ne[i], ne[j], e[k]))
        sp.add_into(first, br(e[i], ne[j], ne[k]))
        sp.add_into(first, br(ne[i], e[j], ne[k]))
        second: dict = {}
        sp.add_into(second, br(ne[i], e[j], e[k]))
        sp.add_into(second, br(e[i], ne[j], e[k]))
        sp.add_into(second, br(e[i], e[j], ne[k]))
        inner = dict(first)
        sp.add_into(inner, N(second), -1)
        sp.add_into(inner, N(N(a.basis_bracket(i, j, k))))
        if lhs != N(inner):
            return False
    return True


def lift_nijenhuis(op: RBOperator) -> LinearMap:
    """Block map ``(x, u) -> (x + T u, 0)`` on ``g + h``."""
    m, n = op.g.dim, op.h.dim
    rows = []
    for r in range(m):
        rows.append([1 if c == r else 0 for c in range(m)] + list(op.t.matrix.entries[r]))
    for _ in range(n):
        rows.append([0] * (m + n))
    return LinearMap(m + n, m + n, Matrix(m + n, m + n, rows))


def check_rb_via_nijenhuis(op: RBOperator) -> bool:
    op.action.require_valid()
    return check_nijenhuis(semidirect_product(op.action, op.lam), lift_nijenhuis(op))


def projection_rb(g: ThreeLieAlgebra, h_basis: Subspace, k_basis: Subspace, lam) -> RBOperator:
    """Projection of ``g = k + h`` onto ``h`` along ``k``, over the adjoint action.

    Every hypothesis is checked; the resulting operator is re-verified.
    """
    lam = as_fraction(lam)
    n = g.dim
    if h_basis.ambient_dim != n or k_basis.ambient_dim != n:
        raise InputError("subspaces must live in the algebra")
    action = ActionData(g, g, adjoint_rep(g))
    if not action.report.ok:
        raise InputError(f"adjoint representation is not an action ({action.report.check} at {action.report.witness})")
    hv = [sp.from_dense(v) for v in h_basis.basis]
    for p, q, r in combinations(range(len(hv)), 3):
        if g.bracket_sparse(hv[p], hv[q], hv[r]):
            raise InputError("h is not an abelian subalgebra")
    if derived_algebra(g).intersection(h_basis).dim:
        raise InputError("derived algebra meets h nontrivially")
    if h_basis.dim + k_basis.dim != n or rank(Matrix.from_columns(list(k_basis.basis) + list(h_basis.basis), n)) != n:
        raise InputError("k is not a vector-space complement of h")
    b = Matrix.from_columns(list(k_basis.basis) + list(h_basis.basis), n)
    kd = k_basis.dim
    cols = []
    for j in range(n):
        coords = solve(b, tuple(Fraction(1 if i == j else 0) for i in range(n)))
        kept = tuple(Fraction(0) if idx < kd else c for idx, c in enumerate(coords))
        cols.append(b.apply(kept))
    p = LinearMap(n, n, Matrix.from_columns(cols, n))
    op = RBOperator(action, p, lam)
    if not op.report.ok:
        raise ComplexError(f"projection fails the Rota-Baxter identity at {op.report.witness}")
    return op


def is_rb_homomorphism(hom: RBHomomorphism, from_op: RBOperator, to_op: RBOperator) -> bool:
    if from_op.action != to_op.action:
        raise InputError("operators must share the action data")
    if from_op.lam != to_op.lam:
        raise InputError("operators must share the weight")
    a = from_op.action
    pg, ph = hom.psi_g, hom.psi_h
    if (pg.source_dim, pg.target_dim) != (a.g.dim, a.g.dim) or (ph.source_dim, ph.target_dim) != (a.h.dim, a.h.dim):
        raise InputError("homomorphism components have the wrong shape")
    if not is_homomorphism(pg, a.g, a.g) or not is_homomorphism(ph, a.h, a.h):
        return False
    if pg.matrix @ from_op.t.matrix != to_op.t.matrix @ ph.matrix:
        return False
    gimg = [pg.apply_sparse(sp.unit(i)) for i in range(a.g.dim)]
    himg = [ph.apply_sparse(sp.unit(u)) for u in range(a.h.dim)]
    for x, y in combinations(range(a.g.dim), 2):
        for u in range(a.h.dim):
            lhs = ph.apply_sparse(a.rho.act_sparse(sp.unit(x), sp.unit(y), sp.unit(u)))
            rhs = a.rho.act_sparse(gimg[x], gimg[y], himg[u])
            if lhs != rhs:
                return False
    return True


def search_rb(a: ActionData, lam, entry_set: Sequence, diagonal_only: bool = False) -> list:
    """Every operator with entries from ``entry_set`` that passes the RB identity.

    Matrices are enumerated row-major with entries in ascending order, so the
    result is in lexicographic matrix order. With ``diagonal_only`` only the
    main diagonal varies and the rest is zero.
    """
    lam = as_fraction(lam)
    a.require_valid()
    entries = sorted({as_fraction(e) for e in entry_set})
    if not entries:
        raise InputError("entry set is empty")
    m, n = a.g.dim, a.h.dim
    cells = [(r, c) for r in range(m) for c in range(n) if not diagonal_only or r == c]
    space = len(entries) ** len(cells)
    if space > SEARCH_BUDGET:
        raise InputError(f"search space of {space} matrices exceeds the budget of {SEARCH_BUDGET}")
    found = []
    for values in product(entries, repeat=len(cells)):
        rows = [[Fraction(0)] * n for _ in range(m)]
        for (r, c), val in zip(cells, values):
            rows[r][c] = val
        op = RBOperator(a, LinearMap(n, m, Matrix(m, n, rows)), lam)
        if check_rb(op).ok:
            found.append(op)
    return found
