"""Representations and actions of one 3-Lie algebra on another, and the
semidirect product they define."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Mapping

from . import _sparse as sp
from .algebra import (
    ThreeLieAlgebra,
    VerificationReport,
    center,
    check_fundamental_identity,
    derived_algebra,
)
from .errors import ComplexError, InputError
from .linalg import Matrix, as_fraction

__all__ = [
    "ActionData",
    "PairMap",
    "check_action",
    "check_derivations",
    "check_representation",
    "semidirect_product",
]


class PairMap:
    """A skew bilinear map ``rho: g x g -> End(V)`` stored on pairs ``i < j``."""

    def __init__(self, g_dim: int, v_dim: int, rho: Mapping = None):
        table = {}
        for key, m in (rho or {}).items():
            i, j = key
            if not (0 <= i < j < g_dim):
                raise InputError(f"pair {key} must satisfy 0 <= i < j < {g_dim}")
            if not isinstance(m, Matrix):
                m = Matrix.from_rows(m, v_dim) if len(m) else Matrix.zeros(v_dim, v_dim)
            if m.shape != (v_dim, v_dim):
                raise InputError(f"matrix for pair {key} has shape {m.shape}, expected {(v_dim, v_dim)}")
            if not m.is_zero():
                table[(i, j)] = m
        self.g_dim = g_dim
        self.v_dim = v_dim
        self.rho = table

    @classmethod
    def zero(cls, g_dim: int, v_dim: int) -> "PairMap":
        return cls(g_dim, v_dim, {})

    def __eq__(self, other):
        if not isinstance(other, PairMap):
            return NotImplemented
        return (self.g_dim, self.v_dim, self.rho) == (other.g_dim, other.v_dim, other.rho)

    def __hash__(self):
        return hash((self.g_dim, self.v_dim, tuple(sorted(self.rho.items()))))

    def __repr__(self):
        return f"PairMap(g_dim={self.g_dim}, v_dim={self.v_dim}, nonzero_pairs={len(self.rho)})"

    @cached_property
    def _cols(self) -> dict:
        # ordered pair (i, j), i != j -> list of sparse columns
        out = {}
        for (i, j), m in self.rho.items():
            cols = [sp.from_dense(c) for c in m.columns()]
            out[(i, j)] = cols
            out[(j, i)] = [sp.scaled(c, -1) for c in cols]
        return out

    def basis_matrix(self, i: int, j: int) -> Matrix:
        if i == j:
            return Matrix.zeros(self.v_dim, self.v_dim)
        if i < j:
            return self.rho.get((i, j), Matrix.zeros(self.v_dim, self.v_dim))
        return -self.rho.get((j, i), Matrix.zeros(self.v_dim, self.v_dim))

    def act_sparse(self, x: dict, y: dict, v: dict) -> dict:
        """``rho(x, y) v`` for sparse vectors."""
        out: dict = {}
        cols = self._cols
        if not cols:
            return out
        for i, xi in x.items():
            for j, yj in y.items():
                c = cols.get((i, j))
                if c is None:
                    continue
                xy = xi * yj
                for k, vk in v.items():
                    if c[k]:
                        sp.add_into(out, c[k], xy * vk)
        return out

    def act(self, x, y, v) -> tuple:
        return sp.to_dense(self.act_sparse(sp.from_dense(x), sp.from_dense(y), sp.from_dense(v)), self.v_dim)

    def operator(self, x, y) -> Matrix:
        """The matrix ``rho(x, y)`` for arbitrary vectors."""
        m = Matrix.zeros(self.v_dim, self.v_dim)
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj and i != j:
                    m = m + self.basis_matrix(i, j).scale(as_fraction(xi) * as_fraction(yj))
        return m

    def wedge_operator_sparse(self, w: dict, v: dict) -> dict:
        """``rho(X) v`` for ``X`` given as sparse coefficients on pairs ``(a, b)``."""
        out: dict = {}
        cols = self._cols
        for (a, b), c in w.items():
            cc = cols.get((a, b))
            if cc is None:
                continue
            for k, vk in v.items():
                if cc[k]:
                    sp.add_into(out, cc[k], c * vk)
        return out


@dataclass(frozen=True, eq=True)
class ActionData:
    """A candidate action ``rho`` of ``g`` on ``h``. Verified by :func:`check_action`."""

    g: ThreeLieAlgebra
    h: ThreeLieAlgebra
    rho: PairMap

    def __post_init__(self):
        if self.rho.g_dim != self.g.dim or self.rho.v_dim != self.h.dim:
            raise InputError(
                f"pair map is {self.rho.g_dim}->End(Q^{self.rho.v_dim}) but g has dimension "
                f"{self.g.dim} and h has dimension {self.h.dim}")

    @cached_property
    def report(self) -> VerificationReport:
        return check_action(self)

    def require_valid(self):
        rep = self.report
        if not rep.ok:
            raise InputError(f"not an action: {rep.check} fails at {rep.witness}")


def _rep_sparse_matrix_eq(rho: PairMap, lhs_terms, rhs_terms, v_dim) -> tuple:
    """Compare two sums of operator words by their action on every basis vector.

    Each term is ``(coef, [(x, y), ...])`` meaning ``coef * rho(x1,y1) rho(x2,y2) ...``
    applied right-to-left. Returns ``(equal, lhs_matrix, rhs_matrix)``.
    """

    def evaluate(terms):
        cols = []
        for k in range(v_dim):
            acc: dict = {}
            for coef, word in terms:
                v = sp.unit(k)
                for x, y in reversed(word):
                    v = rho.act_sparse(x, y, v)
                    if not v:
                        break
                if v:
                    sp.add_into(acc, v, coef)
            cols.append(acc)
        return cols

    lc, rc = evaluate(lhs_terms), evaluate(rhs_terms)
    return lc == rc, lc, rc


def _cols_to_matrix(cols, n) -> Matrix:
    return Matrix.from_columns([sp.to_dense(c, n) for c in cols], n)


def check_representation(g: ThreeLieAlgebra, rho: PairMap) -> VerificationReport:
    """Both representation identities on every basis 4-tuple.

    The first identity is a commutator relation ``[rho(x1,x2), rho(x3,x4)]``;
    the second expresses ``rho(x1, [x2,x3,x4])``. Tuples are unrestricted.
    """
    if rho.g_dim != g.dim:
        raise InputError("pair map and algebra dimensions differ")
    n, vd = g.dim, rho.v_dim
    e = [sp.unit(i) for i in range(n)]
    for x1, x2, x3, x4 in product(range(n), repeat=4):
        b123 = g.basis_bracket(x1, x2, x3)
        b124 = g.basis_bracket(x1, x2, x4)
        ok, lc, rc = _rep_sparse_matrix_eq(
            rho,
            [(1, [(e[x1], e[x2]), (e[x3], e[x4])])],
            [(1, [(b123, e[x4])]), (1, [(e[x3], b124)]), (1, [(e[x3], e[x4]), (e[x1], e[x2])])],
            vd)
        if not ok:
            return VerificationReport.failed(
                "representation_commutator", (x1, x2, x3, x4),
                _cols_to_matrix(lc, vd), _cols_to_matrix(rc, vd))
        b234 = g.basis_bracket(x2, x3, x4)
        ok, lc, rc = _rep_sparse_matrix_eq(
            rho,
            [(1, [(e[x1], b234)])],
            [(1, [(e[x3], e[x4]), (e[x1], e[x2])]),
             (-1, [(e[x2], e[x4]), (e[x1], e[x3])]),
             (1, [(e[x2], e[x3]), (e[x1], e[x4])])],
            vd)
        if not ok:
            return VerificationReport.failed(
                "representation_bracket", (x1, x2, x3, x4),
                _cols_to_matrix(lc, vd), _cols_to_matrix(rc, vd))
    return VerificationReport.passed("representation")


def check_action(a: ActionData) -> VerificationReport:
    """Representation axioms, image in the center of ``h``, and ``h^1`` annihilated."""
    rep = check_representation(a.g, a.rho)
    if not rep.ok:
        return rep
    n = a.h.dim
    ch = center(a.h)
    for i, j in combinations(range(a.g.dim), 2):
        m = a.rho.basis_matrix(i, j)
        for u in range(n):
            col = m.column(u)
            if not ch.contains(col):
                return VerificationReport.failed(
                    "action_center", (i, j, u), col, None,
                    "rho(e_i, e_j) e_u is not central in h")
        for w in derived_algebra(a.h).basis:
            img = m.apply(w)
            if any(img):
                return VerificationReport.failed(
                    "action_derived", (i, j), img, tuple(Fraction(0) for _ in img),
                    f"rho(e_i, e_j) does not annihilate the derived algebra vector {w}")
    return VerificationReport.passed("action")


def check_derivations(a: ActionData) -> VerificationReport:
    """Each ``rho(e_i, e_j)`` is a derivation of the bracket of ``h``."""
    h = a.h
    e = [sp.unit(i) for i in range(h.dim)]
    for i, j in combinations(range(a.g.dim), 2):
        gi, gj = sp.unit(i), sp.unit(j)

        def d(v):
            return a.rho.act_sparse(gi, gj, v)

        for u, v, w in combinations(range(h.dim), 3):
            lhs = d(h.basis_bracket(u, v, w))
            rhs: dict = {}
            sp.add_into(rhs, h.bracket_sparse(d(e[u]), e[v], e[w]))
            sp.add_into(rhs, h.bracket_sparse(e[u], d(e[v]), e[w]))
            sp.add_into(rhs, h.bracket_sparse(e[u], e[v], d(e[w])))
            if lhs != rhs:
                return VerificationReport.failed(
                    "derivation", (i, j, u, v, w), sp.to_dense(lhs, h.dim), sp.to_dense(rhs, h.dim))
    return VerificationReport.passed("derivation")


def _product_names(g: ThreeLieAlgebra, h: ThreeLieAlgebra) -> tuple:
    names = list(g.basis_names)
    taken = set(names)
    for nm in h.basis_names:
        new = nm
        while new in taken:
            new += "'"
        taken.add(new)
        names.append(new)
    return tuple(names)


def semidirect_bracket_sparse(a: ActionData, lam: Fraction, x: dict, y: dict, z: dict) -> dict:
    """Bracket of ``g + h`` on sparse vectors indexed 0..m-1 (g) then m..m+n-1 (h)."""
    m = a.g.dim

    def split(v):
        gv, hv = {}, {}
        for i, c in v.items():
            if i < m:
                gv[i] = c
            else:
                hv[i - m] = c
        return gv, hv

    (xg, xh), (yg, yh), (zg, zh) = split(x), split(y), split(z)
    out = dict(a.g.bracket_sparse(xg, yg, zg)) if xg and yg and zg else {}
    hpart: dict = {}
    if xg and yg and zh:
        sp.add_into(hpart, a.rho.act_sparse(xg, yg, zh))
    if yg and zg and xh:
        sp.add_into(hpart, a.rho.act_sparse(yg, zg, xh))
    if zg and xg and yh:
        sp.add_into(hpart, a.rho.act_sparse(zg, xg, yh))
    if lam and xh and yh and zh:
        sp.add_into(hpart, a.h.bracket_sparse(xh, yh, zh), lam)
    for i, c in hpart.items():
        out[i + m] = c
    return out


def semidirect_product(a: ActionData, lam) -> ThreeLieAlgebra:
    """The 3-Lie algebra on ``g + h`` built from an action and a weight."""
    lam = as_fraction(lam)
    a.require_valid()
    m, n = a.g.dim, a.h.dim
    total = m + n
    sc = {}
    for i, j, k in combinations(range(total), 3):
        v = semidirect_bracket_sparse(a, lam, sp.unit(i), sp.unit(j), sp.unit(k))
        if v:
            sc[(i, j, k)] = sp.to_dense(v, total)
    out = ThreeLieAlgebra(total, sc, _product_names(a.g, a.h))
    rep = check_fundamental_identity(out)
    if not rep.ok:
        raise ComplexError(f"semidirect product violates the Fundamental Identity at {rep.witness}")
    return out
