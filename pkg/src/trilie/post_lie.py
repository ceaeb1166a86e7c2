"""3-post-Lie algebras: a 3-Lie bracket ``[.,.,.]`` together with a ternary
product ``{.,.,.}`` that is skew in its first two arguments."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product

from . import _sparse as sp
from .actions import ActionData, PairMap
from .algebra import (
    LinearMap,
    ThreeLieAlgebra,
    VerificationReport,
    check_fundamental_identity,
)
from .errors import ComplexError, InputError
from .linalg import Matrix
from .rota_baxter import RBOperator, check_rb

__all__ = [
    "ThreePostLie",
    "check_post_lie",
    "identity_is_rb",
    "is_post_lie_homomorphism",
    "left_action",
    "post_lie_from_rb",
    "subadjacent",
]


@dataclass(frozen=True)
class ThreePostLie:
    """``lie`` is the 3-Lie bracket; ``tri`` holds ``{e_i, e_j, .}`` as the matrix for the pair ``i < j``."""

    lie: ThreeLieAlgebra
    tri: PairMap

    def __post_init__(self):
        if self.tri.g_dim != self.lie.dim or self.tri.v_dim != self.lie.dim:
            raise InputError("ternary product and bracket live on different spaces")

    @classmethod
    def from_entries(cls, lie: ThreeLieAlgebra, entries) -> "ThreePostLie":
        """``entries`` maps ``((i, j), k)`` with ``i != j`` to the value of ``{e_i, e_j, e_k}``."""
        n = lie.dim
        cols: dict = {}
        for (pair, k), val in entries.items():
            i, j = pair
            if i == j:
                raise InputError(f"{{e_{i}, e_{i}, .}} is forced to vanish")
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            if not (0 <= j < n and 0 <= k < n):
                raise InputError(f"index out of range in {(pair, k)}")
            vec = sp.scaled(val if isinstance(val, dict) else sp.from_dense(val), sign)
            vec = {int(a): c for a, c in vec.items()}
            prev = cols.setdefault((i, j), {}).get(k)
            if prev is not None and prev != vec:
                raise InputError(f"inconsistent values for {{e_{i}, e_{j}, e_{k}}}")
            cols[(i, j)][k] = vec
        rho = {key: Matrix.from_columns([sp.to_dense(c.get(k, {}), n) for k in range(n)], n)
               for key, c in cols.items()}
        return cls(lie, PairMap(n, n, rho))

    @property
    def dim(self) -> int:
        return self.lie.dim

    def tri_sparse(self, x: dict, y: dict, z: dict) -> dict:
        return self.tri.act_sparse(x, y, z)

    def courant_sparse(self, x: dict, y: dict, z: dict) -> dict:
        """``{x,y,z} + {y,z,x} + {z,x,y} + [x,y,z]``."""
        out = dict(self.tri_sparse(x, y, z))
        sp.add_into(out, self.tri_sparse(y, z, x))
        sp.add_into(out, self.tri_sparse(z, x, y))
        sp.add_into(out, self.lie.bracket_sparse(x, y, z))
        return out

    @cached_property
    def report(self) -> VerificationReport:
        return check_post_lie(self)

    def require_valid(self):
        rep = self.report
        if not rep.ok:
            raise InputError(f"not a 3-post-Lie algebra: {rep.check} fails at {rep.witness}")


def check_post_lie(p: ThreePostLie) -> VerificationReport:
    """The four compatibility identities on basis 5-tuples.

    Index ranges are cut down only where both sides share a skew symmetry:
    the first identity is skew in (x1, x2) and in (x3, x4); the second is
    totally skew in (x1, x2, x3); the third in (x1, x2) and in (x3, x4, x5);
    the fourth in (x1, x2) and in (x4, x5).
    """
    if not check_fundamental_identity(p.lie).ok:
        raise InputError("underlying bracket fails the Fundamental Identity")
    n = p.dim
    e = [sp.unit(i) for i in range(n)]
    tri, cour, lie = p.tri_sparse, p.courant_sparse, p.lie.bracket_sparse
    pairs = list(combinations(range(n), 2))
    triples = list(combinations(range(n), 3))

    def fail(name, w, lhs, rhs):
        return VerificationReport.failed(name, w, sp.to_dense(lhs, n), sp.to_dense(rhs, n))

    for (x1, x2), (x3, x4), x5 in product(pairs, pairs, range(n)):
        lhs = tri(e[x1], e[x2], tri(e[x3], e[x4], e[x5]))
        rhs = dict(tri(e[x3], e[x4], tri(e[x1], e[x2], e[x5])))
        sp.add_into(rhs, tri(cour(e[x1], e[x2], e[x3]), e[x4], e[x5]))
        sp.add_into(rhs, tri(e[x3], cour(e[x1], e[x2], e[x4]), e[x5]))
        if lhs != rhs:
            return fail("post_lie_derivation", (x1, x2, x3, x4, x5), lhs, rhs)
    for (x1, x2, x3), x4, x5 in product(triples, range(n), range(n)):
        lhs = tri(cour(e[x1], e[x2], e[x3]), e[x4], e[x5])
        rhs = dict(tri(e[x1], e[x2], tri(e[x3], e[x4], e[x5])))
        sp.add_into(rhs, tri(e[x2], e[x3], tri(e[x1], e[x4], e[x5])))
        sp.add_into(rhs, tri(e[x3], e[x1], tri(e[x2], e[x4], e[x5])))
        if lhs != rhs:
            return fail("post_lie_bracket", (x1, x2, x3, x4, x5), lhs, rhs)
    for (x1, x2), (x3, x4, x5) in product(pairs, triples):
        lhs = tri(e[x1], e[x2], p.lie.basis_bracket(x3, x4, x5))
        if lhs:
            return fail("post_lie_annihilates_bracket", (x1, x2, x3, x4, x5), lhs, {})
    for (x1, x2), x3, (x4, x5) in product(pairs, range(n), pairs):
        lhs = lie(tri(e[x1], e[x2], e[x3]), e[x4], e[x5])
        if lhs:
            return fail("post_lie_central_image", (x1, x2, x3, x4, x5), lhs, {})
    return VerificationReport.passed("post_lie")


def subadjacent(p: ThreePostLie) -> ThreeLieAlgebra:
    p.require_valid()
    n = p.dim
    e = [sp.unit(i) for i in range(n)]
    sc = {}
    for i, j, k in combinations(range(n), 3):
        v = p.courant_sparse(e[i], e[j], e[k])
        if v:
            sc[(i, j, k)] = sp.to_dense(v, n)
    out = ThreeLieAlgebra(n, sc, p.lie.basis_names)
    if not check_fundamental_identity(out).ok:
        raise ComplexError("sub-adjacent bracket violates the Fundamental Identity")
    return out


def left_action(p: ThreePostLie) -> ActionData:
    """``L(x, y) z = {x, y, z}`` as an action of the sub-adjacent algebra on ``(A, [.,.,.])``."""
    return ActionData(subadjacent(p), p.lie, p.tri)


def identity_is_rb(p: ThreePostLie) -> bool:
    a = left_action(p)
    return check_rb(RBOperator(a, LinearMap.identity(p.dim), 1)).ok


def post_lie_from_rb(op: RBOperator) -> ThreePostLie:
    """``{u, v, w} = rho(Tu, Tv) w`` and ``[u, v, w] = lam [u, v, w]_h``."""
    op.require_valid()
    n = op.h.dim
    cols = op.t.sparse_columns
    rho = {}
    for i, j in combinations(range(n), 2):
        m = Matrix.from_columns(
            [sp.to_dense(op.rho.act_sparse(cols[i], cols[j], sp.unit(k)), n) for k in range(n)], n)
        if not m.is_zero():
            rho[(i, j)] = m
    lie = ThreeLieAlgebra(n, {key: tuple(op.lam * c for c in v) for key, v in op.h.sc.items()},
                          op.h.basis_names)
    return ThreePostLie(lie, PairMap(n, n, rho))


def is_post_lie_homomorphism(psi: LinearMap, p: ThreePostLie, q: ThreePostLie) -> bool:
    if psi.source_dim != p.dim or psi.target_dim != q.dim:
        raise InputError("map dimensions do not match the post-Lie algebras")
    img = [psi.apply_sparse(sp.unit(i)) for i in range(p.dim)]
    e = [sp.unit(i) for i in range(p.dim)]
    for i, j in combinations(range(p.dim), 2):
        for k in range(p.dim):
            if psi.apply_sparse(p.tri_sparse(e[i], e[j], e[k])) != q.tri_sparse(img[i], img[j], img[k]):
                return False
    for i, j, k in combinations(range(p.dim), 3):
        if psi.apply_sparse(p.lie.basis_bracket(i, j, k)) != q.lie.bracket_sparse(img[i], img[j], img[k]):
            return False
    return True
