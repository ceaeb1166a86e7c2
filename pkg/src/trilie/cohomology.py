"""Coboundary operators, the cochain complex of a Rota-Baxter operator, its
cohomology dimensions, and classification of infinitesimal deformations.

Cochain coordinates are ordered lexicographically by
``(pair_1, ..., pair_k, last, target)``; boundary matrices use that basis on
both sides, with ``g ^ g`` ordered by pairs ``a < b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Optional

from . import _sparse as sp
from .actions import PairMap, check_representation
from .algebra import LinearMap, ThreeLieAlgebra, VerificationReport
from .errors import ComplexError, InputError
from .linalg import Matrix, SparseMatrix, as_fraction
from .linfty import Cochain, TableCochain, as_cochain, cochain_keys, cochain_space_dim, twisted_brackets
from .rota_baxter import RBHomomorphism, RBOperator, descendent_algebra

__all__ = [
    "ComplexSlice",
    "DeformationVerdict",
    "boundary_matrix",
    "classify_deformation",
    "coboundary_matches_twisted",
    "cohomology_dims",
    "d_T",
    "d_lie",
    "delta_1",
    "delta_matrix",
    "deformation_equation_holds",
    "equivalence_conditions",
    "induced_rep",
    "induced_rep_intertwines",
    "rb_complex",
]

MAX_COMPLEX_DEGREE = 4


def _coboundary_terms(alg: ThreeLieAlgebra, pairs: tuple, last: int):
    """The terms of ``(df)(X_1, ..., X_n, x_{n+1})`` independent of ``f``.

    Yields ``(coef, rho_pair, slots, last_vec)``: the term is
    ``coef * rho(rho_pair) f(slots, last_vec)``, or just ``coef * f(...)``
    when ``rho_pair`` is ``None``.
    """
    n = len(pairs)
    br = alg.basis_bracket
    slots = [{p: Fraction(1)} for p in pairs]
    e_last = sp.unit(last)
    for k in range(n):
        xk, yk = pairs[k]
        for j in range(k):
            xj, yj = pairs[j]
            mid = sp.wedge(br(xj, yj, xk), sp.unit(yk))
            sp.add_into(mid, sp.wedge(sp.unit(xk), br(xj, yj, yk)))
            if mid:
                s = slots[:j] + slots[j + 1:k] + [mid] + slots[k + 1:]
                yield (-1 if (j + 1) % 2 else 1), None, s, e_last
    for j in range(n):
        xj, yj = pairs[j]
        rest = slots[:j] + slots[j + 1:]
        v = br(xj, yj, last)
        if v:
            yield (-1 if (j + 1) % 2 else 1), None, rest, v
        yield (1 if (j + 1) % 2 else -1), (xj, yj), rest, e_last
    if n:
        xn, yn = pairs[-1]
        sign = 1 if (n + 1) % 2 == 0 else -1
        head = slots[:-1]
        if yn != last:
            yield sign, (yn, last), head, sp.unit(xn)
        if last != xn:
            yield sign, (last, xn), head, sp.unit(yn)


class _Coboundary(Cochain):
    def __init__(self, alg: ThreeLieAlgebra, rep: PairMap, f: Cochain):
        super().__init__(f.degree + 1, f.src_dim, f.tgt_dim)
        self.alg, self.rep, self.f = alg, rep, f

    def _compute(self, pairs, last):
        out: dict = {}
        for coef, rp, slots, lv in _coboundary_terms(self.alg, pairs, last):
            v = self.f.evaluate(slots, lv)
            if not v:
                continue
            if rp is not None:
                v = self.rep.act_sparse(sp.unit(rp[0]), sp.unit(rp[1]), v)
            sp.add_into(out, v, coef)
        return out


def _check_cochain(alg: ThreeLieAlgebra, rep: PairMap, f: Cochain, n: int):
    if f.degree != n - 1:
        raise InputError(f"an {n}-cochain has {n - 1} pair slots, got {f.degree}")
    if f.src_dim != alg.dim or f.tgt_dim != rep.v_dim:
        raise InputError("cochain does not match the algebra and representation")
    if rep.g_dim != alg.dim:
        raise InputError("representation is not of this algebra")


@lru_cache(maxsize=64)
def _rep_ok(alg: ThreeLieAlgebra, rep: PairMap) -> VerificationReport:
    return check_representation(alg, rep)


def d_lie(g: ThreeLieAlgebra, rep: PairMap, f, n: int) -> Cochain:
    """Coboundary of an ``n``-cochain of ``g`` with values in ``rep``."""
    f = as_cochain(f)
    _check_cochain(g, rep, f, n)
    r = _rep_ok(g, rep)
    if not r.ok:
        raise InputError(f"not a representation: {r.check} fails at {r.witness}")
    return _Coboundary(g, rep, f)


def _key_index(pairs: tuple, last: int, src: int) -> int:
    npairs = src * (src - 1) // 2
    idx = 0
    for a, b in pairs:
        # position of (a, b) among pairs of range(src) in lexicographic order
        idx = idx * npairs + (a * (2 * src - a - 1)) // 2 + (b - a - 1)
    return idx * src + last


def boundary_matrix(alg: ThreeLieAlgebra, rep: PairMap, n: int) -> SparseMatrix:
    """Matrix of ``d: C^n -> C^{n+1}`` in the lexicographic cochain bases."""
    src, tgt = alg.dim, rep.v_dim
    cols_in = cochain_space_dim(src, tgt, n - 1)
    rows_out = cochain_space_dim(src, tgt, n)
    rep_cols = rep._cols
    columns = [dict() for _ in range(cols_in)]
    for out_key_idx, (pairs, last) in enumerate(cochain_keys(src, n)):
        row_base = out_key_idx * tgt
        for coef, rp, slots, lv in _coboundary_terms(alg, pairs, last):
            if rp is not None:
                op_cols = rep_cols.get(rp)
                if op_cols is None:
                    continue
            for combo in product(*(s.items() for s in slots)):
                c = Fraction(coef)
                for _, a in combo:
                    c *= a
                keyp = tuple(k for k, _ in combo)
                for l, cl in lv.items():
                    base = _key_index(keyp, l, src) * tgt
                    cc = c * cl
                    for t in range(tgt):
                        col = columns[base + t]
                        if rp is None:
                            _bump(col, row_base + t, cc)
                        else:
                            for t2, a in op_cols[t].items():
                                _bump(col, row_base + t2, cc * a)
    return SparseMatrix(rows_out, cols_in, columns)


def _bump(col: dict, i: int, c):
    s = col.get(i, 0) + c
    if s:
        col[i] = s
    else:
        col.pop(i, None)


@lru_cache(maxsize=16)
def induced_rep(op: RBOperator) -> PairMap:
    """``varrho(u, v) x = [Tu, Tv, x]_g - T(rho(x, Tu) v + rho(Tv, x) u)`` on ``g``."""
    op.require_valid()
    m, n = op.g.dim, op.h.dim
    tc = op.t.sparse_columns
    rho = {}
    for u, v in combinations(range(n), 2):
        cols = []
        for x in range(m):
            ex = sp.unit(x)
            val = dict(op.g.bracket_sparse(tc[u], tc[v], ex))
            inner = dict(op.rho.act_sparse(ex, tc[u], sp.unit(v)))
            sp.add_into(inner, op.rho.act_sparse(tc[v], ex, sp.unit(u)))
            sp.add_into(val, op.t.apply_sparse(inner), -1)
            cols.append(sp.to_dense(val, m))
        mat = Matrix.from_columns(cols, m)
        if not mat.is_zero():
            rho[(u, v)] = mat
    out = PairMap(n, m, rho)
    rep = check_representation(_descendent(op), out)
    if not rep.ok:
        raise ComplexError(f"induced map is not a representation: {rep.check} fails at {rep.witness}")
    return out


@lru_cache(maxsize=16)
def _descendent(op: RBOperator) -> ThreeLieAlgebra:
    return descendent_algebra(op)


def d_T(op: RBOperator, f, n: int) -> Cochain:
    """Coboundary over the descendent algebra with values in the induced representation."""
    f = as_cochain(f)
    alg, rep = _descendent(op), induced_rep(op)
    _check_cochain(alg, rep, f, n)
    return _Coboundary(alg, rep, f)


def coboundary_matches_twisted(op: RBOperator, f, n: int) -> bool:
    """``d_T f = (-1)^(n-1) l1T f`` for an ``n``-cochain ``f``, compared entry by entry."""
    f = as_cochain(f)
    lhs = d_T(op, f, n)
    rhs = twisted_brackets(op, f)["l1"]
    sign = -1 if (n - 1) % 2 else 1
    for pairs, last in lhs.keys():
        a, b = lhs.value(pairs, last), rhs.value(pairs, last)
        if a != (b if sign == 1 else sp.scaled(b, -1)):
            return False
    return True


def _as_wedge(op: RBOperator, x) -> dict:
    m = op.g.dim
    if isinstance(x, dict):
        out = {}
        for (a, b), c in x.items():
            c = as_fraction(c)
            if a == b or not (0 <= a < m and 0 <= b < m):
                raise InputError(f"invalid pair {(a, b)} in g ^ g")
            sp.add_into(out, {(min(a, b), max(a, b)): c if a < b else -c})
        return out
    coords = list(x)
    pairs = list(combinations(range(m), 2))
    if len(coords) != len(pairs):
        raise InputError(f"g ^ g has dimension {len(pairs)}, got {len(coords)} coordinates")
    return {p: as_fraction(c) for p, c in zip(pairs, coords) if c}


def delta_1(op: RBOperator, x_wedge) -> TableCochain:
    """``delta(X) u = T rho(X) u - [X, Tu]_g`` as a map ``h -> g``."""
    op.require_valid()
    xw = _as_wedge(op, x_wedge)
    tc = op.t.sparse_columns
    table = {}
    for u in range(op.h.dim):
        val = op.t.apply_sparse(op.rho.wedge_operator_sparse(xw, sp.unit(u)))
        for (a, b), c in xw.items():
            sp.add_into(val, op.g.bracket_sparse(sp.unit(a), sp.unit(b), tc[u]), -c)
        if val:
            table[((), u)] = val
    return TableCochain(0, op.h.dim, op.g.dim, table)


@lru_cache(maxsize=16)
def delta_matrix(op: RBOperator) -> SparseMatrix:
    m = op.g.dim
    pairs = list(combinations(range(m), 2))
    cols = []
    for p in pairs:
        d = delta_1(op, {p: 1})
        cols.append({i: c for i, c in enumerate(d.to_vector()) if c})
    return SparseMatrix(op.h.dim * m, len(pairs), cols)


@dataclass(frozen=True)
class ComplexSlice:
    degree: int
    cochain_space_dim: int
    boundary: SparseMatrix = field(repr=False)

    @property
    def boundary_matrix(self) -> Matrix:
        return self.boundary.to_matrix()


@lru_cache(maxsize=64)
def _rb_boundary(op: RBOperator, n: int) -> SparseMatrix:
    if n == 1:
        return delta_matrix(op)
    return boundary_matrix(_descendent(op), induced_rep(op), n - 1)


def _space_dim(op: RBOperator, n: int) -> int:
    if n == 1:
        m = op.g.dim
        return m * (m - 1) // 2
    return cochain_space_dim(op.h.dim, op.g.dim, n - 2)


def rb_complex(op: RBOperator, max_degree: int) -> list:
    """Slices ``n = 1..max_degree``; slice ``n`` holds ``C^n`` and ``partial: C^n -> C^{n+1}``.

    ``C^1 = g ^ g`` with ``partial = delta``; ``C^n`` for ``n >= 2`` is the
    space of maps with ``n - 2`` pair slots and ``partial = d_T``. Consecutive
    boundaries are checked to compose to zero.
    """
    op.require_valid()
    if not 1 <= max_degree <= MAX_COMPLEX_DEGREE:
        raise InputError(f"max_degree must be between 1 and {MAX_COMPLEX_DEGREE}")
    out = []
    for n in range(1, max_degree + 1):
        b = _rb_boundary(op, n)
        if out and not (b @ out[-1].boundary).is_zero():
            raise ComplexError(f"consecutive boundaries at degree {n - 1} do not compose to zero")
        out.append(ComplexSlice(n, _space_dim(op, n), b))
    return out


@lru_cache(maxsize=64)
def _rank(op: RBOperator, n: int) -> int:
    return _rb_boundary(op, n).rank()


def cohomology_dims(op: RBOperator, n: int) -> tuple:
    """``(dim Z^n, dim B^n, dim H^n)``; ``B^1 = 0``."""
    op.require_valid()
    if not 1 <= n <= MAX_COMPLEX_DEGREE:
        raise InputError(f"degree must be between 1 and {MAX_COMPLEX_DEGREE}")
    z = _space_dim(op, n) - _rank(op, n)
    b = _rank(op, n - 1) if n > 1 else 0
    if b > z:
        raise ComplexError(f"coboundaries exceed cocycles in degree {n}")
    return z, b, z - b


def deformation_equation_holds(op: RBOperator, t_frak: LinearMap) -> bool:
    """The first-order part of the Rota-Baxter identity for ``T + t T'``, on basis triples."""
    op.require_valid()
    _check_frak(op, t_frak)
    T, D, rho = op.t, t_frak, op.rho
    tc, dc = T.sparse_columns, D.sparse_columns
    br = op.g.bracket_sparse
    for u, v, w in combinations(range(op.h.dim), 3):
        eu, ev, ew = sp.unit(u), sp.unit(v), sp.unit(w)
        lhs = dict(br(dc[u], tc[v], tc[w]))
        sp.add_into(lhs, br(tc[u], dc[v], tc[w]))
        sp.add_into(lhs, br(tc[u], tc[v], dc[w]))
        inner_t: dict = {}
        for a, b, c in ((dc[w], tc[u], ev), (tc[v], dc[w], eu), (dc[u], tc[v], ew),
                        (tc[w], dc[u], ev), (dc[v], tc[w], eu), (tc[u], dc[v], ew)):
            sp.add_into(inner_t, rho.act_sparse(a, b, c))
        inner_d = dict(rho.act_sparse(tc[u], tc[v], ew))
        sp.add_into(inner_d, rho.act_sparse(tc[v], tc[w], eu))
        sp.add_into(inner_d, rho.act_sparse(tc[w], tc[u], ev))
        if op.lam:
            sp.add_into(inner_d, op.h.basis_bracket(u, v, w), op.lam)
        rhs = dict(T.apply_sparse(inner_t))
        sp.add_into(rhs, D.apply_sparse(inner_d))
        if lhs != rhs:
            return False
    return True


def _check_frak(op: RBOperator, t_frak: LinearMap):
    if (t_frak.source_dim, t_frak.target_dim) != (op.h.dim, op.g.dim):
        raise InputError("deformation map must have the shape of the operator")


@dataclass(frozen=True)
class DeformationVerdict:
    is_cocycle: bool
    cohomology_class_trivial: bool
    witness_x: Optional[dict] = None
    homomorphism_conditions: Optional[dict] = None


def classify_deformation(op: RBOperator, t_frak: LinearMap) -> DeformationVerdict:
    """Cocycle test by two routes, then a search for ``X`` with ``T' = delta(X)``.

    When a witness is found, the remaining conditions for the pair
    ``(Id + t ad_X, Id + t rho(X))`` to be a homomorphism modulo ``t^2`` are
    evaluated separately and reported in ``homomorphism_conditions``.
    """
    op.require_valid()
    _check_frak(op, t_frak)
    direct = deformation_equation_holds(op, t_frak)
    via_complex = d_T(op, t_frak, 1).is_zero()
    if direct != via_complex:
        raise ComplexError("deformation equation and d_T disagree")
    if not direct:
        return DeformationVerdict(False, False)
    target = TableCochain.from_linear_map(t_frak).to_vector()
    x = delta_matrix(op).solve(target)
    if x is None:
        return DeformationVerdict(True, False)
    pairs = list(combinations(range(op.g.dim), 2))
    witness = {p: c for p, c in zip(pairs, x) if c}
    conds = equivalence_conditions(op, t_frak, LinearMap.zero(op.h.dim, op.g.dim), witness)
    return DeformationVerdict(True, True, witness, conds)


def equivalence_conditions(op: RBOperator, t1: LinearMap, t2: LinearMap, x_wedge) -> dict:
    """First-order conditions for ``(Id + t ad_X, Id + t rho(X))`` to map ``T + t t1`` to ``T + t t2``.

    Keys: ``g_homomorphism`` (``ad_X`` is a derivation of g),
    ``h_homomorphism`` (``rho(X)`` is a derivation of h),
    ``operator_intertwining`` (``t1 - t2 = delta(X)``) and
    ``action_intertwining`` (compatibility with ``rho``).
    """
    op.require_valid()
    _check_frak(op, t1)
    _check_frak(op, t2)
    xw = _as_wedge(op, x_wedge)
    g, h, rho = op.g, op.h, op.rho
    eg = [sp.unit(i) for i in range(g.dim)]
    eh = [sp.unit(i) for i in range(h.dim)]

    def ad(v):
        out: dict = {}
        for (a, b), c in xw.items():
            sp.add_into(out, g.bracket_sparse(eg[a], eg[b], v), c)
        return out

    def rx(v):
        return rho.wedge_operator_sparse(xw, v)

    def is_derivation(alg, d, e):
        for i, j, k in combinations(range(alg.dim), 3):
            rhs = dict(alg.bracket_sparse(d(e[i]), e[j], e[k]))
            sp.add_into(rhs, alg.bracket_sparse(e[i], d(e[j]), e[k]))
            sp.add_into(rhs, alg.bracket_sparse(e[i], e[j], d(e[k])))
            if d(alg.basis_bracket(i, j, k)) != rhs:
                return False
        return True

    diff = (t1 - t2).matrix
    operator_ok = diff == Matrix.from_columns(
        [sp.to_dense(delta_1(op, xw).value((), u), g.dim) for u in range(h.dim)], g.dim)
    action_ok = True
    for a, b in combinations(range(g.dim), 2):
        for u in range(h.dim):
            lhs = rx(rho.act_sparse(eg[a], eg[b], eh[u]))
            rhs = dict(rho.act_sparse(ad(eg[a]), eg[b], eh[u]))
            sp.add_into(rhs, rho.act_sparse(eg[a], ad(eg[b]), eh[u]))
            sp.add_into(rhs, rho.act_sparse(eg[a], eg[b], rx(eh[u])))
            if lhs != rhs:
                action_ok = False
                break
        if not action_ok:
            break
    return {
        "g_homomorphism": is_derivation(g, ad, eg),
        "h_homomorphism": is_derivation(h, rx, eh),
        "operator_intertwining": operator_ok,
        "action_intertwining": action_ok,
    }


def induced_rep_intertwines(hom: RBHomomorphism, op: RBOperator, op2: RBOperator) -> bool:
    """``psi_g varrho(u, v) = varrho'(psi_h u, psi_h v) psi_g`` on all basis pairs."""
    r1, r2 = induced_rep(op), induced_rep(op2)
    pg, ph = hom.psi_g, hom.psi_h
    himg = [ph.apply_sparse(sp.unit(u)) for u in range(op.h.dim)]
    for u, v in combinations(range(op.h.dim), 2):
        for x in range(op.g.dim):
            lhs = pg.apply_sparse(r1.act_sparse(sp.unit(u), sp.unit(v), sp.unit(x)))
            rhs = r2.act_sparse(himg[u], himg[v], pg.apply_sparse(sp.unit(x)))
            if lhs != rhs:
                return False
    return True
