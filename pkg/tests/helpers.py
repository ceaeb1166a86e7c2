"""Shared generators and independent sympy oracles for the test suite.

The oracles below never call into the package's checking code: brackets and
actions are re-expanded from raw structure constants with sympy rationals.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations, product

import sympy

from trilie import (
    ActionData,
    LinearMap,
    Matrix,
    PairMap,
    RBOperator,
    ThreeLieAlgebra,
    adjoint_rep,
)
from trilie.linfty import TableCochain, cochain_keys, cochain_space_dim

WEIGHTS = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2, 3))


def ex4d_algebra() -> ThreeLieAlgebra:
    return ThreeLieAlgebra(4, {(1, 2, 3): (1, 0, 0, 0)})


def euclidean_a4() -> ThreeLieAlgebra:
    sc = {
        (0, 1, 2): (0, 0, 0, 1),
        (0, 1, 3): (0, 0, -1, 0),
        (0, 2, 3): (0, 1, 0, 0),
        (1, 2, 3): (-1, 0, 0, 0),
    }
    return ThreeLieAlgebra(4, sc)


def ex4d_action() -> ActionData:
    g = ex4d_algebra()
    return ActionData(g, g, adjoint_rep(g))


def projection_map() -> LinearMap:
    return LinearMap.from_rows([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def ex4d_operator(lam=1) -> RBOperator:
    return RBOperator(ex4d_action(), projection_map(), Fraction(lam))


def direct_sum_abelian(a: ThreeLieAlgebra, extra: int) -> ThreeLieAlgebra:
    n = a.dim + extra
    return ThreeLieAlgebra(n, {k: tuple(v) + (0,) * extra for k, v in a.sc.items()})


def nonzero_sc(a: ThreeLieAlgebra) -> dict:
    return {k: tuple(v) for k, v in a.sc.items() if any(v)}


# ---------------------------------------------------------------- generators

def rand_rational(rng: random.Random, entries=(-2, -1, 0, 0, 1, 2), fractions=False):
    x = Fraction(rng.choice(entries))
    if fractions and rng.random() < 0.25:
        x /= rng.choice((2, 3))
    return x


def random_skew_table(rng: random.Random, dim: int, density=0.5) -> ThreeLieAlgebra:
    sc = {}
    for t in combinations(range(dim), 3):
        if rng.random() < density:
            sc[t] = tuple(rand_rational(rng) for _ in range(dim))
    return ThreeLieAlgebra(dim, sc)


def random_map(rng: random.Random, rows: int, cols: int, density=0.5, fractions=True) -> LinearMap:
    m = [[rand_rational(rng, fractions=fractions) if rng.random() < density else 0
          for _ in range(cols)] for _ in range(rows)]
    return LinearMap.from_rows(m)


def random_cochain(rng: random.Random, degree: int, src: int, tgt: int, density=0.3) -> TableCochain:
    n = cochain_space_dim(src, tgt, degree)
    coords = [rand_rational(rng, fractions=True) if rng.random() < density else 0 for _ in range(n)]
    return TableCochain.from_vector(degree, src, tgt, coords)


def random_invertible(rng: random.Random, n: int) -> sympy.Matrix:
    while True:
        m = sympy.Matrix(n, n, lambda i, j: rng.choice((-1, 0, 0, 1, 2)))
        if m.det() != 0:
            return m


def random_wedge(rng: random.Random, n: int) -> dict:
    return {p: Fraction(rng.choice((-2, -1, 1, 3))) for p in combinations(range(n), 2)
            if rng.random() < 0.5}


def wedge(x, y) -> dict:
    """``x ^ y`` for dense vectors as a ``{(a, b): coef}`` dict with ``a < b``."""
    out = {}
    for a, b in combinations(range(len(x)), 2):
        c = Fraction(x[a]) * Fraction(y[b]) - Fraction(x[b]) * Fraction(y[a])
        if c:
            out[(a, b)] = c
    return out


def sparse(v) -> dict:
    return {i: Fraction(c) for i, c in enumerate(v) if c}


def dense(d: dict, n: int) -> list:
    return [Fraction(d.get(i, 0)) for i in range(n)]


# --------------------------------------------------------- sympy oracles

def sym_vec(v) -> sympy.Matrix:
    return sympy.Matrix([sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
                         if not isinstance(c, sympy.Basic) else c for c in v])


def sym_matrix(m: Matrix) -> sympy.Matrix:
    return sympy.Matrix(m.rows, m.cols, lambda i, j: sympy.Rational(
        m.entries[i][j].numerator, m.entries[i][j].denominator))


def _perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def sym_bracket(sc: dict, dim: int):
    """Totally skew trilinear extension of ``sc`` built from scratch."""
    terms = []
    for (i, j, k), v in sc.items():
        vec = sym_vec(v)
        for perm in permutations(range(3)):
            idx = [(i, j, k)[p] for p in perm]
            terms.append((idx, _perm_sign(perm), vec))

    def br(x, y, z):
        out = sympy.zeros(dim, 1)
        for (a, b, c), s, vec in terms:
            coef = x[a] * y[b] * z[c]
            if coef != 0:
                out += s * coef * vec
        return out
    return br


def sym_action(rho: PairMap):
    mats = {k: sym_matrix(m) for k, m in rho.rho.items()}
    n = rho.v_dim

    def act(x, y, v):
        out = sympy.zeros(n, 1)
        for (i, j), m in mats.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c != 0:
                out += c * (m * v)
        return out
    return act


def fi_violations(a: ThreeLieAlgebra) -> list:
    """All basis 5-tuples (unrestricted) where the Fundamental Identity fails."""
    n = a.dim
    br = sym_bracket(a.sc, n)
    e = [sympy.eye(n)[:, i] for i in range(n)]
    bad = []
    for t in product(range(n), repeat=5):
        x1, x2, x3, x4, x5 = (e[i] for i in t)
        lhs = br(x1, x2, br(x3, x4, x5))
        rhs = br(br(x1, x2, x3), x4, x5) + br(x3, br(x1, x2, x4), x5) + br(x3, x4, br(x1, x2, x5))
        if lhs != rhs:
            bad.append(t)
    return bad


def fi_holds_at(a: ThreeLieAlgebra, t) -> bool:
    n = a.dim
    br = sym_bracket(a.sc, n)
    e = [sympy.eye(n)[:, i] for i in range(n)]
    x1, x2, x3, x4, x5 = (e[i] for i in t)
    return br(x1, x2, br(x3, x4, x5)) == (
        br(br(x1, x2, x3), x4, x5) + br(x3, br(x1, x2, x4), x5) + br(x3, x4, br(x1, x2, x5)))


def rb_defect(action: ActionData, t_sym: sympy.Matrix, lam) -> list:
    """Values of ``[Tu,Tv,Tw] - T(rho(Tu,Tv)w + rho(Tv,Tw)u + rho(Tw,Tu)v + lam[u,v,w])``
    on basis triples of h, for a sympy matrix ``t_sym`` (entries may be symbolic)."""
    g, h = action.g, action.h
    brg = sym_bracket(g.sc, g.dim)
    brh = sym_bracket(h.sc, h.dim)
    act = sym_action(action.rho)
    lam = sympy.Rational(Fraction(lam).numerator, Fraction(lam).denominator)
    e = [sympy.eye(h.dim)[:, i] for i in range(h.dim)]
    out = []
    for i, j, k in combinations(range(h.dim), 3):
        u, v, w = e[i], e[j], e[k]
        tu, tv, tw = t_sym * u, t_sym * v, t_sym * w
        inner = act(tu, tv, w) + act(tv, tw, u) + act(tw, tu, v) + lam * brh(u, v, w)
        out.append(((i, j, k), (brg(tu, tv, tw) - t_sym * inner).applyfunc(sympy.expand)))
    return out


def is_rb_oracle(action: ActionData, t: LinearMap, lam) -> bool:
    return all(d.is_zero_matrix for _, d in rb_defect(action, sym_matrix(t.matrix), lam))


_t = sympy.Symbol("t")


def is_infinitesimal_deformation(op: RBOperator, t_frak: LinearMap) -> bool:
    """``T + t*Tfrak`` satisfies the RB equation modulo ``t^2``."""
    ts = sym_matrix(op.t.matrix) + _t * sym_matrix(t_frak.matrix)
    for _, d in rb_defect(op.action, ts, op.lam):
        for entry in d:
            if sympy.Poly(entry, _t).coeff_monomial(_t) != 0:
                return False
    return True


def transport_algebra(a: ThreeLieAlgebra, p: sympy.Matrix) -> ThreeLieAlgebra:
    """Bracket ``[x,y,z]' = p^-1 [px, py, pz]``; isomorphic to ``a`` via ``p``."""
    n = a.dim
    br = sym_bracket(a.sc, n)
    pinv = p.inv()
    sc = {}
    for i, j, k in combinations(range(n), 3):
        v = pinv * br(p[:, i], p[:, j], p[:, k])
        if any(c != 0 for c in v):
            sc[(i, j, k)] = tuple(Fraction(int(c.p), int(c.q)) for c in v)
    return ThreeLieAlgebra(n, sc)


def to_linear_map(m: sympy.Matrix) -> LinearMap:
    return LinearMap.from_rows([[Fraction(int(c.p), int(c.q)) for c in m.row(i)]
                                for i in range(m.rows)])


def cochain_pushforward(c, psi_g: LinearMap, psi_h_inv: LinearMap) -> TableCochain:
    """``p(w)(U_1..U_k, u) = psi_g(w(psi_h^-1 U_1, ..., psi_h^-1 u))``."""
    h_dim = c.src_dim
    cols = [dense(psi_h_inv.apply_sparse({i: Fraction(1)}), h_dim) for i in range(h_dim)]
    table = {}
    for pairs, last in cochain_keys(h_dim, c.degree):
        slots = [wedge(cols[a], cols[b]) for a, b in pairs]
        val = psi_g.apply_sparse(c.evaluate(slots, sparse(cols[last])))
        if val:
            table[(pairs, last)] = val
    return TableCochain(c.degree, h_dim, c.tgt_dim, table)


def rep_violations(g: ThreeLieAlgebra, rho: PairMap) -> list:
    """Basis 4-tuples where either representation identity fails."""
    n = g.dim
    br = sym_bracket(g.sc, n)
    mats = {k: sym_matrix(m) for k, m in rho.rho.items()}
    e = [sympy.eye(n)[:, i] for i in range(n)]

    def op(x, y):
        out = sympy.zeros(rho.v_dim, rho.v_dim)
        for (i, j), m in mats.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c != 0:
                out += c * m
        return out

    bad = []
    for t in product(range(n), repeat=4):
        x1, x2, x3, x4 = (e[i] for i in t)
        first = op(x1, x2) * op(x3, x4) - (
            op(br(x1, x2, x3), x4) + op(x3, br(x1, x2, x4)) + op(x3, x4) * op(x1, x2))
        second = op(x1, br(x2, x3, x4)) - (
            op(x3, x4) * op(x1, x2) - op(x2, x4) * op(x1, x3) + op(x2, x3) * op(x1, x4))
        if not first.is_zero_matrix or not second.is_zero_matrix:
            bad.append(t)
    return bad


# ------------------------------------------------------ corrupted tables

def _unit(i, n=4):
    return tuple(1 if k == i else 0 for k in range(n))


def bump(a, triple, idx):
    sc = dict(a.sc)
    old = sc.get(triple, (0,) * a.dim)
    sc[triple] = tuple(x + (1 if k == idx else 0) for k, x in enumerate(old))
    return ThreeLieAlgebra(a.dim, sc)


def corrupted_tables():
    """Ten skew tables that violate the Fundamental Identity."""
    return [
        ThreeLieAlgebra(4, {(0, 1, 2): _unit(3), (0, 1, 3): _unit(2), (0, 2, 3): _unit(0)}),
        ThreeLieAlgebra(4, {(1, 2, 3): _unit(0), (0, 1, 2): _unit(1)}),
        bump(ex4d_algebra(), (0, 1, 2), 1),
        bump(ex4d_algebra(), (0, 2, 3), 3),
        bump(euclidean_a4(), (0, 1, 2), 0),
        bump(euclidean_a4(), (1, 2, 3), 3),
        bump(euclidean_a4(), (0, 2, 3), 2),
        ThreeLieAlgebra(5, {(1, 2, 3): _unit(0, 5), (0, 1, 4): _unit(1, 5)}),
        ThreeLieAlgebra(5, {(0, 1, 2): _unit(3, 5), (2, 3, 4): _unit(0, 5)}),
        ThreeLieAlgebra(5, {(1, 2, 3): _unit(0, 5), (0, 2, 4): _unit(0, 5)}),
    ]
