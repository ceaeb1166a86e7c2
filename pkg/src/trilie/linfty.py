"""Cochains on ``Λ²V ⊗ ... ⊗ Λ²V ⊗ V``, their composition product and graded
commutator, and the derived brackets controlling Rota-Baxter operators.

A degree-``p`` cochain takes ``p`` pair slots and one final vector. Pair
slots are skew (stored on ``a < b``); nothing relates different slots.
Composite cochains are lazy: a value on basis arguments is computed on
first request and memoised, so nested brackets only touch the entries a
caller actually reads.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterable, Iterator

from . import _sparse as sp
from .actions import ActionData, semidirect_bracket_sparse
from .algebra import LinearMap, ThreeLieAlgebra
from .errors import InputError
from .linalg import Matrix, as_fraction

__all__ = [
    "Cochain",
    "GradedSum",
    "TableCochain",
    "build_delta",
    "circ",
    "cochain_keys",
    "cochain_space_dim",
    "derived_l1",
    "derived_l3",
    "embed",
    "is_3lie_via_mc",
    "mc_check",
    "mc_twisted_check",
    "nr_bracket",
    "project",
    "twisted_brackets",
]


def _pairs(n: int) -> list:
    return list(combinations(range(n), 2))


def cochain_keys(src_dim: int, degree: int) -> Iterator[tuple]:
    """Basis arguments ``(pairs, last)`` in lexicographic order."""
    for pairs in product(_pairs(src_dim), repeat=degree):
        for last in range(src_dim):
            yield pairs, last


def cochain_space_dim(src_dim: int, tgt_dim: int, degree: int) -> int:
    return comb(src_dim, 2) ** degree * src_dim * tgt_dim


class Cochain:
    """Base class. Subclasses implement ``_compute(pairs, last) -> sparse dict``."""

    def __init__(self, degree: int, src_dim: int, tgt_dim: int):
        if degree < 0:
            raise InputError("cochain degree must be non-negative")
        self.degree = degree
        self.src_dim = src_dim
        self.tgt_dim = tgt_dim
        self._memo: dict = {}

    def _compute(self, pairs: tuple, last: int) -> dict:
        raise NotImplementedError

    def value(self, pairs: tuple, last: int) -> dict:
        key = (pairs, last)
        v = self._memo.get(key)
        if v is None:
            v = self._compute(pairs, last)
            self._memo[key] = v
        return v

    def evaluate(self, slots: list, last: dict) -> dict:
        """Multilinear value on pair slots given as ``{(a, b): coef}`` dicts (a < b)."""
        if len(slots) != self.degree:
            raise InputError(f"degree-{self.degree} cochain given {len(slots)} pair slots")
        out: dict = {}
        if not last or any(not s for s in slots):
            return out
        for combo in product(*(s.items() for s in slots)):
            coef = Fraction(1)
            for _, c in combo:
                coef *= c
            pairs = tuple(k for k, _ in combo)
            for l, cl in last.items():
                v = self.value(pairs, l)
                if v:
                    sp.add_into(out, v, coef * cl)
        return out

    def __call__(self, pair_args: Iterable, last) -> tuple:
        """Dense evaluation: ``pair_args`` is a list of ``(x, y)`` vector pairs."""
        slots = [sp.wedge(sp.from_dense(x), sp.from_dense(y)) for x, y in pair_args]
        return sp.to_dense(self.evaluate(slots, sp.from_dense(last)), self.tgt_dim)

    def keys(self) -> Iterator[tuple]:
        return cochain_keys(self.src_dim, self.degree)

    def table(self) -> dict:
        out = {}
        for pairs, last in self.keys():
            v = self.value(pairs, last)
            if v:
                out[(pairs, last)] = dict(v)
        return out

    def materialize(self) -> "TableCochain":
        return TableCochain(self.degree, self.src_dim, self.tgt_dim, self.table())

    def to_vector(self) -> tuple:
        """Coordinates in the basis ordered by (pairs, last, target)."""
        out = []
        for pairs, last in self.keys():
            v = self.value(pairs, last)
            out.extend(Fraction(v.get(t, 0)) for t in range(self.tgt_dim))
        return tuple(out)

    def is_zero(self) -> bool:
        return all(not self.value(p, l) for p, l in self.keys())

    def same_space(self, other: "Cochain") -> bool:
        return (self.src_dim, self.tgt_dim) == (other.src_dim, other.tgt_dim)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        if not self.same_space(other) or self.degree != other.degree:
            return False
        return all(self.value(p, l) == other.value(p, l) for p, l in self.keys())

    __hash__ = None

    def _check_combinable(self, other: "Cochain"):
        if not self.same_space(other) or self.degree != other.degree:
            raise InputError("cochains of different spaces or degrees cannot be added")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check_combinable(other)
        return LinearCombination([(Fraction(1), self), (Fraction(1), other)])

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check_combinable(other)
        return LinearCombination([(Fraction(1), self), (Fraction(-1), other)])

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def scale(self, c) -> "Cochain":
        return LinearCombination([(as_fraction(c), self)])

    def __repr__(self):
        return f"{type(self).__name__}(degree={self.degree}, {self.src_dim}->{self.tgt_dim})"


class TableCochain(Cochain):
    """Cochain stored as an explicit table of nonzero values."""

    def __init__(self, degree: int, src_dim: int, tgt_dim: int, table: dict = None):
        super().__init__(degree, src_dim, tgt_dim)
        data = {}
        for (pairs, last), vec in (table or {}).items():
            pairs = tuple(tuple(p) for p in pairs)
            if len(pairs) != degree:
                raise InputError(f"key {pairs} does not have {degree} pair slots")
            for a, b in pairs:
                if not 0 <= a < b < src_dim:
                    raise InputError(f"pair {(a, b)} is not canonical in dimension {src_dim}")
            if not 0 <= last < src_dim:
                raise InputError(f"final argument {last} out of range")
            v = dict(vec) if isinstance(vec, dict) else sp.from_dense(vec)
            v = {int(i): as_fraction(c) for i, c in v.items() if c}
            if any(not 0 <= i < tgt_dim for i in v):
                raise InputError("value index out of range")
            if v:
                data[(pairs, last)] = v
        self._data = data

    def _compute(self, pairs, last):
        return self._data.get((pairs, last), {})

    def value(self, pairs, last):
        return self._data.get((pairs, last), {})

    @classmethod
    def from_vector(cls, degree: int, src_dim: int, tgt_dim: int, coords) -> "TableCochain":
        coords = list(coords)
        if len(coords) != cochain_space_dim(src_dim, tgt_dim, degree):
            raise InputError("coordinate vector has the wrong length")
        table = {}
        it = iter(coords)
        for key in cochain_keys(src_dim, degree):
            v = {t: as_fraction(c) for t, c in enumerate(next(it) for _ in range(tgt_dim)) if c}
            if v:
                table[key] = v
        return cls(degree, src_dim, tgt_dim, table)

    @classmethod
    def from_linear_map(cls, f: LinearMap) -> "TableCochain":
        table = {((), u): col for u, col in enumerate(f.sparse_columns) if col}
        return cls(0, f.source_dim, f.target_dim, table)

    @classmethod
    def from_algebra(cls, a: ThreeLieAlgebra) -> "TableCochain":
        """The bracket as a degree-1 cochain ``(x ^ y, z) -> [x, y, z]``."""
        table = {}
        for p in _pairs(a.dim):
            for c in range(a.dim):
                v = a.basis_bracket(p[0], p[1], c)
                if v:
                    table[((p,), c)] = v
        return cls(1, a.dim, a.dim, table)

    @classmethod
    def zero(cls, degree: int, src_dim: int, tgt_dim: int) -> "TableCochain":
        return cls(degree, src_dim, tgt_dim, {})

    def to_linear_map(self) -> LinearMap:
        if self.degree != 0:
            raise InputError("only degree-0 cochains are linear maps")
        cols = [sp.to_dense(self.value((), u), self.tgt_dim) for u in range(self.src_dim)]
        return LinearMap(self.src_dim, self.tgt_dim, Matrix.from_columns(cols, self.tgt_dim))


def as_cochain(x) -> Cochain:
    if isinstance(x, Cochain):
        return x
    if isinstance(x, LinearMap):
        return TableCochain.from_linear_map(x)
    raise InputError(f"cannot interpret {type(x).__name__} as a cochain")


class LinearCombination(Cochain):
    def __init__(self, terms):
        terms = [(as_fraction(c), t) for c, t in terms if c]
        if not terms:
            raise InputError("empty linear combination")
        first = terms[0][1]
        super().__init__(first.degree, first.src_dim, first.tgt_dim)
        self.terms = terms

    def _compute(self, pairs, last):
        out: dict = {}
        for c, t in self.terms:
            v = t.value(pairs, last)
            if v:
                sp.add_into(out, v, c)
        return out


def _shuffles(positions: list, i: int) -> list:
    """``(i, len-i)`` shuffles of ``positions`` as (first, rest, sign)."""
    out = []
    n = len(positions)
    for chosen in combinations(range(n), i):
        chosen_set = set(chosen)
        rest = [k for k in range(n) if k not in chosen_set]
        # inversions: pairs (a in chosen, b in rest) with a > b
        inv = sum(1 for a in chosen for b in rest if a > b)
        out.append(([positions[k] for k in chosen], [positions[k] for k in rest], -1 if inv % 2 else 1))
    return out


@lru_cache(maxsize=None)
def _shuffle_table(n: int, i: int) -> tuple:
    return tuple((tuple(a), tuple(b), s) for a, b, s in _shuffles(list(range(n)), i))


class Composition(Cochain):
    """``P ∘ Q``: insertion of ``Q`` into ``P`` summed over shuffles."""

    def __init__(self, p: Cochain, q: Cochain):
        if not (p.src_dim == p.tgt_dim == q.src_dim == q.tgt_dim):
            raise InputError("composition needs cochains on one common space")
        super().__init__(p.degree + q.degree, p.src_dim, p.tgt_dim)
        self.p, self.q = p, q

    def _compute(self, pairs, last):
        P, Q = self.p, self.q
        p, q = P.degree, Q.degree
        slots = [{pr: Fraction(1)} for pr in pairs]
        out: dict = {}
        for k in range(1, p + 1):
            outer = -1 if ((k - 1) * q) % 2 else 1
            xk, yk = pairs[k + q - 1]
            ex, ey = sp.unit(xk), sp.unit(yk)
            tail = slots[k + q:]
            for first, rest, sign in _shuffle_table(k + q - 1, k - 1):
                q_slots = [slots[b] for b in rest]
                qx = Q.evaluate(q_slots, ex)
                qy = Q.evaluate(q_slots, ey)
                mid = sp.wedge(qx, ey) if qx else {}
                if qy:
                    sp.add_into(mid, sp.wedge(ex, qy))
                if not mid:
                    continue
                val = P.evaluate([slots[a] for a in first] + [mid] + tail, {last: Fraction(1)})
                if val:
                    sp.add_into(out, val, outer * sign)
        pq_sign = -1 if (p * q) % 2 else 1
        for first, rest, sign in _shuffle_table(p + q, p):
            qv = Q.evaluate([slots[b] for b in rest], {last: Fraction(1)})
            if not qv:
                continue
            val = P.evaluate([slots[a] for a in first], qv)
            if val:
                sp.add_into(out, val, pq_sign * sign)
        return out


def circ(p, q) -> Cochain:
    """The composition product; degree ``deg p + deg q``.

    A degree-0 left factor has no pair slot to insert into, so only the
    final term survives and ``P ∘ Q = P(Q(...))``.
    """
    return Composition(as_cochain(p), as_cochain(q))


def nr_bracket(p, q) -> Cochain:
    """Graded commutator ``P∘Q - (-1)^{pq} Q∘P``."""
    p, q = as_cochain(p), as_cochain(q)
    sign = -1 if (p.degree * q.degree) % 2 else 1
    return LinearCombination([(1, circ(p, q)), (-sign, circ(q, p))])


def is_3lie_via_mc(a: ThreeLieAlgebra) -> bool:
    """``[mu, mu] = 0`` for the bracket viewed as a degree-1 cochain."""
    mu = TableCochain.from_algebra(a)
    return nr_bracket(mu, mu).is_zero()


class GradedSum:
    """Finitely supported sum of cochains on one space, indexed by degree."""

    def __init__(self, components: dict):
        comps = {d: c for d, c in components.items()}
        dims = {(c.src_dim, c.tgt_dim) for c in comps.values()}
        if len(dims) > 1:
            raise InputError("graded components live on different spaces")
        for d, c in comps.items():
            if c.degree != d:
                raise InputError(f"component stored under degree {d} has degree {c.degree}")
        self.components = comps

    def __getitem__(self, degree: int) -> Cochain:
        return self.components[degree]

    def bracket_with(self, p: Cochain) -> Cochain:
        terms = [(1, nr_bracket(c, p)) for _, c in sorted(self.components.items())]
        return LinearCombination(terms)


class Embedded(Cochain):
    """Zero-extension of a cochain ``h -> g`` to ``g + h``; g occupies indices ``0..m-1``."""

    def __init__(self, f: Cochain, g_dim: int):
        if f.tgt_dim != g_dim:
            raise InputError("embedded cochain must take values in g")
        super().__init__(f.degree, g_dim + f.src_dim, g_dim + f.src_dim)
        self.f, self.m = f, g_dim

    def _compute(self, pairs, last):
        m = self.m
        if last < m or any(a < m for a, _ in pairs):
            return {}
        return self.f.value(tuple((a - m, b - m) for a, b in pairs), last - m)


class Projected(Cochain):
    """Component of a cochain on ``g + h`` with h-arguments and g-values."""

    def __init__(self, c: Cochain, g_dim: int, h_dim: int):
        if c.src_dim != g_dim + h_dim:
            raise InputError("projected cochain must live on g + h")
        super().__init__(c.degree, h_dim, g_dim)
        self.c, self.m = c, g_dim

    def _compute(self, pairs, last):
        m = self.m
        v = self.c.value(tuple((a + m, b + m) for a, b in pairs), last + m)
        return {i: x for i, x in v.items() if i < m}


def embed(f, g_dim: int) -> Cochain:
    return Embedded(as_cochain(f), g_dim)


def project(c: Cochain, g_dim: int, h_dim: int) -> Cochain:
    return Projected(c, g_dim, h_dim)


def build_delta(a: ActionData, lam) -> GradedSum:
    """The semidirect-product bracket on ``g + h`` as a degree-1 cochain."""
    lam = as_fraction(lam)
    a.require_valid()
    n = a.g.dim + a.h.dim
    table = {}
    for p in _pairs(n):
        for c in range(n):
            v = semidirect_bracket_sparse(a, lam, sp.unit(p[0]), sp.unit(p[1]), sp.unit(c))
            if v:
                table[((p,), c)] = v
    return GradedSum({1: TableCochain(1, n, n, table)})


def _split_dims(delta: GradedSum, p: Cochain) -> tuple:
    total = next(iter(delta.components.values())).src_dim
    m = p.tgt_dim
    if p.src_dim + m != total:
        raise InputError("cochain h -> g does not match the dimensions of delta")
    return m, p.src_dim


def derived_l1(delta: GradedSum, p) -> Cochain:
    """``P [delta, P]`` restricted to ``h`` arguments with ``g`` values."""
    p = as_cochain(p)
    m, n = _split_dims(delta, p)
    return project(delta.bracket_with(embed(p, m)), m, n)


def derived_l3(delta: GradedSum, p, q, r) -> Cochain:
    p, q, r = as_cochain(p), as_cochain(q), as_cochain(r)
    m, n = _split_dims(delta, p)
    inner = delta.bracket_with(embed(p, m))
    return project(nr_bracket(nr_bracket(inner, embed(q, m)), embed(r, m)), m, n)


class _Controlling:
    """Cached pieces of the twisted structure around a fixed operator."""

    def __init__(self, op):
        self.op = op
        self.m, self.n = op.g.dim, op.h.dim
        self.delta = build_delta(op.action, op.lam)
        self.t = embed(op.t, self.m)
        self.dt = self.delta.bracket_with(self.t)
        self.dtt = nr_bracket(self.dt, self.t)

    def l1(self, p: Cochain) -> Cochain:
        return project(self.delta.bracket_with(embed(p, self.m)), self.m, self.n)

    def l1_twisted(self, p: Cochain) -> Cochain:
        e = embed(p, self.m)
        full = LinearCombination([(1, self.delta.bracket_with(e)), (Fraction(1, 2), nr_bracket(self.dtt, e))])
        return project(full, self.m, self.n)

    def l2_twisted(self, p: Cochain, q: Cochain) -> Cochain:
        return project(nr_bracket(nr_bracket(self.dt, embed(p, self.m)), embed(q, self.m)), self.m, self.n)


@lru_cache(maxsize=16)
def _controlling(op) -> _Controlling:
    return _Controlling(op)


def mc_check(op) -> bool:
    """``l1(T) + l3(T, T, T) / 6 = 0``."""
    op.action.require_valid()
    ctl = _controlling(op)
    t = ctl.t
    l3 = nr_bracket(ctl.dtt, t)
    total = LinearCombination([(1, ctl.dt), (Fraction(1, 6), l3)])
    return project(total, ctl.m, ctl.n).is_zero()


def twisted_brackets(op, p=None, q=None, r=None) -> dict:
    """The twisted brackets around a verified operator ``T``.

    Returns ``{"l1": l1T(p)}`` when ``p`` is given, ``"l2": l2T(p, q)`` when
    ``p`` and ``q`` are given, and ``"l3": l3T(p, q, r)`` when all three are.
    Higher brackets vanish.
    """
    op.require_valid()
    ctl = _controlling(op)
    out = {}
    if p is not None:
        p = as_cochain(p)
        out["l1"] = ctl.l1_twisted(p)
        if q is not None:
            q = as_cochain(q)
            out["l2"] = ctl.l2_twisted(p, q)
            if r is not None:
                out["l3"] = derived_l3(ctl.delta, p, q, as_cochain(r))
    return out


def mc_twisted_check(op, t_prime) -> bool:
    """Maurer-Cartan equation of the twisted structure at ``t_prime``."""
    op.require_valid()
    ctl = _controlling(op)
    tp = embed(as_cochain(t_prime), ctl.m)
    dtp = ctl.delta.bracket_with(tp)
    total = LinearCombination([
        (1, dtp),
        (Fraction(1, 2), nr_bracket(ctl.dtt, tp)),
        (Fraction(1, 2), nr_bracket(nr_bracket(ctl.dt, tp), tp)),
        (Fraction(1, 6), nr_bracket(nr_bracket(dtp, tp), tp)),
    ])
    return project(total, ctl.m, ctl.n).is_zero()
