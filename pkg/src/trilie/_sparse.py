# Sparse vectors as {index: Fraction} dicts with no zero values stored.
# Used by the inner loops of bracket evaluation and cochain algebra.

from fractions import Fraction


def add_into(acc: dict, v: dict, c=1) -> dict:
    for i, a in v.items():
        s = acc.get(i, 0) + c * a
        if s:
            acc[i] = s
        else:
            acc.pop(i, None)
    return acc


def scaled(v: dict, c) -> dict:
    if not c:
        return {}
    return {i: c * a for i, a in v.items()}


def from_dense(v) -> dict:
    return {i: Fraction(a) for i, a in enumerate(v) if a}


def to_dense(v: dict, n: int) -> tuple:
    return tuple(Fraction(v.get(i, 0)) for i in range(n))


def unit(i: int) -> dict:
    return {i: Fraction(1)}


def apply_columns(columns, v: dict) -> dict:
    """Apply a linear map stored as a list of sparse columns."""
    out: dict = {}
    for j, a in v.items():
        add_into(out, columns[j], a)
    return out


def wedge(x: dict, y: dict) -> dict:
    """Expand ``x ^ y`` over canonical basis pairs ``(a, b)`` with ``a < b``."""
    out: dict = {}
    for a, xa in x.items():
        for b, yb in y.items():
            if a == b:
                continue
            if a < b:
                key, c = (a, b), xa * yb
            else:
                key, c = (b, a), -xa * yb
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out
