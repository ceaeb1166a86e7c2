from fractions import Fraction
from itertools import combinations

import pytest

from trilie import (
    ActionData,
    InputError,
    Matrix,
    PairMap,
    Subspace,
    ThreeLieAlgebra,
    adjoint_rep,
    check_action,
    check_derivations,
    check_fundamental_identity,
    check_representation,
    is_subalgebra,
    semidirect_product,
)

from helpers import (
    WEIGHTS,
    direct_sum_abelian,
    euclidean_a4,
    ex4d_action,
    ex4d_algebra,
    rep_violations,
)


def unit(i, n):
    return tuple(1 if k == i else 0 for k in range(n))


def flipped_adjoint():
    g = ex4d_algebra()
    ad = adjoint_rep(g)
    rho = dict(ad.rho)
    rho[(2, 3)] = rho[(2, 3)].scale(-1)
    return g, PairMap(4, 4, rho)


def broken_adjoint():
    """ad(e3, e4) with an extra e3 -> e3 component."""
    g = ex4d_algebra()
    rho = dict(adjoint_rep(g).rho)
    rows = [list(r) for r in rho[(2, 3)].entries]
    rows[2][2] += 1
    rho[(2, 3)] = Matrix.from_rows(rows)
    return g, PairMap(4, 4, rho)


def test_representation_examples():
    g = ex4d_algebra()
    assert check_representation(g, PairMap.zero(4, 3)).ok
    assert check_representation(g, adjoint_rep(g)).ok
    bad = check_representation(*broken_adjoint())
    assert rep_violations(*broken_adjoint())
    assert not bad.ok and bad.witness is not None


def test_sign_flipped_adjoint_is_still_a_representation():
    # every rho lands in span{e1} and kills e1, so all compositions vanish
    g, flipped = flipped_adjoint()
    assert not rep_violations(g, flipped)
    assert check_representation(g, flipped).ok


def test_action_examples():
    assert check_action(ex4d_action()).ok
    h = ThreeLieAlgebra.abelian(2)
    g = ex4d_algebra()
    rho = PairMap(4, 2, {(2, 3): Matrix.from_rows([[0, 1], [0, 0]])})
    assert check_action(ActionData(g, h, rho)).ok == check_representation(g, rho).ok
    g, bad = broken_adjoint()
    assert not check_action(ActionData(g, g, bad)).ok


def test_adjoint_action_fails_when_derived_not_central():
    a = direct_sum_abelian(euclidean_a4(), 1)
    assert check_representation(a, adjoint_rep(a)).ok
    rep = check_action(ActionData(a, a, adjoint_rep(a)))
    assert not rep.ok


def test_action_maps_are_derivations():
    assert check_derivations(ex4d_action()).ok


@pytest.mark.parametrize("lam", WEIGHTS)
def test_semidirect_product_of_adjoint_action(lam):
    s = semidirect_product(ex4d_action(), lam)
    assert s.dim == 8
    assert check_fundamental_identity(s).ok
    assert is_subalgebra(s, Subspace.span([unit(i, 8) for i in range(4)], 8))
    assert is_subalgebra(s, Subspace.span([unit(i, 8) for i in range(4, 8)], 8))


def test_semidirect_zero_action_is_direct_sum():
    g = ex4d_algebra()
    s = semidirect_product(ActionData(g, g, PairMap.zero(4, 4)), 1)
    expected = {(1, 2, 3): unit(0, 8), (5, 6, 7): unit(4, 8)}
    assert {k: v for k, v in s.sc.items() if any(v)} == expected


def test_semidirect_weight_zero_drops_h_bracket():
    s = semidirect_product(ex4d_action(), 0)
    assert not any(s.sc.get((5, 6, 7), ()))
    s1 = semidirect_product(ex4d_action(), Fraction(2, 3))
    assert tuple(s1.sc[(5, 6, 7)]) == tuple(Fraction(2, 3) if i == 4 else 0 for i in range(8))


def test_semidirect_bracket_formula():
    s = semidirect_product(ex4d_action(), 1)
    # [e3, e4, f2] = rho(e3, e4) f2 = f1
    assert s.basis_bracket(2, 3, 5) == {4: 1}
    assert s.basis_bracket(1, 2, 3) == {0: 1}


def test_semidirect_rejects_invalid_action():
    g, bad = broken_adjoint()
    with pytest.raises(InputError):
        semidirect_product(ActionData(g, g, bad), 1)


def test_pairmap_skew():
    ad = adjoint_rep(ex4d_algebra())
    for i, j in combinations(range(4), 2):
        assert ad.operator(unit(i, 4), unit(j, 4)) == ad.operator(unit(j, 4), unit(i, 4)).scale(-1)
