import pytest
from gmpy2 import mpq

from artifact.dk import (DKSeries, SubsetOverlap, alpha_tangent, dk_basis, dk_bch, dk_bracket, dk_inverse,
                         hexagon_residual, operad_map, pentagon_residual, solve_associator, sup,
                         unitarity_residual)
from artifact.tangential import tangent_eq, tb
from oracles import witt


def t(i, j, n=3):
    return DKSeries.generator(i, j, n)


def zero_to(f, d):
    return all(not f.part(k) for k in range(1, d + 1))


@pytest.mark.parametrize("n,d", [(3, k) for k in range(1, 7)] + [(4, 3)])
def test_basis_dimension(n, d):
    assert len(dk_basis(n, d)) == sum(witt(k - 1, d) for k in range(2, n + 1))


def test_locality_and_4t():
    assert zero_to(dk_bracket(t(1, 2), t(1, 3) + t(2, 3)), 2)
    assert zero_to(dk_bracket(t(1, 3), t(1, 2) + t(2, 3)), 2)
    assert zero_to(dk_bracket(t(2, 3), t(1, 2) + t(1, 3)), 2)
    assert zero_to(dk_bracket(t(1, 2, 4), t(3, 4, 4)), 2)
    assert not zero_to(dk_bracket(t(1, 2), t(2, 3)), 2)


def test_generators_are_symmetric():
    assert t(2, 1).part(1) == t(1, 2).part(1)


def test_bracket_jacobi():
    a, b, c = t(1, 2, 4) + t(2, 4, 4), t(1, 3, 4), dk_bracket(t(3, 4, 4), t(1, 4, 4))
    jac = dk_bracket(a, dk_bracket(b, c)) + dk_bracket(b, dk_bracket(c, a)) + dk_bracket(c, dk_bracket(a, b))
    assert zero_to(jac, 4)


def test_cabling_a_generator():
    assert sup(t(1, 2, 2), "12,3").part(1) == (t(1, 3) + t(2, 3)).part(1)
    assert sup(t(1, 2, 2), "1,23").part(1) == (t(1, 2) + t(1, 3)).part(1)


def test_operad_map_is_a_morphism():
    a, b = t(1, 2) + t(2, 3) * 2, t(1, 3) - t(2, 3)
    lhs = operad_map(dk_bracket(a, b), ["1", "23", "4"], 4)
    rhs = dk_bracket(operad_map(a, ["1", "23", "4"], 4), operad_map(b, ["1", "23", "4"], 4))
    assert zero_to(lhs - rhs, 3)


def test_operad_map_rejects_bad_subsets():
    with pytest.raises(SubsetOverlap):
        sup(t(1, 2), "12,2,3")
    with pytest.raises(ValueError):
        operad_map(t(1, 2), ["1", "2"], 3)
    with pytest.raises(ValueError):
        operad_map(t(1, 2), ["1", "2", "5"], 3)


def test_inverse_and_bch():
    a = t(1, 2) / 3 + dk_bracket(t(1, 3), t(2, 3))
    assert zero_to(dk_bch(a, dk_inverse(a)), 5)


def test_associator_degree_two_and_residuals(phi6):
    assert phi6.part(1) == {}
    assert phi6.part(2) == (dk_bracket(t(1, 3), t(2, 3)) * mpq(1, 24)).part(2)
    for r in (pentagon_residual(phi6), unitarity_residual(phi6), hexagon_residual(phi6, 1),
              hexagon_residual(phi6, -1)):
        assert zero_to(r, 6)


def test_associator_needs_degree_two():
    with pytest.raises(ValueError):
        solve_associator(1)


def test_alpha_is_a_lie_morphism():
    a, b = t(1, 2) + t(1, 3), t(2, 3) - t(1, 2) * 2
    lhs = alpha_tangent(dk_bracket(a, b))
    rhs = tb(alpha_tangent(a), alpha_tangent(b))
    assert all(tangent_eq(lhs, rhs, 3))


def test_json_roundtrip(phi6):
    assert zero_to(DKSeries.from_json(phi6.to_json(5)) - phi6, 5)
