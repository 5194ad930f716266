import pytest

from splitaut.exact.matrix import charpoly
from splitaut.exact.poly import Poly
from splitaut.modsym import genus_x0, get_space, heilbronn_merel, manin_expansion


@pytest.mark.parametrize("N,g", [(11, 1), (37, 2), (121, 6), (169, 8), (289, 17), (361, 22)])
def test_cuspidal_dimension_is_genus(N, g):
    assert genus_x0(N) == g
    assert get_space(N).cuspidal_dimension() == g


@pytest.mark.parametrize("N,new", [(11, 1), (121, 4), (169, 8), (289, 15), (361, 20)])
def test_new_dimension(N, new):
    assert get_space(N).new_dimension() == new


def test_hecke_level_37_cuspidal():
    S = get_space(37)
    cp = charpoly(S.hecke_matrix(2))
    # one Eisenstein eigenvalue 3 and the cusp forms 37a, 37b with a_2 = -2, 0
    assert cp == Poly.from_roots([3, -2, 0])


def test_hecke_operators_commute():
    S = get_space(121)
    T2, T3, W = S.hecke_matrix(2), S.hecke_matrix(3), S.fricke_matrix
    assert T2 @ T3 == T3 @ T2
    assert T2 @ W == W @ T2
    assert W @ W == type(W).identity(W.rows)


def test_heilbronn_count():
    # every matrix has determinant n
    for n in (2, 3, 5, 7):
        for a, b, c, d in heilbronn_merel(n):
            assert a * d - b * c == n


def test_manin_expansion_consecutive_convergents():
    # the chain ends at the last convergent, whose denominator is 7
    chain = manin_expansion(5, 7)
    assert chain[0] == (0, 1)
    assert abs(chain[-1][0]) == 7
    assert len(chain) == 1 + 4  # 5/7 = [0; 1, 2, 2] has four convergents
