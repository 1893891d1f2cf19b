from fractions import Fraction

import pytest

from services.linking_pairing import orthogonal_sum, pairing_e, pairing_lw
from services.pairing_oracle import PairingTable, metabolizers, oracle_is_hyperbolic, oracle_isomorphic
from utils.errors import OracleBoundError


def test_metabolizers_of_e0_one():
    # every order-2 subgroup of (Z/2)^2 is isotropic for E_0^1
    assert len(metabolizers(pairing_e(1, 0))) == 3


def test_no_metabolizer_when_order_not_square():
    assert metabolizers(pairing_lw(Fraction(1, 5))) == []


def test_hyperbolic(hyperbolic_three):
    assert oracle_is_hyperbolic(hyperbolic_three)
    assert oracle_is_hyperbolic(pairing_e(2, 0))
    assert not oracle_is_hyperbolic(pairing_e(2, 1))


def test_isomorphic():
    assert oracle_isomorphic(pairing_lw(Fraction(1, 7)), pairing_lw(Fraction(2, 7)))
    assert not oracle_isomorphic(pairing_lw(Fraction(1, 7)), pairing_lw(Fraction(3, 7)))
    assert oracle_isomorphic(
        orthogonal_sum(pairing_e(2, 1), pairing_e(2, 1)),
        orthogonal_sum(pairing_e(2, 0), pairing_e(2, 0)),
    )


def test_table_values():
    table = PairingTable(pairing_lw(Fraction(1, 4)))
    assert table.value((1,), (1,)) == 1
    assert table.element_order((2,)) == 2
    assert table.self_value((2,)) == (0, 1)


def test_bound_enforced():
    big = orthogonal_sum(pairing_lw(Fraction(1, 11)), pairing_lw(Fraction(1, 11)), pairing_lw(Fraction(1, 3)))
    with pytest.raises(OracleBoundError):
        oracle_is_hyperbolic(big, bound=100)
