from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from services.linking_pairing import (
    LinkingPairing,
    are_isomorphic,
    homogeneous_split,
    invariants,
    is_even,
    is_hyperbolic,
    orthogonal_sum,
    pairing_e,
    pairing_lw,
    primary_decompose,
)
from services.pairing_oracle import oracle_is_hyperbolic, oracle_isomorphic
from utils.abelian_group import FiniteAbelianGroup
from utils.errors import InputError, SingularPairingError
from utils.residues import ResidueQZ


@st.composite
def rank_one_sums(draw, max_order=64):
    parts = []
    order = 1
    for _ in range(draw(st.integers(1, 3))):
        q = draw(st.integers(2, 9))
        if order * q > max_order:
            break
        a = draw(st.integers(1, q - 1).filter(lambda x: gcd(x, q) == 1))
        parts.append(pairing_lw(Fraction(a, q)))
        order *= q
    return orthogonal_sum(*parts)


class TestConstruction:
    def test_lw(self):
        l = pairing_lw(Fraction(2, 5))
        assert l.orders == (5,)
        assert l.matrix[0][0] == ResidueQZ(Fraction(2, 5))
        assert pairing_lw(3).size == 0

    def test_e_pairings(self):
        assert pairing_e(2, 0).matrix[0][0].is_zero()
        assert pairing_e(2, 1).matrix[0][0] == ResidueQZ(Fraction(1, 2))
        with pytest.raises(InputError):
            pairing_e(1, 1)

    def test_rejects_asymmetric(self):
        with pytest.raises(InputError):
            LinkingPairing((3, 3), ((0, Fraction(1, 3)), (Fraction(2, 3), 0)))

    def test_rejects_entry_not_killed_by_order(self):
        with pytest.raises(InputError):
            LinkingPairing((2,), ((Fraction(1, 4),),))

    def test_nonsingularity(self):
        assert pairing_lw(Fraction(1, 7)).is_nonsingular()
        degenerate = LinkingPairing((2, 2), ((0, 0), (0, Fraction(1, 2))))
        assert not degenerate.is_nonsingular()
        with pytest.raises(SingularPairingError):
            primary_decompose(degenerate)

    def test_orthogonal_sum_group(self):
        total = orthogonal_sum(pairing_lw(Fraction(1, 4)), pairing_e(1, 0))
        assert total.group() == FiniteAbelianGroup((2, 2, 4))


class TestDecomposition:
    def test_primary_parts_of_cyclic_six(self):
        parts = dict(primary_decompose(pairing_lw(Fraction(1, 6))))
        assert parts[2].matrix[0][0] == ResidueQZ(Fraction(1, 2))
        assert parts[3].matrix[0][0] == ResidueQZ(Fraction(2, 3))

    def test_homogeneous_blocks_ordered_by_exponent(self):
        pairing = orthogonal_sum(pairing_lw(Fraction(1, 3)), pairing_lw(Fraction(1, 9)))
        blocks = homogeneous_split(pairing)
        assert [b.exponent for b in blocks] == [2, 1]

    def test_split_decouples_mixed_generators(self):
        # l(e1, e2) = 1/3 couples the two exponents
        third = Fraction(1, 3)
        pairing = LinkingPairing((9, 3), ((Fraction(1, 9), third), (third, third)))
        assert pairing.is_nonsingular()
        blocks = homogeneous_split(pairing)
        assert sorted(b.pairing.orders for b in blocks) == [(3,), (9,)]

    def test_odd_invariants(self):
        inv = invariants(pairing_lw(Fraction(2, 5)))
        assert (inv.prime, inv.exponent, inv.rank, inv.det_class) == (5, 1, 1, -1)

    def test_two_adic_classes(self):
        assert invariants(pairing_e(3, 0)).two_adic_class.kind == "Hyperbolic"
        assert invariants(pairing_e(3, 1)).two_adic_class.kind == "EvenNonHyperbolic"
        assert invariants(pairing_lw(Fraction(3, 8))).parity == "odd"


class TestHyperbolicity:
    def test_odd_primes(self, hyperbolic_three):
        assert is_hyperbolic(hyperbolic_three)
        # -1 is not a square mod 3 but is one mod 5
        assert not is_hyperbolic(orthogonal_sum(pairing_lw(Fraction(1, 3)), pairing_lw(Fraction(1, 3))))
        assert is_hyperbolic(orthogonal_sum(pairing_lw(Fraction(1, 5)), pairing_lw(Fraction(1, 5))))

    def test_even_pairings(self):
        assert is_hyperbolic(pairing_e(2, 0))
        assert not is_hyperbolic(pairing_e(2, 1))
        assert is_hyperbolic(orthogonal_sum(pairing_e(2, 1), pairing_e(2, 1)))

    def test_metabolic_but_not_hyperbolic(self):
        pairing = orthogonal_sum(pairing_lw(Fraction(1, 4)), pairing_lw(Fraction(-1, 4)))
        assert not is_even(pairing)
        assert not is_hyperbolic(pairing)
        assert not oracle_is_hyperbolic(pairing)

    def test_trivial(self):
        assert is_hyperbolic(LinkingPairing.trivial())

    @settings(max_examples=60, deadline=None)
    @given(rank_one_sums())
    def test_agrees_with_oracle(self, pairing):
        assert is_hyperbolic(pairing) == oracle_is_hyperbolic(pairing)


class TestIsomorphism:
    def test_odd_square_classes(self):
        assert are_isomorphic(pairing_lw(Fraction(1, 5)), pairing_lw(Fraction(4, 5)))
        assert not are_isomorphic(pairing_lw(Fraction(1, 5)), pairing_lw(Fraction(2, 5)))

    def test_two_adic(self):
        assert not are_isomorphic(pairing_lw(Fraction(1, 8)), pairing_lw(Fraction(3, 8)))
        assert are_isomorphic(pairing_lw(Fraction(1, 8)), pairing_lw(Fraction(9, 8)))
        assert not are_isomorphic(pairing_lw(Fraction(1, 4)), pairing_lw(Fraction(3, 4)))
        assert are_isomorphic(
            orthogonal_sum(pairing_e(1, 0), pairing_e(1, 0)),
            orthogonal_sum(pairing_e(1, 0), pairing_e(1, 0)),
        )

    def test_different_groups(self):
        assert not are_isomorphic(pairing_lw(Fraction(1, 9)), orthogonal_sum(pairing_lw(Fraction(1, 3)), pairing_lw(Fraction(1, 3))))

    @settings(max_examples=40, deadline=None)
    @given(rank_one_sums(max_order=36), rank_one_sums(max_order=36))
    def test_agrees_with_oracle(self, a, b):
        assert are_isomorphic(a, b) == oracle_isomorphic(a, b)
