import logging
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from services.nilpotent_homology import (
    NOT_IN_CATALOGUE,
    RATIONALS,
    SemidirectGroup,
    TorsionFreeCandidate,
    abelianization,
    betti_fp_abelian,
    candidate_from_semidirect,
    classify_balanced_torsionfree,
    divides_power,
    field_rank,
    gamma,
    h2_abelian,
    homologically_balanced,
    integral_h2,
    is_nilpotent,
    is_unipotent,
    module_betti,
    omega,
    relevant_primes,
    torus_module_betti,
    wang_betti,
)
from utils.abelian_group import FiniteAbelianGroup
from utils.errors import InputError, UnsupportedError
from utils.integer_matrix import identity, mat_mul


@st.composite
def cyclic_semidirect(draw, max_m=30):
    m = draw(st.integers(2, max_m))
    n = draw(st.integers(-max_m, max_m).filter(lambda x: x != 0 and gcd(m, x) == 1))
    return SemidirectGroup.cyclic(m, n)


@st.composite
def polynomial_pairs(draw):
    """A square matrix x and y = f(x) for an integer polynomial with f(1) = 1."""
    size = draw(st.integers(1, 3))
    x = [[draw(st.integers(-3, 3)) for _ in range(size)] for _ in range(size)]
    coefficients = [draw(st.integers(-2, 2)) for _ in range(3)]
    constant = 1 - sum(coefficients)
    y = [[constant * v for v in row] for row in identity(size)]
    power = identity(size)
    for c in coefficients:
        power = mat_mul(power, x)
        y = [[a + c * b for a, b in zip(ry, rp)] for ry, rp in zip(y, power)]
    return x, y


class TestAbelianGroups:
    def test_h2(self):
        assert h2_abelian(FiniteAbelianGroup((2, 2))) == FiniteAbelianGroup((2,))
        assert h2_abelian(FiniteAbelianGroup((6,))).is_trivial()
        assert h2_abelian(FiniteAbelianGroup((), 3)) == FiniteAbelianGroup((), 3)

    def test_betti_numbers(self):
        profile = betti_fp_abelian(FiniteAbelianGroup((3, 3)), 3)
        assert (profile.b1, profile.b2) == (2, 3)
        profile = betti_fp_abelian(FiniteAbelianGroup((9,)), 3)
        assert (profile.b1, profile.b2) == (1, 1)
        profile = betti_fp_abelian(FiniteAbelianGroup((), 2), 5)
        assert (profile.b1, profile.b2) == (2, 1)
        profile = betti_fp_abelian(FiniteAbelianGroup((4,), 1), RATIONALS)
        assert (profile.b1, profile.b2) == (1, 0)

    def test_field_rank(self):
        assert field_rank([[1, 2], [2, 4]], RATIONALS) == 1
        assert field_rank([[1, 0], [0, 2]], 2) == 1
        assert field_rank([[1, 0], [0, 2]], 3) == 2
        assert field_rank([], 5) == 0


class TestSemidirectGroup:
    def test_rejects_non_automorphism(self):
        with pytest.raises(InputError):
            SemidirectGroup.cyclic(6, 3)
        with pytest.raises(InputError):
            SemidirectGroup((3,), (((3,),),))

    def test_rejects_non_commuting_actions(self):
        with pytest.raises(InputError):
            SemidirectGroup((0, 0), (((1, 1), (0, 1)), ((1, 0), (1, 1))))

    def test_str(self):
        assert str(SemidirectGroup.cyclic(8, 3)) == "Z/8 x|_3 Z"
        assert str(gamma(2)) == "(Z + Z) x| Z"

    def test_unipotency(self):
        assert is_unipotent((8,), [[3]])
        assert not is_unipotent((5,), [[2]])
        assert is_nilpotent(gamma(3))
        assert not is_nilpotent(SemidirectGroup((0, 0), (((2, 1), (1, 1)),)))

    def test_abelianization(self):
        assert abelianization(SemidirectGroup.cyclic(5, 2)) == FiniteAbelianGroup((), 1)
        assert abelianization(SemidirectGroup.cyclic(7, 8)) == FiniteAbelianGroup((7,), 1)
        assert abelianization(gamma(3)) == FiniteAbelianGroup((3,), 2)


class TestWangSequence:
    def test_cyclic_examples(self):
        profile = wang_betti(SemidirectGroup.cyclic(5, 1), 5)
        assert (profile.b1, profile.b2) == (2, 2)
        profile = wang_betti(SemidirectGroup.cyclic(8, 3), 2)
        assert (profile.b1, profile.b2) == (2, 2)
        profile = wang_betti(SemidirectGroup.cyclic(5, 2), 5)
        assert (profile.b1, profile.b2) == (1, 0)

    def test_non_nilpotent_scan_stays_quiet(self, caplog):
        caplog.set_level(logging.WARNING, logger="services.nilpotent_homology")
        for n in (2, 3, 4):
            report = homologically_balanced(SemidirectGroup.cyclic(5, n))
            assert not report.nilpotent
        assert caplog.records == []

    def test_direct_product_with_square_base_is_unbalanced(self):
        report = homologically_balanced(SemidirectGroup.direct_product((3, 3)))
        assert not report.balanced

    @pytest.mark.parametrize("group", [gamma(1), gamma(4), omega()], ids=str)
    def test_torsion_free_groups_over_q(self, group):
        profile = wang_betti(group, RATIONALS)
        assert (profile.b1, profile.b2) == (2, 2)
        assert integral_h2(group) == FiniteAbelianGroup((), 2)

    def test_mixed_two_torsion_is_inexact(self):
        assert not wang_betti(SemidirectGroup.direct_product((2, 4)), 2).exact
        assert wang_betti(SemidirectGroup.direct_product((2, 2)), 2).exact

    def test_two_actions_need_module_betti(self):
        g = SemidirectGroup((3, 3), (((1, 0), (0, 1)), ((1, 1), (0, 1))))
        with pytest.raises(UnsupportedError):
            wang_betti(g, 3)
        assert module_betti(g, 3) == (1, 2, 1)

    @given(cyclic_semidirect(), st.sampled_from([RATIONALS, 2, 3, 5, 7]))
    @settings(max_examples=150)
    def test_wang_clauses(self, g, p):
        profile = wang_betti(g, p)
        assert profile.b2 >= profile.b1 - 1
        if is_nilpotent(g):
            assert (profile.b1 == 1) == (profile.b2 == 0)

    @given(cyclic_semidirect())
    @settings(max_examples=100)
    def test_cyclic_groups_are_balanced_and_classified(self, g):
        report = homologically_balanced(g)
        m, n = report.cyclic_form
        assert report.balanced and report.consistent
        assert report.nilpotent == divides_power(m, n - 1)


class TestIntegralHomology:
    def test_cyclic_base(self):
        assert integral_h2(SemidirectGroup.cyclic(7, 8)).divisors == (7,)
        assert integral_h2(SemidirectGroup.cyclic(9, 4)) == FiniteAbelianGroup((3,))
        assert integral_h2(SemidirectGroup.cyclic(5, 2)).is_trivial()

    def test_unsupported_base(self):
        with pytest.raises(UnsupportedError):
            integral_h2(SemidirectGroup.direct_product((2, 0)))

    def test_relevant_primes(self):
        assert relevant_primes(SemidirectGroup.cyclic(12, 5)) == [2, 3]
        assert relevant_primes(gamma(6)) == [2, 3]
        assert relevant_primes(omega()) == []


class TestTorusModule:
    @given(polynomial_pairs(), st.sampled_from([2, 3, 5]))
    @settings(max_examples=100)
    def test_polynomial_actions_satisfy_duality(self, pair, p):
        x, y = pair
        b0, b1, b2 = torus_module_betti(x, y, p)
        assert b2 == b0
        assert b1 == 2 * b0

    def test_duality_fails_for_independent_actions(self):
        x = [[1, 0, 1], [0, 1, 0], [0, 0, 1]]
        y = [[1, 0, 0], [0, 1, 1], [0, 0, 1]]
        assert torus_module_betti(x, y, 3) == (1, 3, 2)

    @given(st.integers(1, 3), st.sampled_from([2, 3, 5]))
    def test_euler_characteristic_vanishes(self, size, p):
        x = identity(size)
        b0, b1, b2 = torus_module_betti(x, x, p)
        assert b0 - b1 + b2 == 0


class TestCatalogue:
    def test_catalogue_lookup(self):
        assert classify_balanced_torsionfree(TorsionFreeCandidate(2, 1)) == "Z^2"
        assert classify_balanced_torsionfree(TorsionFreeCandidate(3, 2, 5)) == "Gamma_5"
        assert classify_balanced_torsionfree(TorsionFreeCandidate(4, 3)) == "Omega"
        assert classify_balanced_torsionfree(TorsionFreeCandidate(5, 1)) == NOT_IN_CATALOGUE
        assert classify_balanced_torsionfree(TorsionFreeCandidate(3, 2)) == NOT_IN_CATALOGUE

    def test_candidates_from_groups(self):
        assert classify_balanced_torsionfree(candidate_from_semidirect(gamma(2))) == "Gamma_2"
        assert classify_balanced_torsionfree(candidate_from_semidirect(omega())) == "Omega"
        assert classify_balanced_torsionfree(candidate_from_semidirect(SemidirectGroup.direct_product((0, 0)))) == "Z^3"

    def test_groups_with_torsion_have_no_candidate(self):
        assert candidate_from_semidirect(SemidirectGroup.cyclic(5, 1)) is None

    def test_gamma_needs_positive_q(self):
        with pytest.raises(InputError):
            gamma(0)


def test_divides_power():
    assert divides_power(12, 6)
    assert not divides_power(12, 4)
    assert divides_power(1, 7)
    assert all(divides_power(m, m) for m in range(2, 30))
