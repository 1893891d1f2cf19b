from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from utils.errors import InputError
from utils.residues import (
    ResidueQZ,
    lcm,
    nonsquare_mod,
    p_adic_valuation,
    prime_divisors,
    prime_power_part,
    square_class,
    sqrt_mod_prime_power,
)


class TestResidueQZ:
    def test_reduces_into_unit_interval(self):
        assert ResidueQZ(Fraction(7, 3)).value == Fraction(1, 3)
        assert ResidueQZ(Fraction(-1, 4)).value == Fraction(3, 4)

    def test_arithmetic(self):
        a = ResidueQZ(Fraction(1, 2))
        assert (a + a).is_zero()
        assert -ResidueQZ(Fraction(1, 3)) == ResidueQZ(Fraction(2, 3))
        assert 3 * ResidueQZ(Fraction(1, 3)) == ResidueQZ(0)

    def test_str(self):
        assert str(ResidueQZ(Fraction(-1, 5))) == "4/5"
        assert str(ResidueQZ(2)) == "0"

    def test_p_part_splits_mixed_denominator(self):
        x = ResidueQZ(Fraction(1, 6))
        two, three = x.p_part(2), x.p_part(3)
        assert two.denominator == 2 and three.denominator == 3
        assert two + three == x

    @given(st.integers(-50, 50), st.integers(1, 200))
    def test_p_parts_sum_back(self, a, b):
        x = ResidueQZ(Fraction(a, b))
        total = ResidueQZ(0)
        for p in prime_divisors(b):
            total = total + x.p_part(p)
        assert total == x


class TestValuations:
    def test_integer_and_rational(self):
        assert p_adic_valuation(48, 2) == 4
        assert p_adic_valuation(Fraction(3, 8), 2) == -3

    def test_zero_rejected(self):
        with pytest.raises(InputError):
            p_adic_valuation(0, 3)

    def test_prime_power_part(self):
        assert prime_power_part(-72, 3) == 9

    def test_prime_divisors(self):
        assert prime_divisors(60) == [2, 3, 5]
        assert prime_divisors(1) == []
        assert prime_divisors(0) == []

    def test_lcm_ignores_zero(self):
        assert lcm(4, 6, 0) == 12


class TestSquareClasses:
    def test_square_class(self):
        assert square_class(4, 7) == 1
        assert square_class(3, 7) == -1

    def test_nonsquare(self):
        assert nonsquare_mod(7) == 3
        assert square_class(nonsquare_mod(13), 13) == -1

    @given(st.sampled_from([3, 5, 7, 11]), st.integers(1, 4), st.integers(1, 1000))
    def test_hensel_root(self, p, k, x):
        if x % p == 0:
            return
        w = (x * x) % p**k
        root = sqrt_mod_prime_power(w, p, k)
        assert (root * root - w) % p**k == 0
