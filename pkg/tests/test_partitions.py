from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from services.partitions import (
    bounded_partitions,
    even_shape,
    is_partitionable,
    odd_shape,
    partition_lemma_violations,
)
from utils.errors import UnsupportedError

HALF = Fraction(1, 2)


class TestBoundedPartitions:
    def test_three_halves_into_two_classes(self):
        found = {frozenset(frozenset(c) for c in p) for p in bounded_partitions([HALF] * 3, 2)}
        assert found == {
            frozenset({frozenset({0, 1}), frozenset({2})}),
            frozenset({frozenset({0, 2}), frozenset({1})}),
            frozenset({frozenset({0}), frozenset({1, 2})}),
        }

    @pytest.mark.parametrize("n, bell", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)])
    def test_unbounded_count_is_bell_number(self, n, bell):
        assert len(list(bounded_partitions([Fraction(0)] * n, n))) == bell

    @given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=7), min_size=1, max_size=6), st.integers(1, 4))
    @settings(max_examples=60)
    def test_classes_respect_cap_and_count(self, weights, max_classes):
        seen = set()
        for partition in bounded_partitions(weights, max_classes):
            key = frozenset(frozenset(c) for c in partition)
            assert key not in seen
            seen.add(key)
            assert len(partition) <= max_classes
            assert sorted(i for c in partition for i in c) == list(range(len(weights)))
            assert all(sum(weights[i] for i in c) <= 1 for c in partition)


class TestDeficitLemma:
    def test_no_violation_for_homology_sphere(self):
        assert partition_lemma_violations([(2, 1), (3, 1)], 1) == []

    def test_violation_when_class_sum_is_one(self):
        assert partition_lemma_violations([(2, 1), (2, 1)], 1) == [((0, 1),)]


class TestPartitionable:
    def test_single_class_of_deficit_one_over_lcm(self):
        assert is_partitionable([(2, 1), (3, 1)], 1, direct_double=True)

    def test_needs_direct_double(self):
        assert not is_partitionable([(2, 1), (3, 1)], 1, direct_double=False)

    def test_poincare_sphere_is_not_partitionable(self):
        assert not is_partitionable([(5, 4), (3, 2), (2, 1)], 2, direct_double=True)

    def test_cap(self):
        with pytest.raises(UnsupportedError):
            is_partitionable([(2, 1), (3, 1)], 1, direct_double=True, cap=1)


class TestShapes:
    def test_odd_shape(self):
        assert odd_shape([(3, 2), (3, 2), (3, 1)], 2) == 3
        assert odd_shape([(5, 4)], 1) == 5
        assert odd_shape([(3, 2), (5, 4), (3, 1)], 2) is None
        assert odd_shape([(3, 2), (3, 1), (3, 1)], 2) is None

    def test_even_shape_first_family(self):
        match = even_shape([(2, 1), (3, 1)])
        assert match.matched and match.shape == 1
        assert match.parameters == (2, 1, 3, 1, 1, 1, 0)

    def test_even_shape_second_family(self):
        match = even_shape([(2, 1), (3, 1), (6, 1), (6, 5)])
        assert match.matched and match.shape == 2
        assert match.parameters[-1] == 1

    def test_even_shape_no_match(self):
        match = even_shape([(5, 1), (5, 1)])
        assert not match.matched and match.exhaustive

    def test_even_shape_search_bound(self):
        match = even_shape([(70, 1), (70, 69)], bound=60)
        assert not match.matched and not match.exhaustive
