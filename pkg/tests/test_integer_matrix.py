from hypothesis import given, settings, strategies as st

from utils.integer_matrix import determinant, identity, is_unimodular, mat_mul, smith_normal_form, transpose


@st.composite
def integer_matrices(draw, max_size=4, bound=30):
    rows = draw(st.integers(1, max_size))
    cols = draw(st.integers(1, max_size))
    entry = st.integers(-bound, bound)
    return [[draw(entry) for _ in range(cols)] for _ in range(rows)]


def _diag(snf):
    return [[snf.diagonal[i] if i == j and i < len(snf.diagonal) else 0 for j in range(snf.cols)] for i in range(snf.rows)]


class TestSmithNormalForm:
    def test_known_diagonal(self):
        snf = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        assert snf.diagonal == (2, 6, 12)
        assert snf.determinant_abs == 144

    def test_singular(self):
        snf = smith_normal_form([[1, 2], [2, 4]])
        assert snf.diagonal == (1, 0)
        assert snf.rank == 1

    def test_empty_matrix(self):
        snf = smith_normal_form([], 3)
        assert snf.diagonal == () and snf.cols == 3

    @settings(max_examples=150)
    @given(integer_matrices())
    def test_transforms_diagonalize(self, m):
        snf = smith_normal_form(m)
        assert mat_mul(mat_mul(snf.left, m), snf.right) == _diag(snf)
        assert mat_mul(snf.right, snf.right_inverse) == identity(snf.cols)
        assert is_unimodular(snf.left) and is_unimodular(snf.right)

    @settings(max_examples=150)
    @given(integer_matrices())
    def test_divisibility_chain(self, m):
        nonzero = [d for d in smith_normal_form(m).diagonal if d]
        assert all(d > 0 for d in nonzero)
        assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))

    @given(integer_matrices(max_size=3))
    def test_rank_matches_transpose(self, m):
        assert smith_normal_form(m).rank == smith_normal_form(transpose(m)).rank


class TestDeterminant:
    def test_values(self):
        assert determinant([[2, 1], [7, 4]]) == 1
        assert determinant([[0, 1], [1, 0]]) == -1
        assert determinant([]) == 1

    @given(integer_matrices(max_size=4, bound=9).filter(lambda m: len(m) == len(m[0])))
    def test_matches_snf(self, m):
        assert abs(determinant(m)) == smith_normal_form(m).determinant_abs
