from fractions import Fraction

import pytest

from services.linking_pairing import orthogonal_sum, pairing_e, pairing_lw
from services.manifolds import LensSum, SeifertManifold, SphereBundle, TorusBundle, UnionPhi
from services.seifert import SeifertData
from utils.errors import InputError, ParseError
from utils.parsers import format_manifold, format_pairing, parse_manifold, parse_pairing, tokenize


class TestManifolds:
    @pytest.mark.parametrize(
        "text",
        [
            "M(0; (2,1) (3,1) (5,1) (1,-1))",
            "M(-1; (2,1) (2,-1))",
            "M(0; )",
            "TB[-1,4;0,-1]",
            "NU[2,-9;1,-4]",
            "LS(+(5,1) # -(5,1))",
            "SB(-2; 4)",
        ],
    )
    def test_printer_output_reads_back(self, text):
        m = parse_manifold(text)
        assert format_manifold(m) == text
        assert parse_manifold(format_manifold(m)) == m

    def test_kinds(self):
        assert isinstance(parse_manifold("M(1; (3,1))"), SeifertManifold)
        assert isinstance(parse_manifold("TB[1,0;0,1]"), TorusBundle)
        assert isinstance(parse_manifold("LS((3,1))"), LensSum)
        assert parse_manifold("SB(-1; 2)") == SphereBundle(-1, 2)
        union = parse_manifold("NU[2,-9;1,-4]")
        assert isinstance(union, UnionPhi)
        assert union.phi.mn() == (2, -4)

    def test_whitespace_and_commas(self):
        m = parse_manifold("  M( 0 ;\n (2,1), (3,-1) )  ")
        assert m.data == SeifertData(0, ((2, 1), (3, -1)))
        assert parse_manifold("TB[ 1 , 1 ; 0 , 1 ]") == TorusBundle(1, 1, 0, 1)

    def test_gcd_error_points_at_pair(self):
        with pytest.raises(ParseError, match="gcd") as info:
            parse_manifold("M(0; (4,2))")
        assert (info.value.line, info.value.column) == (1, 6)

    def test_error_position_on_later_line(self):
        with pytest.raises(ParseError) as info:
            parse_manifold("M(0;\n (4,2))")
        assert (info.value.line, info.value.column) == (2, 2)
        assert "line 2, column 2" in str(info.value)

    def test_misprinted_gluing_matrix(self):
        with pytest.raises(ParseError, match=r"did you mean NU\[2,3;1,2\]"):
            parse_manifold("NU[2,-3;1,2]")

    def test_torus_bundle_determinant(self):
        with pytest.raises(ParseError, match="determinant"):
            parse_manifold("TB[1,0;0,-1]")

    @pytest.mark.parametrize(
        "text, message",
        [
            ("M(0; ) extra", "trailing"),
            ("X(0; )", "expected one of"),
            ("M(0; (2,1)", r"expected '\)'"),
            ("M(0; (2,1)) @", "unexpected character"),
            ("LS()", r"expected '\('"),
        ],
    )
    def test_syntax_errors(self, text, message):
        with pytest.raises(ParseError, match=message):
            parse_manifold(text)

    def test_parse_error_is_input_error(self):
        with pytest.raises(InputError):
            parse_manifold("")


class TestPairings:
    def test_literals(self):
        assert parse_pairing("lw(1/5)") == pairing_lw(Fraction(1, 5))
        assert parse_pairing("E0(2)") == pairing_e(2, 0)
        assert parse_pairing("E1(2)") == pairing_e(2, 1)
        assert parse_pairing("sum(lw(1/3), lw(-1/3))") == orthogonal_sum(
            pairing_lw(Fraction(1, 3)), pairing_lw(Fraction(-1, 3))
        )

    def test_matrix_literal(self):
        pairing = parse_pairing("matrix(orders=[3,3]; rows=[[1/3,0],[0,2/3]])")
        assert pairing.orders == (3, 3)
        assert pairing == orthogonal_sum(pairing_lw(Fraction(1, 3)), pairing_lw(Fraction(2, 3)))

    @pytest.mark.parametrize("text", ["lw(3/8)", "sum(E1(3), lw(1/9))", "sum(E0(1), lw(-2/5))"])
    def test_format_reads_back(self, text):
        pairing = parse_pairing(text)
        assert parse_pairing(format_pairing(pairing)) == pairing

    def test_zero_denominator(self):
        with pytest.raises(ParseError, match="zero denominator"):
            parse_pairing("lw(1/0)")

    def test_invalid_values_become_parse_errors(self):
        with pytest.raises(ParseError):
            parse_pairing("E1(1)")
        with pytest.raises(ParseError):
            parse_pairing("matrix(orders=[3,3]; rows=[[1/3,1/3],[2/3,0]])")

    def test_unknown_literal(self):
        with pytest.raises(ParseError, match="unknown pairing literal"):
            parse_pairing("foo(1)")


def test_tokenizer_positions():
    tokens = tokenize("M(0; (2,1))")
    assert [t.text for t in tokens[:5]] == ["M", "(", "0", ";", "("]
    assert tokens[4].position == 5
    assert tokens[-1].kind == "end"
