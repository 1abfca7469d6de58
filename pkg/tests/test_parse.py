from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pspec import ParseError, Poly, format_structure, load_structure_file, parse_expr, print_canonical
from pspec.parse import (
    load_bundled,
    load_structure_text,
    parse_list,
    parse_structure_text,
)


def P(text, n=4):
    return parse_expr(text, n)


def test_determinant_parses():
    D = P("x1*x4 - x2*x3")
    assert dict(D.terms) == {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1}


def test_power_expands():
    assert P("(x1+x2)^2") == Poly({(2, 0, 0, 0): 1, (1, 1, 0, 0): 2, (0, 2, 0, 0): 1}, 4)


def test_fractions_cancel():
    assert P("3/2*x1 - 3/2*x1") == Poly.zero(4)


def test_unary_minus_and_precedence():
    assert P("-x1^2") == Poly({(2, 0, 0, 0): -1}, 4)
    assert P("2*x1^2*x2") == Poly({(2, 1, 0, 0): 2}, 4)
    assert P("-(x1 - x2)") == P("x2 - x1")


def test_custom_names():
    f = parse_expr("a*d - b*c", ["a", "b", "c", "d"])
    assert f == P("x1*x4 - x2*x3")


@pytest.mark.parametrize("text, message, column", [
    ("x1 $ x2", "unexpected character", 4),
    ("x1 + y", "unknown identifier", 6),
    ("x1/x2", "division", 3),
    ("x1^x2", "malformed exponent", 4),
    ("x1^", "malformed exponent", 4),
    ("x1 x2", "unexpected", 4),
    ("(x1 + x2", "expected ')'", 9),
    ("", "empty", 1),
    ("x1/0", "division by zero", 3),
])
def test_errors_carry_positions(text, message, column):
    with pytest.raises(ParseError) as info:
        P(text)
    assert message in info.value.message
    assert info.value.line == 1
    assert info.value.column == column


def test_parse_list_reports_item_column():
    assert parse_list("x1, x2 + x3", 4) == [P("x1"), P("x2 + x3")]
    with pytest.raises(ParseError) as info:
        parse_list("x1, , x3", 4)
    assert info.value.column == 4


@pytest.mark.parametrize("poly, text", [
    (Poly.zero(4), "0"),
    (Poly({(1, 0, 0, 1): 1, (0, 1, 1, 0): -1}, 4), "x1*x4 - x2*x3"),
    (Poly({(0, 1, 1, 0): 2}, 4), "2*x2*x3"),
    (Poly({(0, 1, 0, 0): -1, (0, 0, 0, 1): 1}, 4), "-x2 + x4"),
    (Poly({(2, 0, 0, 0): Fraction(-3, 2)}, 4), "-3/2*x1^2"),
    (Poly({(0, 0, 0, 0): 7}, 4), "7"),
])
def test_print_canonical(poly, text):
    assert print_canonical(poly) == text


def test_print_orders_by_degree_first():
    assert print_canonical(P("1 + x4 + x1*x2 + x3^3")) == "x3^3 + x1*x2 + x4 + 1"


coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=7)
polys = st.dictionaries(st.tuples(*[st.integers(0, 4)] * 4), coeffs, max_size=6).map(lambda d: Poly(d, 4))


@given(polys)
def test_round_trip(f):
    assert P(print_canonical(f)) == f


@given(polys)
def test_print_is_order_independent(f):
    rebuilt = Poly(dict(reversed(list(f.terms.items()))), 4)
    assert print_canonical(rebuilt) == print_canonical(f)


QMAT = """\
# quantum 2x2 matrices
vars: x1 x2 x3 x4
pair: s = x1*x4 - x2*x3 ; t = 1
pair: s = x2 ; t = x3
"""


def test_load_qmat(tmp_path):
    path = tmp_path / "qmat.psn"
    path.write_text(QMAT)
    S = load_structure_file(path)
    assert S.nvars == 4
    assert S.pairs[0] == (P("x1*x4 - x2*x3"), Poly.one(4))
    assert S.generator_bracket(1, 4) == P("2*x2*x3")


def test_crlf_and_comments(tmp_path):
    path = tmp_path / "qmat.psn"
    path.write_bytes(QMAT.replace("\n", "\r\n").encode() + b"  # trailing\r\n")
    assert load_structure_file(path).table() == load_bundled("qmat").table()


def test_bundled_symm():
    S = load_bundled("symm")
    e2 = P("x1*x2 + x1*x3 + x1*x4 + x2*x3 + x2*x4 + x3*x4")
    assert S.pairs == ((P("x1 + x2 + x3 + x4"), Poly.one(4)), (e2, Poly.one(4)))


def test_not_coprime_reports_line():
    text = "vars: x1 x2 x3\n\npair: s = x2 ; t = x2\n"
    with pytest.raises(ParseError) as info:
        load_structure_text(text)
    assert "not coprime" in info.value.message
    assert info.value.line == 3


@pytest.mark.parametrize("text, message, line", [
    ("pair: s = x1 ; t = 1\n", "vars", 1),
    ("vars: x1 x2\n", "at least 3", 1),
    ("vars: x1 x1 x2\n", "duplicate", 1),
    ("vars: x1 x2 x3\npair: s = x1 t = 1\n", "pair:", 2),
    ("vars: x1 x2 x3\npair: s = x1 ; t = 0\n", "t", 2),
    ("vars: x1 x2 x3\npair: s = x1 ; t = x5\n", "unknown identifier", 2),
    ("vars: x1 x2 x3 x4\npair: s = x1 ; t = 1\n", "pairs", 2),
    ("# only a comment\n", "missing", 1),
])
def test_structure_errors(text, message, line):
    with pytest.raises(ParseError) as info:
        load_structure_text(text)
    assert message in info.value.message
    assert info.value.line == line


def test_expression_error_column_inside_file():
    with pytest.raises(ParseError) as info:
        parse_structure_text("vars: x1 x2 x3\npair: s = x1 + $ ; t = 1\n")
    assert info.value.line == 2
    assert info.value.column == 16


def test_missing_file():
    with pytest.raises(OSError):
        load_structure_file("/nonexistent/none.psn")


def test_format_structure_round_trip():
    for name in ("qmat", "symm", "detprod", "sharedpencil"):
        S = load_bundled(name)
        text = format_structure(S)
        assert "\r" not in text
        assert load_structure_text(text).table() == S.table()
