"""Unit tests for symbolic matrices, charpolys, and pattern extraction."""

import random

import pytest

from conftest import PATTERN_C_34345, random_ulh
from ulhcompanion import Pattern, SymMatrix, Window, base_matrix, order_prec
from ulhcompanion.errors import MatrixFormatError, PatternError
from ulhcompanion.exprpoly import LAM, Polynomial, lam_power, par, param_indet, xvar
from ulhcompanion.matrices import parse_matrix_text, render_matrix_text


def test_is_ulh_examples():
    assert SymMatrix.frobenius(5).is_ulh()
    assert not SymMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).is_ulh()
    assert SymMatrix.empty().is_ulh()
    assert SymMatrix.upper_shift(4).is_ulh()


def test_order_prec_examples():
    assert order_prec((1, 1), (3, 3)) == -1
    assert order_prec((2, 1), (5, 4)) == -1
    assert order_prec((4, 2), (4, 2)) == 0
    assert order_prec((3, 1), (2, 2)) == 1


def test_submatrix_examples(sec4_7x7):
    block = sec4_7x7.principal(6, 7)
    assert block == SymMatrix.from_rows([[3, 1], [4, 2]])
    assert sec4_7x7.principal(1, 0) == SymMatrix.empty()
    c = base_matrix(PATTERN_C_34345)
    kb = c.k_block(3)
    assert kb.order == 0 or kb.entries  # rows 3..5, cols 1..3
    assert kb == c.submatrix(Window(3, 5), Window(1, 3))
    assert kb.entry(1, 3) == xvar(1)


def test_submatrix_out_of_range():
    m = SymMatrix.frobenius(3)
    with pytest.raises(ValueError):
        m.submatrix(Window(1, 4), Window(1, 3))
    with pytest.raises(ValueError):
        m.submatrix(Window(0, 2), Window(1, 2))


def test_subdiag_sums(case1_10x10):
    assert case1_10x10.subdiag_sum(0) == xvar(1)
    assert case1_10x10.subdiag_sum(2) == xvar(3)
    assert SymMatrix.zeros(4).subdiag_sum(0) == Polynomial.zero()
    with pytest.raises(ValueError):
        SymMatrix.zeros(4).subdiag_sum(4)


def test_constant_part():
    assert SymMatrix.frobenius(3).constant_part() == SymMatrix.upper_shift(3)
    constant = SymMatrix.from_rows([[1, 1], [2, 3]])
    assert constant.constant_part() == constant
    mixed = SymMatrix.from_rows([[par("a"), 1], [xvar(2), xvar(1)]])
    stripped = mixed.constant_part()
    assert stripped.entry(2, 1) == Polynomial.zero()
    assert stripped.entry(2, 2) == Polynomial.zero()
    assert stripped.entry(1, 1) == par("a")


def test_charpoly_frobenius_matches_companion_target():
    from ulhcompanion import companion_target

    for n in range(1, 7):
        assert SymMatrix.frobenius(n).charpoly() == companion_target(n)


def test_charpoly_paper_values():
    assert SymMatrix.from_rows([[3, 1], [4, 2]]).charpoly() == LAM ** 2 - 5 * LAM + 2
    m = SymMatrix.from_rows([[2, 1, 0], [0, 3, 1], [1, 3, -2]])
    assert m.charpoly() == LAM ** 3 - 3 * LAM ** 2 - 7 * LAM + 17
    assert SymMatrix.empty().charpoly() == Polynomial.one()


def test_charpoly_oracle_contract():
    assert SymMatrix.from_rows([[par("c")]]).charpoly_oracle() == LAM - par("c")
    assert SymMatrix.empty().charpoly_oracle() == Polynomial.one()
    with pytest.raises(ValueError):
        SymMatrix.zeros(9).charpoly_oracle()


def test_charpoly_non_ulh_falls_back_to_cofactor():
    m = SymMatrix.from_rows([[1, 2], [3, 4]])
    assert not m.is_ulh()
    assert m.charpoly() == LAM ** 2 - 5 * LAM - 2


def test_charpoly_matches_oracle_on_random_ulh():
    rng = random.Random(20240)
    for _ in range(80):
        n = rng.randint(0, 6)
        m = random_ulh(rng, n)
        assert m.charpoly() == m.charpoly_oracle()


def test_charpoly_monic_of_full_degree():
    rng = random.Random(77)
    for _ in range(40):
        n = rng.randint(1, 5)
        cp = random_ulh(rng, n).charpoly()
        assert cp.lambda_degree() == n
        assert cp.lambda_coeff(n) == Polynomial.one()


def test_variable_linear_coefficient_factors_through_windows():
    # For a ULH matrix with one variable at (i, j), the coefficient of that
    # variable in the charpoly is -charpoly(A[1..j-1]) * charpoly(A[i+1..n]).
    rng = random.Random(4811)
    for _ in range(60):
        n = rng.randint(1, 6)
        m = random_ulh(rng, n, with_params=False)
        # strip variables, then place a single x1
        bindings = {ind: 0 for row in m.entries for e in row for ind in e.indets() if ind.kind == "x"}
        m = m.substitute(bindings) if bindings else m
        i = rng.randint(1, n)
        j = rng.randint(1, i)
        m = m.with_entry(i, j, xvar(1))
        coeff = Polynomial.zero()
        for mono, c in m.charpoly().items():
            xs = [p for p in mono if p[0].kind == "x"]
            if xs == [(list(m.entry(i, j).indets())[0], 1)]:
                rest = tuple(p for p in mono if p[0].kind != "x")
                coeff = coeff + Polynomial({rest: c})
        expected = -(m.principal(1, j - 1).charpoly() * m.principal(i + 1, n).charpoly())
        assert coeff == expected


def test_is_nilpotent_examples():
    m = SymMatrix.from_rows([[0, 1, 0], [3, -5, 1], [15, -28, 5]])
    assert m.is_nilpotent().is_yes
    assert SymMatrix.from_rows([[1, 1], [0, 0]]).is_nilpotent().is_no
    for n in range(5):
        assert SymMatrix.upper_shift(n).is_nilpotent().is_yes
    with pytest.raises(ValueError):
        SymMatrix.from_rows([[xvar(1)]]).is_nilpotent()


def test_is_nilpotent_parametric_conditions():
    m = SymMatrix.from_rows([[par("a"), 1], [par("b"), -par("a")]])
    verdict = m.is_nilpotent()
    assert verdict.is_conditional
    polys = {c.poly.render() for c in verdict.conditions}
    assert polys == {"a^2 + b"}  # det condition; trace already vanishes


def test_is_nilpotent_matches_matrix_powers():
    rng = random.Random(913)
    for _ in range(40):
        n = rng.randint(1, 4)
        m = random_ulh(rng, n, with_params=False)
        bindings = {ind: 0 for row in m.entries for e in row for ind in e.indets() if ind.kind == "x"}
        m = m.substitute(bindings) if bindings else m
        power = m
        for _ in range(n - 1):
            power = power @ m
        assert m.is_nilpotent().is_yes == (power == SymMatrix.zeros(n))


def test_j_conjugate_transpose_example(njl4):
    image = njl4.j_conjugate_transpose()
    expected = SymMatrix.from_rows(
        [[0, 1, 0, 0], [0, 5, 1, 0], [0, -28, -5, 1], [0, 15, 3, 0]]
    )
    assert image == expected
    assert image.j_conjugate_transpose() == njl4
    for n in range(5):
        u = SymMatrix.upper_shift(n)
        assert u.j_conjugate_transpose() == u


def test_j_conjugate_preserves_charpoly_of_constants():
    rng = random.Random(5120)
    for _ in range(30):
        n = rng.randint(0, 5)
        m = random_ulh(rng, n, with_params=False)
        bindings = {ind: 0 for row in m.entries for e in row for ind in e.indets() if ind.kind == "x"}
        m = m.substitute(bindings) if bindings else m
        assert m.charpoly() == m.j_conjugate_transpose().charpoly()


def test_extract_pattern_examples():
    c = base_matrix(PATTERN_C_34345)
    assert c.extract_pattern() == PATTERN_C_34345
    f = base_matrix(Pattern(5, ((3, 3), (4, 3), (4, 2), (4, 1), (5, 1))))
    assert f.extract_pattern().positions == ((3, 3), (4, 3), (4, 2), (4, 1), (5, 1))


def test_extract_pattern_errors():
    with pytest.raises(PatternError):  # duplicate
        SymMatrix.from_rows([[xvar(1), 1], [xvar(2), xvar(2)]]).extract_pattern()
    with pytest.raises(PatternError):  # missing x2
        SymMatrix.from_rows([[xvar(1), 1], [0, 0]]).extract_pattern()
    with pytest.raises(PatternError):  # compound entry
        SymMatrix.from_rows([[xvar(1) + 1, 1], [xvar(2), 0]]).extract_pattern()
    with pytest.raises(PatternError):  # placement order violated
        SymMatrix.from_rows(
            [[xvar(2), 1, 0], [0, 0, 1], [xvar(1), 0, xvar(3)]]
        ).extract_pattern()


def test_pattern_validation():
    with pytest.raises(PatternError):
        Pattern(2, ((1, 2), (2, 1)))  # above the diagonal
    with pytest.raises(PatternError):
        Pattern(2, ((1, 1),))  # wrong count
    with pytest.raises(PatternError):
        Pattern(2, ((2, 1), (1, 1)))  # order violated


def test_matrix_text_roundtrip(sec4_7x7):
    text = render_matrix_text(sec4_7x7)
    assert parse_matrix_text(text) == sec4_7x7


def test_matrix_text_errors():
    with pytest.raises(MatrixFormatError):
        parse_matrix_text("")
    with pytest.raises(MatrixFormatError):
        parse_matrix_text("orders 3\n")
    with pytest.raises(MatrixFormatError):
        parse_matrix_text("order 2\n1 0\n")
    with pytest.raises(MatrixFormatError):
        parse_matrix_text("order 2\n1 0 0\n0 1\n")
    with pytest.raises(MatrixFormatError) as excinfo:
        parse_matrix_text("order 2\n1 x9\n0 1\n")
    assert "x9" in str(excinfo.value)


def test_matrix_text_comments_and_layout():
    text = "# heading\norder 2 # trailing\nx1 1\nx2 0\n"
    m = parse_matrix_text(text)
    assert m.entry(1, 1) == xvar(1)
    assert m.entry(2, 1) == xvar(2)
