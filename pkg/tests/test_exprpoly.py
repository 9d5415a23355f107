"""Unit tests for exact polynomial arithmetic and the expression parser."""

from fractions import Fraction

import pytest

from ulhcompanion.errors import ExprError, VariableIndexError
from ulhcompanion.exprpoly import (
    LAM,
    MINUS_INF,
    Polynomial,
    lam_power,
    par,
    param_indet,
    parse_expr,
    x_indet,
    xvar,
)


def test_add_additive_inverse():
    assert lam_power(2) + (-lam_power(2)) == Polynomial.zero()


def test_add_basis_polynomials():
    # hand sum of (lambda - 2) and (4 - 4*lambda + lambda^2)
    assert (LAM - 2) + (4 - 4 * LAM + LAM ** 2) == LAM ** 2 - 3 * LAM + 2


def test_add_merges_like_terms():
    assert xvar(1) + xvar(1) == 2 * xvar(1)


def test_mul_square():
    assert (LAM - 2) * (LAM - 2) == LAM ** 2 - 4 * LAM + 4


def test_mul_degree_3_times_degree_2():
    p = 17 - 7 * LAM - 3 * LAM ** 2 + LAM ** 3
    q = 2 - 5 * LAM + LAM ** 2
    expected = 34 - 99 * LAM + 46 * LAM ** 2 + 10 * LAM ** 3 - 8 * LAM ** 4 + LAM ** 5
    assert p * q == expected


def test_mul_annihilator():
    assert xvar(1) * Polynomial.zero() == Polynomial.zero()


def test_lambda_coeff_examples():
    p = LAM ** 2 - 5 * LAM + 2
    assert p.lambda_coeff(1) == Polynomial.const(-5)
    assert (xvar(1) * lam_power(3)).lambda_coeff(3) == xvar(1)
    assert Polynomial.const(7).lambda_coeff(1) == Polynomial.zero()


def test_lambda_degree_examples():
    p6 = 2 + 35 * LAM - 123 * LAM ** 2 + 76 * LAM ** 3 - 7 * LAM ** 5 + LAM ** 6
    assert p6.lambda_degree() == 6
    assert (xvar(2) + 3).lambda_degree() == 0
    assert Polynomial.zero().lambda_degree() == MINUS_INF


def test_substitute_examples():
    a, b, c = par("a"), par("b"), par("c")
    assert (LAM ** 2 - xvar(1) * LAM).substitute({x_indet(1): 0}) == LAM ** 2
    assert (a + b).substitute({param_indet("a"): 1, param_indet("b"): -1}) == 0
    entry = -(a ** 2) - a * b - b ** 2 - c
    bound = entry.substitute(
        {param_indet("a"): 1, param_indet("b"): 1, param_indet("c"): 1}
    )
    assert bound == Polynomial.const(-4)


def test_substitute_is_partial_and_identity():
    p = xvar(1) * par("a") + LAM
    assert p.substitute({}) == p
    assert p.substitute({param_indet("a"): par("a")}) == p


def test_pow_and_rational_coefficients():
    half = Polynomial.const(Fraction(1, 2))
    assert (half * LAM) ** 2 == Fraction(1, 4) * LAM ** 2


def test_parse_basic():
    assert parse_expr("1-b-c", 7) == 1 - par("b") - par("c")
    assert parse_expr("-5/2", 3) == Polynomial.const(Fraction(-5, 2))
    assert parse_expr("x3", 5) == xvar(3)
    assert parse_expr("lambda^2-5*lambda+2", 1) == LAM ** 2 - 5 * LAM + 2


def test_parse_variable_bounds():
    with pytest.raises(VariableIndexError):
        parse_expr("x8", 7)
    with pytest.raises(VariableIndexError):
        parse_expr("x0", 7)
    assert parse_expr("x7", 7) == xvar(7)


def test_parse_implicit_multiplication():
    assert parse_expr("2a", 1) == 2 * par("a")
    assert parse_expr("-2a", 1) == -2 * par("a")
    assert parse_expr("5/2x1", 2) == Fraction(5, 2) * xvar(1)
    with pytest.raises(ExprError):
        parse_expr("a b", 1)
    with pytest.raises(ExprError):
        parse_expr("a2", 1)  # implicit only after a leading rational
    with pytest.raises(ExprError):
        parse_expr("(2)a", 1)


def test_parse_errors_carry_positions():
    with pytest.raises(ExprError) as excinfo:
        parse_expr("1+*2", 3)
    assert excinfo.value.position == 2
    with pytest.raises(ExprError):
        parse_expr("1+", 3)
    with pytest.raises(ExprError):
        parse_expr("", 3)
    with pytest.raises(ExprError):
        parse_expr("2?", 3)


def test_parse_parentheses_and_power():
    assert parse_expr("(a+b)^2", 1) == (par("a") + par("b")) ** 2
    assert parse_expr("2^3", 1) == Polynomial.const(8)
    assert parse_expr("-a^2", 1) == -(par("a") ** 2)


def test_render_canonical_and_compact():
    p = LAM ** 2 - 3 * LAM + 2
    assert p.render() == "2 - 3*lambda + lambda^2"
    assert p.render(compact=True) == "2-3*lambda+lambda^2"
    assert str(Polynomial.zero()) == "0"
    q = -xvar(1) + Fraction(5, 2) * par("a") * LAM
    assert parse_expr(q.render(compact=True), 2) == q


def test_exact_div_roundtrip():
    p = LAM ** 2 - xvar(1) * LAM + par("a")
    q = 3 * LAM - par("b") + 1
    assert (p * q).exact_div(q) == p
    assert (p * q).exact_div(p) == q


def test_exact_div_not_divisible():
    with pytest.raises(ValueError):
        (LAM ** 2 + 1).exact_div(LAM + 1)
    with pytest.raises(ZeroDivisionError):
        LAM.exact_div(Polynomial.zero())


def test_exact_div_by_constant():
    p = 3 * LAM + 6
    assert p.exact_div(Polynomial.const(3)) == LAM + 2


def test_monic_normal():
    p = -2 * par("a") + 2 * par("b")
    normal = p.monic_normal()
    assert normal == par("b") - par("a")
    assert Polynomial.zero().monic_normal() == Polynomial.zero()


def test_reserved_parameter_names():
    with pytest.raises(ValueError):
        param_indet("x12")
    with pytest.raises(ValueError):
        param_indet("lambda")
    with pytest.raises(ValueError):
        param_indet("2bad")
    assert par("x").render() == "x"  # bare 'x' is an ordinary name
