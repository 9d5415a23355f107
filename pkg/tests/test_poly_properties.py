"""Property tests: ring axioms, canonical forms, and round-trips."""

from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import given, settings

from ulhcompanion.exprpoly import (
    LAM_INDET,
    Polynomial,
    lam_power,
    mono_make,
    param_indet,
    parse_expr,
    x_indet,
)

_INDETS = st.sampled_from(
    [
        LAM_INDET,
        x_indet(1),
        x_indet(2),
        x_indet(3),
        param_indet("a"),
        param_indet("b"),
    ]
)

_MONOMIALS = st.lists(
    st.tuples(_INDETS, st.integers(min_value=1, max_value=3)), max_size=3
).map(mono_make)

_COEFFS = st.fractions(
    min_value=Fraction(-6), max_value=Fraction(6), max_denominator=4
)

POLYS = st.dictionaries(_MONOMIALS, _COEFFS, max_size=4).map(Polynomial)


@settings(max_examples=250, deadline=None)
@given(POLYS, POLYS, POLYS)
def test_add_associative(p, q, r):
    assert (p + q) + r == p + (q + r)


@settings(max_examples=250, deadline=None)
@given(POLYS, POLYS)
def test_add_commutative(p, q):
    assert p + q == q + p


@settings(max_examples=250, deadline=None)
@given(POLYS, POLYS, POLYS)
def test_mul_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


@settings(max_examples=250, deadline=None)
@given(POLYS, POLYS)
def test_mul_commutative(p, q):
    assert p * q == q * p


@settings(max_examples=250, deadline=None)
@given(POLYS, POLYS, POLYS)
def test_distributive(p, q, r):
    assert p * (q + r) == p * q + p * r


@settings(max_examples=200, deadline=None)
@given(POLYS)
def test_neutral_elements_and_inverse(p):
    assert p + Polynomial.zero() == p
    assert p * Polynomial.one() == p
    assert p - p == Polynomial.zero()


@settings(max_examples=200, deadline=None)
@given(POLYS)
def test_canonical_form_is_structural(p):
    # rebuilding from the term map yields an identical (and equal) value
    rebuilt = Polynomial(dict(p.items()))
    assert rebuilt == p
    assert hash(rebuilt) == hash(p)
    assert all(c != 0 for _, c in p.items())


@settings(max_examples=200, deadline=None)
@given(POLYS)
def test_render_parse_roundtrip(p):
    assert parse_expr(p.render(), 3) == p
    assert parse_expr(p.render(compact=True), 3) == p


@settings(max_examples=200, deadline=None)
@given(POLYS)
def test_lambda_coefficient_reconstruction(p):
    degree = p.lambda_degree()
    total = Polynomial.zero()
    if degree != float("-inf"):
        for d in range(int(degree) + 1):
            total = total + p.lambda_coeff(d) * lam_power(d)
    assert total == p
