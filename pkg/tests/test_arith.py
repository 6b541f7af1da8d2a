from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra.arith import (
    INFINITY, Polynomial, RationalFunction, format_rational, laurent_expand, order_at, parse_rational,
    parse_rational_function, rational_roots, residue_form, residue_of_product, residue_sum_check,
)
from algebra.errors import ConfigError
from conftest import nonzero_rationals, polynomials, rational_functions, small_points, split_polynomials

z = RationalFunction.variable()


def test_polynomial_product_and_division():
    p = Polynomial.linear_factor(1) * Polynomial.linear_factor(-1)
    assert p == Polynomial([-1, 0, 1])
    q, r = divmod(p, Polynomial.linear_factor(1))
    assert q == Polynomial.linear_factor(-1)
    assert r.is_zero


def test_rational_function_is_canonical():
    f = RationalFunction(Polynomial([-1, 0, 1]), Polynomial([-2, 2]))
    assert f == (z + 1) * Fraction(1, 2)
    assert f.denominator == Polynomial.one()


def test_zero_denominator_is_rejected():
    with pytest.raises(ZeroDivisionError):
        RationalFunction(Polynomial.one(), Polynomial.zero())


@pytest.mark.parametrize("value, text", [
    (Fraction(3), "3"),
    (Fraction(-1, 2), "-1/2"),
    (Fraction(0), "0"),
])
def test_format_rational(value, text):
    assert format_rational(value) == text
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1/0", "abc", "1.5.2"])
def test_parse_rational_rejects_garbage(text):
    with pytest.raises(ConfigError):
        parse_rational(text)


def test_parse_rational_function():
    f = parse_rational_function("1/(z*(z-1))")
    assert f == (z * (z - 1)).inverse()
    assert parse_rational_function("z^2 - 1/2") == z * z - Fraction(1, 2)


@pytest.mark.parametrize("text", ["1/(z-", "w + 1"])
def test_parse_rational_function_errors(text):
    with pytest.raises(ConfigError):
        parse_rational_function(text)


def test_geometric_series():
    f = (1 - z).inverse()
    series = laurent_expand(f, 0, 5)
    assert series.leading_order == 0
    assert series.coefficients == (1, 1, 1, 1, 1)


def test_expansion_at_infinity():
    f = (z - 1).inverse()
    series = laurent_expand(f, INFINITY, 3)
    # 1/(z-1) = w + w^2 + ... com w = 1/z
    assert series.leading_order == 1
    assert series.coefficients == (1, 1, 1)


@pytest.mark.parametrize("f, at, expected", [
    (z * z * (z - 1).inverse(), 0, 2),
    (z * z * (z - 1).inverse(), 1, -1),
    (z * z * (z - 1).inverse(), INFINITY, -1),
    (RationalFunction.constant(0), 0, float("inf")),
])
def test_order_at(f, at, expected):
    assert order_at(f, at) == expected


def test_residues_of_simple_forms():
    assert residue_form(z.inverse(), 0) == 1
    assert residue_form(z.inverse(), INFINITY) == -1
    assert residue_form(z, INFINITY) == 0


def test_residue_of_product_with_derivative():
    # (1/z^2) * (z^2)' = 2/z
    assert residue_of_product(((z.inverse() ** 2, 0), (z * z, 1)), 0) == 2


def test_rational_roots():
    p = Polynomial.linear_factor(Fraction(1, 2)) ** 2 * Polynomial.linear_factor(-3) * Polynomial([1, 0, 1])
    assert rational_roots(p) == {Fraction(1, 2): 2, Fraction(-3): 1}


def test_residue_theorem_with_irrational_poles():
    assert residue_sum_check(z * (z * z + 1).inverse())


@given(rational_functions())
def test_residue_theorem(f):
    assert residue_sum_check(f)


@given(polynomials(), polynomials())
def test_polynomial_division_identity(a, b):
    if b.is_zero:
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero or r.degree < b.degree


@given(rational_functions(), rational_functions(), small_points)
def test_order_is_additive(f, g, at):
    if f.is_zero or g.is_zero:
        return
    assert order_at(f * g, at) == order_at(f, at) + order_at(g, at)


@given(split_polynomials(), st.lists(nonzero_rationals, min_size=1, max_size=3), small_points)
@settings(max_examples=30, deadline=None)
def test_residue_matches_sympy(den, coeffs, at):
    f = RationalFunction(Polynomial(coeffs), den)
    zs = sympy.Symbol("z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * zs ** i for i, c in enumerate(coeffs))
    for a in {at} | set(rational_roots(den)):
        expected = sympy.residue(expr / den_to_sympy(den, zs), zs, sympy.Rational(a.numerator, a.denominator))
        assert residue_form(f, a) == Fraction(str(expected))


def den_to_sympy(p, zs):
    return sum(sympy.Rational(c.numerator, c.denominator) * zs ** i for i, c in enumerate(p.coefficients))
