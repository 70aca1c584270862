"""Tests for exact Laurent polynomial arithmetic."""

from fractions import Fraction

import pytest
import sympy

from petalknot.laurent import LaurentPolynomial

T = LaurentPolynomial.monomial(1)


class TestConstruction:
    """Zero coefficients are dropped and terms are merged."""

    def test_zero_terms_are_dropped(self):
        poly = LaurentPolynomial({0: 1, 2: 0, -1: 3})
        assert poly.items() == [(-1, 3), (0, 1)]

    def test_pairs_are_merged(self):
        poly = LaurentPolynomial([(1, 2), (1, -2), (3, 1)])
        assert poly.items() == [(3, 1)]

    def test_zero_has_no_degree(self):
        with pytest.raises(ValueError, match="no degree"):
            LaurentPolynomial.zero().min_degree

    def test_integer_equality(self):
        assert LaurentPolynomial.one() == 1
        assert LaurentPolynomial.zero() == 0
        assert hash(LaurentPolynomial({1: 2})) == hash(LaurentPolynomial([(1, 2)]))


class TestArithmetic:
    def test_sum_and_difference(self):
        assert (T + 1) - T == 1
        assert 1 - T == LaurentPolynomial({0: 1, 1: -1})

    def test_product(self):
        assert (T + 1) * (T - 1) == LaurentPolynomial({2: 1, 0: -1})

    def test_negative_power_of_monomial(self):
        assert T**-2 == LaurentPolynomial({-2: 1})
        assert (T * T**-1) == 1

    def test_negative_power_of_binomial_fails(self):
        with pytest.raises(ArithmeticError, match="monomials"):
            (T + 1) ** -1

    def test_exact_divide(self):
        assert (T * T - 1).exact_divide(T - 1) == T + 1

    def test_inexact_divide_raises(self):
        with pytest.raises(ArithmeticError, match="not exact"):
            (T * T + 1).exact_divide(T - 1)

    def test_divide_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            T.exact_divide(LaurentPolynomial.zero())

    def test_evaluate(self):
        trefoil = T - 1 + T**-1
        assert trefoil.evaluate(-1) == -3
        assert (T**-1).evaluate(2) == Fraction(1, 2)


class TestTransforms:
    def test_shift_and_inverse(self):
        poly = LaurentPolynomial({1: 2, 3: -1})
        assert poly.shift(-1) == LaurentPolynomial({0: 2, 2: -1})
        assert poly.substitute_inverse() == LaurentPolynomial({-1: 2, -3: -1})

    def test_halve_exponents(self):
        halved = LaurentPolynomial({4: 1, -2: 3}).halve_exponents()
        assert halved == LaurentPolynomial({2: 1, -1: 3})
        with pytest.raises(ArithmeticError, match="odd exponent"):
            LaurentPolynomial({1: 1}).halve_exponents()

    def test_palindromic(self):
        assert (T - 1 + T**-1).is_palindromic()
        assert not (T - 1).is_palindromic()


class TestConversions:
    def test_to_string(self):
        assert (T - 1 + T**-1).to_string() == "t - 1 + t^-1"
        assert LaurentPolynomial({2: -3}).to_string("q") == "-3*q^2"
        assert str(LaurentPolynomial.zero()) == "0"

    def test_json_payload(self):
        poly = LaurentPolynomial({-4: 1, -3: 1, -1: -1})
        assert poly.to_json() == {"var": "t", "terms": [[-4, 1], [-3, 1], [-1, -1]]}
        assert LaurentPolynomial.from_json(poly.to_json()) == poly

    def test_sympy_bridge(self):
        t = sympy.Symbol("t")
        poly = LaurentPolynomial({2: 1, 0: -1, -1: 4})
        assert sympy.expand(poly.to_sympy(t) - (t**2 - 1 + 4 / t)) == 0
        converted = LaurentPolynomial.from_sympy((t - 1) * (t + 1), t)
        assert converted == LaurentPolynomial({2: 1, 0: -1})

    def test_from_sympy_rejects_fractions(self):
        t = sympy.Symbol("t")
        with pytest.raises(ArithmeticError, match="integer Laurent"):
            LaurentPolynomial.from_sympy(t / 2, t)
