"""Exact single-variable Laurent polynomials with integer coefficients."""

from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Tuple, Union

import sympy

Number = Union[int, Fraction]


class LaurentPolynomial:
    """Map exponent -> integer coefficient. Zero coefficients are never stored.

    Instances are treated as immutable values: every operation returns a new
    polynomial, and equal polynomials hash equally.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Mapping[int, int], Iterable[Tuple[int, int]], None] = None):
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        clean: Dict[int, int] = {}
        for exp, coeff in items:
            value = clean.get(int(exp), 0) + int(coeff)
            if value:
                clean[int(exp)] = value
            else:
                clean.pop(int(exp), None)
        self._terms = clean

    @classmethod
    def zero(cls) -> "LaurentPolynomial":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPolynomial":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPolynomial":
        return cls({exp: coeff})

    # -- inspection ---------------------------------------------------------

    def items(self) -> List[Tuple[int, int]]:
        """Terms sorted by exponent."""
        return sorted(self._terms.items())

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.items())

    def coefficient(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def min_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return min(self._terms)

    @property
    def max_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(self._terms)

    @property
    def leading_coefficient(self) -> int:
        return self._terms[self.max_degree]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial({0: other})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(value: Union["LaurentPolynomial", int]) -> "LaurentPolynomial":
        if isinstance(value, LaurentPolynomial):
            return value
        if isinstance(value, int):
            return LaurentPolynomial({0: value})
        raise TypeError(f"cannot combine LaurentPolynomial with {type(value).__name__}")

    def __add__(self, other: Union["LaurentPolynomial", int]) -> "LaurentPolynomial":
        other = self._coerce(other)
        result = dict(self._terms)
        for exp, coeff in other._terms.items():
            value = result.get(exp, 0) + coeff
            if value:
                result[exp] = value
            else:
                result.pop(exp, None)
        return _from_clean(result)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return _from_clean({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Union["LaurentPolynomial", int]) -> "LaurentPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> "LaurentPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other: Union["LaurentPolynomial", int]) -> "LaurentPolynomial":
        other = self._coerce(other)
        result: Dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                result[e1 + e2] = result.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(result)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPolynomial":
        if n < 0:
            if len(self._terms) != 1:
                raise ArithmeticError("only monomials have Laurent inverses")
            ((exp, coeff),) = self._terms.items()
            if coeff not in (1, -1):
                raise ArithmeticError("monomial inverse needs a unit coefficient")
            return LaurentPolynomial({exp * n: coeff ** (-n)})
        result = LaurentPolynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_divide(self, divisor: "LaurentPolynomial") -> "LaurentPolynomial":
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        remainder = dict(self._terms)
        quotient: Dict[int, int] = {}
        top = divisor.max_degree
        lead = divisor.leading_coefficient
        floor = (self.min_degree - divisor.min_degree) if self._terms else 0
        while remainder:
            exp = max(remainder)
            coeff = remainder[exp]
            if coeff % lead or exp - top < floor:
                raise ArithmeticError("polynomial division is not exact")
            q_exp, q_coeff = exp - top, coeff // lead
            quotient[q_exp] = q_coeff
            for d_exp, d_coeff in divisor._terms.items():
                key = q_exp + d_exp
                value = remainder.get(key, 0) - q_coeff * d_coeff
                if value:
                    remainder[key] = value
                else:
                    remainder.pop(key, None)
        return LaurentPolynomial(quotient)

    def shift(self, k: int) -> "LaurentPolynomial":
        """Multiply by t**k."""
        return _from_clean({e + k: c for e, c in self._terms.items()})

    def substitute_inverse(self) -> "LaurentPolynomial":
        """The t -> 1/t image."""
        return _from_clean({-e: c for e, c in self._terms.items()})

    def halve_exponents(self) -> "LaurentPolynomial":
        if any(e % 2 for e in self._terms):
            raise ArithmeticError("odd exponent cannot be halved")
        return _from_clean({e // 2: c for e, c in self._terms.items()})

    def evaluate(self, x: Number) -> Number:
        total: Number = 0
        for exp, coeff in self._terms.items():
            total += coeff * (Fraction(x) ** exp if exp < 0 else x**exp)
        if isinstance(total, Fraction) and total.denominator == 1:
            return int(total)
        return total

    def is_palindromic(self) -> bool:
        return self == self.substitute_inverse()

    # -- conversions --------------------------------------------------------

    def to_string(self, var: str = "t") -> str:
        if not self._terms:
            return "0"
        parts = []
        for exp, coeff in sorted(self._terms.items(), reverse=True):
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            if exp == 0:
                body = str(mag)
            else:
                power = var if exp == 1 else f"{var}^{exp}"
                body = power if mag == 1 else f"{mag}*{power}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.to_string()})"

    def __str__(self) -> str:
        return self.to_string()

    def to_json(self, var: str = "t") -> Dict[str, Any]:
        return {"var": var, "terms": [[e, c] for e, c in self.items()]}

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "LaurentPolynomial":
        return cls((int(e), int(c)) for e, c in payload["terms"])

    def to_sympy(self, symbol: sympy.Symbol) -> sympy.Expr:
        return sympy.Add(*[sympy.Integer(c) * symbol**e for e, c in self._terms.items()])

    @classmethod
    def from_sympy(cls, expr: sympy.Expr, symbol: sympy.Symbol) -> "LaurentPolynomial":
        """Read back an expanded sympy Laurent polynomial in ``symbol``."""
        terms: Dict[int, int] = {}
        for term in sympy.Add.make_args(sympy.expand(expr)):
            if term == 0:
                continue
            coeff, exp = term.as_coeff_exponent(symbol)
            if not (coeff.is_Integer and exp.is_Integer):
                raise ArithmeticError(f"not an integer Laurent term: {term}")
            terms[int(exp)] = terms.get(int(exp), 0) + int(coeff)
        return cls(terms)


def _from_clean(terms: Dict[int, int]) -> LaurentPolynomial:
    poly = LaurentPolynomial.__new__(LaurentPolynomial)
    poly._terms = terms
    return poly
