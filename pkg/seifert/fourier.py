"""
Finite Fourier series e^{i nu x} with polynomial coefficients
"""

import cmath
from fractions import Fraction
from typing import Dict, List, Mapping, Tuple

from algebra.rational import format_rational, to_fraction
from algebra.sparse_poly import SparsePoly, Variable


class FourierSeriesPoly:
    """
    sum_nu P_nu e^{i nu x} with nu in (1/N) Z and P_nu polynomials over a fixed variable list

    Zero coefficients are never stored.
    """

    __slots__ = ("period", "variables", "terms")

    def __init__(self, period: int, variables, terms: Mapping[Fraction, SparsePoly] = None):
        self.period = int(period)
        self.variables: Tuple[Variable, ...] = tuple(variables)
        cleaned: Dict[Fraction, SparsePoly] = {}
        for nu, poly in (terms or {}).items():
            nu = to_fraction(nu)
            if (nu * self.period).denominator != 1:
                raise ValueError(f"Unsupported Fourier exponent {nu}: denominator must divide {self.period}")
            poly = poly.with_variables(self.variables)
            if nu in cleaned:
                poly = cleaned[nu] + poly
            if poly.is_zero():
                cleaned.pop(nu, None)
            else:
                cleaned[nu] = poly
        self.terms = cleaned

    @classmethod
    def constant(cls, period: int, poly: SparsePoly) -> "FourierSeriesPoly":
        return cls(period, poly.variables, {Fraction(0): poly})

    @classmethod
    def mode(cls, period: int, nu, poly: SparsePoly) -> "FourierSeriesPoly":
        return cls(period, poly.variables, {to_fraction(nu): poly})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, nu) -> SparsePoly:
        return self.terms.get(to_fraction(nu), SparsePoly.zero(self.variables))

    def zero_mode(self) -> SparsePoly:
        """Average over one period [0, 2 pi N]"""
        return self.coefficient(0)

    def exponents(self) -> List[Fraction]:
        return sorted(self.terms)

    def __add__(self, other: "FourierSeriesPoly") -> "FourierSeriesPoly":
        merged = dict(self.terms)
        for nu, poly in other.terms.items():
            merged[nu] = merged[nu] + poly if nu in merged else poly
        return FourierSeriesPoly(self.period, self.variables, merged)

    def __mul__(self, other) -> "FourierSeriesPoly":
        if not isinstance(other, FourierSeriesPoly):
            return FourierSeriesPoly(self.period, self.variables,
                                     {nu: poly * other for nu, poly in self.terms.items()})
        product: Dict[Fraction, SparsePoly] = {}
        for nu, left in self.terms.items():
            for mu, right in other.terms.items():
                key = nu + mu
                value = left * right
                product[key] = product[key] + value if key in product else value
        return FourierSeriesPoly(self.period, self.variables, product)

    def __pow__(self, n: int) -> "FourierSeriesPoly":
        if n < 0:
            raise ValueError(f"Unsupported negative power {n}")
        result = FourierSeriesPoly.constant(self.period, SparsePoly.constant(self.variables, 1))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate_exponents(self) -> "FourierSeriesPoly":
        """nu -> -nu"""
        return FourierSeriesPoly(self.period, self.variables, {-nu: poly for nu, poly in self.terms.items()})

    def evaluate(self, x: float, values: Mapping[str, object]) -> complex:
        return sum((complex(poly.evaluate(values)) * cmath.exp(1j * float(nu) * x)
                    for nu, poly in self.terms.items()), 0j)

    def to_json(self):
        return [{"exponent": format_rational(nu), "poly": self.terms[nu].to_json()} for nu in self.exponents()]
