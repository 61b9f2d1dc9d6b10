"""
Truncated fractional-power series in a single pivot variable
Used for expansions at infinity (pivot x^{-1}) and in roots lambda^{1/r}
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

from algebra.errors import NormalizationError
from algebra.rational import format_rational, to_fraction
from algebra.sparse_poly import SparsePoly, Variable, as_variables, merge_variables

logger = logging.getLogger(__name__)


def binomial(e: Fraction, n: int) -> Fraction:
    """Generalized binomial coefficient C(e, n) for rational e"""
    result = Fraction(1)
    for j in range(n):
        result = result * (e - j) / (j + 1)
    return result


@dataclass(frozen=True)
class FractionalSeries:
    """
    sum_k coefficients[k] * pivot^(leading_exponent + k*step) + O(pivot^truncation_order)

    Coefficients are polynomials in the parameter variables; every exponent
    below truncation_order is known exactly.
    """
    pivot: str
    leading_exponent: Fraction
    step: Fraction
    coefficients: Tuple[SparsePoly, ...]
    truncation_order: Fraction
    parameters: Tuple[Variable, ...] = ()

    @classmethod
    def from_terms(cls, pivot: str, step, terms: Dict[Fraction, SparsePoly], truncation_order,
                   parameters: Sequence[Variable] = (), leading_exponent=None) -> "FractionalSeries":
        step = to_fraction(step)
        truncation_order = to_fraction(truncation_order)
        params = as_variables(parameters)
        for coeff in terms.values():
            params = merge_variables(params, coeff.variables)
        known = {to_fraction(e): c for e, c in terms.items() if to_fraction(e) < truncation_order}
        nonzero = [e for e, c in known.items() if not c.is_zero()]
        if leading_exponent is None:
            leading_exponent = min(nonzero) if nonzero else truncation_order
        leading_exponent = to_fraction(leading_exponent)
        coefficients: List[SparsePoly] = []
        exponent = leading_exponent
        for e in nonzero:
            if (e - leading_exponent) % step or e < leading_exponent:
                raise ValueError(f"Exponent {e} is off the progression {leading_exponent} + {step}*k")
        while exponent < truncation_order:
            coeff = known.get(exponent)
            coefficients.append(coeff.with_variables(params) if coeff is not None else SparsePoly.zero(params))
            exponent += step
        return cls(pivot, leading_exponent, step, tuple(coefficients), truncation_order, params)

    @classmethod
    def one(cls, pivot: str, step, truncation_order, parameters: Sequence[Variable] = ()) -> "FractionalSeries":
        params = as_variables(parameters)
        return cls.from_terms(pivot, step, {Fraction(0): SparsePoly.constant(params, 1)}, truncation_order, params)

    # Accessors

    def exponent(self, k: int) -> Fraction:
        return self.leading_exponent + k * self.step

    def terms(self) -> Iterator[Tuple[Fraction, SparsePoly]]:
        for k, coeff in enumerate(self.coefficients):
            if not coeff.is_zero():
                yield self.exponent(k), coeff

    def as_dict(self) -> Dict[Fraction, SparsePoly]:
        return dict(self.terms())

    def coefficient(self, exponent) -> SparsePoly:
        exponent = to_fraction(exponent)
        if exponent >= self.truncation_order:
            raise ValueError(f"Exponent {exponent} is beyond the truncation order {self.truncation_order}")
        offset = exponent - self.leading_exponent
        if offset < 0 or offset % self.step:
            return SparsePoly.zero(self.parameters)
        return self.coefficients[int(offset / self.step)]

    def leading_coefficient(self) -> SparsePoly:
        for _, coeff in self.terms():
            return coeff
        return SparsePoly.zero(self.parameters)

    def truncated(self, order) -> "FractionalSeries":
        order = min(to_fraction(order), self.truncation_order)
        return FractionalSeries.from_terms(self.pivot, self.step, self.as_dict(), order, self.parameters)

    # Arithmetic

    def _check_compatible(self, other: "FractionalSeries"):
        if self.pivot != other.pivot:
            raise ValueError(f"Series in different pivots: {self.pivot} and {other.pivot}")
        if self.step != other.step:
            raise ValueError(f"Series with different steps: {self.step} and {other.step}")

    def __add__(self, other) -> "FractionalSeries":
        if not isinstance(other, FractionalSeries):
            other = self._constant(other)
        self._check_compatible(other)
        order = min(self.truncation_order, other.truncation_order)
        terms = self.as_dict()
        for e, c in other.terms():
            terms[e] = terms[e] + c if e in terms else c
        return FractionalSeries.from_terms(self.pivot, self.step, terms, order,
                                           merge_variables(self.parameters, other.parameters))

    __radd__ = __add__

    def __neg__(self) -> "FractionalSeries":
        return self.scale(-1)

    def __sub__(self, other) -> "FractionalSeries":
        if not isinstance(other, FractionalSeries):
            other = self._constant(other)
        return self + (-other)

    def _constant(self, value) -> "FractionalSeries":
        coeff = value if isinstance(value, SparsePoly) else SparsePoly.constant(self.parameters, value)
        return FractionalSeries.from_terms(self.pivot, self.step, {Fraction(0): coeff},
                                           self.truncation_order, self.parameters)

    def scale(self, factor) -> "FractionalSeries":
        terms = {e: c * factor for e, c in self.terms()}
        return FractionalSeries.from_terms(self.pivot, self.step, terms, self.truncation_order, self.parameters)

    def shift(self, delta) -> "FractionalSeries":
        """Multiply by pivot^delta"""
        delta = to_fraction(delta)
        terms = {e + delta: c for e, c in self.terms()}
        return FractionalSeries.from_terms(self.pivot, self.step, terms, self.truncation_order + delta,
                                           self.parameters, self.leading_exponent + delta)

    def __mul__(self, other) -> "FractionalSeries":
        if not isinstance(other, FractionalSeries):
            return self.scale(other)
        self._check_compatible(other)
        order = min(self.leading_exponent + other.truncation_order,
                    other.leading_exponent + self.truncation_order)
        terms: Dict[Fraction, SparsePoly] = {}
        for ea, ca in self.terms():
            for eb, cb in other.terms():
                e = ea + eb
                if e >= order:
                    continue
                product = ca * cb
                terms[e] = terms[e] + product if e in terms else product
        return FractionalSeries.from_terms(self.pivot, self.step, terms, order,
                                           merge_variables(self.parameters, other.parameters),
                                           self.leading_exponent + other.leading_exponent)

    __rmul__ = __mul__

    def _split_leading(self) -> Tuple[Fraction, "FractionalSeries"]:
        """Write self = pivot^L * (1 + h); requires the leading coefficient to be exactly 1"""
        lead_exp = None
        for e, c in self.terms():
            lead_exp = e
            if c != 1:
                raise NormalizationError(f"Leading coefficient must be 1, got {c}")
            break
        if lead_exp is None:
            raise NormalizationError("Cannot normalize a series with no known terms")
        h = self.shift(-lead_exp) - 1
        return lead_exp, h

    def power(self, e) -> "FractionalSeries":
        """Rational power of a series whose leading coefficient is 1"""
        e = to_fraction(e)
        lead, h = self._split_leading()
        result = FractionalSeries.one(self.pivot, self.step, h.truncation_order, self.parameters)
        h_power = result
        n = 1
        while n * self.step < h.truncation_order:
            h_power = h_power * h
            result = result + h_power.scale(binomial(e, n))
            n += 1
        return result.shift(lead * e)

    def log(self) -> "FractionalSeries":
        """log(1 + h) for a series with leading term exactly 1"""
        lead, h = self._split_leading()
        if lead != 0:
            raise NormalizationError(f"log needs leading exponent 0, got {lead}")
        result = FractionalSeries.from_terms(self.pivot, self.step, {}, h.truncation_order,
                                             self.parameters, Fraction(0))
        h_power = FractionalSeries.one(self.pivot, self.step, h.truncation_order, self.parameters)
        n = 1
        while n * self.step < h.truncation_order:
            h_power = h_power * h
            result = result + h_power.scale(Fraction((-1) ** (n + 1), n))
            n += 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, FractionalSeries):
            return NotImplemented
        if self.pivot != other.pivot or self.step != other.step:
            return False
        order = min(self.truncation_order, other.truncation_order)
        a = {e: c for e, c in self.terms() if e < order}
        b = {e: c for e, c in other.terms() if e < order}
        return a.keys() == b.keys() and all(a[e] == b[e] for e in a)

    def to_json(self) -> Dict:
        return {
            "pivot": self.pivot,
            "step": format_rational(self.step),
            "truncation_order": format_rational(self.truncation_order),
            "terms": [{"exponent": format_rational(e), "coeff": c.to_json()} for e, c in self.terms()],
        }

    def __str__(self) -> str:
        pieces = [f"({c})*{self.pivot}^({e})" for e, c in self.terms()]
        pieces.append(f"O({self.pivot}^({self.truncation_order}))")
        return " + ".join(pieces)


def series_of_polynomial(f: SparsePoly, variable: str, truncation) -> FractionalSeries:
    """A polynomial in `variable` viewed as a series in the pivot variable^{-1}"""
    params = [v for v in f.variables if v.name != variable]
    terms: Dict[Fraction, SparsePoly] = {}
    for (k,), coeff in f.collect([variable]).items():
        terms[Fraction(-k)] = coeff.with_variables(params)
    return FractionalSeries.from_terms(f"1/{variable}", 1, terms, truncation, params)


def puiseux_at_infinity(f: SparsePoly, variable: str, exponent, truncation) -> FractionalSeries:
    """
    Expand f(x)^e at x = infinity as a series in x^{-1}

    Args:
        f: polynomial monic in `variable`; other variables are parameters
        variable: the expansion variable x
        exponent: rational power e
        truncation: exponent of x^{-1} where the expansion stops

    Returns:
        x^{n e} (1 + lower)^e known exactly up to O(x^{-truncation})
    """
    exponent = to_fraction(exponent)
    truncation = to_fraction(truncation)
    n = f.degree_in(variable)
    lead = f.collect([variable]).get((n,))
    if lead is None or lead != 1:
        raise NormalizationError(f"Polynomial must be monic in {variable}, leading coefficient is {lead}")
    leading = -n * exponent
    relative = truncation - leading
    if relative <= 0:
        raise ValueError(f"Unsupported truncation {truncation}: at or above the leading exponent {leading}")
    base = series_of_polynomial(f, variable, Fraction(-n) + relative)
    result = base.power(exponent)
    logger.debug(f"Expanded ({variable}-degree {n})^{exponent} to order {result.truncation_order}")
    return result
