"""
Tests for exact rationals, sparse polynomials, fractional series, Groebner quotients and linear algebra
"""

from fractions import Fraction

import pytest

from algebra.errors import (InconsistentSystemError, NormalizationError, PositiveDimensionalIdealError,
                            ResourceCapError, UnknownVariableError)
import algebra.groebner as groebner
from algebra.groebner import groebner_quotient
from algebra.linear import eigenvalues_numeric, exact_inverse, minimal_gap, solve_linear_exact
from algebra.rational import format_rational, parse_rational, to_fraction
from algebra.series import FractionalSeries, puiseux_at_infinity
from algebra.sparse_poly import SparsePoly, Variable

XY = ["x", "y"]


def test_rational_round_trip_format():
    assert format_rational(Fraction(-1, 96)) == "-1/96"
    assert format_rational(Fraction(2)) == "2/1"
    assert parse_rational("-1/96") == Fraction(-1, 96)
    assert parse_rational("7") == Fraction(7)


def test_rational_rejects_bad_literals():
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        to_fraction("abc")


def test_poly_arithmetic_is_exact():
    p = SparsePoly.from_expr("x**2/3 + y", XY)
    q = SparsePoly.from_expr("x**2*2/3 - y", XY)
    assert p + q == SparsePoly.from_expr("x**2", XY)
    assert (p * q).coefficient({"x": 4}) == Fraction(2, 9)
    assert (p - p).is_zero()


def test_poly_never_stores_zero_coefficients():
    p = SparsePoly(XY, {(1, 0): 1, (0, 1): 0})
    assert list(p.terms) == [(1, 0)]


def test_poly_derivatives():
    p = SparsePoly.from_expr("x**3*y + 2*x*y**2", XY)
    assert p.derivative("x") == SparsePoly.from_expr("3*x**2*y + 2*y**2", XY)
    assert p.euler_derivative("y") == SparsePoly.from_expr("x**3*y + 4*x*y**2", XY)


def test_poly_substitute_and_evaluate():
    p = SparsePoly.from_expr("x**2 + x*y", XY)
    shifted = p.substitute({"x": SparsePoly.from_expr("x + 1", XY)})
    assert shifted == SparsePoly.from_expr("x**2 + 2*x + 1 + x*y + y", XY)
    assert p.evaluate({"x": Fraction(1, 2), "y": 2}) == Fraction(5, 4)
    assert p.partial_evaluate({"y": 0}).names == ("x",)


def test_poly_unknown_variable():
    with pytest.raises(UnknownVariableError):
        SparsePoly.from_expr("x + z", XY)
    with pytest.raises(UnknownVariableError):
        SparsePoly.from_expr("x", XY).substitute({"z": 1})


def test_poly_grading():
    variables = [Variable("x", Fraction(1, 2)), Variable("y", 1)]
    p = SparsePoly.from_expr("x**2 + y", variables)
    assert p.is_homogeneous(1)
    assert not (p + SparsePoly.variable(variables, "x")).is_homogeneous()


def test_poly_json_round_trip():
    p = SparsePoly.from_expr("-x**4/96 + x*y/4", XY)
    assert SparsePoly.from_json(p.to_json(), XY) == p


def test_series_power_and_log():
    one = FractionalSeries.one("u", 1, 4)
    h = FractionalSeries.from_terms("u", 1, {Fraction(0): SparsePoly.constant([], 1),
                                             Fraction(1): SparsePoly.constant([], 1)}, 4)
    square = h.power(2)
    assert square.coefficient(1) == 2
    assert square.coefficient(2) == 1
    assert square.coefficient(3) == 0
    log = h.log()
    assert log.coefficient(1) == 1
    assert log.coefficient(2) == Fraction(-1, 2)
    assert log.coefficient(3) == Fraction(1, 3)
    assert one.log().as_dict() == {}


def test_puiseux_square_root():
    f = SparsePoly.from_expr("x**2 + a*x", ["x", "a"])
    series = puiseux_at_infinity(f, "x", Fraction(1, 2), 2)
    a = SparsePoly.variable(["a"], "a")
    assert series.coefficient(-1) == 1
    assert series.coefficient(0) == a / 2
    assert series.coefficient(1) == a ** 2 * Fraction(-1, 8)


def test_puiseux_requires_monic():
    f = SparsePoly.from_expr("2*x**2 + 1", ["x"])
    with pytest.raises(NormalizationError):
        puiseux_at_infinity(f, "x", Fraction(1, 2), 2)


def test_groebner_quotient_of_points():
    gens = [SparsePoly.from_expr("x**2 - 1", XY), SparsePoly.from_expr("y**2 - 1", XY)]
    algebra = groebner_quotient(gens)
    assert algebra.dimension == 4
    assert algebra.matrices_commute()
    assert algebra.normal_form(SparsePoly.from_expr("x**3*y", XY)) == SparsePoly.from_expr("x*y", XY)
    assert algebra.contains(SparsePoly.from_expr("x**2*y - y", XY))


def test_groebner_element_vector_matches_coordinates():
    gens = [SparsePoly.from_expr("x**2 - y", XY), SparsePoly.from_expr("y**2 - x", XY)]
    algebra = groebner_quotient(gens)
    poly = SparsePoly.from_expr("x**3 + 2*x*y - 5", XY)
    vector = algebra.element_vector(poly)
    assert [Fraction(int(vector[i].p), int(vector[i].q)) for i in range(algebra.dimension)] == \
        algebra.coordinates(poly)


def test_groebner_structure_constants_unit():
    gens = [SparsePoly.from_expr("x**3 - 2", ["x"])]
    algebra = groebner_quotient(gens)
    c = algebra.structure_constants()
    unit = algebra.monomial_basis.index((0,))
    for j in range(3):
        assert c[unit][j] == [Fraction(1) if k == j else Fraction(0) for k in range(3)]


def test_groebner_positive_dimensional():
    with pytest.raises(PositiveDimensionalIdealError) as info:
        groebner_quotient([SparsePoly.from_expr("x*y", XY)])
    assert info.value.to_dict()["error"] == PositiveDimensionalIdealError.kind


def test_groebner_bit_cap_stops_before_the_run(monkeypatch):
    def never(*args, **kwargs):
        raise AssertionError("Buchberger run started")

    monkeypatch.setattr(groebner.sympy, "groebner", never)
    with pytest.raises(ResourceCapError):
        groebner_quotient([SparsePoly.from_expr("x**2 - 1000", ["x"])], bit_cap=2)


def test_groebner_bit_cap_on_basis():
    # inputs fit in 3 bits, the reduced basis contains x - 49
    generators = [SparsePoly.from_expr("x - 7*y", XY), SparsePoly.from_expr("y - 7", XY)]
    assert groebner_quotient(generators).dimension == 1
    with pytest.raises(ResourceCapError):
        groebner_quotient(generators, bit_cap=3)


def test_solve_linear_exact():
    solution = solve_linear_exact([[1, 1], [1, -1]], [2, 0])
    assert solution.is_unique
    assert solution.solution == [1, 1]
    under = solve_linear_exact([[1, 1]], [3])
    assert not under.is_unique
    assert under.free_variables == [1]


def test_solve_linear_inconsistent():
    with pytest.raises(InconsistentSystemError):
        solve_linear_exact([[1, 1], [1, 1]], [1, 2])


def test_eigenvalues_are_sorted():
    values = eigenvalues_numeric([[2, 0], [0, 1]])
    assert values == pytest.approx([1, 2])
    assert minimal_gap(values) == pytest.approx(1)


def test_exact_inverse():
    assert exact_inverse([[2, 1], [1, 1]]) == [[1, -1], [-1, 2]]
    with pytest.raises(ValueError):
        exact_inverse([[1, 2], [2, 4]])
