"""
Tests for WDVV residuals and the coefficient solver
"""

from fractions import Fraction

import pytest

from algebra.errors import SolveError
from algebra.sparse_poly import SparsePoly
from orbigw.caps import fixture_cap
from orbigw.fixtures import difference_from_reference, reference_orders, reference_polynomial, reference_potential
from orbigw.orbicurve import QUANTUM, Orbicurve, grading_and_euler
from orbigw.solver import collect_equations, propagate, solve_cap, solve_coefficients_by_wdvv, solve_hurwitz_ansatz
from orbigw.wdvv import all_vanish, flat_derivative, wdvv_residual


@pytest.mark.parametrize("orders", reference_orders())
def test_reference_potentials_satisfy_wdvv(orders):
    grading = grading_and_euler(Orbicurve(0, orders))
    residuals = wdvv_residual(reference_polynomial(orders), grading, max_workers=2)
    assert residuals
    assert all_vanish(residuals)


def test_perturbed_potential_breaks_wdvv():
    orders = (2, 2, 2)
    grading = grading_and_euler(Orbicurve(0, orders))
    poly = reference_polynomial(orders)
    bumped = poly + SparsePoly.monomial(poly.variables, {"t1_1": 4}, Fraction(1, 96))
    residuals = wdvv_residual(bumped, grading, include_zero=False)
    assert residuals
    assert not all_vanish(residuals)


def test_flat_derivative_acts_on_q():
    grading = grading_and_euler(Orbicurve(0, (2, 2, 2)))
    variables = grading.variables.all
    poly = SparsePoly.from_expr("Q**2*t1_1", variables)
    assert flat_derivative(poly, "s") == poly * 2
    assert flat_derivative(poly, "t1_1") == SparsePoly.from_expr("Q**2", variables)


def test_known_potential_is_verified():
    result = solve_coefficients_by_wdvv(reference_potential((2, 2, 3)))
    assert result.verified
    assert result.assignment == {}


@pytest.mark.parametrize("alpha", [2, 3])
def test_solved_caps_match_fixtures(alpha):
    solved = solve_cap(alpha, max_workers=2)
    expected = fixture_cap(alpha)
    assert solved.unknowns == ()
    assert solved.a_terms == expected.a_terms
    assert solved.b_hat == expected.b_hat


def test_hurwitz_ansatz_recovers_reference():
    result = solve_hurwitz_ansatz(Orbicurve(0, (2, 2, 2)))
    assert result.verified
    assert result.potential.unknowns == ()
    assert difference_from_reference(result.potential).is_zero()
    assert set(result.labels) == set(result.assignment)


def test_propagate_linear_then_root():
    names = ["u", "v"]
    equations = collect_equations([SparsePoly.from_expr("u - 2*v", names),
                                   SparsePoly.from_expr("v**2 - 2*v + 1", names)], names)
    assignment, _ = propagate(equations, names)
    assert assignment == {"u": 2, "v": 1}


def test_propagate_inconsistent():
    names = ["u"]
    equations = collect_equations([SparsePoly.from_expr("u - 1", names),
                                   SparsePoly.from_expr("u**2 - 4", names)], names)
    with pytest.raises(SolveError):
        propagate(equations, names)


def test_propagate_underdetermined_reports_degree():
    names = ["u", "v", QUANTUM]
    equations = collect_equations([SparsePoly.from_expr("Q**3*(u - v)", names)], ["u", "v"])
    with pytest.raises(SolveError) as info:
        propagate(equations, ["u", "v"])
    assert info.value.to_dict()["degree"] == 3
