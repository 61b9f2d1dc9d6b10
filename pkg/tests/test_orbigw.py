"""
Tests for orbicurves, classification, caps, potential assembly and the quantum product
"""

from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from algebra.errors import MissingCapError
from algebra.sparse_poly import SparsePoly
from orbigw.caps import cap_potential, fixture_cap
from orbigw.classify import classify_polynomial, enumerate_profiles, max_exact_degree
from orbigw.fixtures import difference_from_reference, reference_orders, reference_polynomial, reference_potential
from orbigw.orbicurve import DIVISOR, QUANTUM, UNIT, Orbicurve, grading_and_euler, twisted_name
import orbigw.quantum as quantum
from orbigw.potential import assemble_potential
from orbigw.quantum import corner_entries, quantum_structure, symmetry_violations, unit_violations


def test_orbicurve_basics():
    curve = Orbicurve(0, (2, 2, 3))
    assert curve.euler_characteristic == Fraction(1, 3)
    assert curve.dimension == 6
    assert [name for _, _, name in curve.twisted_sectors()] == ["t1_1", "t2_1", "t3_1", "t3_2"]
    with pytest.raises(ValueError):
        Orbicurve(0, (1, 2))


def test_grading_and_pairing():
    grading = grading_and_euler(Orbicurve(0, (2, 3)))
    assert grading.variables.degree(UNIT) == -2
    assert grading.variables.degree(twisted_name(2, 1)) == Fraction(-4, 3)
    assert grading.variables.degree(QUANTUM) == -2 * Fraction(5, 6)
    assert grading.pairing[(twisted_name(2, 1), twisted_name(2, 2))] == Fraction(1, 3)
    assert grading.dual(UNIT) == (DIVISOR, 1)
    assert grading.euler_linear[twisted_name(2, 2)] == Fraction(1, 3)


@pytest.mark.parametrize("orders, family", [
    ((), "A"), ((5,), "A"), ((3, 7), "A"), ((2, 2, 9), "D"),
    ((2, 3, 3), "E"), ((2, 3, 4), "E"), ((2, 3, 5), "E"),
    ((2, 3, 6), "none"), ((3, 3, 3), "none"), ((2, 2, 2, 2), "none"),
])
def test_classification(orders, family):
    result = classify_polynomial(orders)
    assert result.family == family
    assert result.polynomial == (family != "none")


@pytest.mark.parametrize("points", [1, 2, 3, 4])
def test_classification_grid_agrees_with_euler_characteristic(points):
    for orders in combinations_with_replacement(range(2, 13), points):
        chi = 2 - sum(1 - Fraction(1, a) for a in orders)
        result = classify_polynomial(orders)
        assert result.polynomial == (chi > 0), orders
        if points == 4:
            assert result.family == "none"


@pytest.mark.parametrize("orders", [(2, 3, 7), (3, 3, 4), (2, 2, 2, 2)])
def test_non_polynomial_orbifolds_do_not_truncate(orders):
    degrees = [d for d in range(1, 13) if enumerate_profiles(orders, d)]
    assert len(degrees) >= 3
    assert max_exact_degree(orders) is None


@pytest.mark.parametrize("orders, degree", [((2, 2, 2), 4), ((2, 2, 3), 6), ((2, 2, 4), 8), ((2, 3, 3), 12)])
def test_max_exact_degree(orders, degree):
    assert max_exact_degree(orders) == degree


def test_enumerate_profiles_respects_orders():
    for data in enumerate_profiles((2, 2, 3), 3):
        assert data.profiles[0].parts[0] <= 2
        assert data.total_ramification == 4


def test_fixture_caps_are_homogeneous():
    for alpha in (2, 3, 4, 5):
        assert fixture_cap(alpha).support_violations() == []


def test_missing_cap_fixture():
    with pytest.raises(MissingCapError):
        cap_potential(7)


@pytest.mark.parametrize("orders", [(2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 3, 3)])
def test_assembly_reproduces_reference(orders, assembled_potentials):
    potential = assembled_potentials[orders]
    assert difference_from_reference(potential).is_zero()
    assert potential.homogeneity_violations() == []


def test_reference_orders():
    assert reference_orders() == [(2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 3, 3)]


def test_quartic_coefficient_sign():
    poly = reference_polynomial((2, 2, 2))
    assert poly.coefficient({"t1_1": 4}) == Fraction(-1, 96)


def test_truncated_assembly_of_non_polynomial_orbifold():
    potential = assemble_potential(Orbicurve(0, (3, 3, 3)), cutoff=3)
    assert potential.truncation == 3
    assert potential.max_degree() <= 3
    assert potential.to_json()["truncation"] == 3


def test_exact_mode_rejected_for_non_polynomial():
    with pytest.raises(ValueError):
        assemble_potential(Orbicurve(0, (2, 3, 7)), exact=True)


def test_genus_one_is_flagged():
    potential = assemble_potential(Orbicurve(0, (2, 2, 2)), genus=1)
    assert potential.flags == ("unchecked closed-form",)
    assert potential.classical == SparsePoly.monomial(potential.variables, {DIVISOR: 1}, Fraction(-1, 24))


def test_quantum_structure_unit_and_symmetry(potential_222):
    point = {"t1_1": Fraction(1, 2), "t2_1": 1, "t0": 3}
    structure = quantum_structure(potential_222, point)
    assert structure.exact
    assert unit_violations(structure) == []
    assert symmetry_violations(potential_222, point) == 0


def test_symmetry_check_catches_a_wrong_third_derivative(potential_222, monkeypatch):
    class SkewedTable(quantum.DerivativeTable):
        def get(self, *names):
            value = super().get(*names)
            return value * 2 if sorted(names) == sorted((UNIT, UNIT, DIVISOR)) else value

    monkeypatch.setattr(quantum, "DerivativeTable", SkewedTable)
    # the three orderings of (t0, t0, s)
    assert symmetry_violations(potential_222, {"t1_1": 1}) == 3


def test_quantum_structure_rejects_unknown_coordinates(potential_222):
    with pytest.raises(ValueError):
        quantum_structure(potential_222, {"t4_1": 1})


@pytest.mark.parametrize("orders, r", [((2, 2, 2), 2), ((2, 2, 3), 3), ((2, 2, 4), 4)])
def test_corner_entries_of_u(orders, r, assembled_potentials):
    structure = quantum_structure(assembled_potentials[orders])
    assert corner_entries(structure) == {"t0_s": 4 * r, "s_t0": Fraction(1, r)}


def test_x_product_with_z_at_origin(potential_222):
    # x o z = 2 q y at a = b = 0
    structure = quantum_structure(potential_222, q=1)
    product = structure.basis_product("t1_1", "t3_1")
    assert product == {"t2_1": 2}


def test_order_three_cap_sextic_term():
    cap = fixture_cap(3)
    assert cap.a_terms.names == ("t0", "t1", "t2")
    assert cap.a_terms == SparsePoly.from_expr(
        "t0*t1*t2/3 + t1**3/18 - t1**2*t2**2/36 + t1*t2**4/648 - t2**6/19440", cap.a_terms.variables)


@pytest.mark.parametrize("orders, flagged", [((2, 2, 2), True), ((2, 2, 3), False), ((2, 2, 4), False),
                                             ((2, 3, 3), False)])
def test_reference_correction_flags(orders, flagged):
    assert bool(reference_potential(orders).flags) == flagged
