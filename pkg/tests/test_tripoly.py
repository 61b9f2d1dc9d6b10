"""
Tests for tri-polynomial spaces, residue pairings, flat coordinates and the Euler operator
"""

import random

import pytest

from algebra.errors import DegeneratePointError, StructuralError
from algebra.sparse_poly import SparsePoly
from mirror.presentation import mirror_point
from tripoly.flat import (check_gamma_residues, e6_closed_forms, e6_gamma0_slice, expected_pairing,
                          flat_coordinate_system, flat_coordinates, flat_names, gamma_from_log_expansion,
                          gamma_from_residue, pairing_deviation)
from tripoly.jacobian import (euler_matches_superpotential, frobenius_point_data, invariance_error,
                              jacobian_algebra, residue_pairing)
from tripoly.potentiality import potentiality_check
from tripoly.space import TriPolyPoint, TriPolySpace
from tripoly.spectrum import CRITICAL_VALUE_TOL, TRACE_TOL, u_operator_spectrum

SPACES = [(2, 2, 2), (2, 2, 4), (2, 3, 3), (3, 3, 1)]
POINTS_PER_FAMILY = 5


def generic_points(space, count, seed=0):
    rng = random.Random(seed)
    points = []
    while len(points) < count:
        point = space.random_point(rng)
        try:
            jacobian_algebra(point)
        except DegeneratePointError:
            continue
        points.append(point)
    return points


@pytest.mark.parametrize("degrees, family, dimension", [
    ((2, 2, 2), "D", 5), ((2, 2, 5), "D", 8), ((2, 3, 3), "E", 7), ((2, 3, 5), "E", 9), ((3, 4, 1), "A", 7),
])
def test_space_shape(degrees, family, dimension):
    space = TriPolySpace(*degrees)
    assert space.family == family
    assert space.dimension == dimension
    assert len(space.coordinate_names) == dimension


@pytest.mark.parametrize("degrees", [(2, 3, 6), (3, 3, 2), (0, 2, 2)])
def test_unsupported_degrees(degrees):
    with pytest.raises(ValueError):
        TriPolySpace(*degrees)


def test_point_validation():
    space = TriPolySpace(2, 2, 2)
    with pytest.raises(ValueError):
        TriPolyPoint.from_mapping(space, {"a2": 1})
    with pytest.raises(ValueError):
        TriPolyPoint.from_mapping(space, {"W": 0})


def test_superpotential_of_mirror_point():
    point = mirror_point(3).point
    expected = SparsePoly.from_expr("-x*y*z + x**2 + y**2 + z**3 - 3*z", point.space.space_variables())
    assert point.superpotential() == expected


@pytest.mark.parametrize("degrees", SPACES)
def test_jacobian_dimension_and_euler_field(degrees):
    space = TriPolySpace(*degrees)
    for point in generic_points(space, POINTS_PER_FAMILY):
        data = frobenius_point_data(point)
        assert data.algebra.dimension == space.dimension
        assert euler_matches_superpotential(data)


@pytest.mark.parametrize("degrees", SPACES)
def test_residue_pairing_is_invariant(degrees):
    space = TriPolySpace(*degrees)
    for point in generic_points(space, POINTS_PER_FAMILY, seed=3):
        assert invariance_error(frobenius_point_data(point)) <= 1e-9


def test_numeric_pairing_agrees_with_trace():
    point = generic_points(TriPolySpace(2, 2, 2), 1, seed=5)[0]
    exact = residue_pairing(point, "trace")
    numeric = residue_pairing(point, "critical-points")
    n = len(exact)
    assert max(abs(complex(numeric[i][j]) - float(exact[i][j])) for i in range(n) for j in range(n)) < 1e-8


@pytest.mark.parametrize("degrees", SPACES)
def test_pairing_is_constant_in_flat_coordinates(degrees):
    space = TriPolySpace(*degrees)
    for point in generic_points(space, POINTS_PER_FAMILY, seed=7):
        data = frobenius_point_data(point)
        chart = flat_coordinates(space, point)
        assert pairing_deviation(chart.to_flat_pairing(data.pairing), space) <= 1e-8


def test_expected_pairing_shape():
    space = TriPolySpace(2, 2, 3)
    names = flat_names(space)
    g = expected_pairing(space)
    assert g[names.index("gamma1")][names.index("gamma2")] == pytest.approx(1 / 3)
    assert g[names.index("gamma0")][names.index("dlog")] == 1
    assert g[names.index("alpha1")][names.index("alpha1")] == pytest.approx(1 / 2)


def test_e6_ansatz_matches_closed_forms():
    space = TriPolySpace(2, 3, 3)
    system = flat_coordinate_system(space, "ansatz")
    for name, poly in e6_closed_forms(space).items():
        assert system.polynomials[name] == poly
    on_slice = system.polynomials["gamma0"].partial_evaluate({"b1": 0, "b2": 0, "c1": 0, "c2": 0})
    assert on_slice == e6_gamma0_slice(space)


def test_series_and_ansatz_agree_for_d_family():
    space = TriPolySpace(2, 2, 3)
    series = flat_coordinate_system(space, "series")
    ansatz = flat_coordinate_system(space, "ansatz")
    for name in series.polynomials:
        assert series.polynomials[name] == ansatz.polynomials[name]


def test_unknown_flat_method():
    with pytest.raises(ValueError):
        flat_coordinate_system(TriPolySpace(2, 2, 2), "guess")


@pytest.mark.parametrize("degrees", SPACES)
def test_potentiality(degrees):
    space = TriPolySpace(*degrees)
    report = potentiality_check(generic_points(space, POINTS_PER_FAMILY, seed=11), max_workers=2)
    assert report.passed(1e-6)


def test_u_spectrum_distinct_at_generic_mirror_point():
    spectrum = u_operator_spectrum(mirror_point(4, 1, 2).point)
    assert spectrum.distinct
    assert spectrum.gap > 1e-6
    assert len(spectrum.eigenvalues) == 7


def test_u_spectrum_degenerate_at_origin():
    spectrum = u_operator_spectrum(mirror_point(4).point)
    assert not spectrum.distinct


@pytest.mark.parametrize("degrees", SPACES)
def test_u_spectrum_is_the_critical_values(degrees):
    space = TriPolySpace(*degrees)
    rng = random.Random(17)
    checked = 0
    while checked < 3:
        point = space.random_point(rng)
        try:
            spectrum = u_operator_spectrum(point)
        except DegeneratePointError:
            continue
        if not spectrum.distinct:
            continue
        assert spectrum.critical_values is not None
        assert spectrum.critical_value_mismatch() <= CRITICAL_VALUE_TOL
        assert spectrum.trace_mismatch() <= TRACE_TOL
        assert spectrum.matches_critical_values()
        checked += 1


def test_u_spectrum_trace_at_mirror_point():
    spectrum = u_operator_spectrum(mirror_point(4, 1, 2).point)
    assert float(spectrum.trace) == pytest.approx(sum(spectrum.critical_values).real, abs=1e-8)
    assert spectrum.to_json()["matches_critical_values"]


def test_degenerate_spectrum_skips_critical_values():
    spectrum = u_operator_spectrum(mirror_point(4).point)
    assert spectrum.critical_values is None
    assert spectrum.matches_critical_values()


@pytest.mark.parametrize("degrees", [(2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 2, 5)])
def test_gamma_residue_formula_matches_log_expansion(degrees):
    space = TriPolySpace(*degrees)
    gammas = gamma_from_log_expansion(space)
    for k in range(1, space.r):
        assert gamma_from_residue(space, k) == gammas[f"gamma{k}"]
    check_gamma_residues(space, gammas)


def test_gamma_residue_closed_form():
    space = TriPolySpace(2, 2, 3)
    expected = SparsePoly.from_expr("c1 - c2**2/6 + 3*W**2", space.parameter_variables())
    assert gamma_from_residue(space, 1) == expected
    with pytest.raises(ValueError):
        gamma_from_residue(space, 3)


def test_gamma_residue_check_rejects_wrong_normalization():
    space = TriPolySpace(2, 2, 3)
    gammas = gamma_from_log_expansion(space)
    gammas["gamma1"] = gammas["gamma1"] * 2
    with pytest.raises(StructuralError):
        check_gamma_residues(space, gammas)
