"""
Tests for Seifert bundles, Fourier series and zero-mode Hamiltonians
"""

from fractions import Fraction

import pytest

from algebra.sparse_poly import SparsePoly
from orbigw.orbicurve import QUANTUM, Orbicurve
from seifert.bundle import SeifertBundle, section_constraint, seifert_invariants, shipped_bundles
from seifert.fourier import FourierSeriesPoly
from seifert.hamiltonian import (base_polynomial, conjugation_symmetric, fourier_expansion, mode_layout, mode_name,
                                 quadrature_check, sft_hamiltonian, slice_polynomial, t_name, truncation_monotone)

SMOOTH = SeifertBundle(Orbicurve(0, ()), 1)
ORBIFOLD_222 = SeifertBundle.from_desingularization(Orbicurve(0, (2, 2, 2)), 0, (1, 1, 1))


def slice_of(bundle):
    return slice_polynomial(base_polynomial(bundle))


def test_invariants_of_shipped_bundles():
    invariants = seifert_invariants(ORBIFOLD_222)
    assert invariants["c1"] == Fraction(3, 2)
    assert invariants["N"] == 8
    assert invariants["b"] == 0
    smooth = seifert_invariants(SMOOTH)
    assert smooth["N"] == 1
    assert set(smooth["shifts"].values()) == {0}
    assert [name for name, _ in shipped_bundles()] == ["prequantization", "p1_2_2_2"]


def test_degree_shifts():
    bundle = SeifertBundle.from_desingularization(Orbicurve(0, (2, 3, 7)), 0, (1, 1, 1))
    shifts = seifert_invariants(bundle)["shifts"]
    assert shifts["t2_1"] == Fraction(1, 3)
    assert shifts["t3_5"] == Fraction(5, 7)


def test_non_integral_desingularization_rejected():
    with pytest.raises(ValueError):
        SeifertBundle(Orbicurve(0, (2, 2, 2)), 1, (1, 1, 1))
    with pytest.raises(ValueError):
        SeifertBundle(Orbicurve(0, (2, 2)), 1, (1,))


def test_section_constraint():
    half = SeifertBundle(Orbicurve(0, (2,)), Fraction(1, 2), (1,))
    assert section_constraint([1], [1], 1, SMOOTH)
    assert section_constraint([1, 1], [2, 2], 1, SMOOTH)
    assert not section_constraint([1], [3], 1, half)
    with pytest.raises(ValueError):
        section_constraint([1], [0], 1, SMOOTH)


def test_fourier_series_exponents():
    variables = ["u"]
    one = SparsePoly.constant(variables, 1)
    with pytest.raises(ValueError):
        FourierSeriesPoly.mode(2, Fraction(1, 3), one)
    wave = FourierSeriesPoly.mode(2, Fraction(1, 2), one) + FourierSeriesPoly.mode(2, Fraction(-1, 2), one)
    square = wave ** 2
    assert square.zero_mode() == 2
    assert square.exponents() == [-1, 0, 1]
    assert (wave + wave * -1).is_zero()
    assert square.evaluate(0.0, {}) == pytest.approx(4)


def test_mode_layout_degrees():
    layout = mode_layout(ORBIFOLD_222, 2)
    degrees = {v.name: v.degree for v in layout.variables}
    # chi = 1/2, c = 3/2, twisted exponent k/2
    assert layout.exponents[("t1_1", 1)] == Fraction(1, 2)
    assert degrees[mode_name("q", 1, "t1_1")] - degrees[t_name("t1_1")] == Fraction(1, 3)
    assert degrees[mode_name("p", 1, "t1_1")] - degrees[t_name("t1_1")] == Fraction(-1, 3)
    with pytest.raises(ValueError):
        mode_layout(SMOOTH, 0)


def test_smooth_hamiltonian():
    result = sft_hamiltonian(SMOOTH, truncation=3)
    variables = result.hamiltonian.variables
    expected = SparsePoly.monomial(variables, {t_name("t0"): 2}, Fraction(1, 2))
    for k in range(1, 4):
        expected = expected + SparsePoly.monomial(variables, {mode_name("p", k, "t0"): 1,
                                                              mode_name("q", k, "t0"): 1})
    assert result.hamiltonian == expected
    assert result.boundary_terms == 1
    assert result.to_json()["K"] == 3


def test_vanishing_modes_keep_degree_zero_part():
    f = slice_of(ORBIFOLD_222)
    result = sft_hamiltonian(ORBIFOLD_222, f, truncation=2)
    layout = mode_layout(ORBIFOLD_222, 2)
    t_values = {"t0": Fraction(1, 2), "t1_1": 2, "t2_1": -1, "t3_1": Fraction(1, 3), "s": 1}
    values = {name: 0 for name in layout.names}
    values.update({t_name(label): value for label, value in t_values.items()})
    expected = f.evaluate({**{n: v for n, v in t_values.items() if n in f.names}, QUANTUM: 0})
    assert result.hamiltonian.evaluate(values) == expected


def test_expansion_rejects_foreign_variables():
    f = SparsePoly.from_expr("t0 + w", ["t0", "w"])
    with pytest.raises(ValueError):
        fourier_expansion(SMOOTH, f)


@pytest.mark.parametrize("name, bundle, truncation", [("prequantization", SMOOTH, 5), ("p1_2_2_2", ORBIFOLD_222, 3)])
def test_quadrature_agrees_with_zero_mode(name, bundle, truncation):
    report = quadrature_check(bundle, truncation=truncation)
    assert report.samples == 10
    assert report.passed()


def test_truncation_monotone():
    assert truncation_monotone(SMOOTH, slice_of(SMOOTH), (3, 4, 5, 6))
    assert truncation_monotone(ORBIFOLD_222, slice_of(ORBIFOLD_222), (2, 3))


def test_conjugation_symmetry():
    assert conjugation_symmetric(ORBIFOLD_222, slice_of(ORBIFOLD_222), 2)


def test_orbifold_hamiltonian_is_homogeneous():
    f = slice_of(ORBIFOLD_222)
    assert f.is_homogeneous()
    assert sft_hamiltonian(ORBIFOLD_222, f, truncation=2).hamiltonian.is_homogeneous()
