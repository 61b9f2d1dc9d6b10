"""
Tests for the (2,2,r) presentation, algebra comparison and the staged mirror check
"""

from fractions import Fraction

import pytest

from algebra.sparse_poly import SparsePoly
from mirror.compare import compare_algebras
from mirror.pipeline import lemma_product_check, mirror_check_full, perturbation_slope
from mirror.presentation import mirror_point, presentation_relations, quantum_presentation
from orbigw.fixtures import reference_potential
from tripoly.jacobian import jacobian_algebra
from tripoly.space import TriPolySpace


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_presentation_dimension(r):
    assert quantum_presentation(r).algebra.dimension == r + 3


def test_presentation_relations_r3():
    xy, xz, yz = presentation_relations(3, 0, 0, 1)
    variables = xy.variables
    assert xy == SparsePoly.from_expr("x*y - 3*z**2 + 3", variables)
    assert xz == SparsePoly.from_expr("x*z - 2*y", variables)
    assert yz == SparsePoly.from_expr("y*z - 2*x", variables)


def test_classical_limit():
    relations = presentation_relations(3, 1, 2, 0)
    assert all(len(rel.terms) == 1 for rel in relations[:3])
    assert quantum_presentation(3, q=0).algebra.dimension == 6


SAMPLES = [(1, 2), (Fraction(1, 3), -2), (0, 0)]


@pytest.mark.parametrize("r, a, b", [(r, a, b) for r in (2, 3, 4, 5) for a, b in SAMPLES])
def test_presentation_matches_jacobian_algebra(r, a, b):
    presentation = quantum_presentation(r, a, b)
    mirror = mirror_point(r, a, b)
    comparison = compare_algebras(presentation.algebra, jacobian_algebra(mirror.point), mirror.generator_map())
    assert comparison.equal
    assert comparison.failures == 0


def test_compare_algebra_with_itself():
    algebra = quantum_presentation(3, 1, 2).algebra
    comparison = compare_algebras(algebra, algebra)
    assert comparison.equal
    assert comparison.rank == algebra.dimension


def test_compare_detects_different_algebras():
    comparison = compare_algebras(quantum_presentation(3, 1, 2).algebra, quantum_presentation(3, 2, 1).algebra)
    assert not comparison.equal


def test_mirror_point_rejects_nonpositive_q():
    with pytest.raises(ValueError):
        mirror_point(3, q=0)


def test_lemma_products_hold_in_reference_ring():
    assert all(lemma_product_check(reference_potential((2, 2, 2)), 2, 1, 2).values())


def test_perturbation_slope_is_linear():
    u0 = [[1, 0], [0, 1]]
    v = [[1, 0], [0, -1]]
    result = perturbation_slope(u0, v)
    assert result["slope"] == pytest.approx(1, abs=0.1)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_mirror_check_d_family(r):
    report = mirror_check_full(TriPolySpace(2, 2, r), samples=SAMPLES, max_workers=2)
    assert report.passed, report.failed_stages()
    assert len(report.samples) == 3
    spectrum = report.stages["spectrum"].detail
    # (1, 2) is generic
    assert spectrum["distinct"][0]
    assert spectrum["critical_value_mismatch"] <= 1e-7
    assert spectrum["trace_mismatch"] <= 1e-8
    assert report.stages["pairing"].detail["mismatch"] == 0
    assert report.stages["euler"].detail["mismatch"] == 0
    assert report.to_json()["stages"]["fixtures"]["corners_ok"]


def test_mirror_check_degenerate_origin():
    report = mirror_check_full(TriPolySpace(2, 2, 2), max_workers=2)
    assert not report.stages["spectrum"].detail["distinct"][-1]


def test_mirror_check_e6():
    report = mirror_check_full(TriPolySpace(2, 3, 3), count=2, max_workers=2)
    assert report.passed, report.failed_stages()
