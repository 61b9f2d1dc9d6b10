"""
Euler multiplication operator U = E o on a tri-polynomial space
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from algebra.errors import DegeneratePointError
from algebra.groebner import QuotientAlgebra
from algebra.linear import (DEFAULT_EIGEN_TOL, eigenvalues_numeric, matrix_to_json, minimal_gap, to_fraction_rows,
                            to_sympy_matrix)
from tripoly.flat import FlatChart, flat_coordinates
from tripoly.jacobian import critical_points, jacobian_algebra, tangent_matrix
from tripoly.space import TriPolyPoint

logger = logging.getLogger(__name__)

CRITICAL_VALUE_TOL = 1e-7
TRACE_TOL = 1e-8
DISTINCT_GAP = 1e-6


def matched_distance(values: Sequence[complex], targets: Sequence[complex]) -> float:
    """Largest distance when each value is paired with its nearest unused target"""
    if len(values) != len(targets):
        return float("inf")
    remaining = list(targets)
    worst = 0.0
    for value in values:
        nearest = min(range(len(remaining)), key=lambda i: abs(value - remaining[i]))
        worst = max(worst, abs(value - remaining.pop(nearest)))
    return worst


def critical_values(point: TriPolyPoint, algebra: Optional[QuotientAlgebra] = None,
                    seed: int = 0) -> Optional[List[complex]]:
    """Values of F at its critical points, or None when they cannot be separated numerically"""
    algebra = algebra or jacobian_algebra(point)
    f = point.superpotential().with_variables(algebra.variables)
    try:
        return sorted((c.value for c in critical_points(algebra, f, seed)),
                      key=lambda v: (round(v.real, 12), round(v.imag, 12)))
    except DegeneratePointError:
        logger.warning(f"Critical points of {point.space.name} not separable at {point.to_dict()}")
        return None


@dataclass(frozen=True)
class USpectrum:
    """
    U in the flat frame with its eigenvalues

    critical_values is None at a repeated spectrum or when the critical points could not be separated numerically.
    """
    names: List[str]
    U: List[List[Fraction]]
    eigenvalues: List[complex]
    gap: float
    trace: Fraction
    critical_values: Optional[List[complex]]

    @property
    def distinct(self) -> bool:
        return self.gap > DISTINCT_GAP

    def critical_value_mismatch(self) -> Optional[float]:
        """Distance between the spectrum and the critical values of F"""
        if self.critical_values is None:
            return None
        return matched_distance(self.eigenvalues, self.critical_values)

    def trace_mismatch(self) -> Optional[float]:
        """|tr U - sum of critical values|"""
        if self.critical_values is None:
            return None
        return abs(complex(float(self.trace)) - sum(self.critical_values))

    def matches_critical_values(self) -> bool:
        """Spectrum and trace agree with the critical values; vacuous when those are unavailable"""
        if self.critical_values is None:
            return True
        return self.critical_value_mismatch() <= CRITICAL_VALUE_TOL and self.trace_mismatch() <= TRACE_TOL

    def to_json(self) -> Dict:
        values = self.critical_values
        return {
            "basis": list(self.names),
            "U": matrix_to_json(self.U),
            "eigenvalues": [[float(f"{v.real:.12g}"), float(f"{v.imag:.12g}")] for v in self.eigenvalues],
            "gap": float(f"{self.gap:.12g}"),
            "trace": str(self.trace),
            "critical_values": None if values is None else
            [[float(f"{v.real:.12g}"), float(f"{v.imag:.12g}")] for v in values],
            "critical_value_mismatch": self.critical_value_mismatch(),
            "trace_mismatch": self.trace_mismatch(),
            "matches_critical_values": self.matches_critical_values(),
        }


def u_operator(point: TriPolyPoint, chart: Optional[FlatChart] = None,
               algebra: Optional[QuotientAlgebra] = None) -> List[List[Fraction]]:
    """Multiplication by the class of F, moved to the tangent frame and then to the flat frame"""
    algebra = algebra or jacobian_algebra(point)
    f = point.superpotential().with_variables(algebra.variables)
    phi = tangent_matrix(point, algebra)
    u_orig = phi.inv() * algebra.multiplication_operator(f) * phi
    chart = chart or flat_coordinates(point.space, point)
    j = to_sympy_matrix(chart.jacobian)
    return to_fraction_rows(j * u_orig * j.inv())


def u_operator_spectrum(point: TriPolyPoint, seed: int = 0, eigen_tol: float = DEFAULT_EIGEN_TOL) -> USpectrum:
    chart = flat_coordinates(point.space, point)
    algebra = jacobian_algebra(point)
    u = u_operator(point, chart, algebra)
    eigenvalues = eigenvalues_numeric(u, eigen_tol)
    trace = sum((u[i][i] for i in range(len(u))), Fraction(0))
    gap = minimal_gap(eigenvalues)
    values = critical_values(point, algebra, seed) if gap > DISTINCT_GAP else None
    spectrum = USpectrum(chart.names, u, eigenvalues, gap, trace, values)
    if not spectrum.matches_critical_values():
        logger.warning(f"U spectrum of {point.space.name} misses the critical values by "
                       f"{spectrum.critical_value_mismatch():.3e} (trace {spectrum.trace_mismatch():.3e})")
    logger.info(f"U spectrum of {point.space.name}: gap {spectrum.gap:.3e}")
    return spectrum
