"""
Jacobian algebra and residue pairing of a tri-polynomial at a point
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
import sympy

from algebra.errors import DegeneratePointError, PositiveDimensionalIdealError
from algebra.groebner import DEFAULT_BIT_CAP, QuotientAlgebra, groebner_quotient
from algebra.linear import minimal_gap
from algebra.rational import to_fraction
from algebra.sparse_poly import SparsePoly
from tripoly.space import X, Y, Z, TriPolyPoint

logger = logging.getLogger(__name__)

PAIRING_METHODS = ("critical-points", "trace")
DEFAULT_CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class CriticalPoint:
    """Values of the monomial basis at a critical point, with x, y, z, F and the Hessian there"""
    basis_values: np.ndarray
    coordinates: Dict[str, complex]
    value: complex
    hessian: complex


@dataclass(frozen=True)
class FrobeniusPointData:
    """
    Algebra, tangent identification and residue pairing at one point

    tangent: column i holds the algebra coordinates of dF/d(names[i])
    pairing: g(d_i, d_j) in the original coordinate basis
    """
    point: TriPolyPoint
    algebra: QuotientAlgebra
    names: List[str]
    tangent: sympy.ImmutableMatrix
    pairing: List[List]
    method: str
    euler_class: SparsePoly

    @property
    def exact(self) -> bool:
        return self.method == "trace"

    def unit_index(self) -> int:
        return self.names.index("c0")

    def tangent_product(self, i: int, j: int) -> sympy.Matrix:
        """Algebra coordinates of d_i o d_j"""
        return self.algebra.multiplication_operator(self._tangent_poly(i)) * self.tangent[:, j]

    def _tangent_poly(self, i: int) -> SparsePoly:
        return self.point.tangent_images()[self.names[i]]

    def structure_constants(self) -> List[List[List[Fraction]]]:
        """c[i][j][k]: component of d_i o d_j along d_k"""
        inverse = self.tangent.inv()
        n = len(self.names)
        table = []
        for i in range(n):
            op = self.algebra.multiplication_operator(self._tangent_poly(i))
            products = inverse * op * self.tangent
            table.append([[to_fraction(products[k, j]) for k in range(n)] for j in range(n)])
        return table


def hessian_determinant(f: SparsePoly) -> SparsePoly:
    names = (X, Y, Z)
    h = [[f.derivative(a).derivative(b) for b in names] for a in names]
    return (h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
            - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
            + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]))


def jacobian_algebra(point: TriPolyPoint, bit_cap: int = DEFAULT_BIT_CAP) -> QuotientAlgebra:
    """
    C[x,y,z]/(F_x, F_y, F_z) at the point

    Raises:
        DegeneratePointError: the ideal is positive-dimensional or has the wrong length
    """
    f = point.superpotential()
    variables = point.space.space_variables()
    generators = [f.derivative(n).with_variables(variables) for n in (X, Y, Z)]
    try:
        algebra = groebner_quotient(generators, variables=variables, bit_cap=bit_cap)
    except PositiveDimensionalIdealError as e:
        logger.error(f"Jacobian ideal of {point.space.name} is not zero-dimensional")
        raise DegeneratePointError(f"Jacobian ideal is not zero-dimensional (direction {e.witness})",
                                   witness=e.witness)
    expected = point.space.dimension
    if algebra.dimension != expected:
        logger.error(f"Jacobian algebra has dimension {algebra.dimension}, expected {expected}")
        raise DegeneratePointError(f"Jacobian algebra has dimension {algebra.dimension}, expected {expected}",
                                   dimension=algebra.dimension, expected=expected)
    return algebra


def tangent_matrix(point: TriPolyPoint, algebra: QuotientAlgebra) -> sympy.ImmutableMatrix:
    images = point.tangent_images()
    columns = [algebra.element_vector(images[n]) for n in point.space.coordinate_names]
    return sympy.ImmutableMatrix.hstack(*columns)


def critical_points(algebra: QuotientAlgebra, f: SparsePoly, seed: int = 0,
                    tol: float = DEFAULT_CLUSTER_TOL) -> List[CriticalPoint]:
    """
    Critical points from the joint eigenvectors of the multiplication matrices

    Raises:
        DegeneratePointError: two eigenvalues of a random combination cluster
    """
    rng = random.Random(seed)
    matrices = [np.array(m.tolist(), dtype=float) for m in algebra.mult_matrices]
    combination = sum(rng.uniform(0.5, 1.5) * m for m in matrices)
    values, vectors = np.linalg.eig(combination.T)
    scale = max(1.0, float(np.max(np.abs(values))))
    if minimal_gap(list(values)) < tol * scale:
        logger.error(f"Clustered eigenvalues at gap {minimal_gap(list(values)):.3e}")
        raise DegeneratePointError("Non-simple critical point; choose a nearby sample point",
                                   gap=float(minimal_gap(list(values))))
    unit = algebra.monomial_basis.index((0,) * len(algebra.variables))
    f_vec = np.array([complex(v) for v in algebra.element_vector(f)], dtype=complex)
    h_vec = np.array([complex(v) for v in algebra.element_vector(hessian_determinant(f))], dtype=complex)
    points = []
    for idx in range(len(values)):
        w = vectors[:, idx]
        if abs(w[unit]) < tol:
            raise DegeneratePointError("Eigenvector vanishes on the unit; choose a nearby sample point")
        w = w / w[unit]
        coords = {name: complex((m.T @ w)[unit]) for name, m in zip(algebra.names, matrices)}
        points.append(CriticalPoint(w, coords, complex(w @ f_vec), complex(w @ h_vec)))
    return points


def _pairing_critical(algebra: QuotientAlgebra, f: SparsePoly, tangent: sympy.Matrix,
                      seed: int) -> List[List[float]]:
    vectors = np.array(tangent.tolist(), dtype=float)
    n = vectors.shape[1]
    pairing = np.zeros((n, n), dtype=complex)
    for crit in critical_points(algebra, f, seed):
        values = crit.basis_values @ vectors
        pairing -= np.outer(values, values) / crit.hessian
    if np.max(np.abs(pairing.imag)) > 1e-7 * max(1.0, np.max(np.abs(pairing.real))):
        logger.warning(f"Residue pairing has imaginary part {np.max(np.abs(pairing.imag)):.3e}")
    return pairing.real.tolist()


def residue_functional(algebra: QuotientAlgebra, f: SparsePoly) -> sympy.Matrix:
    """
    Row vector rho with rho(phi) = sum over critical points of phi / Hess

    Solves M_Hess^T rho = (trace of multiplication by each basis monomial).
    """
    names = algebra.names
    traces = []
    for exps in algebra.monomial_basis:
        op = algebra.multiplication_operator(SparsePoly.monomial(algebra.variables, dict(zip(names, exps))))
        traces.append(op.trace())
    hess = algebra.multiplication_operator(hessian_determinant(f))
    if hess.det() == 0:
        logger.error("Hessian is not invertible in the Jacobian algebra")
        raise DegeneratePointError("Non-simple critical point: Hessian is a zero divisor")
    return hess.T.LUsolve(sympy.Matrix(traces)).T


def _pairing_trace(algebra: QuotientAlgebra, f: SparsePoly, tangent: sympy.Matrix,
                   images: Sequence[SparsePoly]) -> List[List[Fraction]]:
    rho = residue_functional(algebra, f)
    n = tangent.cols
    pairing = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        op = algebra.multiplication_operator(images[i])
        for j in range(i, n):
            value = -to_fraction((rho * op * tangent[:, j])[0, 0])
            pairing[i][j] = pairing[j][i] = value
    return pairing


def residue_pairing(point: TriPolyPoint, method: str = "critical-points",
                    algebra: Optional[QuotientAlgebra] = None, seed: int = 0) -> List[List]:
    """
    g(d, d') = - sum over critical points of d(F) d'(F) / Hess(F)

    Args:
        point: tri-polynomial point
        method: "critical-points" (numeric, joint eigenvectors) or "trace" (exact)
        algebra: precomputed Jacobian algebra
        seed: seed for the random linear combination in the numeric method

    Returns:
        Matrix in the coordinate basis a, b, c, dlog
    """
    if method not in PAIRING_METHODS:
        raise ValueError(f"Unsupported pairing method: {method}")
    algebra = algebra or jacobian_algebra(point)
    f = point.superpotential().with_variables(algebra.variables)
    tangent = tangent_matrix(point, algebra)
    if method == "trace":
        images = point.tangent_images()
        return _pairing_trace(algebra, f, tangent, [images[n] for n in point.space.coordinate_names])
    return _pairing_critical(algebra, f, tangent, seed)


def frobenius_point_data(point: TriPolyPoint, method: str = "trace", seed: int = 0) -> FrobeniusPointData:
    algebra = jacobian_algebra(point)
    f = point.superpotential().with_variables(algebra.variables)
    data = FrobeniusPointData(
        point=point,
        algebra=algebra,
        names=list(point.space.coordinate_names),
        tangent=tangent_matrix(point, algebra),
        pairing=residue_pairing(point, method, algebra, seed),
        method=method,
        euler_class=algebra.normal_form(f),
    )
    logger.debug(f"Frobenius data of {point.space.name} via {method}")
    return data


def euler_image(point: TriPolyPoint) -> SparsePoly:
    """Image of the Euler field: sum of weight * coordinate * dF/dcoordinate, plus chi dF/ddlog"""
    weights = point.space.weights()
    values = point.parameter_values()
    images = point.tangent_images()
    total = images["dlog"] * point.space.chi
    for name, value in values.items():
        if name in images and value:
            total = total + images[name] * (weights[name] * value)
    return total


def euler_matches_superpotential(data: FrobeniusPointData) -> bool:
    """E corresponds to the class of F"""
    algebra = data.algebra
    f = data.point.superpotential().with_variables(algebra.variables)
    return algebra.contains(euler_image(data.point).with_variables(algebra.variables) - f)


def invariance_error(data: FrobeniusPointData, triples: Optional[Sequence] = None, seed: int = 0) -> float:
    """max |g(u o v, w) - g(u, v o w)| over basis triples"""
    n = len(data.names)
    c = data.structure_constants()
    g = data.pairing
    if triples is None:
        rng = random.Random(seed)
        triples = [(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(3 * n)]
    worst = 0.0
    for i, j, k in triples:
        left = sum(c[i][j][m] * g[m][k] for m in range(n))
        right = sum(g[i][m] * c[j][k][m] for m in range(n))
        worst = max(worst, abs(float(left) - float(right)))
    return worst


def numeric(matrix) -> List[List[float]]:
    return [[float(x) for x in row] for row in matrix]
