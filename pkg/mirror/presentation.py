"""
Quantum cohomology presentation of P1_{2,2,r} and its mirror tri-polynomial
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List

from algebra.errors import StructuralError
from algebra.groebner import QuotientAlgebra, groebner_quotient
from algebra.rational import format_rational, to_fraction
from algebra.sparse_poly import SparsePoly
from tripoly.space import X, Y, Z, TriPolyPoint, TriPolySpace

logger = logging.getLogger(__name__)


def _coefficient(r: int, k: int) -> Fraction:
    """(r-k-1)! / (k! (r-2k)!)"""
    return Fraction(factorial(r - k - 1), factorial(k) * factorial(r - 2 * k))


def presentation_relations(r: int, a, b, q) -> List[SparsePoly]:
    """
    xy = r q z^{r-1} - r sum_k (-1)^{k-1} (r-2k) c_k q^{2k+1} z^{r-2k-1},  xz = 2qy + bq,  yz = 2qx + aq

    At q = 0 the classical orbifold ring is returned instead.
    """
    a, b, q = to_fraction(a), to_fraction(b), to_fraction(q)
    variables = TriPolySpace(2, 2, r).space_variables()
    x, y, z = (SparsePoly.variable(variables, n) for n in (X, Y, Z))
    if q == 0:
        return [x * y, x * z, y * z, x ** 2 * 2 - z ** r * r, y ** 2 * 2 - z ** r * r, z ** (r + 1)]
    xy = x * y - z ** (r - 1) * (r * q)
    for k in range(1, (r - 1) // 2 + 1):
        coeff = r * (-1) ** (k - 1) * (r - 2 * k) * _coefficient(r, k) * q ** (2 * k + 1)
        xy = xy + z ** (r - 2 * k - 1) * coeff
    return [xy, x * z - y * (2 * q) - b * q, y * z - x * (2 * q) - a * q]


@dataclass(frozen=True)
class QuantumPresentation:
    r: int
    a: Fraction
    b: Fraction
    q: Fraction
    relations: List[SparsePoly]
    algebra: QuotientAlgebra

    def to_json(self) -> Dict:
        return {
            "r": self.r,
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "q": format_rational(self.q),
            "relations": [str(rel) for rel in self.relations],
            "basis": self.algebra.basis_labels(),
        }


def quantum_presentation(r: int, a=0, b=0, q=1) -> QuantumPresentation:
    """
    Quotient of C[x, y, z] by the product relations of P1_{2,2,r} at t = a x + b y

    Raises:
        StructuralError: the quotient does not have dimension r + 3
    """
    if r < 2:
        raise ValueError(f"Unsupported r = {r}: the presentation needs r >= 2")
    relations = presentation_relations(r, a, b, q)
    algebra = groebner_quotient(relations, variables=relations[0].variables)
    if algebra.dimension != r + 3:
        logger.error(f"Presentation of P1_2,2,{r} has dimension {algebra.dimension}")
        raise StructuralError(f"Presentation has dimension {algebra.dimension}, expected {r + 3}",
                              dimension=algebra.dimension, expected=r + 3)
    return QuantumPresentation(r, to_fraction(a), to_fraction(b), to_fraction(q), relations, algebra)


@dataclass(frozen=True)
class MirrorPoint:
    """
    Tri-polynomial point whose Jacobian algebra is the presentation at (a, b, q)

    The presentation generator z corresponds to q z on the tri-polynomial side.
    """
    r: int
    a: Fraction
    b: Fraction
    q: Fraction
    point: TriPolyPoint

    def generator_map(self) -> Dict[str, SparsePoly]:
        variables = self.point.space.space_variables()
        return {X: SparsePoly.variable(variables, X), Y: SparsePoly.variable(variables, Y),
                Z: SparsePoly.variable(variables, Z) * self.q}

    def to_json(self) -> Dict:
        return {"r": self.r, "q": format_rational(self.q), "point": self.point.to_dict(),
                "superpotential": str(self.point.superpotential())}


def mirror_point(r: int, a=0, b=0, q=1) -> MirrorPoint:
    """
    F_m = -xyz + x^2 + a x + y^2 + b y + (qz)^r + r sum_k (-1)^k c_k q^{2k} (qz)^{r-2k}

    with c_k = (r-k-1)!/(k!(r-2k)!), the sum over 1 <= k <= (r-1)/2; at q = 1 this is
    -xyz + x^2 + ax + y^2 + by + z^r + r sum_k (-1)^k c_k z^{r-2k}.
    """
    q = to_fraction(q)
    if q <= 0:
        raise ValueError(f"Unsupported q = {q}: the mirror point needs q > 0")
    space = TriPolySpace(2, 2, r)
    c = [Fraction(0)] * r
    for k in range(1, (r - 1) // 2 + 1):
        c[r - 2 * k] = r * (-1) ** k * _coefficient(r, k) * q ** (2 * k)
    point = TriPolyPoint(space, (to_fraction(a),), (to_fraction(b),), tuple(c), q)
    logger.debug(f"Mirror point of P1_2,2,{r}: {point.superpotential()}")
    return MirrorPoint(r, to_fraction(a), to_fraction(b), q, point)
