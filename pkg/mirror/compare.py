"""
Exact comparison of finite-dimensional algebras and of structure tensors
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from algebra.groebner import QuotientAlgebra
from algebra.sparse_poly import SparsePoly

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlgebraComparison:
    """
    equal: the generator map is a well-defined isomorphism
    failures: number of defining relations not sent into the target ideal
    rank: rank of the image of the source basis in the target
    """
    equal: bool
    failures: int
    rank: int
    dimensions: Tuple[int, int]
    worst: Optional[str] = None

    def to_json(self) -> Dict:
        return {"equal": self.equal, "failures": self.failures, "rank": self.rank,
                "dimensions": list(self.dimensions), "worst": self.worst}


def apply_generator_map(poly: SparsePoly, images: Mapping[str, SparsePoly], variables) -> SparsePoly:
    """poly with each variable replaced by its image, over the target variables"""
    total = SparsePoly.zero(variables)
    powers: Dict[Tuple[str, int], SparsePoly] = {}
    for exps, coeff in poly.terms.items():
        term = SparsePoly.constant(variables, coeff)
        for name, e in zip(poly.names, exps):
            if e:
                if (name, e) not in powers:
                    powers[(name, e)] = images[name].with_variables(variables) ** e
                term = term * powers[(name, e)]
        total = total + term
    return total


def compare_algebras(first: QuotientAlgebra, second: QuotientAlgebra,
                     generator_map: Optional[Mapping[str, SparsePoly]] = None) -> AlgebraComparison:
    """
    Decide whether x -> generator_map[x] induces an isomorphism first -> second

    The map is well defined when every Groebner element of the first ideal lands in the
    second ideal, and bijective when the images of the first monomial basis have full rank.
    By default each generator goes to the generator of the same name.
    """
    dims = (first.dimension, second.dimension)
    if generator_map is None:
        generator_map = {n: SparsePoly.variable(second.variables, n) for n in first.names}
    missing = [n for n in first.names if n not in generator_map]
    if missing:
        raise ValueError(f"Unsupported generator map: no image for {missing}")

    failures = 0
    worst = None
    for relation in first.groebner_basis:
        image = apply_generator_map(relation, generator_map, second.variables)
        if not second.contains(image):
            failures += 1
            worst = worst or str(relation)
    columns = []
    for exps in first.monomial_basis:
        monomial = SparsePoly.monomial(first.variables, dict(zip(first.names, exps)))
        columns.append(second.element_vector(apply_generator_map(monomial, generator_map, second.variables)))
    rank = sympy.Matrix.hstack(*columns).rank() if columns else 0
    equal = failures == 0 and dims[0] == dims[1] and rank == dims[1]
    if not equal:
        logger.warning(f"Algebras differ: dimensions {dims}, {failures} relation failures, rank {rank}")
    return AlgebraComparison(equal, failures, rank, dims, worst)


def structure_mismatch(first: Sequence[Sequence[Sequence]], second: Sequence[Sequence[Sequence]],
                       order: Sequence[int]) -> Tuple[float, Optional[Tuple[int, int, int]]]:
    """
    max |first[i][j][k] - second[o_i][o_j][o_k]| with o = order

    Returns:
        (magnitude, worst index triple in the first tensor's basis)
    """
    worst_value, worst_index = 0.0, None
    n = len(order)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                gap = abs(float(Fraction(first[i][j][k]) - Fraction(second[order[i]][order[j]][order[k]])))
                if gap > worst_value:
                    worst_value, worst_index = gap, (i, j, k)
    return worst_value, worst_index


def matrix_mismatch(first: Sequence[Sequence], second: Sequence[Sequence], order: Sequence[int]) -> float:
    n = len(order)
    return max((abs(float(first[i][j]) - float(second[order[i]][order[j]]))
                for i in range(n) for j in range(n)), default=0.0)


def vector_mismatch(first: Sequence, second: Sequence, order: Sequence[int]) -> float:
    return max((abs(float(first[i]) - float(second[order[i]])) for i in range(len(order))), default=0.0)


def reorder(names: Sequence[str], target: Sequence[str], mapping: Mapping[str, str]) -> List[int]:
    """Positions in `target` of mapping[name] for each name"""
    position = {n: i for i, n in enumerate(target)}
    return [position[mapping[n]] for n in names]
