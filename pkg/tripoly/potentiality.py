"""
Finite-difference check that the structure tensor comes from a potential
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from algebra.linear import to_sympy_matrix
from algebra.rational import to_fraction
from tripoly.flat import flat_coordinates
from tripoly.jacobian import jacobian_algebra, residue_functional, tangent_matrix
from tripoly.space import DLOG, SCALE, TriPolyPoint

logger = logging.getLogger(__name__)

DEFAULT_STEP = Fraction(1, 10 ** 4)

Tensor = List[List[List[Fraction]]]


@dataclass
class PotentialityReport:
    points: int
    max_asymmetry: float
    worst: Optional[Tuple[str, str, str, str]]
    symmetric: bool
    unit_deviation: float
    details: List[Dict] = field(default_factory=list)

    def passed(self, tol: float = 1e-6) -> bool:
        return self.symmetric and self.max_asymmetry < tol and self.unit_deviation < 1e-9

    def to_json(self) -> Dict:
        return {
            "points": self.points,
            "max_asymmetry": self.max_asymmetry,
            "worst": list(self.worst) if self.worst else None,
            "structure_symmetric": self.symmetric,
            "unit_deviation": self.unit_deviation,
        }


def lowered_structure_tensor(point: TriPolyPoint) -> Tensor:
    """c_ijk = g(d_i o d_j, d_k) in the coordinate frame (a, b, c, dlog)"""
    algebra = jacobian_algebra(point)
    f = point.superpotential().with_variables(algebra.variables)
    rho = residue_functional(algebra, f)
    tangent = tangent_matrix(point, algebra)
    images = point.tangent_images()
    ops = [algebra.multiplication_operator(images[name]) for name in point.space.coordinate_names]
    n = len(ops)
    tensor = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        left = rho * ops[i]
        for j in range(i, n):
            row = -(left * ops[j] * tangent)
            for k in range(n):
                tensor[i][j][k] = tensor[j][i][k] = to_fraction(row[0, k])
    return tensor


def _contract(tensor: Tensor, inverse: sympy.Matrix) -> Tensor:
    """T'_abc = sum inverse[i, a] inverse[j, b] inverse[k, c] T_ijk"""
    n = len(tensor)
    inv = [[to_fraction(inverse[i, j]) for j in range(n)] for i in range(n)]
    step = tensor
    for _ in range(3):
        # contract the first index and rotate it to the back
        step = [[[sum(inv[i][a] * step[i][b][c] for i in range(n)) for a in range(n)]
                 for c in range(n)] for b in range(n)]
    return step


def flat_structure_tensor(point: TriPolyPoint) -> Tuple[Tensor, sympy.Matrix]:
    """c_abc in the flat frame, with the inverse chart Jacobian at the point"""
    chart = flat_coordinates(point.space, point)
    inverse = to_sympy_matrix(chart.jacobian).inv()
    return _contract(lowered_structure_tensor(point), inverse), inverse


def is_symmetric(tensor: Tensor) -> bool:
    n = len(tensor)
    return all(tensor[i][j][k] == tensor[j][i][k] == tensor[i][k][j]
               for i in range(n) for j in range(n) for k in range(n))


def _neighbours(point: TriPolyPoint, step: Fraction) -> List[Tuple[str, TriPolyPoint, TriPolyPoint]]:
    jobs = []
    for name in point.space.coordinate_names:
        if name == "c0":
            continue
        direction = SCALE if name == DLOG else name
        jobs.append((name, point.shifted(direction, step), point.shifted(direction, -step)))
    return jobs


def coordinate_derivatives(point: TriPolyPoint, step: Fraction = DEFAULT_STEP,
                           max_workers: int = 4) -> Dict[str, Tensor]:
    """Central differences of the flat structure tensor along each coordinate field"""
    jobs = _neighbours(point, step)
    flat = [p for _, plus, minus in jobs for p in (plus, minus)]
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        tensors = list(executor.map(lambda p: flat_structure_tensor(p)[0], flat))
    n = len(point.space.coordinate_names)
    derivatives = {"c0": [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]}
    for idx, (name, _, _) in enumerate(jobs):
        plus, minus = tensors[2 * idx], tensors[2 * idx + 1]
        scale = point.w if name == DLOG else 1
        derivatives[name] = [[[(plus[a][b][c] - minus[a][b][c]) * scale / (2 * step) for c in range(n)]
                              for b in range(n)] for a in range(n)]
    return derivatives


def potentiality_check(points: Sequence[TriPolyPoint], step=DEFAULT_STEP, max_workers: int = 4) -> PotentialityReport:
    """
    Check that d_l c_abc is symmetric in (l, a) in flat coordinates and that the unit is flat

    Args:
        points: sample points of one space
        step: central-difference step in the a, b, c and W directions
        max_workers: threads for the shifted evaluations

    Returns:
        PotentialityReport with the worst asymmetry and its flat indices
    """
    if not points:
        raise ValueError("Unsupported empty sample set")
    space = points[0].space
    step = to_fraction(step)
    names = space.coordinate_names
    n = len(names)
    unit_column = names.index("c0")
    worst_value, worst_index = 0.0, None
    symmetric = True
    units = []
    details = []
    for point in points:
        tensor, inverse = flat_structure_tensor(point)
        symmetric = symmetric and is_symmetric(tensor)
        chart = flat_coordinates(space, point)
        units.append([chart.jacobian[a][unit_column] for a in range(n)])
        coordinate = coordinate_derivatives(point, step, max_workers)
        inv = [[to_fraction(inverse[i, j]) for j in range(n)] for i in range(n)]
        flat_derivative = [[[[sum(inv[m][l] * coordinate[names[m]][a][b][c] for m in range(n))
                              for c in range(n)] for b in range(n)] for a in range(n)] for l in range(n)]
        local = 0.0
        for l, a, b, c in product(range(n), repeat=4):
            gap = abs(float(flat_derivative[l][a][b][c] - flat_derivative[a][l][b][c]))
            local = max(local, gap)
            if gap > worst_value:
                worst_value, worst_index = gap, (chart.names[l], chart.names[a], chart.names[b], chart.names[c])
        details.append({"point": point.to_dict(), "max_asymmetry": local})
        logger.debug(f"Potentiality at {point.to_dict()}: {local:.3e}")

    unit_deviation = max(abs(float(u[a] - units[0][a])) for u in units for a in range(n))
    report = PotentialityReport(len(points), worst_value, worst_index, symmetric, unit_deviation, details)
    logger.info(f"Potentiality check on {space.name}: max asymmetry {worst_value:.3e}")
    return report
