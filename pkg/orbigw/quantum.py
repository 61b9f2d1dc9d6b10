"""
Quantum product structure constants and the Euler multiplication operator
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from algebra.linear import eigenvalues_numeric, matrix_to_json
from orbigw.orbicurve import DIVISOR, QUANTUM, UNIT
from orbigw.potential import GWPotential
from orbigw.wdvv import DerivativeTable, flat_derivative

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuantumStructure:
    """
    Structure constants at one point of the flat coordinates

    c_lower[i][j][k] = f_ijk, c_upper[i][j][k] = c_ij^k, and U[k][j] is the
    k-th component of E o d_j, all in the basis order of `names`.
    """
    names: List[str]
    c_lower: List[List[List]]
    c_upper: List[List[List]]
    U: List[List]
    exact: bool

    def index(self, name: str) -> int:
        return self.names.index(name)

    def product(self, a: Sequence, b: Sequence) -> List:
        """Components of a o b for tangent vectors a, b in the flat basis"""
        n = len(self.names)
        return [sum(a[i] * b[j] * self.c_upper[i][j][k] for i in range(n) for j in range(n))
                for k in range(n)]

    def basis_product(self, i: str, j: str) -> Dict[str, object]:
        row = self.c_upper[self.index(i)][self.index(j)]
        return {name: value for name, value in zip(self.names, row) if value != 0}

    def spectrum(self, tol: float = 1e-9) -> List[complex]:
        return eigenvalues_numeric(self.U, tol)

    def to_json(self) -> Dict:
        if self.exact:
            u = matrix_to_json(self.U)
        else:
            u = [[str(x) for x in row] for row in self.U]
        return {"basis": list(self.names), "U": u}


def _point_values(names: Sequence[str], point: Dict[str, object], q) -> Tuple[bool, Dict[str, object]]:
    exact = all(isinstance(v, (int, Fraction)) for v in list(point.values()) + [q])
    values = {n: point.get(n, 0) for n in names}
    values[QUANTUM] = q
    if exact:
        values = {n: Fraction(v) for n, v in values.items()}
    return exact, values


def quantum_structure(potential: GWPotential, point: Optional[Dict[str, object]] = None,
                      q=1) -> QuantumStructure:
    """
    Third derivatives of a genus-0 potential at a point, raised with eta, and E o

    Args:
        potential: genus-0 potential without unknowns
        point: values of the flat coordinates (missing ones are 0)
        q: value of Q = e^s z

    Returns:
        QuantumStructure; exact Fractions when every input value is rational
    """
    if potential.genus != 0:
        raise ValueError(f"Unsupported genus {potential.genus}: quantum product needs genus 0")
    if potential.unknowns:
        raise ValueError(f"Unsupported potential with {len(potential.unknowns)} unresolved unknowns")
    point = dict(point or {})
    grading = potential.grading
    names = grading.variables.flat_names
    unknown = [n for n in point if n not in names]
    if unknown:
        raise ValueError(f"Unsupported coordinates {unknown}; flat coordinates are {names}")
    if potential.truncation is not None:
        logger.warning(f"Evaluating a potential truncated at Q^{potential.truncation}; "
                       f"structure constants are exact only modulo higher degrees")

    exact, values = _point_values(names, point, q)

    table = DerivativeTable(potential.to_poly())
    n = len(names)
    c_lower = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                value = table.get(names[i], names[j], names[k]).evaluate(values)
                for a, b, c in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
                    c_lower[a][b][c] = value

    duals = [grading.dual(m) for m in names]
    position = {m: idx for idx, m in enumerate(names)}
    c_upper = [[[c_lower[i][j][position[duals[k][0]]] * duals[k][1] for k in range(n)]
                for j in range(n)] for i in range(n)]

    euler = grading.euler_vector(values)
    e = [euler[m] for m in names]
    U = [[sum(e[i] * c_upper[i][j][k] for i in range(n)) for j in range(n)] for k in range(n)]
    logger.debug(f"Quantum structure of {potential.orbicurve.name} at q={q}")
    return QuantumStructure(list(names), c_lower, c_upper, U, exact)


def unit_violations(structure: QuantumStructure) -> List[str]:
    """Basis pairs (e, v) whose product is not v, with e = d/d t0"""
    unit = structure.index(UNIT)
    problems = []
    for j, name in enumerate(structure.names):
        row = structure.c_upper[unit][j]
        expected = [1 if k == j else 0 for k in range(len(structure.names))]
        if any(abs(a - b) > 1e-12 for a, b in zip(row, expected)):
            problems.append(name)
    return problems


def symmetry_violations(potential: GWPotential, point: Optional[Dict[str, object]] = None, q=1,
                        tol: float = 1e-12) -> int:
    """
    Ordered triples (i, j, k) where d_i d_j d_k Phi, differentiated in that order,
    differs from the c_ijk of quantum_structure at the same point
    """
    point = dict(point or {})
    structure = quantum_structure(potential, point, q)
    names = structure.names
    _, values = _point_values(names, point, q)
    poly = potential.to_poly()
    first = {a: flat_derivative(poly, a) for a in names}
    second = {(a, b): flat_derivative(first[a], b) for a in names for b in names}
    violations = 0
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            for k, c in enumerate(names):
                direct = flat_derivative(second[(a, b)], c).evaluate(values)
                if abs(direct - structure.c_lower[i][j][k]) > tol:
                    violations += 1
    if violations:
        logger.warning(f"{violations} third derivatives of {potential.orbicurve.name} depend on the order")
    return violations


def corner_entries(structure: QuantumStructure) -> Dict[str, object]:
    """U entries at (t0, s) and (s, t0)"""
    unit, divisor = structure.index(UNIT), structure.index(DIVISOR)
    return {"t0_s": structure.U[unit][divisor], "s_t0": structure.U[divisor][unit]}
