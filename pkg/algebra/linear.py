"""
Exact linear solving and numeric eigenvalues
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

import numpy as np
import sympy

from algebra.errors import InconsistentSystemError, OrbifrobError
from algebra.rational import format_rational, to_fraction, to_sympy

logger = logging.getLogger(__name__)

DEFAULT_EIGEN_TOL = 1e-9


@dataclass(frozen=True)
class LinearSolution:
    """Particular solution plus a basis of the nullspace; free columns listed explicitly"""
    solution: List[Fraction]
    nullspace: List[List[Fraction]]
    pivots: List[int]
    free_variables: List[int]

    @property
    def is_unique(self) -> bool:
        return not self.nullspace


def to_sympy_matrix(rows: Sequence[Sequence]) -> sympy.Matrix:
    if isinstance(rows, sympy.MatrixBase):
        return sympy.Matrix(rows)
    return sympy.Matrix([[to_sympy(to_fraction(x)) for x in row] for row in rows])


def to_fraction_rows(matrix: sympy.MatrixBase) -> List[List[Fraction]]:
    return [[to_fraction(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def solve_linear_exact(A: Sequence[Sequence], b: Sequence) -> LinearSolution:
    """
    Solve A x = b exactly by reduced row echelon form

    Args:
        A: m x n rational matrix (rows)
        b: length-m rational vector

    Returns:
        LinearSolution with free variables set to 0 in the particular solution

    Raises:
        InconsistentSystemError: a reduced row reads 0 = nonzero
    """
    matrix = to_sympy_matrix(A)
    rows = matrix.rows
    cols = matrix.cols if rows else 0
    if len(b) != rows:
        raise ValueError(f"Unsupported dimensions: matrix has {rows} rows, vector has {len(b)} entries")
    rhs = sympy.Matrix([to_sympy(to_fraction(x)) for x in b])
    if rows == 0:
        return LinearSolution([], [], [], [])
    reduced, pivots = matrix.row_join(rhs).rref()
    if cols in pivots:
        row = pivots.index(cols)
        logger.error(f"Inconsistent linear system at reduced row {row}")
        raise InconsistentSystemError(row)

    solution = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        solution[c] = to_fraction(reduced[r, cols])
    free = [c for c in range(cols) if c not in pivots]
    nullspace = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -to_fraction(reduced[r, f])
        nullspace.append(vec)
    return LinearSolution(solution, nullspace, list(pivots), free)


def eigenvalues_numeric(A, tol: float = DEFAULT_EIGEN_TOL) -> List[complex]:
    """
    All eigenvalues of a rational (or float) matrix, ordered by real part then imaginary part

    Raises:
        OrbifrobError: an eigenvalue fails the residual check det(A - lambda) ~ 0
    """
    matrix = np.array([[complex(x) if isinstance(x, complex) else float(x) for x in row] for row in _rows(A)])
    if matrix.size == 0:
        return []
    if matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Unsupported matrix shape {matrix.shape}: eigenvalues need a square matrix")
    values = np.linalg.eigvals(matrix)
    norm = max(np.linalg.norm(matrix, 2), 1.0)
    n = matrix.shape[0]
    identity = np.eye(n)
    for value in values:
        smallest = np.linalg.svd(matrix - value * identity, compute_uv=False)[-1]
        if smallest > max(tol, 1e-7) * norm * 10:
            logger.error(f"Eigenvalue {value} has residual {smallest}")
            raise OrbifrobError(f"Eigenvalue iteration did not converge: residual {smallest:.3e}",
                                residual=float(smallest))
    ordered = sorted((complex(v) for v in values), key=lambda v: (round(v.real, 12), round(v.imag, 12)))
    return ordered


def minimal_gap(values: Sequence[complex]) -> float:
    """Smallest pairwise distance, inf for fewer than two values"""
    gap = float("inf")
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            gap = min(gap, abs(values[i] - values[j]))
    return gap


def _rows(A):
    if isinstance(A, sympy.MatrixBase):
        return A.tolist()
    if isinstance(A, np.ndarray):
        return A.tolist()
    return A


def exact_inverse(A) -> List[List[Fraction]]:
    matrix = to_sympy_matrix(_rows(A))
    if matrix.det() == 0:
        raise ValueError("Unsupported inversion of a singular matrix")
    return to_fraction_rows(matrix.inv())


def matrix_to_json(rows) -> List[List[str]]:
    return [[format_rational(to_fraction(x)) for x in row] for row in _rows(rows)]
