"""
Irreducible characters of the symmetric groups (Murnaghan-Nakayama rule)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Tuple

from algebra.errors import ResourceCapError
from hurwitz.partitions import Partition, list_partitions

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEGREE = 30


def _beta_set(parts: Tuple[int, ...]) -> Tuple[int, ...]:
    n = len(parts)
    return tuple(p + n - 1 - i for i, p in enumerate(parts))


def _from_beta_set(beta) -> Tuple[int, ...]:
    ordered = sorted(beta, reverse=True)
    n = len(ordered)
    parts = tuple(b - (n - 1 - i) for i, b in enumerate(ordered))
    return tuple(p for p in parts if p > 0)


@lru_cache(maxsize=None)
def _character(shape: Tuple[int, ...], cycles: Tuple[int, ...]) -> int:
    if not cycles:
        return 1 if not shape else 0
    k = cycles[0]
    rest = cycles[1:]
    beta = _beta_set(shape)
    occupied = set(beta)
    total = 0
    for b in beta:
        target = b - k
        if target < 0 or target in occupied:
            continue
        # each bead jumped over flips the sign (rim-hook height)
        crossed = sum(1 for c in beta if target < c < b)
        reduced = _from_beta_set((occupied - {b}) | {target})
        total += (-1) ** crossed * _character(reduced, rest)
    return total


def character_value(shape: Partition, cycle_type: Partition) -> int:
    """The irreducible character chi_shape evaluated on the class of the given cycle type"""
    if shape.size != cycle_type.size:
        raise ValueError(f"Unsupported character evaluation: |{shape}| != |{cycle_type}|")
    return _character(shape.parts, cycle_type.parts)


@dataclass(frozen=True)
class CharacterTable:
    """Full character table of S_d; rows indexed by irreducible shapes, columns by cycle types"""
    degree: int
    rows: Dict[Partition, Dict[Partition, int]]
    class_sizes: Dict[Partition, int]
    dims: Dict[Partition, int]

    def column_orthogonality_holds(self) -> bool:
        classes = list(self.class_sizes)
        order = factorial(self.degree)
        for mu in classes:
            for nu in classes:
                total = sum(self.rows[lam][mu] * self.rows[lam][nu] for lam in self.rows)
                expected = Fraction(order, self.class_sizes[mu]) if mu == nu else 0
                if total != expected:
                    return False
        return True


@lru_cache(maxsize=None)
def _table(d: int) -> CharacterTable:
    shapes = list_partitions(d)
    rows = {lam: {mu: character_value(lam, mu) for mu in shapes} for lam in shapes}
    identity = Partition((1,) * d)
    dims = {lam: rows[lam][identity] for lam in shapes}
    sizes = {mu: mu.class_size() for mu in shapes}
    logger.debug(f"Built character table of S_{d} with {len(shapes)} classes")
    return CharacterTable(d, rows, sizes, dims)


def character_table(d: int, max_degree: int = DEFAULT_MAX_DEGREE) -> CharacterTable:
    """
    Character table of S_d, built once per degree and shared read-only

    Raises:
        ResourceCapError: d exceeds max_degree
    """
    if d < 0:
        raise ValueError(f"Unsupported degree: {d}")
    if d > max_degree:
        raise ResourceCapError(f"Character table degree {d} exceeds the cap {max_degree}",
                               degree=d, cap=max_degree)
    return _table(d)
