"""
WDVV associativity residuals of genus-0 potentials
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement
from threading import Lock
from typing import Dict, List, Optional, Sequence, Tuple

from algebra.sparse_poly import SparsePoly, poly_sum
from orbigw.orbicurve import DIVISOR, QUANTUM, GradingData

logger = logging.getLogger(__name__)

Pair = Tuple[str, str]


@dataclass(frozen=True)
class WDVVResidual:
    """P(ij|kl) - P(il|jk) for the quadruple (i, j, k, l)"""
    indices: Tuple[str, str, str, str]
    poly: SparsePoly

    def is_zero(self) -> bool:
        return self.poly.is_zero()


def flat_derivative(poly: SparsePoly, name: str) -> SparsePoly:
    """d/d(name); the divisor direction also acts on Q = e^s z as Q d/dQ"""
    result = poly.derivative(name) if name in poly.names else SparsePoly.zero(poly.variables)
    if name == DIVISOR and QUANTUM in poly.names:
        result = result + poly.euler_derivative(QUANTUM)
    return result


class DerivativeTable:
    """Memoized mixed partials of one potential, keyed by sorted index tuples"""

    def __init__(self, f: SparsePoly):
        self.f = f
        self._cache: Dict[Tuple[str, ...], SparsePoly] = {(): f}
        self._lock = Lock()

    def get(self, *names: str) -> SparsePoly:
        key = tuple(sorted(names))
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        value = flat_derivative(self.get(*key[:-1]), key[-1])
        with self._lock:
            self._cache[key] = value
        return value


def pairing_product(table: DerivativeTable, grading: GradingData, left: Pair, right: Pair,
                    truncate: Optional[int] = None) -> SparsePoly:
    """sum_{m,n} f_{left m} eta^{mn} f_{n right}"""
    cut = (QUANTUM, truncate) if truncate is not None and QUANTUM in table.f.names else None
    terms = []
    for m in grading.variables.flat_names:
        n, weight = grading.dual(m)
        a = table.get(*left, m)
        if a.is_zero():
            continue
        b = table.get(n, *right)
        if b.is_zero():
            continue
        terms.append(a.multiply(b, truncate=cut) * weight)
    return poly_sum(terms, table.f.variables)


def wdvv_residual(f: SparsePoly, grading: GradingData, truncation: Optional[int] = None,
                  max_workers: int = 4, include_zero: bool = True) -> List[WDVVResidual]:
    """
    WDVV residuals of a genus-0 potential over every multiset {i, j, k, l}

    The three pairings ij|kl, ik|jl, il|jk must agree; each multiset yields
    two independent differences. With a truncation D residuals are taken
    modulo Q^{D+1}.
    """
    names = grading.variables.flat_names
    table = DerivativeTable(f)
    products: Dict[Tuple[Pair, Pair], SparsePoly] = {}
    products_lock = Lock()

    def canonical(left: Pair, right: Pair) -> Tuple[Pair, Pair]:
        a = tuple(sorted(left))
        b = tuple(sorted(right))
        return (a, b) if a <= b else (b, a)

    def product(left: Pair, right: Pair) -> SparsePoly:
        key = canonical(left, right)
        value = products.get(key)
        if value is None:
            value = pairing_product(table, grading, key[0], key[1], truncation)
            with products_lock:
                products[key] = value
        return value

    def residuals_for(quad: Tuple[str, str, str, str]) -> List[WDVVResidual]:
        i, j, k, l = quad
        first = product((i, j), (k, l))
        out = []
        for left, right, label in (((i, k), (j, l), (i, j, l, k)), ((i, l), (j, k), quad)):
            if canonical(left, right) == canonical((i, j), (k, l)):
                continue
            diff = first - product(left, right)
            if truncation is not None and QUANTUM in diff.names:
                diff = diff.truncate(QUANTUM, truncation)
            if include_zero or not diff.is_zero():
                out.append(WDVVResidual(label, diff))
        return out

    quads = list(combinations_with_replacement(names, 4))
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        chunks = list(executor.map(residuals_for, quads))
    residuals = [r for chunk in chunks for r in chunk]
    nonzero = sum(1 for r in residuals if not r.is_zero())
    logger.info(f"WDVV: {len(quads)} index multisets, {len(residuals)} equations, {nonzero} nonzero")
    return residuals


def all_vanish(residuals: Sequence[WDVVResidual]) -> bool:
    return all(r.is_zero() for r in residuals)
