"""
Polynomiality classification and ramification-profile enumeration
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from hurwitz.partitions import BranchData, Partition, partitions_bounded

logger = logging.getLogger(__name__)

EXCEPTIONAL = {(2, 3, 3), (2, 3, 4), (2, 3, 5)}


@dataclass(frozen=True)
class Classification:
    polynomial: bool
    family: str  # "A", "D", "E" or "none"

    def to_dict(self) -> Dict:
        return {"polynomial": self.polynomial, "family": self.family}


def classify_polynomial(orders: Sequence[int]) -> Classification:
    """
    Decide whether the genus-0 potential of P^1 with these orbifold orders is polynomial

    Polynomial exactly for a <= 2 points, (2,2,m), and (2,3,3), (2,3,4), (2,3,5).
    """
    ordered = tuple(sorted(int(a) for a in orders))
    if any(a < 2 for a in ordered):
        raise ValueError(f"Unsupported orbifold orders {tuple(orders)}: every order must be at least 2")
    if len(ordered) <= 2:
        result = Classification(True, "A")
    elif len(ordered) == 3 and ordered[:2] == (2, 2):
        result = Classification(True, "D")
    elif ordered in EXCEPTIONAL:
        result = Classification(True, "E")
    else:
        result = Classification(False, "none")
    chi = 2 - sum(1 - Fraction(1, a) for a in ordered)
    if result.polynomial != (chi > 0):
        # the explicit list and the positivity of chi_orb must agree
        raise AssertionError(f"Classification of {ordered} disagrees with chi_orb = {chi}")
    return result


@lru_cache(maxsize=None)
def _profiles_by_ramification(d: int, max_part: int) -> Dict[int, Tuple[Partition, ...]]:
    grouped: Dict[int, List[Partition]] = {}
    for p in partitions_bounded(d, max_part):
        grouped.setdefault(p.ramification, []).append(p)
    return {r: tuple(ps) for r, ps in grouped.items()}


def required_ramification(d: int, genus: int = 0, base_genus: int = 0) -> int:
    """Total ramification sum(mu_j - 1) forced by Riemann-Hurwitz"""
    return 2 * genus - 2 + d * (2 - 2 * base_genus)


def enumerate_profiles(orders: Sequence[int], d: int, genus: int = 0, base_genus: int = 0) -> List[BranchData]:
    """
    Every BranchData of degree d, one profile per orbifold point with parts bounded
    by its order, whose total ramification matches the cover genus

    Args:
        orders: orbifold orders alpha_i
        d: cover degree (>= 1)
        genus: cover genus g
        base_genus: genus of the base curve
    """
    if d < 1:
        raise ValueError(f"Unsupported degree: {d}")
    target = required_ramification(d, genus, base_genus)
    if target < 0:
        return []
    tables = [_profiles_by_ramification(d, a) for a in orders]
    results: List[BranchData] = []

    def walk(i: int, remaining: int, chosen: List[Tuple[Partition, ...]]):
        if i == len(tables):
            if remaining == 0:
                for combo in product(*chosen):
                    results.append(BranchData(d, combo))
            return
        for r, profiles in sorted(tables[i].items()):
            if r <= remaining:
                walk(i + 1, remaining - r, chosen + [profiles])

    walk(0, target, [])
    return results


def _feasible(d: int, orders: Sequence[int], target: int) -> bool:
    reachable = {0}
    for a in orders:
        options = _profiles_by_ramification(d, a).keys()
        reachable = {x + r for x in reachable for r in options if x + r <= target}
    return target in reachable


def max_exact_degree(orders: Sequence[int]) -> Optional[int]:
    """
    Largest degree admitting genus-0 profiles, or None if the potential is not polynomial

    Degrees above 2/chi_orb are never admissible, since sum ceil(d/alpha_i) >= d sum 1/alpha_i.
    """
    if not classify_polynomial(orders).polynomial:
        return None
    chi = 2 - sum(1 - Fraction(1, a) for a in orders)
    bound = int(2 / chi)
    best = 0
    for d in range(1, bound + 1):
        if _feasible(d, orders, required_ramification(d)):
            best = d
    logger.debug(f"Maximal admissible degree for {tuple(orders)}: {best}")
    return best
