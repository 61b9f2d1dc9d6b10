"""
Hurwitz numbers by the Frobenius character formula
Connected counts are extracted from disconnected ones by inclusion-exclusion
over the orbit containing a marked sheet
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Dict, Iterator, List, Tuple

from hurwitz.characters import DEFAULT_MAX_DEGREE, character_table
from hurwitz.partitions import BranchData, Partition, riemann_hurwitz_genus

logger = logging.getLogger(__name__)

Profiles = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class HurwitzQuery:
    """H^{base genus}_{cover genus, d}(profiles), connected or not"""
    base_genus: int
    cover_genus: int
    data: BranchData
    connected: bool = True

    def __post_init__(self):
        if self.base_genus < 0:
            raise ValueError(f"Unsupported base genus: {self.base_genus}")

    @property
    def degree(self) -> int:
        return self.data.degree

    def expected_genus(self):
        return riemann_hurwitz_genus(self.base_genus, self.data)

    def is_well_posed(self) -> bool:
        return self.expected_genus() == self.cover_genus

    def to_record(self) -> Dict:
        return {
            "base_genus": self.base_genus,
            "genus": self.cover_genus,
            "degree": self.degree,
            "profiles": [list(p) for p in self.data.cache_key()],
            "connected": self.connected,
        }


def _canonical(profiles: Profiles, degree: int) -> Profiles:
    """Pad every profile with 1's up to the degree, drop trivial ones, sort"""
    kept = [_pad(tuple(sorted(p, reverse=True)), degree) for p in profiles if any(x != 1 for x in p)]
    return tuple(sorted(kept, reverse=True))


def disconnected_count(base_genus: int, degree: int, profiles: Profiles,
                       max_degree: int = DEFAULT_MAX_DEGREE) -> Fraction:
    """
    Automorphism-weighted count of all (possibly disconnected) covers

    sum over irreducible shapes of (dim/d!)^{2-2g'} prod_i |C_i| chi(mu_i)/dim
    """
    if degree == 0:
        return Fraction(1)
    return _disconnected(base_genus, degree, _canonical(profiles, degree), max_degree)


@lru_cache(maxsize=None)
def _disconnected(base_genus: int, degree: int, profiles: Profiles, max_degree: int) -> Fraction:
    table = character_table(degree, max_degree)
    order = factorial(degree)
    classes = [Partition(p) for p in profiles]
    total = Fraction(0)
    for shape, dim in table.dims.items():
        term = Fraction(dim, order) ** (2 - 2 * base_genus)
        for mu in classes:
            chi = table.rows[shape][mu]
            if chi == 0:
                term = Fraction(0)
                break
            term *= Fraction(table.class_sizes[mu] * chi, dim)
        total += term
    return total


def _sub_multisets(parts: Tuple[int, ...], size: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Distinct sub-multisets of `parts` summing to `size`, with their complements"""
    counts: Dict[int, int] = {}
    for p in parts:
        counts[p] = counts.get(p, 0) + 1
    values = sorted(counts, reverse=True)

    def walk(i: int, remaining: int, chosen: List[int]):
        if remaining == 0:
            taken = {}
            for v in chosen:
                taken[v] = taken.get(v, 0) + 1
            rest = []
            for v in values:
                rest.extend([v] * (counts[v] - taken.get(v, 0)))
            yield tuple(chosen), tuple(rest)
            return
        if i == len(values):
            return
        v = values[i]
        for k in range(min(counts[v], remaining // v), -1, -1):
            yield from walk(i + 1, remaining - k * v, chosen + [v] * k)

    yield from walk(0, size, [])


def connected_count(base_genus: int, degree: int, profiles: Profiles,
                    max_degree: int = DEFAULT_MAX_DEGREE) -> Fraction:
    """
    Automorphism-weighted count of connected covers, any genus

    F(mu) = Z(mu) - (1/d) sum_{k<d} k sum_nu F(nu) Z(mu/nu), where nu runs over
    choices of a size-k sub-multiset of every profile.
    """
    if degree == 0:
        return Fraction(0)
    return _connected(base_genus, degree, _canonical(profiles, degree), max_degree)


def _pad(profile: Tuple[int, ...], degree: int) -> Tuple[int, ...]:
    return profile + (1,) * (degree - sum(profile))


@lru_cache(maxsize=None)
def _connected(base_genus: int, degree: int, profiles: Profiles, max_degree: int) -> Fraction:
    total = disconnected_count(base_genus, degree, profiles, max_degree)
    correction = Fraction(0)
    for k in range(1, degree):
        choices = [list(_sub_multisets(p, k)) for p in profiles]
        for picks in product(*choices):
            inner = _canonical(tuple(sub for sub, _ in picks), k)
            outer = _canonical(tuple(rest for _, rest in picks), degree - k)
            inner_value = _connected(base_genus, k, inner, max_degree)
            if not inner_value:
                continue
            correction += k * inner_value * disconnected_count(base_genus, degree - k, outer, max_degree)
    return total - correction / degree


def hurwitz_number(query: HurwitzQuery, max_degree: int = DEFAULT_MAX_DEGREE) -> Fraction:
    """
    H^{g'}_{g,d}(mu_1, ..., mu_a)

    Returns 0 exactly when the Riemann-Hurwitz count does not produce the
    queried cover genus.
    """
    if not query.is_well_posed():
        logger.debug(f"Riemann-Hurwitz mismatch for {query.data}: genus {query.expected_genus()} "
                     f"!= {query.cover_genus}")
        return Fraction(0)
    profiles = tuple(p.parts for p in query.data.profiles)
    if query.connected:
        return connected_count(query.base_genus, query.degree, profiles, max_degree)
    return disconnected_count(query.base_genus, query.degree, profiles, max_degree)
