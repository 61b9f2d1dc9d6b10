"""
Partitions and branch data
"""

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable, List, Sequence, Tuple


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive integers; the empty partition has size 0"""
    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"Unsupported partition parts {parts}: parts must be positive")
        object.__setattr__(self, "parts", tuple(sorted(parts, reverse=True)))

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def ramification(self) -> int:
        """Contribution sum(mu_j - 1) to the Riemann-Hurwitz count"""
        return self.size - self.length

    def is_trivial(self) -> bool:
        return all(p == 1 for p in self.parts)

    def without_ones(self) -> Tuple[int, ...]:
        return tuple(p for p in self.parts if p != 1)

    def multiplicities(self) -> Counter:
        return Counter(self.parts)

    def centralizer_order(self) -> int:
        """z_mu = prod_k k^{m_k} m_k!, so that |C_mu| = d!/z_mu"""
        order = 1
        for part, mult in self.multiplicities().items():
            order *= part ** mult * factorial(mult)
        return order

    def class_size(self) -> int:
        return factorial(self.size) // self.centralizer_order()

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def parse_partition(text: str) -> Partition:
    """Parse "2,1,1" (or "(2,1,1)") into a Partition"""
    text = text.strip().strip("()[]")
    if not text:
        return Partition()
    try:
        return Partition(tuple(int(p) for p in text.split(",") if p.strip()))
    except ValueError:
        raise ValueError(f"Unsupported partition syntax: {text!r}")


def list_partitions(d: int) -> List[Partition]:
    """All partitions of d in reverse-lexicographic order"""
    if d < 0:
        raise ValueError(f"Unsupported partition size: {d}")
    return [Partition(p) for p in _partitions(d, d)]


@lru_cache(maxsize=None)
def _partitions(d: int, largest: int) -> Tuple[Tuple[int, ...], ...]:
    if d == 0:
        return ((),)
    result = []
    for first in range(min(d, largest), 0, -1):
        for rest in _partitions(d - first, first):
            result.append((first,) + rest)
    return tuple(result)


def partitions_bounded(d: int, max_part: int) -> List[Partition]:
    """Partitions of d whose parts are all at most max_part"""
    return [Partition(p) for p in _partitions(d, max(0, min(d, max_part)))] if d else [Partition()]


def cycle_type(perm: Sequence[int]) -> Partition:
    """Cycle type of a permutation given in one-line notation on 0..d-1"""
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        lengths.append(length)
    return Partition(tuple(lengths))


@dataclass(frozen=True)
class BranchData:
    """Ramification profiles over the branch points, all partitions of the same degree"""
    degree: int
    profiles: Tuple[Partition, ...] = ()

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"Unsupported degree: {self.degree}")
        profiles = tuple(p if isinstance(p, Partition) else Partition(tuple(p)) for p in self.profiles)
        for p in profiles:
            if p.size != self.degree:
                raise ValueError(f"Profile {p} has size {p.size}, expected degree {self.degree}")
        object.__setattr__(self, "profiles", profiles)

    @classmethod
    def of(cls, degree: int, profiles: Iterable) -> "BranchData":
        return cls(degree, tuple(profiles))

    @property
    def total_ramification(self) -> int:
        return sum(p.ramification for p in self.profiles)

    def canonical(self) -> "BranchData":
        """Drop trivial profiles and sort the rest; results are invariant under both"""
        kept = sorted((p for p in self.profiles if not p.is_trivial()), reverse=True)
        return BranchData(self.degree, tuple(kept))

    def cache_key(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(p.without_ones() for p in self.canonical().profiles)

    def __str__(self) -> str:
        return f"d={self.degree}:" + ";".join(str(p) for p in self.profiles)


def riemann_hurwitz_genus(base_genus: int, data: BranchData):
    """
    Cover genus from 2 - 2g = d(2 - 2g') - sum of ramification

    Returns:
        The integer genus, or None when the count is odd
    """
    twice = data.degree * (2 * base_genus - 2) + data.total_ramification + 2
    if twice % 2:
        return None
    return twice // 2
