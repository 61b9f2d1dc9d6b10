"""
Brute-force Hurwitz counts by enumerating permutation factorizations
Independent of the character formula; used to validate it on small degrees
"""

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Dict, List, Sequence, Tuple

from algebra.errors import ResourceCapError
from hurwitz.numbers import HurwitzQuery
from hurwitz.partitions import Partition, cycle_type

logger = logging.getLogger(__name__)

DEFAULT_CAP_GENUS0 = 5
DEFAULT_CAP_GENUS1 = 4

Perm = Tuple[int, ...]


def compose(p: Perm, q: Perm) -> Perm:
    """(p q)(i) = p(q(i))"""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def commutator(a: Perm, b: Perm) -> Perm:
    return compose(compose(a, b), compose(inverse(a), inverse(b)))


@lru_cache(maxsize=None)
def _classes(d: int) -> Dict[Partition, Tuple[Perm, ...]]:
    classes: Dict[Partition, List[Perm]] = {}
    for perm in permutations(range(d)):
        classes.setdefault(cycle_type(perm), []).append(perm)
    return {k: tuple(v) for k, v in classes.items()}


def is_transitive(generators: Sequence[Perm], d: int) -> bool:
    if d == 0:
        return False
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for g in generators:
            j = g[i]
            if j not in seen:
                seen.add(j)
                frontier.append(j)
    return len(seen) == d


def hurwitz_bruteforce_oracle(query: HurwitzQuery, cap_genus0: int = DEFAULT_CAP_GENUS0,
                              cap_genus1: int = DEFAULT_CAP_GENUS1) -> Fraction:
    """
    Count tuples (a_1, b_1, ..., a_g', b_g', s_1, ..., s_a) in S_d with
    prod [a_i, b_i] * prod s_j = id and cycle type of s_j equal to mu_j, divided by d!

    The last s_a is determined by the others, so only the rest is enumerated.

    Raises:
        ResourceCapError: degree above the cap for the base genus
    """
    d = query.degree
    cap = cap_genus0 if query.base_genus == 0 else cap_genus1
    if d > cap:
        raise ResourceCapError(f"Brute-force oracle degree {d} exceeds the cap {cap} "
                               f"for base genus {query.base_genus}", degree=d, cap=cap)
    if query.expected_genus() != query.cover_genus:
        return Fraction(0)
    if d == 0:
        return Fraction(0) if query.connected else Fraction(1)

    classes = _classes(d)
    identity = tuple(range(d))
    all_perms = tuple(permutations(range(d)))
    profiles = list(query.data.profiles)
    handle_choices = [all_perms] * (2 * query.base_genus)
    branch_choices = [classes.get(mu, ()) for mu in profiles[:-1]]
    last = profiles[-1] if profiles else None

    count = 0
    for handles in product(*handle_choices):
        prefix = identity
        for i in range(0, len(handles), 2):
            prefix = compose(prefix, commutator(handles[i], handles[i + 1]))
        for sigmas in product(*branch_choices):
            total = prefix
            for s in sigmas:
                total = compose(total, s)
            if last is None:
                if total != identity:
                    continue
                generators = list(handles)
            else:
                closing = inverse(total)
                if cycle_type(closing) != last:
                    continue
                generators = list(handles) + list(sigmas) + [closing]
            if query.connected and not is_transitive(generators, d):
                continue
            count += 1
    value = Fraction(count, factorial(d))
    logger.debug(f"Brute force {query.data} (g'={query.base_genus}): {count} tuples -> {value}")
    return value
