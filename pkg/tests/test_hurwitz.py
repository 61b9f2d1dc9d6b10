"""
Tests for partitions, characters, Hurwitz numbers, the brute-force oracle and the cache
"""

from fractions import Fraction

import pytest

from algebra.errors import ResourceCapError
from hurwitz.cache import HurwitzCache
from hurwitz.characters import character_table, character_value
from hurwitz.numbers import HurwitzQuery, hurwitz_number
from hurwitz.oracle import hurwitz_bruteforce_oracle
from hurwitz.partitions import BranchData, Partition, list_partitions, parse_partition, riemann_hurwitz_genus


def query(degree, profiles, genus=0, base_genus=0, connected=True):
    return HurwitzQuery(base_genus, genus, BranchData.of(degree, [Partition(tuple(p)) for p in profiles]),
                        connected)


def test_parse_partition():
    assert parse_partition("(2,1,1)") == Partition((2, 1, 1))
    assert parse_partition("3") == Partition((3,))
    with pytest.raises(ValueError):
        parse_partition("(2,x)")


def test_partition_counts_and_class_sizes():
    assert len(list_partitions(5)) == 7
    assert Partition((2, 1, 1)).class_size() == 6
    assert sum(p.class_size() for p in list_partitions(4)) == 24


def test_branch_data_rejects_wrong_sizes():
    with pytest.raises(ValueError):
        BranchData.of(3, [Partition((2,))])


def test_riemann_hurwitz():
    assert riemann_hurwitz_genus(0, BranchData.of(2, [Partition((2,))] * 4)) == 1
    assert riemann_hurwitz_genus(0, BranchData.of(3, [Partition((3,)), Partition((3,))])) == 0


def test_character_values():
    assert character_value(Partition((2, 1)), Partition((1, 1, 1))) == 2
    assert character_value(Partition((2, 1)), Partition((3,))) == -1
    assert character_value(Partition((1, 1, 1)), Partition((2, 1))) == -1


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_character_table_orthogonality(d):
    assert character_table(d).column_orthogonality_holds()


def test_character_table_cap():
    with pytest.raises(ResourceCapError):
        character_table(8, max_degree=6)


def test_known_hurwitz_numbers():
    assert hurwitz_number(query(2, [(2,), (2,)])) == Fraction(1, 2)
    assert hurwitz_number(query(3, [(3,), (3,)])) == Fraction(1, 3)
    assert hurwitz_number(query(2, [(2,)] * 4, genus=1)) == Fraction(1, 2)
    # (2d-2)! d^(d-3) / d! simple covers of genus 0
    assert hurwitz_number(query(3, [(2, 1)] * 4)) == 4


def test_hurwitz_zero_off_riemann_hurwitz():
    assert hurwitz_number(query(2, [(2,), (2,)], genus=1)) == 0


@pytest.mark.parametrize("degree, profiles, genus, base_genus", [
    (3, [(2, 1), (2, 1), (3,)], 0, 0),
    (4, [(2, 2), (2, 2), (3, 1)], 0, 0),
    (4, [(4,), (2, 1, 1), (3, 1)], 0, 0),
    (2, [(2,), (2,)], 2, 1),
    (3, [(3,)], 2, 1),
])
def test_characters_match_oracle(degree, profiles, genus, base_genus):
    q = query(degree, profiles, genus, base_genus)
    assert hurwitz_number(q) == hurwitz_bruteforce_oracle(q)


def test_disconnected_matches_oracle():
    q = query(4, [(2, 2), (2, 2)], genus=-1, connected=False)
    assert hurwitz_number(q) == hurwitz_bruteforce_oracle(q)


def test_oracle_cap():
    with pytest.raises(ResourceCapError):
        hurwitz_bruteforce_oracle(query(6, [(2, 1, 1, 1, 1)] * 10, genus=0))


def test_cache_round_trip(cache_path):
    cache = HurwitzCache(str(cache_path))
    q = query(3, [(3,), (3,)])
    assert cache.get_or_compute(q) == Fraction(1, 3)
    assert cache.stats["misses"] == 1
    reloaded = HurwitzCache(str(cache_path))
    assert len(reloaded) == 1
    assert reloaded.lookup(q) == Fraction(1, 3)


def test_cache_skips_corrupt_lines(cache_path):
    cache_path.write_text('{"broken": true}\nnot json\n', encoding="utf-8")
    cache = HurwitzCache(str(cache_path))
    assert len(cache) == 0
    assert cache.stats["skipped_lines"] == 2


def test_cache_defaults_to_environment(cache_path):
    assert HurwitzCache().path == cache_path
