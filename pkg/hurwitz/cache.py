"""
Persistent Hurwitz-number memo table (JSON lines)
"""

import os
import threading
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple
import logging

import ujson

from algebra.rational import format_rational, parse_rational
from hurwitz.numbers import HurwitzQuery, hurwitz_number

logger = logging.getLogger(__name__)

CacheKey = Tuple[int, int, int, Tuple[Tuple[int, ...], ...], bool]


def query_key(query: HurwitzQuery) -> CacheKey:
    """Canonical key: trivial parts and trivial profiles removed, profiles sorted"""
    return (query.base_genus, query.cover_genus, query.degree, query.data.cache_key(), query.connected)


class HurwitzCache:
    """Manages the on-disk Hurwitz table and its in-memory index"""

    def __init__(self, path: str = None):
        """
        Initialize the cache

        Args:
            path: JSON-lines file (defaults to ORBIFROB_CACHE, then ~/.cache/orbifrob/hurwitz.jsonl)
        """
        self.path = Path(path or os.getenv(
            "ORBIFROB_CACHE",
            str(Path.home() / ".cache" / "orbifrob" / "hurwitz.jsonl")
        ))
        self._lock = threading.Lock()
        self._values: Dict[CacheKey, Fraction] = {}
        self.stats = {"hits": 0, "misses": 0, "skipped_lines": 0}
        self._load()
        logger.info(f"Hurwitz cache initialized at {self.path} with {len(self._values)} entries")

    def _load(self):
        if not self.path.exists():
            return
        with open(self.path, "r", encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = ujson.loads(line)
                    key = (
                        int(record["base_genus"]),
                        int(record["genus"]),
                        int(record["degree"]),
                        tuple(tuple(int(x) for x in p) for p in record["profiles"]),
                        bool(record["connected"]),
                    )
                    self._values[key] = parse_rational(record["value"])
                except (ValueError, KeyError, TypeError) as e:
                    self.stats["skipped_lines"] += 1
                    logger.warning(f"Skipping corrupt cache line {line_number} in {self.path}: {e}")

    def lookup(self, query: HurwitzQuery) -> Optional[Fraction]:
        return self._values.get(query_key(query))

    def store(self, query: HurwitzQuery, value: Fraction):
        key = query_key(query)
        record = query.to_record()
        record["value"] = format_rational(value)
        with self._lock:
            if key in self._values:
                return
            self._values[key] = value
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(ujson.dumps(record) + "\n")

    def get_or_compute(self, query: HurwitzQuery,
                       compute: Callable[[HurwitzQuery], Fraction] = hurwitz_number) -> Fraction:
        value = self.lookup(query)
        if value is not None:
            self.stats["hits"] += 1
            return value
        self.stats["misses"] += 1
        value = compute(query)
        self.store(query, value)
        return value

    def clear(self):
        """Remove every entry, on disk as well (use with caution!)"""
        logger.warning(f"Clearing Hurwitz cache at {self.path}")
        with self._lock:
            self._values.clear()
            if self.path.exists():
                self.path.unlink()

    def __len__(self) -> int:
        return len(self._values)


# Global cache instance
_cache = None


def get_hurwitz_cache(path: str = None) -> HurwitzCache:
    """Get or create the global cache instance"""
    global _cache
    if _cache is None or (path is not None and Path(path) != _cache.path):
        _cache = HurwitzCache(path=path)
    return _cache


def cached_hurwitz_number(query: HurwitzQuery, cache: Optional[HurwitzCache] = None) -> Fraction:
    """hurwitz_number served from the persistent table when possible"""
    if cache is None:
        return hurwitz_number(query)
    return cache.get_or_compute(query)
