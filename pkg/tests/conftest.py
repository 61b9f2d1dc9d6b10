"""
Shared fixtures for the test suite
"""

import sys
from pathlib import Path

import pytest

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from hurwitz.cache import HurwitzCache
from orbigw.fixtures import reference_potential
from orbigw.orbicurve import Orbicurve
from orbigw.potential import assemble_potential


@pytest.fixture
def cache_path(tmp_path, monkeypatch):
    """Isolated Hurwitz cache file; ORBIFROB_CACHE points at it"""
    path = tmp_path / "hurwitz.jsonl"
    monkeypatch.setenv("ORBIFROB_CACHE", str(path))
    return path


@pytest.fixture
def hurwitz_cache(cache_path):
    return HurwitzCache(str(cache_path))


@pytest.fixture(scope="session")
def assembled_potentials():
    """Exact-mode potentials of the four tabulated orbifolds"""
    return {orders: assemble_potential(Orbicurve(0, orders), exact=True)
            for orders in [(2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 3, 3)]}


@pytest.fixture(scope="session")
def potential_222():
    return reference_potential((2, 2, 2))
