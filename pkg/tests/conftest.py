"""
Pytest configuration and shared fixtures
"""
import math
import os

import pytest

# Set test environment
os.environ['TESTING'] = '1'
os.environ.setdefault('REDIS_ENABLED', 'false')

from graphs.geometry import build_from_coordinates  # noqa: E402
from graphs.plane_core import build_plane_graph  # noqa: E402
from genlab.corpus import curated_corpus  # noqa: E402
from ledger.candidate_ledger import CandidateLedger  # noqa: E402


def polar(r, degrees):
    t = math.radians(degrees)
    return (r * math.cos(t), r * math.sin(t))


def ring_points(k, radius=10.0):
    """u1..uk counterclockwise from the top."""
    return {f"u{i}": polar(radius, 90.0 + (i - 1) * 360.0 / k) for i in range(1, k + 1)}


def ring_edges(k):
    return [(f"u{i}", f"u{i % k + 1}") for i in range(1, k + 1)]


def ring_angle(k, i):
    return 90.0 + (i - 1) * 360.0 / k


@pytest.fixture
def ring():
    """Factory: k-gon u1..uk plus extra points and edges drawn inside it."""
    def build(k, extra=None, edges=()):
        points = {**ring_points(k), **(extra or {})}
        return build_from_coordinates(points, ring_edges(k) + list(edges))
    return build


@pytest.fixture
def triangle():
    """Single triangle abc"""
    return build_plane_graph(["a", "b", "c"], {"a": ["b", "c"], "b": ["c", "a"], "c": ["a", "b"]})


@pytest.fixture
def square():
    """4-cycle abcd"""
    return build_plane_graph(
        ["a", "b", "c", "d"],
        {"a": ["b", "d"], "b": ["c", "a"], "c": ["d", "b"], "d": ["a", "c"]},
    )


@pytest.fixture
def k4():
    """K4 drawn with d inside abc"""
    points = {"a": (0.0, 10.0), "b": (-10.0, -6.0), "c": (10.0, -6.0), "d": (0.0, 0.0)}
    edges = [("a", "b"), ("b", "c"), ("c", "a"), ("a", "d"), ("b", "d"), ("c", "d")]
    return build_from_coordinates(points, edges)


@pytest.fixture
def eleven_ring(ring):
    """Bare 11-cycle"""
    return ring(11)


@pytest.fixture(scope="session")
def corpus():
    """Curated instances by name"""
    return curated_corpus()


@pytest.fixture
def ledger(tmp_path):
    """Ledger writing into a temporary directory"""
    return CandidateLedger(path=str(tmp_path / "candidates.jsonl"), max_history=5)


TRIANGLE_PG1 = """# sample: triangle
pg1 3
a: b c
b: c a
c: a b
"""


@pytest.fixture
def triangle_pg1():
    return TRIANGLE_PG1
