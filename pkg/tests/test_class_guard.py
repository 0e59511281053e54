"""
Unit tests for class membership checks
"""
import networkx as nx
import pytest

from cache.cache_manager import cache_manager
from graphs import class_guard
from graphs.class_guard import (
    adjacent_triangles,
    check_class,
    cycles_of_length,
    has_cycle_through,
    iter_cycles,
    triangles,
)

pytestmark = pytest.mark.unit


def networkx_count(graph, k):
    return sum(1 for c in nx.simple_cycles(graph.to_networkx(), length_bound=k) if len(c) == k)


class TestCycles:
    """Cycle enumeration"""

    def test_square_has_one_four_cycle(self, square):
        assert len(cycles_of_length(square, 4)) == 1
        assert cycles_of_length(square, 3) == []

    def test_k4_cycle_counts(self, k4):
        assert len(triangles(k4)) == 4
        assert len(cycles_of_length(k4, 4)) == 3

    def test_cycles_start_at_smallest_vertex(self, k4):
        for handle in cycles_of_length(k4, 4):
            assert handle.vertices[0] == min(handle.vertices)

    def test_short_length_rejected(self, square):
        with pytest.raises(ValueError):
            list(iter_cycles(square, 2))

    @pytest.mark.parametrize("k", [3, 4, 5, 6, 7])
    def test_counts_match_networkx(self, corpus, k):
        """Every curated graph, every short length"""
        for instance in corpus.values():
            assert len(cycles_of_length(instance.graph, k)) == networkx_count(instance.graph, k), instance.name


class TestCheckClass:
    """Membership verdicts and witnesses"""

    def setup_method(self):
        cache_manager.clear("class_report")

    def test_triangle_in_class(self, triangle):
        report = check_class(triangle)
        assert report.in_class
        assert report.triangle_count == 1
        assert report.adjacent_triangle_witness is None

    def test_five_cycle_witness(self, ring):
        graph = ring(5)
        report = check_class(graph)
        assert not report.in_class
        assert set(report.five_cycle_witness.vertices) == set(range(5))
        assert report.seven_cycle_witness is None

    def test_seven_cycle_witness(self, ring):
        report = check_class(ring(7))
        assert not report.in_class
        assert report.seven_cycle_witness.length == 7
        assert report.five_cycle_witness is None

    def test_k4_has_adjacent_triangles(self, k4):
        report = check_class(k4)
        assert not report.in_class
        assert report.triangle_count == 4
        first, second = report.adjacent_triangle_witness
        assert len(first.edges() & second.edges()) == 1
        assert adjacent_triangles(k4) == report.adjacent_triangle_witness

    def test_to_json(self, k4):
        payload = check_class(k4).to_json(k4)
        assert payload["in_class"] is False
        assert payload["triangle_count"] == 4
        assert payload["witnesses"]["five_cycle"] is None
        pair = payload["witnesses"]["adjacent_triangles"]
        assert len(pair) == 2
        assert all(set(t) <= {"a", "b", "c", "d"} and len(t) == 3 for t in pair)

    def test_eleven_ring_in_class(self, eleven_ring):
        report = check_class(eleven_ring)
        assert report.in_class
        assert report.triangle_count == 0

    def test_verdict_is_memoised(self, mocker, k4):
        spy = mocker.spy(class_guard, "_check_class")
        check_class(k4)
        check_class(k4)
        assert spy.call_count == 1

    def test_cache_can_be_bypassed(self, mocker, k4):
        spy = mocker.spy(class_guard, "_check_class")
        check_class(k4, use_cache=False)
        check_class(k4, use_cache=False)
        assert spy.call_count == 2


class TestCycleThroughPath:
    """Cycles running along a given path"""

    def test_ring_runs_along_its_own_path(self, ring):
        graph = ring(9)
        path = graph.indices_of(["u1", "u2", "u3"])
        assert has_cycle_through(graph, 9, path)
        assert has_cycle_through(graph, 9, list(reversed(path)))

    def test_wrong_length_or_gap(self, ring):
        graph = ring(9)
        assert not has_cycle_through(graph, 7, graph.indices_of(["u1", "u2", "u3"]))
        assert not has_cycle_through(graph, 9, graph.indices_of(["u1", "u3", "u4"]))
