"""
Unit tests for plane_core and geometry modules
"""
import pytest

from graphs.errors import NoSuchFace, NotACycle, NotPlane, NotSimple, SymmetryViolation, UnknownLabel
from graphs.geometry import build_from_coordinates
from graphs.plane_core import (
    build_plane_graph,
    check_cycle,
    is_two_connected,
    orient_cycle,
    sigma_measure,
    trace_faces,
)

pytestmark = pytest.mark.unit


class TestBuildPlaneGraph:
    """Validation of rotation systems"""

    def test_triangle_has_two_faces(self, triangle):
        """A triangle bounds two 3-faces"""
        assert triangle.vertex_count == 3
        assert triangle.edge_count == 3
        assert [f.degree for f in triangle.faces] == [3, 3]
        assert all(f.is_cycle for f in triangle.faces)

    def test_face_degrees_sum_to_twice_edges(self, k4):
        """Handshake over faces"""
        assert sum(f.degree for f in k4.faces) == 2 * k4.edge_count
        assert len(k4.faces) == 4

    def test_asymmetric_rotation_rejected(self):
        """One-way adjacency is refused"""
        with pytest.raises(SymmetryViolation):
            build_plane_graph(["a", "b"], {"a": ["b"], "b": []})

    def test_loop_rejected(self):
        with pytest.raises(NotSimple):
            build_plane_graph(["a"], {"a": ["a"]})

    def test_parallel_edge_rejected(self):
        with pytest.raises(NotSimple):
            build_plane_graph(["a", "b"], {"a": ["b", "b"], "b": ["a", "a"]})

    def test_duplicate_label_rejected(self):
        with pytest.raises(NotSimple):
            build_plane_graph(["a", "a"], [[], []])

    def test_unknown_neighbour_rejected(self):
        with pytest.raises(UnknownLabel):
            build_plane_graph(["a"], {"a": ["z"]})

    def test_non_planar_rotation_rejected(self):
        """K4 with every rotation sorted has genus one"""
        rotation = {
            "a": ["b", "c", "d"],
            "b": ["a", "c", "d"],
            "c": ["a", "b", "d"],
            "d": ["a", "b", "c"],
        }
        with pytest.raises(NotPlane):
            build_plane_graph(["a", "b", "c", "d"], rotation)

    def test_isolated_vertices_have_no_faces(self):
        graph = build_plane_graph(["a", "b"], {})
        assert graph.faces == ()
        assert graph.outer_face is None
        assert not graph.is_connected()


class TestFaces:
    """Face tracing and designation of the unbounded face"""

    def test_face_of_dart_is_consistent(self, k4):
        """Every dart lies on exactly the face that lists it"""
        for face in k4.faces:
            for u, v in face.darts():
                assert k4.face_of_dart(u, v) == face

    def test_face_of_non_edge_raises(self, square):
        a, c = square.indices_of(["a", "c"])
        with pytest.raises(NoSuchFace):
            square.face_of_dart(a, c)

    def test_walk_starts_at_lowest_dart(self, k4):
        for face in k4.faces:
            assert face.darts()[0] == min(face.darts())

    def test_find_face_either_direction(self, square):
        walk = square.faces[0].walk
        assert square.find_face(walk) == square.faces[0]
        assert square.find_face(tuple(reversed(walk))) == square.faces[0]

    def test_find_face_missing(self, square):
        with pytest.raises(NoSuchFace):
            square.find_face((0, 1, 2))

    def test_with_outer_changes_designation_only(self, triangle):
        other = triangle.faces[1]
        moved = triangle.with_outer(other)
        assert moved.outer_face == other
        assert moved == triangle
        assert moved.digest() != triangle.digest()

    def test_trace_faces_matches_attribute(self, k4):
        assert trace_faces(k4) == k4.faces


class TestGeometry:
    """Embeddings read off straight-line drawings"""

    def test_ring_outer_walk_reads_counterclockwise(self, eleven_ring):
        """The unbounded face of a ring walks u1, u2, ... u11"""
        assert eleven_ring.describe(eleven_ring.outer_face.walk) == [f"u{i}" for i in range(1, 12)]

    def test_square_drawing(self):
        points = {"a": (0.0, 0.0), "b": (1.0, 0.0), "c": (1.0, 1.0), "d": (0.0, 1.0)}
        graph = build_from_coordinates(points, [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
        assert [f.degree for f in graph.faces] == [4, 4]

    def test_drawing_matches_networkx_planarity(self, k4):
        import networkx as nx

        planar, _ = nx.check_planarity(k4.to_networkx())
        assert planar


class TestMeasuresAndCycles:
    """σ, connectivity and cycle orientation"""

    def test_sigma(self, k4):
        assert sigma_measure(k4) == 10
        assert k4.sigma == 10

    def test_two_connected(self, triangle):
        assert is_two_connected(triangle)

    def test_path_is_not_two_connected(self, square):
        path, _ = square.without(vertices=[square.index_of("a")])
        assert path.vertex_count == 3
        assert path.edge_count == 2
        assert not is_two_connected(path)

    def test_without_keeps_labels(self, square):
        graph, index = square.without(vertices=[square.index_of("b")])
        assert graph.labels == ("a", "c", "d")
        assert index == {0: 0, 2: 1, 3: 2}

    def test_check_cycle_rejects_non_cycle(self, square):
        a, c = square.indices_of(["a", "c"])
        with pytest.raises(NotACycle):
            check_cycle(square, [a, c, a])

    def test_orient_cycle_puts_interior_on_the_right(self, eleven_ring):
        """Outer walk runs counterclockwise, so the cycle is written the other way"""
        handle = orient_cycle(eleven_ring, range(11))
        assert handle.vertices == (0,) + tuple(range(10, 0, -1))
        assert handle.path(0, 9) == (0, 10, 9)
