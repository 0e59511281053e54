"""
Unit tests for the proof-guided extension engine
"""
import pytest

from coloring.colorer import (
    DisconnectedGraph,
    ExtensionEngine,
    ImproperBoundaryColoring,
    Infeasible,
    NotInClass,
    UnqualifiedFace,
    all_boundary_colorings,
    color_graph,
    color_graph_traced,
    extend_coloring,
    qualifies,
)
from coloring.oracle import verify_coloring
from coloring.types import Coloring, ExtensionTask
from graphs.errors import NotPlane
from graphs.plane_core import build_plane_graph

pytestmark = pytest.mark.unit


def agrees(graph, colouring, boundary):
    return verify_coloring(graph, colouring) and all(colouring[v] == c for v, c in boundary.items())


class TestQualifies:
    """Faces an extension task may start from"""

    def test_three_face(self, triangle):
        assert qualifies(triangle, triangle.faces[0])

    def test_nine_face(self, corpus):
        instance = corpus["four_face_diagonal"]
        assert qualifies(instance.graph, instance.face)

    def test_four_face(self, square):
        assert not qualifies(square, square.faces[0])

    def test_special_face(self, corpus):
        instance = corpus["special_face_basic"]
        assert qualifies(instance.graph, instance.face)

    def test_plain_eleven_face(self, eleven_ring):
        assert not qualifies(eleven_ring, eleven_ring.outer_face)


class TestBoundaryColorings:
    """Enumeration of boundary colourings"""

    def test_triangle(self, triangle):
        assert all_boundary_colorings(triangle, triangle.faces[0]) == [Coloring({0: 0, 1: 1, 2: 2})]

    def test_nine_cycle_counts(self, corpus):
        """C9 has 2^9 - 2 proper colourings, 85 up to permutation"""
        instance = corpus["four_face_diagonal"]
        assert len(all_boundary_colorings(instance.graph, instance.face)) == 85
        assert len(all_boundary_colorings(instance.graph, instance.face, up_to_permutation=False)) == 510


class TestExtend:
    """Extension tasks"""

    def setup_method(self):
        self.engine = ExtensionEngine()

    @pytest.mark.parametrize(
        "name,first_step",
        [
            ("lemma3_s1", "remove_and_subdivide"),
            ("four_face_diagonal", "identify_diagonal"),
            ("six_face_anchor", "identify_six_face"),
        ],
    )
    def test_first_reduction(self, corpus, name, first_step):
        instance = corpus[name]
        graph, face = instance.graph, instance.face
        boundary = all_boundary_colorings(graph, face)[0]
        colouring, trace = self.engine.extend(ExtensionTask(graph, face, boundary))
        assert agrees(graph, colouring, boundary)
        assert trace.steps[0].kind == first_step
        assert trace.is_monotone(graph.sigma)
        assert self.engine.stats["surgeries"] >= 1

    def test_every_boundary_extends(self, corpus):
        instance = corpus["six_face_anchor"]
        graph, face = instance.graph, instance.face
        for boundary in all_boundary_colorings(graph, face):
            colouring, trace = extend_coloring(ExtensionTask(graph, face, boundary))
            assert agrees(graph, colouring, boundary)
            assert trace.depth() <= graph.sigma

    def test_total_boundary_is_direct(self, triangle):
        boundary = Coloring({0: 2, 1: 0, 2: 1})
        colouring, trace = self.engine.extend(ExtensionTask(triangle, triangle.faces[0], boundary))
        assert colouring == boundary
        assert trace.steps == () and trace.terminal == "direct"

    def test_outside_class(self, k4):
        face = k4.faces[0]
        boundary = Coloring(dict(zip(face.walk, (0, 1, 2))))
        with pytest.raises(NotInClass):
            self.engine.extend(ExtensionTask(k4, face, boundary))

    def test_unqualified_face(self, square):
        face = square.faces[0]
        boundary = Coloring(dict(zip(face.walk, (0, 1, 0, 1))))
        with pytest.raises(UnqualifiedFace):
            self.engine.extend(ExtensionTask(square, face, boundary))

    def test_foreign_face(self, triangle, square):
        boundary = Coloring({0: 0, 1: 1, 2: 2})
        with pytest.raises(UnqualifiedFace):
            self.engine.extend(ExtensionTask(triangle, square.faces[1], boundary))

    def test_monochromatic_edge(self, triangle):
        with pytest.raises(ImproperBoundaryColoring):
            self.engine.extend(ExtensionTask(triangle, triangle.faces[0], Coloring({0: 0, 1: 0, 2: 1})))

    def test_partial_boundary(self, triangle):
        with pytest.raises(ImproperBoundaryColoring):
            self.engine.extend(ExtensionTask(triangle, triangle.faces[0], Coloring({0: 0, 1: 1})))

    def test_infeasible_goes_to_ledger(self, mocker, ledger, corpus):
        instance = corpus["four_face_diagonal"]
        graph, face = instance.graph, instance.face
        mocker.patch.object(ExtensionEngine, "_extend", return_value=None)
        boundary = all_boundary_colorings(graph, face)[0]
        with pytest.raises(Infeasible):
            extend_coloring(ExtensionTask(graph, face, boundary), ledger=ledger)
        (entry,) = ledger.load()
        assert entry["kind"] == "infeasible_extension"
        assert entry["detail"]["face"] == graph.describe(face.walk)


class TestColor:
    """Whole-graph colouring"""

    def test_separating_triangle_splits_first(self, corpus):
        graph = corpus["separating_triangle"].graph
        colouring, trace = color_graph_traced(graph)
        assert verify_coloring(graph, colouring)
        assert trace.steps[0].kind == "split_separating"
        assert trace.terminal == "split"
        assert trace.is_monotone(graph.sigma)

    def test_triangle_free_falls_back(self, eleven_ring):
        colouring, trace = color_graph_traced(eleven_ring)
        assert verify_coloring(eleven_ring, colouring)
        assert trace.terminal == "fallback"

    @pytest.mark.parametrize("name", ["ear_two", "lemma3_s1", "claw_center", "collapse_d_claw"])
    def test_corpus_graphs(self, corpus, name):
        graph = corpus[name].graph
        assert verify_coloring(graph, color_graph(graph))

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraph):
            color_graph(build_plane_graph(["a", "b"], {}))

    def test_outside_class(self, k4):
        with pytest.raises(NotInClass):
            color_graph(k4)


class TestStallsAndDefects:
    """Exhaustive search that should not have been needed, and embedding defects"""

    def test_stall_is_recorded(self, mocker, ledger, corpus):
        instance = corpus["four_face_diagonal"]
        graph, face = instance.graph, instance.face
        mocker.patch.object(ExtensionEngine, "_candidates", return_value=iter(()))
        engine = ExtensionEngine(ledger)
        boundary = all_boundary_colorings(graph, face)[0]
        colouring, trace = engine.extend(ExtensionTask(graph, face, boundary))
        assert agrees(graph, colouring, boundary)
        assert trace.terminal == "stalled"
        assert trace.stalled()
        assert engine.stats["stalls"] == 1
        (entry,) = ledger.load()
        assert entry["kind"] == "stalled_reduction"
        assert entry["detail"]["face"] == graph.describe(face.walk)

    def test_reduced_graph_is_not_a_stall(self, ledger, corpus):
        instance = corpus["four_face_diagonal"]
        graph, face = instance.graph, instance.face
        engine = ExtensionEngine(ledger)
        for boundary in all_boundary_colorings(graph, face):
            _, trace = engine.extend(ExtensionTask(graph, face, boundary))
            assert not trace.stalled()
        assert engine.stats["stalls"] == 0
        assert ledger.load() == []

    def test_embedding_defect_propagates(self, mocker, corpus):
        instance = corpus["four_face_diagonal"]
        graph, face = instance.graph, instance.face
        mocker.patch("coloring.colorer.identify_diagonal", side_effect=NotPlane("broken rotation"))
        boundary = all_boundary_colorings(graph, face)[0]
        with pytest.raises(NotPlane):
            ExtensionEngine().extend(ExtensionTask(graph, face, boundary))
