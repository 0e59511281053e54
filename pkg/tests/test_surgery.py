"""
Unit tests for reductions and colouring transfer
"""
import itertools

import pytest

from coloring.colorer import all_boundary_colorings
from coloring.oracle import brute_force_extend, verify_coloring
from coloring.types import Coloring
from graphs.class_guard import check_class
from graphs.geometry import build_from_coordinates
from reductions.surgery import (
    NoSuchEdge,
    NotAFourFace,
    NotASixFace,
    NotSeparating,
    PreconditionViolated,
    SurgeryError,
    SurgeryKind,
    describe_surgery,
    identification_preconditions,
    identify_diagonal,
    identify_six_face,
    merge_keeps_class,
    remove_and_subdivide,
    split_separating,
    subdivide_edge,
)
from tests.conftest import polar, ring_angle

pytestmark = pytest.mark.unit


def pulled_back(graph, surgery):
    """Colour every part with the oracle and compose the result."""
    colourings = [brute_force_extend(part) for part in surgery.parts]
    return surgery.transfer.pull_back(graph, colourings)


class TestSubdivideEdge:
    """Edge subdivision"""

    def test_path_replaces_edge(self, triangle):
        surgery = subdivide_edge(triangle, (0, 1), 2)
        part = surgery.result
        assert surgery.kind is SurgeryKind.SUBDIVIDE_EDGE
        assert part.labels == ("a", "b", "c", "a~b.1", "a~b.2")
        assert not part.has_edge(0, 1)
        assert sorted(f.degree for f in part.faces) == [5, 5]

    def test_boundary_pushes_onto_path(self, triangle):
        surgery = subdivide_edge(triangle, (0, 1), 2)
        pushed = surgery.transfer.push_forward(Coloring({0: 0, 1: 1, 2: 2}), 0, surgery.result)
        assert pushed.is_total(surgery.result)
        assert pushed.is_proper(surgery.result)
        assert pushed[3] == 1 and pushed[4] == 0

    def test_missing_edge(self, square):
        with pytest.raises(NoSuchEdge):
            subdivide_edge(square, (0, 2), 1)

    def test_needs_positive_k(self, triangle):
        with pytest.raises(PreconditionViolated):
            subdivide_edge(triangle, (0, 1), 0)


class TestRemoveAndSubdivide:
    """Cutting off a degree-2 vertex behind a chord"""

    def setup_method(self):
        self.chord_labels = ("u1", "u3")

    def test_sigma_drops_by_one(self, corpus):
        instance = corpus["lemma3_s1"]
        graph = instance.graph
        chord = tuple(graph.indices_of(self.chord_labels))
        surgery = remove_and_subdivide(graph, chord, graph.index_of("u2"), instance.face)
        part = surgery.result
        assert part.sigma == graph.sigma - 1
        assert "u2" not in part.labels and "u2.1" in part.labels
        assert not part.has_edge(*part.indices_of(self.chord_labels))
        assert surgery.tracked[0].degree == 9
        assert surgery.transfer.dropped == (graph.index_of("u2"),)

    def test_pull_back_is_proper(self, corpus):
        graph = corpus["lemma3_s1"].graph
        surgery = remove_and_subdivide(graph, tuple(graph.indices_of(self.chord_labels)), graph.index_of("u2"))
        colouring = pulled_back(graph, surgery)
        assert colouring.is_total(graph)
        assert verify_coloring(graph, colouring)

    def test_describe(self, corpus):
        graph = corpus["lemma3_s1"].graph
        surgery = remove_and_subdivide(graph, tuple(graph.indices_of(self.chord_labels)), graph.index_of("u2"))
        payload = describe_surgery(graph, surgery)
        assert payload["kind"] == "remove_and_subdivide"
        assert payload["parameters"] == {"chord": ["u1", "u3"], "w": ["u2"]}
        assert payload["parts"][0]["stand_ins"] == {"u2.1": "u2"}
        assert payload["dropped"] == ["u2"]
        assert payload["parts"][0]["sigma"] == graph.sigma - 1

    def test_wrong_vertex(self, corpus):
        graph = corpus["lemma3_s1"].graph
        with pytest.raises(PreconditionViolated):
            remove_and_subdivide(graph, tuple(graph.indices_of(self.chord_labels)), graph.index_of("u5"))

    def test_needs_larger_face_beside(self, triangle):
        """Both sides of a lone triangle are 3-faces"""
        with pytest.raises(PreconditionViolated):
            remove_and_subdivide(triangle, (0, 1), 2)


class TestIdentifyDiagonal:
    """Merging opposite corners of a 4-face"""

    def setup_method(self):
        self.diagonal = ("x", "u2")

    def four_face(self, graph):
        return next(f for f in graph.faces if f.degree == 4)

    def test_leaves_a_nine_cycle(self, corpus):
        instance = corpus["four_face_diagonal"]
        graph = instance.graph
        surgery = identify_diagonal(graph, self.four_face(graph), tuple(graph.indices_of(self.diagonal)), instance.face)
        part = surgery.result
        assert (part.vertex_count, part.edge_count) == (9, 9)
        assert "x+u2" in part.labels
        assert surgery.tracked[0].degree == 9
        assert check_class(part).in_class

    def test_merged_ends_share_a_colour(self, corpus):
        graph = corpus["four_face_diagonal"].graph
        x, u2 = graph.indices_of(self.diagonal)
        surgery = identify_diagonal(graph, self.four_face(graph), (x, u2))
        assert surgery.transfer.push_forward(Coloring({x: 0, u2: 1}), 0, surgery.result) is None
        assert surgery.transfer.push_forward(Coloring({x: 2, u2: 2}), 0, surgery.result) is not None
        colouring = pulled_back(graph, surgery)
        assert colouring[x] == colouring[u2]
        assert verify_coloring(graph, colouring)

    def test_not_a_diagonal(self, corpus):
        graph = corpus["four_face_diagonal"].graph
        with pytest.raises(PreconditionViolated):
            identify_diagonal(graph, self.four_face(graph), tuple(graph.indices_of(["x", "u1"])))

    def test_not_a_four_face(self, corpus):
        instance = corpus["four_face_diagonal"]
        graph = instance.graph
        with pytest.raises(NotAFourFace):
            identify_diagonal(graph, instance.face, tuple(graph.indices_of(self.diagonal)))


class TestIdentifySixFace:
    """Folding a 6-face onto a path"""

    def six_face(self, graph):
        return next(f for f in graph.faces if f.degree == 6)

    def test_fold_from_u1(self, corpus):
        instance = corpus["six_face_anchor"]
        graph = instance.graph
        surgery = identify_six_face(graph, self.six_face(graph), graph.index_of("u1"), instance.face)
        part = surgery.result
        assert (part.vertex_count, part.edge_count) == (9, 9)
        assert sum(1 for label in part.labels if "+" in label) == 2
        assert check_class(part).in_class
        assert surgery.tracked[0].degree == 9

    def test_pull_back_is_proper(self, corpus):
        graph = corpus["six_face_anchor"].graph
        surgery = identify_six_face(graph, self.six_face(graph), graph.index_of("u1"))
        assert verify_coloring(graph, pulled_back(graph, surgery))

    def test_anchor_off_face(self, corpus):
        graph = corpus["six_face_anchor"].graph
        with pytest.raises(PreconditionViolated):
            identify_six_face(graph, self.six_face(graph), graph.index_of("u6"))

    def test_not_a_six_face(self, corpus):
        instance = corpus["six_face_anchor"]
        with pytest.raises(NotASixFace):
            identify_six_face(instance.graph, instance.face, instance.graph.index_of("u1"))


class TestSplitSeparating:
    """Cutting along separating cycles"""

    def setup_method(self):
        self.cycle = ["a", "b", "c"]

    def test_two_parts(self, corpus):
        graph = corpus["separating_triangle"].graph
        surgery = split_separating(graph, graph.indices_of(self.cycle), 0)
        outer, inner = surgery.parts
        assert set(outer.labels) == {"a", "b", "c", "e", "f", "g"}
        assert set(inner.labels) == {"a", "b", "c", "d"}
        assert [f.degree for f in surgery.faces] == [3, 3]

    def test_padding(self, corpus):
        graph = corpus["separating_triangle"].graph
        surgery = split_separating(graph, graph.indices_of(self.cycle), 3)
        inner = surgery.parts[1]
        assert inner.vertex_count == 7
        assert surgery.faces[1].degree == 6
        assert len(surgery.transfer.padding[1][0]) == 5

    def test_padding_must_shrink(self, corpus):
        graph = corpus["separating_triangle"].graph
        with pytest.raises(PreconditionViolated):
            split_separating(graph, graph.indices_of(self.cycle), 5)

    def test_unknown_padding(self, corpus):
        graph = corpus["separating_triangle"].graph
        with pytest.raises(PreconditionViolated):
            split_separating(graph, graph.indices_of(self.cycle), 4)

    def test_facial_cycle(self, corpus):
        graph = corpus["separating_triangle"].graph
        with pytest.raises(NotSeparating):
            split_separating(graph, graph.indices_of(["b", "e", "f", "g"]), 0)

    def test_pull_back_through_both_parts(self, corpus):
        graph = corpus["separating_triangle"].graph
        surgery = split_separating(graph, graph.indices_of(self.cycle), 0)
        outer, inner = surgery.parts
        first = brute_force_extend(outer)
        on_cycle = Coloring({v: first[surgery.transfer.parts[0][v]] for v in surgery.parameters["cycle"]})
        second = brute_force_extend(inner, surgery.transfer.push_forward(on_cycle, 1, inner))
        colouring = surgery.transfer.pull_back(graph, [first, second])
        assert colouring.is_total(graph)
        assert verify_coloring(graph, colouring)

    def test_describe(self, corpus):
        graph = corpus["separating_triangle"].graph
        payload = describe_surgery(graph, split_separating(graph, graph.indices_of(self.cycle), 3))
        assert payload["kind"] == "split_separating"
        assert payload["parameters"]["padding"] == [3]
        assert len(payload["parts"]) == 2
        assert len(payload["parts"][1]["padding"][0]) == 5


CHORDED = {
    4: {"padding": 5, "chord": ("u1", "u3"), "y": (polar(5, 180), ("u1", "u2"))},
    6: {"padding": 3, "chord": ("u1", "u4"), "y": (polar(5, 180), ("u2", "u3"))},
    9: {"padding": 0, "chord": ("u1", "u3"), "y": (polar(5, ring_angle(9, 6)), ("u5", "u7"))},
}


def chorded_cycle(ring, k):
    """k-ring with one chord and one vertex y inside, and a second ring w1..wk outside"""
    case = CHORDED[k]
    (point, (a, b)) = case["y"]
    extra = {"y": point, **{f"w{i}": polar(20, ring_angle(k, i)) for i in range(1, k + 1)}}
    edges = [case["chord"], ("y", a), ("y", b)]
    edges += [(f"u{i}", f"w{i}") for i in range(1, k + 1)]
    edges += [(f"w{i}", f"w{i % k + 1}") for i in range(1, k + 1)]
    return ring(k, extra, edges)


def has_edge(part, a, b):
    return part.has_edge(part.index_of(a), part.index_of(b))


class TestSplitAlongChordedCycles:
    """Separating 4-, 6- and 9-cycles with an interior chord"""

    @pytest.mark.parametrize("k", [4, 6, 9])
    def test_parts_keep_the_chord(self, ring, k):
        graph = chorded_cycle(ring, k)
        cycle = graph.indices_of([f"u{i}" for i in range(1, k + 1)])
        surgery = split_separating(graph, cycle, CHORDED[k]["padding"])
        outer, inner = surgery.parts
        assert has_edge(outer, *CHORDED[k]["chord"])
        assert has_edge(inner, *CHORDED[k]["chord"])
        assert "y" not in outer.labels
        assert "y" in inner.labels
        assert not any(label.startswith("w") for label in inner.labels)

    @pytest.mark.parametrize("k", [4, 6, 9])
    def test_every_outer_cycle_colouring_carries_inside(self, ring, k):
        graph = chorded_cycle(ring, k)
        cycle = graph.indices_of([f"u{i}" for i in range(1, k + 1)])
        surgery = split_separating(graph, cycle, CHORDED[k]["padding"])
        outer, inner = surgery.parts
        to_outer = surgery.transfer.parts[0]
        for colours in itertools.product(range(3), repeat=k):
            on_cycle = Coloring(dict(zip(cycle, colours)))
            if not Coloring({to_outer[v]: c for v, c in on_cycle.items()}).is_proper(outer):
                continue
            assert surgery.transfer.push_forward(on_cycle, 1, inner) is not None

    @pytest.mark.parametrize("k", [4, 6, 9])
    def test_extends_through_parts_iff_whole_graph_extends(self, ring, k):
        graph = chorded_cycle(ring, k)
        cycle = graph.indices_of([f"u{i}" for i in range(1, k + 1)])
        surgery = split_separating(graph, cycle, CHORDED[k]["padding"])
        outer, inner = surgery.parts
        for boundary in all_boundary_colorings(graph, graph.outer_face):
            expected = brute_force_extend(graph, boundary) is not None
            pushed = surgery.transfer.push_forward(boundary, 0, outer)
            first = None if pushed is None else brute_force_extend(outer, pushed)
            if first is None:
                assert not expected
                continue
            on_cycle = Coloring({v: first[surgery.transfer.parts[0][v]] for v in surgery.parameters["cycle"]})
            pushed_inner = surgery.transfer.push_forward(on_cycle, 1, inner)
            assert pushed_inner is not None
            second = brute_force_extend(inner, pushed_inner)
            assert second is not None
            colouring = surgery.transfer.pull_back(graph, [first, second])
            assert expected
            assert verify_coloring(graph, colouring)
            assert all(colouring[v] == c for v, c in boundary.items())


def theta_graph():
    """4-face u v w x whose diagonal u w is also joined by a path of length 7 outside"""
    points = {"u": (-10.0, 0.0), "w": (10.0, 0.0), "v": (0.0, 4.0), "x": (0.0, -4.0)}
    points.update({f"p{i}": polar(10, 180 - 180 * i / 7) for i in range(1, 7)})
    edges = [("u", "v"), ("v", "w"), ("u", "x"), ("x", "w"), ("u", "p1"), ("p6", "w")]
    edges += [(f"p{i}", f"p{i + 1}") for i in range(1, 6)]
    return build_from_coordinates(points, edges)


class TestIdentificationPreconditions:
    """Merges that provably stay in the class"""

    def four_face(self, graph):
        return next(f for f in graph.faces if f.degree == 4)

    def test_diagonal_through_degree_two_vertex(self, corpus):
        graph = corpus["four_face_diagonal"].graph
        surgery = identify_diagonal(graph, self.four_face(graph), tuple(graph.indices_of(["x", "u2"])))
        assert identification_preconditions(graph, surgery)
        assert check_class(surgery.result).in_class

    def test_diagonal_on_a_nine_cycle(self, corpus):
        graph = corpus["four_face_diagonal"].graph
        u1, u2, u3, x = graph.indices_of(["u1", "u2", "u3", "x"])
        assert not merge_keeps_class(graph, u1, u3, u2)
        assert not merge_keeps_class(graph, u1, u3, x)
        surgery = identify_diagonal(graph, self.four_face(graph), (u1, u3))
        assert not identification_preconditions(graph, surgery)

    def test_rejected_merge_would_close_a_seven_cycle(self):
        graph = theta_graph()
        assert check_class(graph).in_class
        face = graph.find_face(graph.indices_of(["u", "v", "w", "x"]))
        surgery = identify_diagonal(graph, face, tuple(graph.indices_of(["u", "w"])))
        assert not identification_preconditions(graph, surgery)
        assert check_class(surgery.result).seven_cycle_witness is not None

    def test_merge_needs_a_common_neighbour(self, corpus):
        graph = corpus["four_face_diagonal"].graph
        x, u2, u5 = graph.indices_of(["x", "u2", "u5"])
        assert not merge_keeps_class(graph, x, u2, u5)

    def test_six_face_merges_that_pass_stay_in_class(self, corpus):
        graph = corpus["six_face_anchor"].graph
        six = next(f for f in graph.faces if f.degree == 6)
        for anchor in six.walk:
            try:
                surgery = identify_six_face(graph, six, anchor)
            except SurgeryError:
                continue
            if identification_preconditions(graph, surgery):
                assert check_class(surgery.result).in_class

    def test_split_is_not_an_identification(self, corpus):
        graph = corpus["separating_triangle"].graph
        surgery = split_separating(graph, graph.indices_of(["a", "b", "c"]), 0)
        with pytest.raises(SurgeryError):
            identification_preconditions(graph, surgery)
