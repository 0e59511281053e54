"""
Curated instances for the structural checks and the extension engine.

Each instance is a straight-line drawing. Ring instances put ``u1 .. uk`` on
a regular polygon, counterclockwise from the top, and draw everything else
inside; the unbounded face is then the designated face and its walk reads
``u1 u2 .. uk``. Expected outcomes are recorded by hand and checked by
``observe``.
"""
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from coloring.colorer import ExtensionEngine, all_boundary_colorings, color_graph_traced
from coloring.oracle import is_three_colorable, verify_coloring
from coloring.types import ExtensionTask
from graphs.class_guard import check_class
from graphs.geometry import Point, build_from_coordinates
from graphs.pg1 import save_pg1
from graphs.plane_core import FacialWalk, PlaneGraph
from graphs.structure import (
    claw_centers,
    d_claw_centers,
    enumerate_collapses,
    find_ears,
    is_special_cycle,
    is_special_face,
)

logger = logging.getLogger(__name__)

CORPUS_VERSION = "1"
RADIUS = 10.0


class CorpusEntry(BaseModel):
    """Manifest record of one curated instance."""

    name: str
    file: str
    description: str
    face: Optional[List[str]] = None
    cycle: Optional[List[str]] = None
    expected: Dict[str, Any]


@dataclass(frozen=True)
class CuratedInstance:
    name: str
    description: str
    graph: PlaneGraph = field(repr=False)
    expected: Mapping[str, Any] = field(repr=False)
    face_labels: Optional[Tuple[str, ...]] = None
    cycle_labels: Optional[Tuple[str, ...]] = None

    @property
    def face(self) -> Optional[FacialWalk]:
        if self.face_labels is None:
            return None
        return self.graph.find_face(self.graph.indices_of(self.face_labels))

    def entry(self) -> CorpusEntry:
        return CorpusEntry(
            name=self.name,
            file=f"{self.name}.pg",
            description=self.description,
            face=None if self.face_labels is None else list(self.face_labels),
            cycle=None if self.cycle_labels is None else list(self.cycle_labels),
            expected=dict(self.expected),
        )


# -- drawing helpers ---------------------------------------------------------


def _angle(k: int, i: int) -> float:
    """Polar angle in degrees of ring vertex ``u<i>`` on a ``k``-gon."""
    return 90.0 + (i - 1) * 360.0 / k


def _polar(r: float, degrees: float) -> Point:
    t = math.radians(degrees)
    return (r * math.cos(t), r * math.sin(t))


def _ring(k: int) -> Dict[str, Point]:
    return {f"u{i}": _polar(RADIUS, _angle(k, i)) for i in range(1, k + 1)}


def _ring_edges(k: int) -> List[Tuple[str, str]]:
    return [(f"u{i}", f"u{i % k + 1}") for i in range(1, k + 1)]


def _ring_instance(
    name: str,
    description: str,
    k: int,
    extra: Mapping[str, Point],
    edges: Sequence[Tuple[str, str]],
    expected: Mapping[str, Any],
) -> CuratedInstance:
    points = {**_ring(k), **extra}
    graph = build_from_coordinates(points, _ring_edges(k) + list(edges))
    return CuratedInstance(
        name=name,
        description=description,
        graph=graph,
        expected=expected,
        face_labels=tuple(graph.describe(graph.outer_face.walk)),
    )


# -- instances ---------------------------------------------------------------


def _ear_basic() -> CuratedInstance:
    return _ring_instance(
        "ear_basic",
        "11-cycle with one apex v on u1 and u3",
        11,
        {"v": _polar(6, _angle(11, 2))},
        [("v", "u1"), ("v", "u3")],
        {"in_class": True, "triangle_count": 0, "ears": 1, "collapse_states": 2, "special_face": False},
    )


def _ear_two() -> CuratedInstance:
    return _ring_instance(
        "ear_two",
        "11-cycle with two independent ears; collapses: neither, each, both",
        11,
        {"v": _polar(6, _angle(11, 2)), "w": _polar(6, _angle(11, 6))},
        [("v", "u1"), ("v", "u3"), ("w", "u5"), ("w", "u7")],
        {"in_class": True, "triangle_count": 0, "ears": 2, "collapse_states": 4, "special_face": False},
    )


def _lemma3_s1() -> CuratedInstance:
    return _ring_instance(
        "lemma3_s1",
        "9-face whose chord u1u3 cuts off the single vertex u2; x hangs inside on u5 and u7",
        9,
        {"x": _polar(6, _angle(9, 6))},
        [("u1", "u3"), ("x", "u5"), ("x", "u7")],
        {"in_class": True, "triangle_count": 1, "first_step": "remove_and_subdivide", "extends": True},
    )


def _special_cycle_triangle() -> CuratedInstance:
    points = {
        **_ring(11),
        "t": _polar(7, (_angle(11, 1) + _angle(11, 2)) / 2),
        "p": _polar(14, _angle(11, 6)),
    }
    edges = _ring_edges(11) + [("t", "u1"), ("t", "u2"), ("p", "u6")]
    graph = build_from_coordinates(points, edges)
    return CuratedInstance(
        name="lemma4_triangle",
        description="separating 11-cycle with a triangle apex t inside and a pendant p outside",
        graph=graph,
        expected={"in_class": True, "triangle_count": 1, "special_cycle": True},
        cycle_labels=tuple(f"u{i}" for i in range(1, 12)),
    )


def _special_face_basic() -> CuratedInstance:
    return _ring_instance(
        "special_face_basic",
        "11-face with a triangle on u1u2 and nothing else",
        11,
        {"t": _polar(7, (_angle(11, 1) + _angle(11, 2)) / 2)},
        [("t", "u1"), ("t", "u2")],
        {
            "in_class": True,
            "triangle_count": 1,
            "ears": 0,
            "collapse_states": 1,
            "special_face": True,
            "violation": None,
        },
    )


def _claw_center() -> CuratedInstance:
    return _ring_instance(
        "claw_center",
        "11-face with z adjacent to u1, u3, u5 and a triangle on u8u9",
        11,
        {"z": _polar(5, _angle(11, 3)), "t": _polar(7, (_angle(11, 8) + _angle(11, 9)) / 2)},
        [("z", "u1"), ("z", "u3"), ("z", "u5"), ("t", "u8"), ("t", "u9")],
        {
            "in_class": True,
            "triangle_count": 1,
            "ears": 2,
            "special_face": False,
            "claw_centers": ["z"],
            "violation": {"kind": "claw_center", "vertices": ["z"], "state": 0},
        },
    )


def _d_claw_center() -> CuratedInstance:
    return _ring_instance(
        "d_claw_center",
        "11-face with the edge ab, a on u1 and u3, b on u4 and u6, and a triangle on u8u9",
        11,
        {
            "a": _polar(6, _angle(11, 2)),
            "b": _polar(6, _angle(11, 5)),
            "t": _polar(7, (_angle(11, 8) + _angle(11, 9)) / 2),
        },
        [("a", "u1"), ("a", "u3"), ("b", "u4"), ("b", "u6"), ("a", "b"), ("t", "u8"), ("t", "u9")],
        {
            "in_class": True,
            "triangle_count": 1,
            "ears": 2,
            "special_face": False,
            "claw_centers": [],
            "d_claw_centers": [["a", "b"]],
            "violation": {"kind": "d_claw_center", "vertices": ["a", "b"], "state": 0},
        },
    )


def _collapse_d_claw() -> CuratedInstance:
    return _ring_instance(
        "collapse_d_claw",
        "11-face that is clean itself; reducing the ear at v puts y and z into a d-claw",
        11,
        {
            "v": _polar(6, _angle(11, 2)),
            "y": _polar(4, 235.0),
            "z": _polar(5.5, _angle(11, 4)),
            "t": _polar(7, (_angle(11, 8) + _angle(11, 9)) / 2),
        },
        [
            ("v", "u1"),
            ("v", "u3"),
            ("y", "v"),
            ("y", "u6"),
            ("z", "y"),
            ("z", "u3"),
            ("z", "u5"),
            ("t", "u8"),
            ("t", "u9"),
        ],
        {
            "in_class": True,
            "triangle_count": 1,
            "ears": 2,
            "special_face": False,
            "claw_centers": [],
            "d_claw_centers": [],
            "violation": {"kind": "d_claw_center", "vertices": ["y", "z"], "state": 1},
        },
    )


def _four_face_diagonal() -> CuratedInstance:
    return _ring_instance(
        "four_face_diagonal",
        "9-face with x on u1 and u3, leaving the 4-face x u1 u2 u3",
        9,
        {"x": _polar(6, _angle(9, 2))},
        [("x", "u1"), ("x", "u3")],
        {"in_class": True, "triangle_count": 0, "first_step": "identify_diagonal", "extends": True},
    )


def _six_face_anchor() -> CuratedInstance:
    return _ring_instance(
        "six_face_anchor",
        "9-face with the path u1 y1 y2 u4, leaving the 6-face u1 u2 u3 u4 y2 y1",
        9,
        {"y1": _polar(6.5, _angle(9, 2)), "y2": _polar(6.5, _angle(9, 3))},
        [("y1", "u1"), ("y1", "y2"), ("y2", "u4")],
        {"in_class": True, "triangle_count": 0, "first_step": "identify_six_face", "extends": True},
    )


def _separating_triangle() -> CuratedInstance:
    points = {
        "a": (0.0, 10.0),
        "b": (-10.0, -6.0),
        "c": (10.0, -6.0),
        "d": (0.0, 0.0),
        "e": (-14.0, -4.0),
        "f": (-16.0, -10.0),
        "g": (-10.0, -12.0),
    }
    edges = [("a", "b"), ("b", "c"), ("c", "a"), ("a", "d"), ("b", "e"), ("e", "f"), ("f", "g"), ("g", "b")]
    return CuratedInstance(
        name="separating_triangle",
        description="triangle abc with a pendant d inside and a 4-cycle on b outside",
        graph=build_from_coordinates(points, edges),
        expected={"in_class": True, "triangle_count": 1, "colorable": True, "color_first_step": "split_separating"},
    )


def _negative_k4() -> CuratedInstance:
    points = {"a": (0.0, 10.0), "b": (-10.0, -6.0), "c": (10.0, -6.0), "d": (0.0, 0.0)}
    edges = [("a", "b"), ("b", "c"), ("c", "a"), ("a", "d"), ("b", "d"), ("c", "d")]
    return CuratedInstance(
        name="negative_k4",
        description="K4: adjacent triangles, not 3-colourable",
        graph=build_from_coordinates(points, edges),
        expected={"in_class": False, "triangle_count": 4, "colorable": False},
    )


def _negative_five_cycle() -> CuratedInstance:
    graph = build_from_coordinates(_ring(5), _ring_edges(5))
    return CuratedInstance(
        name="negative_five_cycle",
        description="a bare 5-cycle",
        graph=graph,
        expected={"in_class": False, "triangle_count": 0, "colorable": True},
    )


_BUILDERS = (
    _ear_basic,
    _ear_two,
    _lemma3_s1,
    _special_cycle_triangle,
    _special_face_basic,
    _claw_center,
    _d_claw_center,
    _collapse_d_claw,
    _four_face_diagonal,
    _six_face_anchor,
    _separating_triangle,
    _negative_k4,
    _negative_five_cycle,
)


def curated_corpus() -> Dict[str, CuratedInstance]:
    """Every curated instance by name, in a fixed order."""
    corpus = {}
    for build in _BUILDERS:
        instance = build()
        corpus[instance.name] = instance
    return corpus


# -- golden outcomes ---------------------------------------------------------


def _extension_outcomes(instance: CuratedInstance) -> Tuple[Optional[str], bool]:
    graph, face = instance.graph, instance.face
    first_step = None
    ok = True
    for i, boundary in enumerate(all_boundary_colorings(graph, face)):
        colouring, trace = ExtensionEngine().extend(ExtensionTask(graph, face, boundary))
        if i == 0:
            first_step = trace.steps[0].kind if trace.steps else trace.terminal
        ok = ok and verify_coloring(graph, colouring) and all(colouring[v] == c for v, c in boundary.items())
    return first_step, ok


def observe(instance: CuratedInstance) -> Dict[str, Any]:
    """Recompute every outcome named in ``instance.expected``."""
    graph, face = instance.graph, instance.face
    wanted = set(instance.expected)
    observed: Dict[str, Any] = {}

    report = check_class(graph)
    observed["in_class"] = report.in_class
    observed["triangle_count"] = report.triangle_count

    if wanted & {"ears", "collapse_states"}:
        observed["ears"] = len(find_ears(graph, face))
        observed["collapse_states"] = len(enumerate_collapses(graph, face))
    if wanted & {"special_face", "violation"}:
        certificate = is_special_face(graph, face)
        observed["special_face"] = certificate.valid
        observed["violation"] = certificate.to_json()["violation"]
    if "claw_centers" in wanted:
        observed["claw_centers"] = graph.describe(claw_centers(graph, face))
    if "d_claw_centers" in wanted:
        observed["d_claw_centers"] = [graph.describe(pair) for pair in d_claw_centers(graph, face)]
    if "special_cycle" in wanted:
        observed["special_cycle"] = is_special_cycle(graph, graph.indices_of(instance.cycle_labels))[0]
    if wanted & {"first_step", "extends"}:
        observed["first_step"], observed["extends"] = _extension_outcomes(instance)
    if "colorable" in wanted:
        observed["colorable"] = is_three_colorable(graph)
    if "color_first_step" in wanted:
        _, trace = color_graph_traced(graph)
        observed["color_first_step"] = trace.steps[0].kind if trace.steps else trace.terminal

    return {key: observed[key] for key in instance.expected}


def export_corpus(directory: Union[str, Path]) -> List[CorpusEntry]:
    """Write ``<name>.pg`` for every instance plus ``manifest.json``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for instance in curated_corpus().values():
        entry = instance.entry()
        save_pg1(instance.graph, directory / entry.file, metadata={"corpus": instance.name})
        entries.append(entry)
    manifest = {"version": CORPUS_VERSION, "instances": [e.model_dump() for e in entries]}
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"exported {len(entries)} curated instances to {directory}")
    return entries
