"""
Configurations on and around a designated face.

Sides of a cycle come from the embedding, not from geometry: faces are
joined across every edge that is not on the cycle, and the side holding the
reference face (by default the designated unbounded face) is the exterior.

The 11-face machinery follows the usual reading:

* an ear of an 11-face ``f`` bounded by ``u1 .. u11`` is a 4-cycle
  ``u1 u2 u3 v`` with ``v`` off the face;
* the ear-reduction deletes ``u2`` and everything inside the ear, leaving the
  11-face ``u1 v u3 .. u11``; iterating gives the collapses of ``f``;
* ``f`` is special when its boundary is a cycle, some triangle shares exactly
  one edge with it, and no collapse has a claw-center or a d-claw-center.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from graphs.class_guard import iter_cycles, triangles
from graphs.errors import NotACycleBoundary, NotAnElevenFace, NotElevenCycle
from graphs.plane_core import (
    CycleHandle,
    Edge,
    FacialWalk,
    PlaneGraph,
    normalize_edge,
    orient_cycle,
)

logger = logging.getLogger(__name__)

CycleLike = Union[CycleHandle, Sequence[int]]

ELEVEN = 11


# ---------------------------------------------------------------------------
# Cycle sides
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CycleSides:
    """Face-side partition of the graph around a cycle."""

    cycle: CycleHandle
    interior: frozenset
    exterior: frozenset
    interior_chords: Tuple[Edge, ...]
    exterior_chords: Tuple[Edge, ...]
    interior_faces: frozenset
    exterior_faces: frozenset


class CycleClass(str, Enum):
    SEPARATING = "separating"
    FACIAL = "facial"


@dataclass(frozen=True)
class CycleKind:
    kind: CycleClass
    interior: frozenset
    exterior: frozenset

    @property
    def is_separating(self) -> bool:
        return self.kind is CycleClass.SEPARATING


def _vertices_of(cycle: CycleLike) -> Tuple[int, ...]:
    return cycle.vertices if isinstance(cycle, CycleHandle) else tuple(cycle)


def cycle_sides(
    graph: PlaneGraph, cycle: CycleLike, reference_face: Optional[FacialWalk] = None
) -> CycleSides:
    """Interior and exterior of a cycle, with the chords on each side.

    Vertices of other components count as exterior.

    Raises:
        NotACycle
    """
    handle = orient_cycle(graph, _vertices_of(cycle), reference_face)
    on_cycle = set(handle.vertices)
    regions = graph.face_regions(handle.edges())
    c0, c1 = handle.vertices[0], handle.vertices[1]
    inside = regions[graph.face_of_dart(c0, c1).index]

    interior_faces = frozenset(f.index for f in graph.faces if regions[f.index] == inside)
    interior = set()
    for i in interior_faces:
        interior.update(w for w in graph.faces[i].walk if w not in on_cycle)
    exterior = frozenset(v for v in range(graph.vertex_count) if v not in on_cycle and v not in interior)

    cycle_edges = handle.edges()
    inner_chords, outer_chords = [], []
    for u in sorted(on_cycle):
        for w in sorted(graph.adjacency(u)):
            if u < w and w in on_cycle and (u, w) not in cycle_edges:
                side = inner_chords if regions[graph.face_of_dart(u, w).index] == inside else outer_chords
                side.append((u, w))

    return CycleSides(
        cycle=handle,
        interior=frozenset(interior),
        exterior=exterior,
        interior_chords=tuple(inner_chords),
        exterior_chords=tuple(outer_chords),
        interior_faces=interior_faces,
        exterior_faces=frozenset(f.index for f in graph.faces) - interior_faces,
    )


def classify_cycle(graph: PlaneGraph, cycle: CycleLike) -> CycleKind:
    """Separating iff both sides hold a vertex.

    Raises:
        NotACycle
    """
    sides = cycle_sides(graph, cycle)
    separating = bool(sides.interior) and bool(sides.exterior)
    return CycleKind(
        kind=CycleClass.SEPARATING if separating else CycleClass.FACIAL,
        interior=sides.interior,
        exterior=sides.exterior,
    )


def separating_cycles(graph: PlaneGraph, k: int) -> List[CycleSides]:
    """Every separating k-cycle with its sides, in ``cycles_of_length`` order."""
    found = []
    for handle in iter_cycles(graph, k):
        sides = cycle_sides(graph, handle)
        if sides.interior and sides.exterior:
            found.append(sides)
    return found


def chords_of(graph: PlaneGraph, cycle: CycleLike) -> List[Edge]:
    """Edges joining two non-consecutive cycle vertices, as sorted index pairs.

    Raises:
        NotACycle
    """
    handle = orient_cycle(graph, _vertices_of(cycle))
    on_cycle = set(handle.vertices)
    cycle_edges = handle.edges()
    return sorted(
        normalize_edge(u, w)
        for u in on_cycle
        for w in graph.adjacency(u)
        if u < w and w in on_cycle and normalize_edge(u, w) not in cycle_edges
    )


# ---------------------------------------------------------------------------
# Ears and collapses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EarRecord:
    face: FacialWalk
    apex: int
    span: Tuple[int, int, int]

    @property
    def cycle(self) -> Tuple[int, int, int, int]:
        return self.span + (self.apex,)


def _require_eleven_face(face: FacialWalk):
    if face.degree != ELEVEN or not face.is_cycle:
        raise NotAnElevenFace(f"face of degree {face.degree} (cycle={face.is_cycle}) is not an 11-face bounded by a cycle")


def find_ears(graph: PlaneGraph, face: FacialWalk) -> List[EarRecord]:
    """Every ear of an 11-face, by span position along the walk then by apex index.

    Raises:
        NotAnElevenFace
    """
    _require_eleven_face(face)
    walk = face.walk
    on_face = face.vertices
    ears = []
    for i in range(ELEVEN):
        u1, u2, u3 = walk[i], walk[(i + 1) % ELEVEN], walk[(i + 2) % ELEVEN]
        for v in sorted(graph.adjacency(u1) & graph.adjacency(u3)):
            if v not in on_face:
                ears.append(EarRecord(face=face, apex=v, span=(u1, u2, u3)))
    return ears


def ear_reduce(graph: PlaneGraph, ear: EarRecord) -> Tuple[PlaneGraph, FacialWalk]:
    """Delete ``u2`` and the inside of the ear; return the reduced graph and its new 11-face.

    The inside is the side of ``u1 u2 u3 v`` away from the face. The new face
    walk reads ``u1 v u3 ..`` in the direction of the old one.
    """
    u1, u2, u3 = ear.span
    sides = cycle_sides(graph, ear.cycle, reference_face=ear.face)
    reduced, index = graph.without(vertices={u2} | sides.interior, edges=sides.interior_chords)
    assert reduced.sigma < graph.sigma
    new_face = reduced.face_of_dart(index[u1], index[ear.apex])
    logger.debug(
        f"ear-reduction at {graph.describe(ear.span)} apex {graph.labels[ear.apex]!r}: "
        f"sigma {graph.sigma} -> {reduced.sigma}"
    )
    return reduced, new_face


def _planar_code(graph: PlaneGraph, a: int, b: int) -> Tuple[Tuple[int, ...], Tuple[str, ...]]:
    """BFS code rooted at dart ``a -> b`` and the labels in discovery order.

    Each rotation is read starting from the neighbour that discovered it.
    """
    n = graph.vertex_count
    number: Dict[int, int] = {a: 0}
    order = [a]
    entry = {a: b}
    code = [n]
    i = 0
    while len(order) < n or i < len(order):
        if i == len(order):
            # another component: injective, not canonical
            v = min(x for x in range(n) if x not in number)
            number[v] = len(order)
            order.append(v)
            entry[v] = graph.rotation[v][0] if graph.rotation[v] else None
            code.append(-2)
        x = order[i]
        i += 1
        rot = graph.rotation[x]
        if rot:
            start = rot.index(entry[x])
            for t in range(len(rot)):
                w = rot[(start + t) % len(rot)]
                if w not in number:
                    number[w] = len(order)
                    order.append(w)
                    entry[w] = x
                code.append(number[w])
        code.append(-1)
    return tuple(code), tuple(graph.labels[v] for v in order)


def canonical_key(graph: PlaneGraph, face: FacialWalk) -> Tuple:
    """Canonical form of the pair (graph, face): minimum BFS code over the face's darts.

    Labels are part of the code, so only states with the same surviving
    vertices can coincide.
    """
    return min(_planar_code(graph, a, b) for a, b in face.darts())


@dataclass(frozen=True)
class CollapseState:
    graph: PlaneGraph
    face: FacialWalk
    key: Tuple = field(repr=False)
    depth: int = 0


def enumerate_collapses(graph: PlaneGraph, face: FacialWalk) -> Tuple[CollapseState, ...]:
    """All states reachable by iterated ear-reduction over every ear choice, start state first.

    Breadth-first; states are deduplicated by ``canonical_key``.

    Raises:
        NotAnElevenFace
    """
    _require_eleven_face(face)
    start = CollapseState(graph=graph, face=face, key=canonical_key(graph, face), depth=0)
    states = [start]
    seen = {start.key}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for ear in find_ears(state.graph, state.face):
            reduced, new_face = ear_reduce(state.graph, ear)
            key = canonical_key(reduced, new_face)
            if key in seen:
                continue
            seen.add(key)
            child = CollapseState(graph=reduced, face=new_face, key=key, depth=state.depth + 1)
            states.append(child)
            queue.append(child)
    if len(states) > 1:
        logger.debug(f"{len(states)} collapse states from face {graph.describe(face.walk)}")
    return tuple(states)


# ---------------------------------------------------------------------------
# Claws, special faces, special cycles
# ---------------------------------------------------------------------------


def _face_neighbour_counts(graph: PlaneGraph, face: FacialWalk) -> Dict[int, int]:
    if not face.is_cycle:
        raise NotACycleBoundary(f"face {graph.describe(face.walk)} is not bounded by a cycle")
    on_face = face.vertices
    return {
        v: len(graph.adjacency(v) & on_face)
        for v in range(graph.vertex_count)
        if v not in on_face
    }


def claw_centers(graph: PlaneGraph, face: FacialWalk) -> Tuple[int, ...]:
    """Off-face vertices with at least three neighbours on the boundary, ascending.

    Raises:
        NotACycleBoundary
    """
    counts = _face_neighbour_counts(graph, face)
    return tuple(v for v in sorted(counts) if counts[v] >= 3)


def d_claw_centers(graph: PlaneGraph, face: FacialWalk) -> Tuple[Edge, ...]:
    """Adjacent off-face pairs whose boundary-neighbour counts sum to at least four, ascending.

    Raises:
        NotACycleBoundary
    """
    counts = _face_neighbour_counts(graph, face)
    return tuple(
        (u, w)
        for u, w in graph.edges()
        if u in counts and w in counts and counts[u] + counts[w] >= 4
    )


def adjacent_triangle(graph: PlaneGraph, face: FacialWalk) -> Optional[CycleHandle]:
    """First triangle sharing exactly one edge with the face."""
    face_edges = face.edges()
    for tri in triangles(graph):
        if len(tri.edges() & face_edges) == 1:
            return tri
    return None


@dataclass(frozen=True)
class Violation:
    """A claw-center or d-claw-center found in collapse state ``state``."""

    kind: str
    vertices: Tuple[int, ...]
    state: int


@dataclass(frozen=True)
class SpecialFaceCertificate:
    """Evidence for or against the special-face conditions; ``graph`` owns ``face``."""

    graph: PlaneGraph = field(repr=False)
    face: FacialWalk
    adjacent_triangle: Optional[CycleHandle]
    collapse_set: Tuple[CollapseState, ...]
    violations: Tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return (
            not self.violations
            and self.face.is_cycle
            and self.face.degree == ELEVEN
            and self.adjacent_triangle is not None
        )

    def to_json(self) -> dict:
        graph = self.graph
        violation = None
        if self.violations:
            v = self.violations[0]
            state_graph = self.collapse_set[v.state].graph
            violation = {"kind": v.kind, "vertices": state_graph.describe(v.vertices), "state": v.state}
        return {
            "face": graph.describe(self.face.walk),
            "valid": self.valid,
            "is_cycle": self.face.is_cycle,
            "degree": self.face.degree,
            "adjacent_triangle": None if self.adjacent_triangle is None else graph.describe(self.adjacent_triangle),
            "collapse_states": len(self.collapse_set),
            "violation": violation,
        }


def is_special_face(graph: PlaneGraph, face: FacialWalk) -> SpecialFaceCertificate:
    """Certificate for the special-face conditions; never raises for a face of ``graph``.

    Claw and d-claw conditions are checked on every collapse state; the first
    violation in breadth-first order is reported.
    """
    if face.degree != ELEVEN or not face.is_cycle:
        return SpecialFaceCertificate(graph=graph, face=face, adjacent_triangle=None, collapse_set=(), violations=())

    triangle = adjacent_triangle(graph, face)
    states = enumerate_collapses(graph, face)
    violations: Tuple[Violation, ...] = ()
    for i, state in enumerate(states):
        claws = claw_centers(state.graph, state.face)
        if claws:
            violations = (Violation(kind="claw_center", vertices=(claws[0],), state=i),)
            break
        pairs = d_claw_centers(state.graph, state.face)
        if pairs:
            violations = (Violation(kind="d_claw_center", vertices=pairs[0], state=i),)
            break
    return SpecialFaceCertificate(
        graph=graph, face=face, adjacent_triangle=triangle, collapse_set=states, violations=violations
    )


def is_special_cycle(graph: PlaneGraph, cycle: CycleLike) -> Tuple[bool, SpecialFaceCertificate]:
    """Delete the exterior of an 11-cycle (vertices and chords) and certify the face it then bounds.

    The certificate refers to the reduced graph (``certificate.graph``).

    Raises:
        NotElevenCycle, NotACycle
    """
    vertices = _vertices_of(cycle)
    if len(vertices) != ELEVEN:
        raise NotElevenCycle(f"special cycles have length 11, got {len(vertices)}")
    sides = cycle_sides(graph, vertices)
    inner, index = graph.without(vertices=sides.exterior, edges=sides.exterior_chords)
    c0, c1 = sides.cycle.vertices[0], sides.cycle.vertices[1]
    face = inner.face_of_dart(index[c1], index[c0])
    certificate = is_special_face(inner, face)
    return certificate.valid, certificate
