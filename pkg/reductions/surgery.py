"""
Graph reductions with colouring transfer.

Every surgery returns the reduced graph(s) together with a
``ColoringTransfer``: ``push_forward`` carries a boundary precolouring of the
original onto a part, ``pull_back`` turns proper colourings of the parts into a
colouring of the original. The caller verifies the pulled-back colouring.

Kinds:

* ``subdivide_edge``: replace an edge by a path of k new vertices.
* ``remove_and_subdivide``: delete a degree-2 vertex w cut off by the chord uv
  (uvw a 3-face) and insert one new vertex x into uv; x stands in for w.
* ``identify_diagonal``: merge the opposite vertices u, w of a 4-face.
* ``identify_six_face``: on a 6-face u0..u5 merge u1 with u5, then u2 with u4.
* ``split_separating``: cut along a separating cycle C into G - int(C) and
  G - ext(C), the latter optionally padded with k vertices on one edge of C.
  Part 0 keeps every chord of C, so its colouring of C is proper inside too.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from coloring.types import COLORS, Coloring
from graphs.class_guard import check_class, has_cycle_through
from graphs.pg1 import dumps_pg1
from graphs.plane_core import CycleHandle, Dart, Edge, FacialWalk, PlaneGraph
from graphs.structure import cycle_sides
from reductions.editor import RotationEditor

logger = logging.getLogger(__name__)

PADDINGS = (0, 3, 5)


class SurgeryError(ValueError):
    """A surgery does not apply to the given configuration."""


class NoSuchEdge(SurgeryError):
    pass


class PreconditionViolated(SurgeryError):
    pass


class DiagonalAdjacent(SurgeryError):
    """The diagonal's ends are adjacent; merging them would create a loop."""


class NotAFourFace(SurgeryError):
    pass


class MergeWouldLoop(SurgeryError):
    pass


class NotASixFace(SurgeryError):
    pass


class NotSeparating(SurgeryError):
    pass


class SurgeryKind(str, Enum):
    SUBDIVIDE_EDGE = "subdivide_edge"
    REMOVE_AND_SUBDIVIDE = "remove_and_subdivide"
    IDENTIFY_DIAGONAL = "identify_diagonal"
    IDENTIFY_SIX_FACE = "identify_six_face"
    SPLIT_SEPARATING = "split_separating"


def _smallest_free(used: Iterable[int], prefer: Optional[int] = None) -> Optional[int]:
    used = set(used)
    if prefer is not None and prefer not in used:
        return prefer
    return next((c for c in COLORS if c not in used), None)


@dataclass(frozen=True)
class ColoringTransfer:
    """How colourings move between the original graph and the parts.

    Attributes:
        parts: per part, original vertex -> part vertex (merged originals share one)
        stand_ins: per part, part vertex -> original vertex whose colour it carries
        padding: per part, inserted paths in part indices, endpoints included
        dropped: original vertices absent from every part, coloured greedily on
            pull-back (a stand-in's colour is tried first)
    """

    parts: Tuple[Mapping[int, int], ...]
    stand_ins: Tuple[Mapping[int, int], ...] = ()
    padding: Tuple[Tuple[Tuple[int, ...], ...], ...] = ()
    dropped: Tuple[int, ...] = ()

    def push_forward(self, coloring: Coloring, part: int, part_graph: PlaneGraph) -> Optional[Coloring]:
        """Carry a precolouring onto a part; None when it clashes there."""
        assignment: Dict[int, int] = {}
        for v, c in coloring.items():
            if v in self.parts[part]:
                x = self.parts[part][v]
                if assignment.setdefault(x, c) != c:
                    return None
        stand_ins = self.stand_ins[part] if part < len(self.stand_ins) else {}
        for x, w in stand_ins.items():
            if w in coloring and assignment.setdefault(x, coloring[w]) != coloring[w]:
                return None
        paths = self.padding[part] if part < len(self.padding) else ()
        for path in paths:
            if path[0] not in assignment and path[-1] in assignment:
                path = tuple(reversed(path))
            if path[0] not in assignment:
                continue
            inner = path[1:-1]
            for k, p in enumerate(inner):
                used = [assignment[path[k]]]
                if k == len(inner) - 1 and path[-1] in assignment:
                    used.append(assignment[path[-1]])
                colour = _smallest_free(used)
                if colour is None:
                    return None
                assignment[p] = colour
        pushed = Coloring(assignment)
        return pushed if pushed.is_proper(part_graph) else None

    def pull_back(self, original: PlaneGraph, part_colorings: Sequence[Coloring]) -> Coloring:
        """Compose part colourings into a colouring of the original.

        The result is not checked; a dropped vertex with no free colour stays
        uncoloured.
        """
        assignment: Dict[int, int] = {}
        for mapping, colouring in zip(self.parts, part_colorings):
            for v, x in mapping.items():
                if v not in assignment and x in colouring:
                    assignment[v] = colouring[x]
        preferred: Dict[int, int] = {}
        for stand_ins, colouring in zip(self.stand_ins, part_colorings):
            for x, w in stand_ins.items():
                if x in colouring:
                    preferred.setdefault(w, colouring[x])
        for w in self.dropped:
            used = [assignment[y] for y in original.adjacency(w) if y in assignment]
            colour = _smallest_free(used, prefer=preferred.get(w))
            if colour is not None:
                assignment[w] = colour
        return Coloring(assignment)


@dataclass(frozen=True)
class Surgery:
    """One reduction step.

    ``faces`` holds, per part, the face the caller should work on next: the
    image of the tracked face, or for a split the face inside the cycle at its
    first edge.
    ``tracked`` holds the image of the tracked face in every part where it
    survives. ``stages`` keeps intermediate graphs of multi-step surgeries.
    """

    kind: SurgeryKind
    parameters: Mapping[str, Tuple[int, ...]]
    parts: Tuple[PlaneGraph, ...]
    transfer: ColoringTransfer
    faces: Tuple[Optional[FacialWalk], ...] = ()
    tracked: Tuple[Optional[FacialWalk], ...] = field(default=())
    stages: Tuple[PlaneGraph, ...] = ()

    @property
    def result(self):
        return self.parts[0] if len(self.parts) == 1 else self.parts

    @property
    def sigma_after(self) -> Tuple[int, ...]:
        return tuple(p.sigma for p in self.parts)


def _track(
    face: Optional[FacialWalk],
    mapping: Mapping[int, int],
    part: PlaneGraph,
    avoid: Iterable[int] = (),
    substitutes: Optional[Mapping[Dart, Dart]] = None,
) -> Optional[FacialWalk]:
    """Image of ``face`` in ``part`` through its first surviving dart.

    Darts touching ``avoid`` are used only when nothing else survives.
    """
    if face is None:
        return None
    avoid = set(avoid)
    substitutes = substitutes or {}
    fallback = None
    for a, b in face.darts():
        if (a, b) in substitutes:
            x, y = substitutes[(a, b)]
        elif a in mapping and b in mapping:
            x, y = mapping[a], mapping[b]
        else:
            continue
        if x == y or not part.has_edge(x, y):
            continue
        if a in avoid or b in avoid:
            fallback = fallback or (x, y)
            continue
        return part.face_of_dart(x, y)
    return None if fallback is None else part.face_of_dart(*fallback)


# ---------------------------------------------------------------------------


def subdivide_edge(
    graph: PlaneGraph, edge: Edge, k: int, face: Optional[FacialWalk] = None
) -> Surgery:
    """Replace ``edge`` by a path through ``k`` new degree-2 vertices.

    Raises:
        NoSuchEdge, PreconditionViolated
    """
    u, v = edge
    if not (0 <= u < graph.vertex_count and 0 <= v < graph.vertex_count) or not graph.has_edge(u, v):
        raise NoSuchEdge(f"{edge} is not an edge")
    if k < 1:
        raise PreconditionViolated(f"subdivision needs k >= 1, got {k}")
    editor = RotationEditor(graph)
    path = editor.subdivide(u, v, k)
    result, index = editor.freeze(graph.outer_dart if graph.outer_dart not in ((u, v), (v, u)) else None)
    mapping = {x: index[x] for x in range(graph.vertex_count)}
    chain = (index[u],) + tuple(index[p] for p in path) + (index[v],)
    substitutes = {(u, v): (chain[0], chain[1]), (v, u): (chain[-1], chain[-2])}
    tracked = _track(face, mapping, result, substitutes=substitutes)
    return Surgery(
        kind=SurgeryKind.SUBDIVIDE_EDGE,
        parameters={"edge": (u, v), "k": (k,)},
        parts=(result,),
        transfer=ColoringTransfer(parts=(mapping,), stand_ins=({},), padding=((chain,),)),
        faces=(tracked,),
        tracked=(tracked,),
    )


def remove_and_subdivide(
    graph: PlaneGraph, chord: Edge, w: int, face: Optional[FacialWalk] = None
) -> Surgery:
    """Delete w (neighbours exactly u, v; uvw a 3-face) and insert a stand-in x into uv.

    σ drops by exactly one. The pull-back gives w the colour of x, or any
    colour free at u and v.

    Raises:
        PreconditionViolated
    """
    u, v = chord
    if not graph.has_edge(u, v):
        raise PreconditionViolated(f"{graph.describe(chord)} is not an edge")
    if w in (u, v) or graph.adjacency(w) != frozenset((u, v)):
        raise PreconditionViolated(f"{graph.labels[w]!r} must have exactly the neighbours {graph.describe(chord)}")
    sides = {graph.face_of_dart(u, w).index, graph.face_of_dart(w, u).index}
    degrees = sorted(graph.faces[i].degree for i in sides)
    if len(sides) != 2 or degrees[0] != 3 or degrees[1] < 4:
        raise PreconditionViolated(
            f"{graph.describe((u, v, w))} must bound a 3-face beside a larger face, got face degrees {degrees}"
        )

    editor = RotationEditor(graph)
    editor.remove_vertex(w)
    (x,) = editor.subdivide(u, v, 1, stem=graph.labels[w])
    outer = graph.outer_dart
    if outer is not None and w in outer:
        outer = tuple(x if t == w else t for t in outer)
    result, index = editor.freeze(outer)
    mapping = {y: index[y] for y in range(graph.vertex_count) if y != w}
    xi = index[x]
    substitutes = {
        (u, w): (index[u], xi),
        (w, u): (xi, index[u]),
        (v, w): (index[v], xi),
        (w, v): (xi, index[v]),
    }
    tracked = _track(face, mapping, result, substitutes=substitutes)
    assert result.sigma == graph.sigma - 1
    return Surgery(
        kind=SurgeryKind.REMOVE_AND_SUBDIVIDE,
        parameters={"chord": (u, v), "w": (w,)},
        parts=(result,),
        transfer=ColoringTransfer(parts=(mapping,), stand_ins=({xi: w},), padding=((),), dropped=(w,)),
        faces=(tracked,),
        tracked=(tracked,),
    )


def _face_positions(face: FacialWalk, *vertices: int) -> Tuple[int, ...]:
    try:
        return tuple(face.walk.index(x) for x in vertices)
    except ValueError:
        raise PreconditionViolated(f"vertices {vertices} are not all on the face")


def identify_diagonal(
    graph: PlaneGraph, four_face: FacialWalk, diagonal: Tuple[int, int], face: Optional[FacialWalk] = None
) -> Surgery:
    """Merge the opposite corners u, w of a 4-face into one vertex.

    Raises:
        NotAFourFace, DiagonalAdjacent, PreconditionViolated
    """
    if four_face.degree != 4 or not four_face.is_cycle:
        raise NotAFourFace(f"face {graph.describe(four_face.walk)} is not a 4-face bounded by a cycle")
    u, w = diagonal
    i, j = _face_positions(four_face, u, w)
    if (j - i) % 4 != 2:
        raise PreconditionViolated(f"{graph.describe(diagonal)} is not a diagonal of the face")
    if graph.has_edge(u, w):
        raise DiagonalAdjacent(f"{graph.describe(diagonal)} are adjacent")

    editor = RotationEditor(graph)
    r = editor.identify(four_face.walk, i, j)
    result, index = editor.freeze(_surviving_outer(graph, {w: u}))
    mapping = {y: index[y if y != w else r] for y in range(graph.vertex_count)}
    tracked = _track(face, mapping, result, avoid=(u, w))
    logger.debug(f"identified {graph.describe(diagonal)}: sigma {graph.sigma} -> {result.sigma}")
    return Surgery(
        kind=SurgeryKind.IDENTIFY_DIAGONAL,
        parameters={"face": four_face.walk, "diagonal": (u, w)},
        parts=(result,),
        transfer=ColoringTransfer(parts=(mapping,), stand_ins=({},), padding=((),)),
        faces=(tracked,),
        tracked=(tracked,),
    )


def _surviving_outer(graph: PlaneGraph, merged: Mapping[int, int]) -> Optional[Dart]:
    """Outer dart after merges, when it touches no merged-away vertex."""
    if graph.outer_dart is None or any(x in merged for x in graph.outer_dart):
        return None
    return graph.outer_dart


def identify_six_face(
    graph: PlaneGraph, six_face: FacialWalk, anchor: int, face: Optional[FacialWalk] = None
) -> Surgery:
    """On the 6-face read from ``anchor`` as u0..u5, merge u1 with u5 and then u2 with u4.

    Raises:
        NotASixFace, MergeWouldLoop, PreconditionViolated
    """
    if six_face.degree != 6 or not six_face.is_cycle:
        raise NotASixFace(f"face {graph.describe(six_face.walk)} is not a 6-face bounded by a cycle")
    if anchor not in six_face.vertices:
        raise PreconditionViolated(f"anchor {graph.labels[anchor]!r} is not on the face")
    u = six_face.rotated_to(anchor)
    if graph.has_edge(u[1], u[5]) or graph.has_edge(u[2], u[4]):
        raise MergeWouldLoop(f"opposite pairs of {graph.describe(u)} are adjacent")

    editor = RotationEditor(graph)
    r15 = editor.identify(six_face.walk, six_face.walk.index(u[1]), six_face.walk.index(u[5]))
    middle, first = editor.freeze(_surviving_outer(graph, {u[5]: u[1]}))

    def m(y):
        return first[r15 if y == u[5] else y]

    inner_face = middle.face_of_dart(m(u[1]), m(u[2]))
    if inner_face.degree != 4 or not inner_face.is_cycle:
        raise PreconditionViolated("merging u1 with u5 did not leave the 4-face r u2 u3 u4")
    editor = RotationEditor(middle)
    if middle.has_edge(m(u[2]), m(u[4])):
        raise MergeWouldLoop(f"{graph.describe((u[2], u[4]))} became adjacent")
    r24 = editor.identify(inner_face.walk, inner_face.walk.index(m(u[2])), inner_face.walk.index(m(u[4])))
    result, second = editor.freeze(_surviving_outer(middle, {m(u[4]): m(u[2])}))
    mapping = {
        y: second[r24 if m(y) == m(u[4]) else m(y)]
        for y in range(graph.vertex_count)
    }
    tracked = _track(face, mapping, result, avoid=(u[1], u[2], u[4], u[5]))
    logger.debug(f"identified six-face {graph.describe(u)}: sigma {graph.sigma} -> {result.sigma}")
    return Surgery(
        kind=SurgeryKind.IDENTIFY_SIX_FACE,
        parameters={"face": u, "anchor": (anchor,)},
        parts=(result,),
        transfer=ColoringTransfer(parts=(mapping,), stand_ins=({},), padding=((),)),
        faces=(tracked,),
        tracked=(tracked,),
        stages=(middle,),
    )


def merge_keeps_class(graph: PlaneGraph, u: int, w: int, via: int) -> bool:
    """Sufficient condition for identifying u and w to stay in the class.

    ``graph`` is in the class, u and w are non-adjacent with the common
    neighbour ``via``, neither u-via nor via-w lies on a triangle, and no
    9-cycle runs u, via, w. A u-w path of length 3 or 5 would then already
    close a 5- or 7-cycle in ``graph``, and one of length 7 a 9-cycle through
    u, via, w.
    """
    if len({u, w, via}) != 3 or graph.has_edge(u, w):
        return False
    if not (graph.has_edge(u, via) and graph.has_edge(via, w)):
        return False
    if graph.adjacency(u) & graph.adjacency(via) or graph.adjacency(via) & graph.adjacency(w):
        return False
    return check_class(graph).in_class and not has_cycle_through(graph, 9, (u, via, w))


def identification_preconditions(graph: PlaneGraph, surgery: Surgery) -> bool:
    """Whether an identification was applied where it provably stays in the class.

    A diagonal u w of a 4-face needs ``merge_keeps_class`` through one of the
    other two corners. A 6-face u0..u5 needs it for u1 u5 through u0 in
    ``graph`` and for u2 u4 through u3 after the first merge.

    Raises:
        SurgeryError: ``surgery`` is not an identification
    """
    if surgery.kind is SurgeryKind.IDENTIFY_DIAGONAL:
        u, w = surgery.parameters["diagonal"]
        corners = [x for x in surgery.parameters["face"] if x not in (u, w)]
        return any(merge_keeps_class(graph, u, w, v) for v in corners)
    if surgery.kind is SurgeryKind.IDENTIFY_SIX_FACE:
        u = surgery.parameters["face"]
        if not merge_keeps_class(graph, u[1], u[5], u[0]):
            return False
        middle = surgery.stages[0]
        m = [middle.index_of(graph.labels[x]) for x in (u[2], u[3], u[4])]
        return merge_keeps_class(middle, m[0], m[2], m[1])
    raise SurgeryError(f"{surgery.kind.value} is not an identification")


def split_separating(
    graph: PlaneGraph,
    cycle: CycleHandle,
    padding: int,
    face: Optional[FacialWalk] = None,
) -> Surgery:
    """Cut along a separating cycle C.

    Part 0 is G - int(C): interior vertices removed, interior chords kept.
    Part 1 is G - ext(C) with ``padding`` new vertices inserted into the edge
    c0 c1. The exterior is the side holding ``face`` (default: the designated
    unbounded face). ``faces`` gives, in each part, the face inside C at
    c0 c1 (C itself unless part 0 keeps a chord there); ``tracked`` gives the
    image of ``face`` in part 0.

    Raises:
        NotSeparating, PreconditionViolated, NotACycle
    """
    if padding not in PADDINGS:
        raise PreconditionViolated(f"padding must be one of {PADDINGS}, got {padding}")
    sides = cycle_sides(graph, cycle, reference_face=face)
    if not sides.interior or not sides.exterior:
        raise NotSeparating(f"{graph.describe(sides.cycle.vertices)} is not separating")
    c = sides.cycle.vertices

    outer, outer_index = graph.without(vertices=sides.interior)
    inner_base, inner_index = graph.without(vertices=sides.exterior, edges=sides.exterior_chords)
    editor = RotationEditor(inner_base)
    path = editor.subdivide(inner_index[c[0]], inner_index[c[1]], padding) if padding else ()
    inner, pad_index = editor.freeze()
    inner_map = {v: pad_index[x] for v, x in inner_index.items()}
    chain = ()
    if path:
        chain = (inner_map[c[0]],) + tuple(pad_index[p] for p in path) + (inner_map[c[1]],)

    if outer.sigma >= graph.sigma or inner.sigma >= graph.sigma:
        raise PreconditionViolated(
            f"split along {graph.describe(c)} with padding {padding} does not shrink: "
            f"sigma {graph.sigma} -> {outer.sigma}, {inner.sigma}"
        )

    outer_face = outer.face_of_dart(outer_index[c[0]], outer_index[c[1]])
    inner_face = inner.face_of_dart(inner_map[c[2]], inner_map[c[1]])
    reference = face if face is not None else graph.outer_face
    tracked = _track(reference, outer_index, outer)
    logger.debug(
        f"split along {graph.describe(c)} (padding {padding}): "
        f"sigma {graph.sigma} -> {outer.sigma} + {inner.sigma}"
    )
    return Surgery(
        kind=SurgeryKind.SPLIT_SEPARATING,
        parameters={"cycle": c, "padding": (padding,)},
        parts=(outer, inner),
        transfer=ColoringTransfer(
            parts=(outer_index, inner_map),
            stand_ins=({}, {}),
            padding=((), (chain,) if chain else ()),
        ),
        faces=(outer_face, inner_face),
        tracked=(tracked, None),
    )


def describe_surgery(graph: PlaneGraph, surgery: Surgery) -> dict:
    """JSON view: parameters and maps by label, parts as pg1 text."""
    params = {}
    for name, values in surgery.parameters.items():
        params[name] = list(values) if name in ("k", "padding") else graph.describe(values)
    parts = []
    for i, part in enumerate(surgery.parts):
        face = surgery.faces[i] if i < len(surgery.faces) else None
        mapping = surgery.transfer.parts[i]
        stand_ins = surgery.transfer.stand_ins[i] if i < len(surgery.transfer.stand_ins) else {}
        padding = surgery.transfer.padding[i] if i < len(surgery.transfer.padding) else ()
        parts.append(
            {
                "pg1": dumps_pg1(part),
                "sigma": part.sigma,
                "face": None if face is None else part.describe(face.walk),
                "vertex_map": {graph.labels[v]: part.labels[x] for v, x in sorted(mapping.items())},
                "stand_ins": {part.labels[x]: graph.labels[w] for x, w in sorted(stand_ins.items())},
                "padding": [part.describe(p) for p in padding],
            }
        )
    return {
        "kind": surgery.kind.value,
        "parameters": params,
        "sigma_before": graph.sigma,
        "parts": parts,
        "dropped": graph.describe(surgery.transfer.dropped),
    }
