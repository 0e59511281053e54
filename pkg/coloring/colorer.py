"""
Proof-guided 3-colouring extension.

Extends a proper 3-colouring of a designated face to the whole graph by
reducing the graph, colouring the reduced graph recursively, and pulling the
colouring back.

Architecture:
    task -> designate face as unbounded -> candidate surgeries in priority order
         -> runtime guard -> recurse on the part(s) -> pull back -> verify
         -> exhaustive search when no candidate survives

Priority:
    (a) separating 3-, 9- and special 11-cycles: split, no padding
    (b) a degree-2 boundary vertex whose boundary neighbours are adjacent:
        remove it and subdivide the chord
    (c) separating 4-cycles: split with 5 padding vertices;
        then 4-faces: identify a diagonal
    (d) separating 6-cycles: split with 3 padding vertices;
        then 6-faces: identify u1 u5 and u2 u4
    (e) exhaustive search

Every candidate is re-checked at runtime: σ must drop, each part must stay in
the class, the face carried into a part must qualify (a 3-face, a 9-face
bounded by a cycle, or a special face), the pushed boundary colouring must be
proper and cover that face, and the pulled-back colouring must verify. A
candidate that fails any check, or whose recursion finds no extension, is
skipped. Only exhaustive search on the task's own graph can declare a task
infeasible; such instances go to the counterexample ledger. So do tasks that
reach exhaustive search while a 4- or 6-cycle remains (trace terminal
``stalled``).

Example:
    >>> engine = ExtensionEngine()
    >>> colouring, trace = engine.color(graph)
    >>> verify_coloring(graph, colouring)
    True
"""
import itertools
import logging
from functools import partial
from typing import Callable, Iterator, List, Optional, Tuple

from cache.cache_manager import cache_manager
from coloring.oracle import brute_force_extend, verify_coloring
from coloring.types import Coloring, ExtensionTask, Trace, TraceStep
from config.settings import settings
from graphs.class_guard import check_class, iter_cycles, triangles
from graphs.pg1 import dumps_pg1
from graphs.plane_core import CycleHandle, FacialWalk, PlaneGraph
from graphs.structure import CycleSides, cycle_sides, is_special_cycle, is_special_face
from ledger.candidate_ledger import CandidateLedger
from reductions.surgery import (
    Surgery,
    SurgeryError,
    SurgeryKind,
    identify_diagonal,
    identify_six_face,
    remove_and_subdivide,
    split_separating,
)

logger = logging.getLogger(__name__)

Outcome = Optional[Tuple[Coloring, Trace]]
Candidate = Tuple[SurgeryKind, Tuple[str, ...], Callable[[], Surgery]]


class ColoringError(ValueError):
    """A colouring task cannot be accepted or completed."""


class NotInClass(ColoringError):
    pass


class UnqualifiedFace(ColoringError):
    """The face is neither a 3-face, a 9-face bounded by a cycle, nor a special face."""


class ImproperBoundaryColoring(ColoringError):
    pass


class DisconnectedGraph(ColoringError):
    pass


class Infeasible(ColoringError):
    """Exhaustive search proved that no extension exists."""


def _qualifies(graph: PlaneGraph, face: FacialWalk) -> bool:
    if face.is_cycle and face.degree in (3, 9):
        return True
    if face.is_cycle and face.degree == 11:
        return is_special_face(graph, face).valid
    return False


def qualifies(graph: PlaneGraph, face: FacialWalk) -> bool:
    """A 3-face, a 9-face bounded by a cycle, or a special face."""
    key = {"graph": dumps_pg1(graph), "face": list(face.walk)}
    return cache_manager.memoize("qualifies", key, lambda: _qualifies(graph, face))


def all_boundary_colorings(
    graph: PlaneGraph, face: FacialWalk, up_to_permutation: bool = True
) -> List[Coloring]:
    """Proper 3-colourings of the face's vertices (chords respected).

    Up to permutation, the first two walk vertices are fixed to 0 and 1.
    """
    vertices = list(dict.fromkeys(face.walk))
    fixed = {}
    if up_to_permutation and len(vertices) >= 2 and graph.has_edge(vertices[0], vertices[1]):
        fixed = {vertices[0]: 0, vertices[1]: 1}
    free = [v for v in vertices if v not in fixed]
    found = []
    for colours in itertools.product(range(3), repeat=len(free)):
        colouring = Coloring({**fixed, **dict(zip(free, colours))})
        if colouring.is_proper(graph):
            found.append(colouring)
    return found


def _has_even_cycle(graph: PlaneGraph) -> bool:
    return any(next(iter_cycles(graph, k), None) is not None for k in (4, 6))


def _separating(graph: PlaneGraph, k: int) -> Iterator[CycleSides]:
    for handle in iter_cycles(graph, k):
        sides = cycle_sides(graph, handle)
        if sides.interior and sides.exterior:
            yield sides


class ExtensionEngine:
    """
    Runs extension tasks and whole-graph colouring.

    Attributes:
        ledger (CandidateLedger | None): receives infeasible tasks; created on first use
        stats (dict): surgeries applied, guard rejections, exhaustive searches, and
            searches on graphs that still had a 4- or 6-cycle (stalls)
    """

    def __init__(self, ledger: Optional[CandidateLedger] = None):
        self.ledger = ledger
        self.stats = {"surgeries": 0, "rejections": 0, "fallbacks": 0, "stalls": 0}

    # -- public -----------------------------------------------------------

    def extend(self, task: ExtensionTask) -> Tuple[Coloring, Trace]:
        """Extend the task's boundary colouring to the whole graph.

        Raises:
            NotInClass, UnqualifiedFace, ImproperBoundaryColoring, Infeasible
        """
        graph, face, boundary = task.graph, task.face, task.boundary_coloring
        self._check_task(graph, face, boundary)
        outcome = self._extend(graph, face, boundary)
        if outcome is None:
            self._record(
                graph,
                {"face": graph.describe(face.walk), "boundary": boundary.to_labels(graph)},
            )
            raise Infeasible(f"no extension of the boundary colouring of {graph.describe(face.walk)}")
        return outcome

    def color(self, graph: PlaneGraph) -> Tuple[Coloring, Trace]:
        """Colour a whole class graph: fix a triangle to 0, 1, 2 and extend on both sides.

        Triangle-free graphs and graphs without 4- and 6-cycles go straight to
        exhaustive search.

        Raises:
            DisconnectedGraph, NotInClass, Infeasible
        """
        if not graph.is_connected():
            raise DisconnectedGraph(f"{graph!r} has {len(graph.components)} components")
        report = check_class(graph)
        if not report.in_class:
            raise NotInClass(f"outside the class: {report.to_json(graph)['witnesses']}")
        self._warn_size(graph)
        if graph.vertex_count == 0:
            return Coloring(), Trace()

        outcome = None
        tris = triangles(graph)
        if tris and _has_even_cycle(graph):
            outcome = self._color_from_triangle(graph, tris[0])
        if outcome is None:
            colouring = brute_force_extend(graph)
            if colouring is None:
                self._record(graph, {"task": "color_graph"})
                raise Infeasible(f"{graph!r} is not 3-colourable")
            self.stats["fallbacks"] += 1
            logger.info(f"coloured {graph!r} by exhaustive search")
            outcome = (colouring, Trace(terminal="fallback"))
        return outcome

    # -- task checks ------------------------------------------------------

    def _check_task(self, graph: PlaneGraph, face: FacialWalk, boundary: Coloring):
        if not (0 <= face.index < len(graph.faces)) or graph.faces[face.index] != face:
            raise UnqualifiedFace("the face does not belong to the graph")
        report = check_class(graph)
        if not report.in_class:
            raise NotInClass(f"outside the class: {report.to_json(graph)['witnesses']}")
        if not qualifies(graph, face):
            raise UnqualifiedFace(
                f"face {graph.describe(face.walk)} (degree {face.degree}) is not a 3-face, "
                "a 9-face bounded by a cycle, or a special face"
            )
        if set(boundary) != set(face.vertices):
            raise ImproperBoundaryColoring("the boundary colouring must cover exactly the face's vertices")
        if not boundary.is_proper(graph):
            clash = boundary.conflicts(graph)[0]
            raise ImproperBoundaryColoring(f"edge {graph.describe(clash)} is monochromatic")
        self._warn_size(graph)

    @staticmethod
    def _warn_size(graph: PlaneGraph):
        if graph.vertex_count > settings.GUIDED_MAX_VERTICES:
            logger.warning(
                f"guided extension on {graph.vertex_count} vertices "
                f"(above GUIDED_MAX_VERTICES={settings.GUIDED_MAX_VERTICES})"
            )

    def _record(self, graph: PlaneGraph, detail: dict, kind: str = "infeasible_extension"):
        if self.ledger is None:
            self.ledger = CandidateLedger()
        self.ledger.record(kind, graph, detail)

    # -- recursion --------------------------------------------------------

    def _extend(self, graph: PlaneGraph, face: FacialWalk, boundary: Coloring) -> Outcome:
        g = graph.with_outer(face)
        if boundary.is_total(g):
            return boundary, Trace()
        for kind, labels, build in self._candidates(g, face):
            try:
                surgery = build()
            except SurgeryError as e:
                logger.debug(f"{kind.value} on {list(labels)} inapplicable: {e}")
                continue
            outcome = self._apply(g, boundary, surgery, labels)
            if outcome is not None:
                return outcome
        colouring = brute_force_extend(g, boundary)
        if colouring is None:
            return None
        self.stats["fallbacks"] += 1
        if _has_even_cycle(g):
            self.stats["stalls"] += 1
            logger.warning(f"no reduction applied to {g!r} although it has a 4- or 6-cycle")
            self._record(
                g,
                {"face": g.describe(face.walk), "boundary": boundary.to_labels(g)},
                kind="stalled_reduction",
            )
            return colouring, Trace(terminal="stalled")
        logger.info(f"exhaustive search finished {g!r} from face {g.describe(face.walk)}")
        return colouring, Trace(terminal="fallback")

    def _candidates(self, g: PlaneGraph, face: FacialWalk) -> Iterator[Candidate]:
        on_face = face.vertices

        for k in (3, 9, 11):
            for sides in _separating(g, k):
                if k == 11 and not is_special_cycle(g, sides.cycle)[0]:
                    continue
                yield self._split(g, sides.cycle, 0, face)

        if face.is_cycle:
            walk = face.walk
            for i, w in enumerate(walk):
                p, s = walk[i - 1], walk[(i + 1) % len(walk)]
                if g.degree(w) == 2 and g.has_edge(p, s):
                    yield (
                        SurgeryKind.REMOVE_AND_SUBDIVIDE,
                        tuple(g.describe((p, s, w))),
                        partial(remove_and_subdivide, g, (p, s), w, face),
                    )

        for sides in _separating(g, 4):
            yield self._split(g, sides.cycle, 5, face)
        for h in g.faces:
            if h.degree != 4 or not h.is_cycle or h.index == face.index:
                continue
            diagonals = [(h.walk[0], h.walk[2]), (h.walk[1], h.walk[3])]
            diagonals.sort(key=lambda d: sum(x in on_face for x in d))
            for u, w in diagonals:
                yield (
                    SurgeryKind.IDENTIFY_DIAGONAL,
                    tuple(g.describe((u, w))),
                    partial(identify_diagonal, g, h, (u, w), face),
                )

        for sides in _separating(g, 6):
            yield self._split(g, sides.cycle, 3, face)
        for h in g.faces:
            if h.degree != 6 or not h.is_cycle or h.index == face.index:
                continue
            for anchor in self._anchors(g, h, on_face):
                yield (
                    SurgeryKind.IDENTIFY_SIX_FACE,
                    tuple(g.describe(h.rotated_to(anchor))),
                    partial(identify_six_face, g, h, anchor, face),
                )

    @staticmethod
    def _split(g: PlaneGraph, cycle: CycleHandle, padding: int, face: FacialWalk) -> Candidate:
        return (
            SurgeryKind.SPLIT_SEPARATING,
            tuple(g.describe(cycle.vertices)) + (f"padding={padding}",),
            partial(split_separating, g, cycle, padding, face),
        )

    @staticmethod
    def _anchors(g: PlaneGraph, h: FacialWalk, on_face: frozenset) -> List[int]:
        """Anchors u0 for a 6-face, preferred one first.

        Preferred: a vertex of the face on the boundary cycle with a face
        neighbour off it; when the face misses the boundary, the predecessor
        of the first vertex with no neighbour on the boundary.
        """
        walk = h.walk
        preferred = None
        if on_face & h.vertices:
            for i, x in enumerate(walk):
                if x in on_face and (walk[i - 1] not in on_face or walk[(i + 1) % 6] not in on_face):
                    preferred = x
                    break
        else:
            for i, x in enumerate(walk):
                if not g.adjacency(x) & on_face:
                    preferred = walk[i - 1]
                    break
        ordered = list(walk)
        if preferred is not None:
            ordered.remove(preferred)
            ordered.insert(0, preferred)
        return ordered

    def _admissible(self, part: PlaneGraph, face: Optional[FacialWalk]) -> bool:
        return face is not None and check_class(part).in_class and qualifies(part, face)

    def _reject(self, g: PlaneGraph, step: TraceStep, reason: str) -> None:
        self.stats["rejections"] += 1
        logger.debug(f"{step.kind} on {list(step.labels)} rejected: {reason}")
        return None

    def _apply(self, g: PlaneGraph, boundary: Coloring, surgery: Surgery, labels: Tuple[str, ...]) -> Outcome:
        step = TraceStep(
            kind=surgery.kind.value,
            labels=labels,
            sigma_before=g.sigma,
            sigma_after=surgery.sigma_after,
        )
        if any(s >= g.sigma for s in step.sigma_after):
            return self._reject(g, step, "sigma does not decrease")
        if surgery.kind is SurgeryKind.SPLIT_SEPARATING:
            return self._apply_split(g, boundary, surgery, step)

        part, new_face = surgery.parts[0], surgery.faces[0]
        if not self._admissible(part, new_face):
            return self._reject(g, step, "part leaves the class or its face does not qualify")
        pushed = surgery.transfer.push_forward(boundary, 0, part)
        if pushed is None or not new_face.vertices <= set(pushed):
            return self._reject(g, step, "boundary colouring does not carry over")
        sub = self._extend(part, new_face, pushed)
        if sub is None:
            return self._reject(g, step, "reduced task has no extension")
        colouring = surgery.transfer.pull_back(g, [sub[0]])
        if not self._agrees(g, colouring, boundary):
            logger.warning(f"pulled-back colouring after {step.kind} on {list(labels)} does not verify")
            return self._reject(g, step, "pull-back failed verification")
        self.stats["surgeries"] += 1
        return colouring, sub[1].prepend(step)

    def _apply_split(self, g: PlaneGraph, boundary: Coloring, surgery: Surgery, step: TraceStep) -> Outcome:
        outer, inner = surgery.parts
        outer_face, inner_face = surgery.tracked[0], surgery.faces[1]
        if not self._admissible(outer, outer_face) or not self._admissible(inner, inner_face):
            return self._reject(g, step, "a part leaves the class or its face does not qualify")

        pushed = surgery.transfer.push_forward(boundary, 0, outer)
        if pushed is None or not outer_face.vertices <= set(pushed):
            return self._reject(g, step, "boundary colouring does not carry over")
        first = self._extend(outer, outer_face, pushed)
        if first is None:
            return self._reject(g, step, "outer part has no extension")

        cycle = surgery.parameters["cycle"]
        on_cycle = Coloring({v: first[0][surgery.transfer.parts[0][v]] for v in cycle})
        pushed_inner = surgery.transfer.push_forward(on_cycle, 1, inner)
        if pushed_inner is None or not inner_face.vertices <= set(pushed_inner):
            return self._reject(g, step, "cycle colouring does not carry into the inner part")
        second = self._extend(inner, inner_face, pushed_inner)
        if second is None:
            return self._reject(g, step, "inner part has no extension")

        colouring = surgery.transfer.pull_back(g, [first[0], second[0]])
        if not self._agrees(g, colouring, boundary):
            logger.warning(f"pulled-back colouring after split on {list(step.labels)} does not verify")
            return self._reject(g, step, "pull-back failed verification")
        self.stats["surgeries"] += 1
        return colouring, Trace(steps=(step,), terminal="split", branches=(first[1], second[1]))

    @staticmethod
    def _agrees(g: PlaneGraph, colouring: Coloring, boundary: Coloring) -> bool:
        return verify_coloring(g, colouring) and all(colouring[v] == c for v, c in boundary.items())

    def _color_from_triangle(self, graph: PlaneGraph, triangle: CycleHandle) -> Outcome:
        t = triangle.vertices
        boundary = Coloring({t[0]: 0, t[1]: 1, t[2]: 2})
        sides = cycle_sides(graph, triangle)
        if not (sides.interior and sides.exterior):
            for a, b in ((t[0], t[1]), (t[1], t[0])):
                face = graph.face_of_dart(a, b)
                if face.degree == 3 and face.vertices == frozenset(t):
                    return self._extend(graph, face, boundary)
            return None

        surgery = split_separating(graph, triangle, 0)
        step = TraceStep(
            kind=surgery.kind.value,
            labels=tuple(graph.describe(sides.cycle.vertices)) + ("padding=0",),
            sigma_before=graph.sigma,
            sigma_after=surgery.sigma_after,
        )
        results = []
        for i, part in enumerate(surgery.parts):
            pushed = surgery.transfer.push_forward(boundary, i, part)
            sub = None if pushed is None else self._extend(part, surgery.faces[i], pushed)
            if sub is None:
                return None
            results.append(sub)
        colouring = surgery.transfer.pull_back(graph, [r[0] for r in results])
        if not self._agrees(graph, colouring, boundary):
            logger.warning("pulled-back colouring around the starting triangle does not verify")
            return None
        self.stats["surgeries"] += 1
        return colouring, Trace(steps=(step,), terminal="split", branches=tuple(r[1] for r in results))


def extend_coloring(task: ExtensionTask, ledger: Optional[CandidateLedger] = None) -> Tuple[Coloring, Trace]:
    """Extend a proper colouring of a qualifying face to the whole class graph."""
    return ExtensionEngine(ledger).extend(task)


def color_graph_traced(graph: PlaneGraph, ledger: Optional[CandidateLedger] = None) -> Tuple[Coloring, Trace]:
    return ExtensionEngine(ledger).color(graph)


def color_graph(graph: PlaneGraph, ledger: Optional[CandidateLedger] = None) -> Coloring:
    """Total proper 3-colouring of a connected class graph."""
    return color_graph_traced(graph, ledger)[0]
