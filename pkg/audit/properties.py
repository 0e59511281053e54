"""
Property checks run by the audit on one generated graph.

Every check compares the library against an independent computation
(networkx cycle enumeration, direct neighbour counting, the exhaustive
oracle) or against an invariant the reductions promise (Euler's formula,
σ decreasing along traces, pulled-back colourings verifying).
"""
import logging
from collections import Counter
from functools import partial
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx
from pydantic import BaseModel

from coloring.colorer import ColoringError, ExtensionEngine, all_boundary_colorings, qualifies
from coloring.oracle import brute_force_extend, verify_coloring
from coloring.types import Coloring, ExtensionTask, Trace
from graphs.class_guard import check_class, cycles_of_length
from graphs.plane_core import FacialWalk, PlaneGraph
from graphs.structure import claw_centers, d_claw_centers, separating_cycles
from reductions.surgery import (
    Surgery,
    SurgeryError,
    SurgeryKind,
    identification_preconditions,
    identify_diagonal,
    identify_six_face,
    remove_and_subdivide,
    split_separating,
)

logger = logging.getLogger(__name__)

SPLIT_PADDING = {3: 0, 4: 5, 6: 3, 9: 0}
BOUNDARY_SAMPLES = 3


class AuditRow(BaseModel):
    """Outcome of every property on one generated graph; None means not applicable."""

    seed: int
    n: int
    m: int = 0
    faces: int = 0
    error: Optional[str] = None
    in_class: Optional[bool] = None
    euler_ok: Optional[bool] = None
    detectors_ok: Optional[bool] = None
    colored_ok: Optional[bool] = None
    trace_monotone: Optional[bool] = None
    max_trace_depth: int = 0
    extension_face_degree: Optional[int] = None
    extension_colorings: int = 0
    extension_ok: Optional[bool] = None
    oracle_agrees: Optional[bool] = None
    surgery_checks: int = 0
    surgery_kinds: Dict[str, int] = {}
    surgery_equivalent: Optional[bool] = None
    pullback_ok: Optional[bool] = None
    identifications: int = 0
    identifications_in_class: int = 0
    class_preserved: Optional[bool] = None
    reduction_complete: Optional[bool] = None
    pg1: Optional[str] = None

    @property
    def passed(self) -> bool:
        checks = (
            self.in_class,
            self.euler_ok,
            self.detectors_ok,
            self.colored_ok,
            self.trace_monotone,
            self.extension_ok,
            self.oracle_agrees,
            self.surgery_equivalent,
            self.pullback_ok,
            self.class_preserved,
            self.reduction_complete,
        )
        return self.error is None and all(c is not False for c in checks)


# -- invariants --------------------------------------------------------------


def euler_ok(graph: PlaneGraph) -> bool:
    """Face degrees sum to 2|E|; V - E + F = 2 on every component with an edge; networkx agrees the graph is planar."""
    if sum(f.degree for f in graph.faces) != 2 * graph.edge_count:
        return False
    faces = Counter()
    for face in graph.faces:
        faces[next(i for i, c in enumerate(graph.components) if face.walk[0] in c)] += 1
    for i, component in enumerate(graph.components):
        edges = sum(graph.degree(v) for v in component) // 2
        if len(component) - edges + faces[i] != (2 if edges else 1):
            return False
    planar, _ = nx.check_planarity(graph.to_networkx())
    return planar


def detectors_ok(graph: PlaneGraph) -> bool:
    """Cycle and claw detectors against direct enumeration."""
    G = graph.to_networkx()
    for k in range(3, 8):
        expected = sum(1 for c in nx.simple_cycles(G, length_bound=k) if len(c) == k)
        if len(cycles_of_length(graph, k)) != expected:
            logger.warning(f"{k}-cycle count disagrees on {graph!r}")
            return False
    for face in graph.faces:
        if not face.is_cycle:
            continue
        on_face = set(face.walk)
        counts = {v: len(set(G[v]) & on_face) for v in G if v not in on_face}
        claws = tuple(sorted(v for v, c in counts.items() if c >= 3))
        pairs = tuple(
            sorted(
                (min(u, w), max(u, w))
                for u, w in G.edges
                if u in counts and w in counts and counts[u] + counts[w] >= 4
            )
        )
        if claw_centers(graph, face) != claws or d_claw_centers(graph, face) != pairs:
            logger.warning(f"claw detectors disagree on face {graph.describe(face.walk)}")
            return False
    return True


def trace_ok(trace: Trace, sigma: int) -> bool:
    return trace.is_monotone(sigma) and trace.depth() <= sigma


# -- extension ---------------------------------------------------------------


def pick_face(graph: PlaneGraph) -> Optional[FacialWalk]:
    """A qualifying face: 9-faces first, then 11-faces, then 3-faces."""
    order = {9: 0, 11: 1, 3: 2}
    for face in sorted(graph.faces, key=lambda f: (order.get(f.degree, 3), f.index)):
        if face.degree in order and qualifies(graph, face):
            return face
    return None


def _agrees(graph: PlaneGraph, colouring: Coloring, boundary: Coloring) -> bool:
    return verify_coloring(graph, colouring) and all(colouring[v] == c for v, c in boundary.items())


# -- surgeries ---------------------------------------------------------------


def surgery_candidates(graph: PlaneGraph, face: FacialWalk) -> Iterator[Surgery]:
    """Every surgery applicable around ``face`` (already designated as unbounded)."""
    builders = []
    walk = face.walk
    for i, w in enumerate(walk):
        p, s = walk[i - 1], walk[(i + 1) % len(walk)]
        if graph.degree(w) == 2 and graph.has_edge(p, s):
            builders.append(partial(remove_and_subdivide, graph, (p, s), w, face))
    for h in graph.faces:
        if h.index == face.index or not h.is_cycle:
            continue
        if h.degree == 4:
            for d in ((h.walk[0], h.walk[2]), (h.walk[1], h.walk[3])):
                builders.append(partial(identify_diagonal, graph, h, d, face))
        elif h.degree == 6:
            for anchor in h.walk:
                builders.append(partial(identify_six_face, graph, h, anchor, face))
    for k, padding in SPLIT_PADDING.items():
        for sides in separating_cycles(graph, k):
            builders.append(partial(split_separating, graph, sides.cycle, padding, face))

    for build in builders:
        try:
            yield build()
        except SurgeryError as e:
            logger.debug(f"surgery inapplicable: {e}")


def _admissible(part: PlaneGraph, face: Optional[FacialWalk]) -> bool:
    return face is not None and check_class(part).in_class and qualifies(part, face)


def _reduced_extension(graph: PlaneGraph, surgery: Surgery, boundary: Coloring) -> Tuple[Optional[Coloring], bool]:
    """Oracle extension through the reduced part(s), pulled back; and whether the parts are admissible."""
    transfer = surgery.transfer
    if surgery.kind is SurgeryKind.SPLIT_SEPARATING:
        outer, inner = surgery.parts
        outer_face, inner_face = surgery.tracked[0], surgery.faces[1]
        admissible = _admissible(outer, outer_face) and _admissible(inner, inner_face)
        pushed = transfer.push_forward(boundary, 0, outer)
        first = None if pushed is None else brute_force_extend(outer, pushed)
        if first is None:
            return None, admissible
        cycle = surgery.parameters["cycle"]
        on_cycle = Coloring({v: first[transfer.parts[0][v]] for v in cycle})
        pushed_inner = transfer.push_forward(on_cycle, 1, inner)
        second = None if pushed_inner is None else brute_force_extend(inner, pushed_inner)
        if second is None:
            return None, admissible
        return transfer.pull_back(graph, [first, second]), admissible

    part = surgery.parts[0]
    admissible = _admissible(part, surgery.faces[0])
    pushed = transfer.push_forward(boundary, 0, part)
    reduced = None if pushed is None else brute_force_extend(part, pushed)
    if reduced is None:
        return None, admissible
    return transfer.pull_back(graph, [reduced]), admissible


# -- one case ----------------------------------------------------------------


def audit_graph(graph: PlaneGraph, seed: int) -> AuditRow:
    """Run every property on ``graph``."""
    row = AuditRow(seed=seed, n=graph.vertex_count, m=graph.edge_count, faces=len(graph.faces))
    row.in_class = check_class(graph).in_class
    row.euler_ok = euler_ok(graph)
    row.detectors_ok = detectors_ok(graph)

    traces: List[Trace] = []
    try:
        colouring, trace = ExtensionEngine().color(graph)
        row.colored_ok = verify_coloring(graph, colouring)
        traces.append(trace)
    except ColoringError as e:
        logger.error(f"colouring failed on seed {seed}: {e}")
        row.colored_ok = False

    face = pick_face(graph)
    if face is not None:
        g = graph.with_outer(face)
        boundaries = all_boundary_colorings(g, face)
        row.extension_face_degree = face.degree
        row.extension_colorings = len(boundaries)
        extension_ok = oracle_ok = True
        for boundary in boundaries:
            try:
                colouring, trace = ExtensionEngine().extend(ExtensionTask(g, face, boundary))
                extension_ok = extension_ok and _agrees(g, colouring, boundary)
                traces.append(trace)
            except ColoringError as e:
                logger.error(f"extension failed on seed {seed}: {e}")
                extension_ok = False
            oracle_ok = oracle_ok and brute_force_extend(g, boundary) is not None
        row.extension_ok = extension_ok
        row.oracle_agrees = oracle_ok
        _audit_surgeries(row, g, face, boundaries[:BOUNDARY_SAMPLES])

    row.trace_monotone = all(trace_ok(t, graph.sigma) for t in traces) if traces else None
    row.reduction_complete = not any(t.stalled() for t in traces) if traces else None
    row.max_trace_depth = max((t.depth() for t in traces), default=0)
    return row


def _audit_surgeries(row: AuditRow, g: PlaneGraph, face: FacialWalk, boundaries: List[Coloring]):
    kinds: Counter = Counter()
    equivalent = pullback = True
    euler = row.euler_ok
    for surgery in surgery_candidates(g, face):
        kinds[surgery.kind.value] += 1
        euler = euler and all(euler_ok(p) for p in surgery.parts)
        if surgery.kind in (SurgeryKind.IDENTIFY_DIAGONAL, SurgeryKind.IDENTIFY_SIX_FACE):
            if identification_preconditions(g, surgery):
                row.identifications += 1
                row.identifications_in_class += int(check_class(surgery.parts[0]).in_class)
        for boundary in boundaries:
            original = brute_force_extend(g, boundary) is not None
            pulled, admissible = _reduced_extension(g, surgery, boundary)
            if pulled is not None:
                pullback = pullback and _agrees(g, pulled, boundary)
            if admissible:
                equivalent = equivalent and original == (pulled is not None)
    row.surgery_kinds = dict(sorted(kinds.items()))
    row.surgery_checks = sum(kinds.values())
    if row.identifications:
        row.class_preserved = row.identifications_in_class == row.identifications
    if row.surgery_checks:
        row.surgery_equivalent = equivalent
        row.pullback_ok = pullback
    row.euler_ok = euler
