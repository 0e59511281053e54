"""
Membership in the class of plane graphs without 5-cycles, without 7-cycles
and without two triangles sharing an edge.

Cycles are checked over the whole abstract graph, facial or not.
"""
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from cache.cache_manager import cache_manager
from graphs.plane_core import CycleHandle, Edge, PlaneGraph, orient_cycle
from graphs.pg1 import dumps_pg1

logger = logging.getLogger(__name__)


def _rooted_cycles(graph: PlaneGraph, k: int) -> Iterator[Tuple[int, ...]]:
    """Each k-cycle once, as the reversal-minimal sequence starting at its smallest vertex.

    DFS from every root over larger vertices only; a path is closed when its
    last vertex sees the root, and kept when its second vertex is smaller than
    its last.
    """
    n = graph.vertex_count
    nbrs = [sorted(graph.adjacency(v)) for v in range(n)]
    for root in range(n):
        path = [root]
        on_path = {root}
        stack = [iter([w for w in nbrs[root] if w > root])]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if nxt in on_path:
                continue
            if len(path) == k - 1:
                if path[1] < nxt and graph.has_edge(nxt, root):
                    yield tuple(path) + (nxt,)
                continue
            path.append(nxt)
            on_path.add(nxt)
            stack.append(iter([w for w in nbrs[nxt] if w > root]))


def iter_cycles(graph: PlaneGraph, k: int) -> Iterator[CycleHandle]:
    """Lazily yield the k-cycles of ``graph`` in the order of ``cycles_of_length``."""
    if k < 3:
        raise ValueError(f"cycle length must be at least 3, got {k}")
    for seq in _rooted_cycles(graph, k):
        yield orient_cycle(graph, seq)


def cycles_of_length(graph: PlaneGraph, k: int) -> List[CycleHandle]:
    """All simple cycles of length exactly ``k``, each once, written clockwise.

    Order is deterministic: by root vertex, then by DFS over ascending neighbours.
    """
    return list(iter_cycles(graph, k))


def has_cycle_through(graph: PlaneGraph, k: int, path: Sequence[int]) -> bool:
    """Whether some k-cycle runs along ``path`` (consecutive vertices, either direction)."""
    target = tuple(path)
    for seq in _rooted_cycles(graph, k):
        if target[0] not in seq:
            continue
        i = seq.index(target[0])
        forward = tuple(seq[(i + t) % k] for t in range(len(target)))
        backward = tuple(seq[(i - t) % k] for t in range(len(target)))
        if target in (forward, backward):
            return True
    return False


def triangles(graph: PlaneGraph) -> List[CycleHandle]:
    return cycles_of_length(graph, 3)


def adjacent_triangles(graph: PlaneGraph) -> Optional[Tuple[CycleHandle, CycleHandle]]:
    """First pair of distinct triangles with a common edge, or None."""
    seen: Dict[Edge, CycleHandle] = {}
    for tri in triangles(graph):
        for edge in sorted(tri.edges()):
            if edge in seen:
                return seen[edge], tri
        for edge in tri.edges():
            seen[edge] = tri
    return None


class ClassReport(BaseModel):
    """Membership verdict with witnesses for every failed condition."""

    model_config = ConfigDict(frozen=True)

    in_class: bool
    five_cycle_witness: Optional[CycleHandle] = None
    seven_cycle_witness: Optional[CycleHandle] = None
    adjacent_triangle_witness: Optional[Tuple[CycleHandle, CycleHandle]] = None
    triangle_count: int = 0

    def to_json(self, graph: PlaneGraph) -> dict:
        def names(cycle):
            return None if cycle is None else graph.describe(cycle.vertices)

        pair = self.adjacent_triangle_witness
        return {
            "in_class": self.in_class,
            "triangle_count": self.triangle_count,
            "witnesses": {
                "five_cycle": names(self.five_cycle_witness),
                "seven_cycle": names(self.seven_cycle_witness),
                "adjacent_triangles": None if pair is None else [names(pair[0]), names(pair[1])],
            },
        }


def _check_class(graph: PlaneGraph) -> ClassReport:
    five = next(iter_cycles(graph, 5), None)
    seven = next(iter_cycles(graph, 7), None)
    pair = adjacent_triangles(graph)
    report = ClassReport(
        in_class=five is None and seven is None and pair is None,
        five_cycle_witness=five,
        seven_cycle_witness=seven,
        adjacent_triangle_witness=pair,
        triangle_count=sum(1 for _ in _rooted_cycles(graph, 3)),
    )
    if not report.in_class:
        logger.debug(f"{graph!r} is outside the class: {report.to_json(graph)['witnesses']}")
    return report


def check_class(graph: PlaneGraph, use_cache: bool = True) -> ClassReport:
    """Class verdict, memoised on the rotation system unless ``use_cache`` is off."""
    if not use_cache:
        return _check_class(graph)
    return cache_manager.memoize("class_report", dumps_pg1(graph), lambda: _check_class(graph))
