"""
Exhaustive precolouring extension.

Complete backtracking over bitmask domains with forward checking. The next
vertex is the one with the fewest remaining colours, ties broken by higher
degree, then lower index. Values are tried in ascending colour order, so the
result is deterministic.
"""
import logging
from typing import List, Optional

from cache.cache_manager import cache_manager
from coloring.types import COLORS, Coloring
from config.settings import settings
from graphs.pg1 import dumps_pg1
from graphs.plane_core import PlaneGraph

logger = logging.getLogger(__name__)

FULL = (1 << len(COLORS)) - 1


def verify_coloring(graph: PlaneGraph, coloring: Coloring) -> bool:
    """True iff the colouring is total and proper."""
    return coloring.is_total(graph) and coloring.is_proper(graph)


def _search(graph: PlaneGraph, partial: Coloring) -> Optional[Coloring]:
    n = graph.vertex_count
    if not partial.is_proper(graph):
        return None

    domains: List[int] = [FULL] * n
    assigned: List[Optional[int]] = [None] * n
    for v, c in partial.items():
        domains[v] = 1 << c
        assigned[v] = c
    for v, c in partial.items():
        for w in graph.adjacency(v):
            if assigned[w] is None:
                domains[w] &= ~(1 << c)
                if not domains[w]:
                    return None

    free = [v for v in range(n) if assigned[v] is None]
    degree = [graph.degree(v) for v in range(n)]

    def pick() -> int:
        best = None
        best_key = None
        for v in free:
            if assigned[v] is not None:
                continue
            key = (bin(domains[v]).count("1"), -degree[v], v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def backtrack(remaining: int) -> bool:
        if remaining == 0:
            return True
        v = pick()
        for c in COLORS:
            bit = 1 << c
            if not domains[v] & bit:
                continue
            assigned[v] = c
            pruned = []
            ok = True
            for w in graph.adjacency(v):
                if assigned[w] is None and domains[w] & bit:
                    domains[w] &= ~bit
                    pruned.append(w)
                    if not domains[w]:
                        ok = False
                        break
            if ok and backtrack(remaining - 1):
                return True
            for w in pruned:
                domains[w] |= bit
            assigned[v] = None
        return False

    if not backtrack(len(free)):
        return None
    return Coloring({v: assigned[v] for v in range(n)})


def brute_force_extend(graph: PlaneGraph, partial: Optional[Coloring] = None) -> Optional[Coloring]:
    """Some proper total extension of ``partial``, or None iff none exists.

    Results are memoised on the rotation system and the precolouring.
    """
    partial = partial or Coloring()
    if graph.vertex_count > settings.ORACLE_MAX_VERTICES:
        logger.warning(
            f"exhaustive search on {graph.vertex_count} vertices "
            f"(above ORACLE_MAX_VERTICES={settings.ORACLE_MAX_VERTICES})"
        )
    key = {"graph": dumps_pg1(graph), "partial": sorted(partial.items())}
    return cache_manager.memoize("oracle", key, lambda: _search(graph, partial))


def is_three_colorable(graph: PlaneGraph) -> bool:
    return brute_force_extend(graph) is not None
