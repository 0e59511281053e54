"""
Random plane graphs without 5- and 7-cycles and without adjacent triangles.

Growth starts from an even cycle and repeatedly splits a face by a path of
new vertices (or a chord) between two of its corners. A bare triangle admits
no move at all, so triangles only appear as one-vertex paths across an edge
of a face of degree at least eight, or as chords of faces of degree at least
nine; a triangle seed is used only when n = 3. Growth that stalls starts
over. A move is rejected outright when one of the two cycles it closes along
the face has length 5 or 7, and otherwise kept only if the whole graph still
passes the class check. Every graph built this way is 2-connected, so faces
stay cycles.
"""
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config.settings import settings
from graphs.class_guard import check_class, iter_cycles
from graphs.plane_core import PlaneGraph

logger = logging.getLogger(__name__)

GENERATOR_VERSION = "grow-1"
FORBIDDEN_LENGTHS = (5, 7)
STALL_LIMIT = 200


class ExhaustedAttempts(RuntimeError):
    """No graph met the request within the attempt budget."""

    def __init__(self, attempts: int, accepted: int):
        self.attempts = attempts
        self.accepted = accepted
        self.rate = accepted / attempts if attempts else 0.0
        super().__init__(f"gave up after {attempts} attempts (acceptance rate {self.rate:.1%})")


class GenParams(BaseModel):
    """Request for one random instance."""

    model_config = ConfigDict(frozen=True)

    target_vertex_count: int = Field(ge=3)
    seed: int = Field(default=0, ge=0, lt=2**64)
    require_triangle: bool = True
    require_four_or_six_cycle: bool = True
    max_attempts: int = Field(default_factory=lambda: settings.GEN_MAX_ATTEMPTS, ge=1)
    max_path: int = Field(default_factory=lambda: settings.GEN_MAX_PATH, ge=0)


def generation_metadata(params: GenParams) -> Dict[str, object]:
    """Header lines stored with a generated instance."""
    return {
        "generator": GENERATOR_VERSION,
        "seed": params.seed,
        "n": params.target_vertex_count,
        "require_triangle": str(params.require_triangle).lower(),
        "require_four_or_six_cycle": str(params.require_four_or_six_cycle).lower(),
    }


def _seed_length(params: GenParams, rng: np.random.Generator) -> int:
    choices = [k for k in (4, 6, 8) if k <= params.target_vertex_count] or [3]
    return int(rng.choice(choices))


def _cycle(length: int) -> List[List[int]]:
    return [[(i + 1) % length, (i - 1) % length] for i in range(length)]


def _open_corner(rotation: List[List[int]], vertex: int, before: int, new: int):
    """Insert ``new`` into the corner of ``vertex`` entered from ``before``."""
    rot = rotation[vertex]
    rot.insert(rot.index(before), new)


def _split_face(
    graph: PlaneGraph, walk: Tuple[int, ...], i: int, j: int, internal: int
) -> List[List[int]]:
    """Rotation after joining corners ``i`` and ``j`` of ``walk`` by a path."""
    rotation = [list(rot) for rot in graph.rotation]
    d = len(walk)
    a, b = walk[i], walk[j]
    path = [a] + list(range(graph.vertex_count, graph.vertex_count + internal)) + [b]
    for k in range(1, len(path) - 1):
        rotation.append([path[k - 1], path[k + 1]])
    _open_corner(rotation, a, walk[(i - 1) % d], path[1])
    _open_corner(rotation, b, walk[(j - 1) % d], path[-2])
    return rotation


def _has_four_or_six_cycle(graph: PlaneGraph) -> bool:
    return next(iter_cycles(graph, 4), None) is not None or next(iter_cycles(graph, 6), None) is not None


def _meets_flags(graph: PlaneGraph, params: GenParams) -> bool:
    report = check_class(graph, use_cache=False)
    if not report.in_class:
        return False
    if params.require_triangle and report.triangle_count == 0:
        return False
    if params.require_four_or_six_cycle and not _has_four_or_six_cycle(graph):
        return False
    return True


def generate(params: GenParams) -> PlaneGraph:
    """Random instance in the class, deterministic for a given ``params``.

    Labels are ``v0``, ``v1``, ... in creation order.

    Raises:
        ExhaustedAttempts: when the move budget runs out
    """
    rng = np.random.default_rng(params.seed)
    n = params.target_vertex_count
    attempts = 0
    accepted = 0

    while attempts < params.max_attempts:
        length = _seed_length(params, rng)
        graph = PlaneGraph([f"v{i}" for i in range(length)], _cycle(length))

        stalled = 0
        while graph.vertex_count < n and attempts < params.max_attempts and stalled < STALL_LIMIT:
            attempts += 1
            candidate = _try_move(graph, n - graph.vertex_count, params.max_path, rng)
            if candidate is None:
                stalled += 1
                continue
            graph = candidate
            accepted += 1
            stalled = 0

        if graph.vertex_count == n:
            attempts += 1
            if _meets_flags(graph, params):
                logger.info(
                    f"generated n={n} seed={params.seed} after {attempts} attempts "
                    f"({accepted} moves kept)"
                )
                return graph
            logger.debug(f"seed={params.seed}: structural flags unmet, restarting growth")
        else:
            logger.debug(f"seed={params.seed}: growth stalled at {graph.vertex_count} vertices, restarting")

    raise ExhaustedAttempts(attempts, accepted)


def _try_move(
    graph: PlaneGraph, remaining: int, max_path: int, rng: np.random.Generator
) -> Optional[PlaneGraph]:
    face = graph.faces[int(rng.integers(len(graph.faces)))]
    walk = face.walk
    d = len(walk)
    i, j = (int(x) for x in rng.choice(d, size=2, replace=False))
    internal = int(rng.integers(0, min(max_path, remaining), endpoint=True))
    a, b = walk[i], walk[j]
    if a == b or (internal == 0 and graph.has_edge(a, b)):
        return None

    arc = (j - i) % d
    if arc + internal + 1 in FORBIDDEN_LENGTHS or d - arc + internal + 1 in FORBIDDEN_LENGTHS:
        return None

    labels = list(graph.labels) + [f"v{graph.vertex_count + k}" for k in range(internal)]
    candidate = PlaneGraph(labels, _split_face(graph, walk, i, j, internal))
    if not check_class(candidate, use_cache=False).in_class:
        return None
    return candidate
