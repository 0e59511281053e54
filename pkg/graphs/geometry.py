"""Rotation systems read off straight-line drawings (y axis pointing up)."""
import logging
import math
from typing import Iterable, Mapping, Tuple

from graphs.errors import UnknownLabel
from graphs.plane_core import PlaneGraph, build_plane_graph

logger = logging.getLogger(__name__)

Point = Tuple[float, float]


def _signed_area(coords, walk) -> float:
    """Shoelace area; bounded faces are traced clockwise, so only the unbounded face is positive."""
    area = 0.0
    for i, v in enumerate(walk):
        x1, y1 = coords[v]
        x2, y2 = coords[walk[(i + 1) % len(walk)]]
        area += x1 * y2 - x2 * y1
    return area / 2.0


def build_from_coordinates(points: Mapping[str, Point], edges: Iterable[Tuple[str, str]]) -> PlaneGraph:
    """Plane graph of a crossing-free straight-line drawing.

    Neighbours are sorted clockwise by polar angle around each vertex, and the
    face with the largest signed area is designated as the unbounded face.
    Crossings are not detected; a drawing with crossings fails Euler's check.
    """
    labels = list(points)
    neighbours = {label: [] for label in labels}
    for a, b in edges:
        for x in (a, b):
            if x not in neighbours:
                raise UnknownLabel(f"edge endpoint {x!r} has no coordinates")
        neighbours[a].append(b)
        neighbours[b].append(a)

    rotation = {}
    for label, nbrs in neighbours.items():
        x0, y0 = points[label]
        rotation[label] = sorted(
            nbrs, key=lambda w: -math.atan2(points[w][1] - y0, points[w][0] - x0)
        )

    graph = build_plane_graph(labels, rotation)
    if not graph.faces:
        return graph
    coords = [points[label] for label in graph.labels]
    outer = max(graph.faces, key=lambda f: (_signed_area(coords, f.walk), -f.index))
    logger.debug(f"drawing designates face {graph.describe(outer.walk)} as unbounded")
    return graph.with_outer(outer)
