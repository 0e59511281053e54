"""
Mutable rotation system used while a surgery is being built.

Edits keep the embedding valid step by step; ``freeze`` validates the result
again through ``PlaneGraph``.
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from graphs.plane_core import PlaneGraph

logger = logging.getLogger(__name__)


class RotationEditor:
    """Edit a copy of a plane graph's rotation system.

    Vertex indices of the source graph stay valid during editing; new vertices
    get fresh indices past the end. Removed vertices vanish at ``freeze``.
    """

    def __init__(self, graph: PlaneGraph):
        self.labels: List[str] = list(graph.labels)
        self.rotation: List[List[int]] = [list(rot) for rot in graph.rotation]
        self.alive: List[bool] = [True] * graph.vertex_count
        self._taken = set(self.labels)

    def _fresh(self, label: str) -> str:
        while label in self._taken:
            label += "'"
        self._taken.add(label)
        return label

    def add_vertex(self, label: str) -> int:
        self.labels.append(self._fresh(label))
        self.rotation.append([])
        self.alive.append(True)
        return len(self.labels) - 1

    def remove_vertex(self, v: int):
        for w in self.rotation[v]:
            self.rotation[w].remove(v)
        self.rotation[v] = []
        self.alive[v] = False

    def remove_edge(self, u: int, v: int):
        self.rotation[u].remove(v)
        self.rotation[v].remove(u)

    def subdivide(self, u: int, v: int, count: int, stem: Optional[str] = None) -> Tuple[int, ...]:
        """Replace edge uv by a path of ``count`` new vertices, ordered from u to v.

        Each endpoint keeps the rotation slot of the old edge.
        """
        stem = stem or f"{self.labels[u]}~{self.labels[v]}"
        path = [self.add_vertex(f"{stem}.{i + 1}") for i in range(count)]
        if not path:
            return ()
        self.rotation[u][self.rotation[u].index(v)] = path[0]
        self.rotation[v][self.rotation[v].index(u)] = path[-1]
        chain = [u] + path + [v]
        for i, p in enumerate(path, start=1):
            self.rotation[p] = [chain[i - 1], chain[i + 1]]
        return tuple(path)

    def identify(self, walk: Sequence[int], i: int, j: int) -> int:
        """Merge ``walk[j]`` into ``walk[i]`` across the face traced by ``walk``.

        ``walk`` is a facial walk of the current rotation system with the
        face on its right. Around the merged vertex the neighbours of
        ``walk[i]`` come first, read clockwise from its predecessor on the
        walk to its successor, then those of ``walk[j]`` likewise. A
        neighbour of both keeps only its first copy.

        Returns the index of the merged vertex (``walk[i]``).
        """
        d = len(walk)
        a, b = walk[i], walk[j]
        if b in self.rotation[a]:
            raise ValueError(f"{self.labels[a]!r} and {self.labels[b]!r} are adjacent")

        def arc(x, before, after):
            rot = self.rotation[x]
            start = rot.index(before)
            out = [rot[(start + t) % len(rot)] for t in range(len(rot))]
            assert out[-1] == after
            return out

        a_part = arc(a, walk[(i - 1) % d], walk[(i + 1) % d])
        b_part = arc(b, walk[(j - 1) % d], walk[(j + 1) % d])
        shared = set(a_part)
        for y in b_part:
            if y in shared:
                self.rotation[y].remove(b)
            else:
                self.rotation[y][self.rotation[y].index(b)] = a
        self.rotation[a] = a_part + [y for y in b_part if y not in shared]
        self.rotation[b] = []
        self.alive[b] = False
        self.labels[a] = self._fresh(f"{self.labels[a]}+{self.labels[b]}")
        return a

    def freeze(self, outer_dart: Optional[Tuple[int, int]] = None) -> Tuple[PlaneGraph, Dict[int, int]]:
        """Validated graph of the live vertices and the editor-to-graph index map."""
        keep = [v for v in range(len(self.labels)) if self.alive[v]]
        index = {v: k for k, v in enumerate(keep)}
        rotation = [[index[w] for w in self.rotation[v]] for v in keep]
        dart = None
        if outer_dart is not None and all(x in index for x in outer_dart):
            if outer_dart[1] in self.rotation[outer_dart[0]]:
                dart = (index[outer_dart[0]], index[outer_dart[1]])
        return PlaneGraph([self.labels[v] for v in keep], rotation, outer_dart=dart), index
