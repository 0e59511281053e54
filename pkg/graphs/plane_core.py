"""
Plane graphs given by rotation systems.

A plane graph is stored on dense vertex indices ``0..n-1``. For every vertex
the rotation lists its neighbours in clockwise cyclic order; external labels
live in a side table so that surgeries can renumber freely.

Faces are traced once, at construction. After arriving at ``v`` from ``u``,
the walk leaves ``v`` towards the neighbour that follows ``u``
counterclockwise (the one preceding ``u`` in the clockwise rotation). Every
face therefore lies on the right of its walk, and bounded faces are traversed
clockwise.

Which face is unbounded is a designation, not a geometric fact: callers pass
a dart of the face they want to treat as outer, otherwise the face of maximum
degree (lowest index on ties) is used.

Example:
    >>> g = build_plane_graph(["a", "b", "c"], {"a": ["b", "c"], "b": ["c", "a"], "c": ["a", "b"]})
    >>> [f.degree for f in g.faces]
    [3, 3]
    >>> sigma_measure(g)
    6
"""
import copy
import hashlib
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from graphs.errors import (
    NoSuchFace,
    NotACycle,
    NotPlane,
    NotSimple,
    SymmetryViolation,
    UnknownLabel,
)

logger = logging.getLogger(__name__)

Dart = Tuple[int, int]
Edge = Tuple[int, int]


@dataclass(frozen=True)
class FacialWalk:
    """Closed walk bounding one face, in traversal order (face on the right).

    Attributes:
        walk: vertices in traversal order, starting at the tail of the face's
            lowest dart.
        is_cycle: True iff no vertex repeats.
        index: position of the face in ``PlaneGraph.faces``.
    """

    walk: Tuple[int, ...]
    is_cycle: bool
    index: int

    @property
    def degree(self) -> int:
        return len(self.walk)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.walk)

    def darts(self) -> Tuple[Dart, ...]:
        d = len(self.walk)
        return tuple((self.walk[i], self.walk[(i + 1) % d]) for i in range(d))

    def edges(self) -> frozenset:
        return frozenset(normalize_edge(u, v) for u, v in self.darts())

    def rotated_to(self, vertex: int) -> Tuple[int, ...]:
        """Walk restarted at ``vertex`` (first occurrence)."""
        i = self.walk.index(vertex)
        return self.walk[i:] + self.walk[:i]


@dataclass(frozen=True)
class CycleHandle:
    """Cycle of the graph written clockwise: its interior lies on the right of every dart.

    The sequence starts at its smallest vertex.
    """

    vertices: Tuple[int, ...]

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, v):
        return v in self.vertices

    @property
    def length(self) -> int:
        return len(self.vertices)

    def darts(self) -> Tuple[Dart, ...]:
        k = len(self.vertices)
        return tuple((self.vertices[i], self.vertices[(i + 1) % k]) for i in range(k))

    def edges(self) -> frozenset:
        return frozenset(normalize_edge(u, v) for u, v in self.darts())

    def successor(self, v: int) -> int:
        i = self.vertices.index(v)
        return self.vertices[(i + 1) % len(self.vertices)]

    def predecessor(self, v: int) -> int:
        i = self.vertices.index(v)
        return self.vertices[i - 1]

    def path(self, a: int, b: int) -> Tuple[int, ...]:
        """C[a, b]: vertices from ``a`` to ``b`` following the orientation, both ends included."""
        i, j = self.vertices.index(a), self.vertices.index(b)
        k = len(self.vertices)
        return tuple(self.vertices[(i + t) % k] for t in range((j - i) % k + 1))


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _trace(rotation: Sequence[Sequence[int]]) -> Tuple[Tuple[FacialWalk, ...], Dict[Dart, int]]:
    """Face tracing over a rotation system, lowest unvisited dart first."""
    position = [{w: i for i, w in enumerate(rot)} for rot in rotation]
    dart_face: Dict[Dart, int] = {}
    faces: List[FacialWalk] = []
    for u in range(len(rotation)):
        for v in sorted(rotation[u]):
            if (u, v) in dart_face:
                continue
            index = len(faces)
            walk = []
            a, b = u, v
            while (a, b) not in dart_face:
                dart_face[(a, b)] = index
                walk.append(a)
                rot = rotation[b]
                c = rot[(position[b][a] - 1) % len(rot)]
                a, b = b, c
            faces.append(FacialWalk(walk=tuple(walk), is_cycle=len(set(walk)) == len(walk), index=index))
    return tuple(faces), dart_face


class PlaneGraph:
    """
    Immutable simple plane graph.

    Construction validates symmetry, simplicity and Euler's formula per
    component, and traces the faces. Nothing mutates afterwards; surgeries
    build new graphs.

    Attributes:
        labels (tuple[str, ...]): external identifier of every vertex
        rotation (tuple[tuple[int, ...], ...]): clockwise neighbours per vertex
        faces (tuple[FacialWalk, ...]): traced faces
        outer_dart (tuple[int, int] | None): dart designating the unbounded face
    """

    __slots__ = (
        "labels",
        "rotation",
        "faces",
        "outer_dart",
        "_adjacency",
        "_dart_face",
        "_label_index",
        "_edges",
        "_outer_index",
        "_nx",
        "_components",
    )

    def __init__(
        self,
        labels: Sequence[str],
        rotation: Sequence[Sequence[int]],
        outer_dart: Optional[Dart] = None,
    ):
        n = len(labels)
        if len(rotation) != n:
            raise NotSimple(f"{n} labels but {len(rotation)} rotations")
        self.labels = tuple(str(label) for label in labels)
        self.rotation = tuple(tuple(rot) for rot in rotation)

        self._label_index = {}
        for v, label in enumerate(self.labels):
            if label in self._label_index:
                raise NotSimple(f"duplicate label {label!r}")
            self._label_index[label] = v

        adjacency = []
        for v, rot in enumerate(self.rotation):
            seen = set()
            for w in rot:
                if not 0 <= w < n:
                    raise UnknownLabel(f"vertex {self.labels[v]!r} lists unknown neighbour index {w}")
                if w == v:
                    raise NotSimple(f"loop at {self.labels[v]!r}")
                if w in seen:
                    raise NotSimple(f"{self.labels[v]!r} lists {self.labels[w]!r} twice")
                seen.add(w)
            adjacency.append(frozenset(seen))
        for v in range(n):
            for w in adjacency[v]:
                if v not in adjacency[w]:
                    raise SymmetryViolation(
                        f"{self.labels[v]!r} lists {self.labels[w]!r} but not conversely"
                    )
        self._adjacency = tuple(adjacency)
        self._edges = tuple(sorted((u, w) for u in range(n) for w in adjacency[u] if u < w))

        self.faces, self._dart_face = _trace(self.rotation)

        self._nx = nx.Graph()
        self._nx.add_nodes_from(range(n))
        self._nx.add_edges_from(self._edges)
        self._components = tuple(
            frozenset(c) for c in sorted(nx.connected_components(self._nx), key=min)
        )
        self._check_euler()

        if outer_dart is not None:
            outer_dart = (int(outer_dart[0]), int(outer_dart[1]))
            if outer_dart not in self._dart_face:
                raise NoSuchFace(f"outer dart {outer_dart} is not an edge")
            self._outer_index = self._dart_face[outer_dart]
        elif self.faces:
            self._outer_index = max(self.faces, key=lambda f: (f.degree, -f.index)).index
        else:
            self._outer_index = None
        self.outer_dart = outer_dart

    def _check_euler(self):
        """Σ d(f) = 2|E| always, and V − E + F = 2 on every component with an edge."""
        degree_sum = sum(f.degree for f in self.faces)
        if degree_sum != 2 * len(self._edges):
            raise NotPlane(f"face degrees sum to {degree_sum}, expected {2 * len(self._edges)}")
        faces_per_component = {}
        component_of = {}
        for i, comp in enumerate(self._components):
            for v in comp:
                component_of[v] = i
        for face in self.faces:
            c = component_of[face.walk[0]]
            faces_per_component[c] = faces_per_component.get(c, 0) + 1
        for i, comp in enumerate(self._components):
            edges = sum(len(self._adjacency[v]) for v in comp) // 2
            if edges == 0:
                continue
            euler = len(comp) - edges + faces_per_component.get(i, 0)
            if euler != 2:
                raise NotPlane(
                    f"component containing {self.labels[min(comp)]!r} has V-E+F={euler}, "
                    "the rotation system is not a plane embedding"
                )

    # -- size -------------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def sigma(self) -> int:
        return self.vertex_count + self.edge_count

    # -- adjacency --------------------------------------------------------

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.rotation[v]

    def adjacency(self, v: int) -> frozenset:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjacency[u]

    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    # -- faces ------------------------------------------------------------

    def face_of_dart(self, u: int, v: int) -> FacialWalk:
        """Face lying on the right of the dart ``u -> v``."""
        try:
            return self.faces[self._dart_face[(u, v)]]
        except KeyError:
            raise NoSuchFace(f"{self.describe([u, v])} is not an edge")

    @property
    def outer_face(self) -> Optional[FacialWalk]:
        return None if self._outer_index is None else self.faces[self._outer_index]

    def with_outer(self, face: FacialWalk) -> "PlaneGraph":
        """Same embedding, ``face`` designated as the unbounded face."""
        dart = face.darts()[0]
        if self._dart_face.get(dart) != face.index or self.faces[face.index] != face:
            raise NoSuchFace(f"face {self.describe(face.walk)} does not belong to this graph")
        clone = copy.copy(self)
        clone.outer_dart = dart
        clone._outer_index = face.index
        return clone

    def find_face(self, vertices: Sequence[int]) -> FacialWalk:
        """Face whose boundary walk equals ``vertices`` cyclically, in either direction."""
        target = tuple(vertices)
        if not target:
            raise NoSuchFace("empty face description")
        candidates = (target, tuple(reversed(target)))
        for face in self.faces:
            if face.degree != len(target):
                continue
            for seq in candidates:
                if seq[0] in face.walk:
                    for start in (i for i, w in enumerate(face.walk) if w == seq[0]):
                        if face.walk[start:] + face.walk[:start] == seq:
                            return face
        raise NoSuchFace(f"no face bounded by {self.describe(target)}")

    def face_regions(self, blocked: Iterable[Edge] = ()) -> Tuple[int, ...]:
        """Region id per face, faces joined across every edge not in ``blocked``.

        A region id is the lowest face index it contains.
        """
        blocked = {normalize_edge(u, v) for u, v in blocked}
        region = list(range(len(self.faces)))

        def find(x):
            while region[x] != x:
                region[x] = region[region[x]]
                x = region[x]
            return x

        for u, v in self._edges:
            if (u, v) in blocked:
                continue
            a, b = find(self._dart_face[(u, v)]), find(self._dart_face[(v, u)])
            if a != b:
                region[max(a, b)] = min(a, b)
        return tuple(find(i) for i in range(len(region)))

    def without(
        self, vertices: Iterable[int] = (), edges: Iterable[Edge] = ()
    ) -> Tuple["PlaneGraph", Dict[int, int]]:
        """Delete vertices (with their edges) and edges; the embedding is inherited.

        Survivors keep their labels and relative order. Returns the new graph
        and the old-to-new index map. The outer designation is kept when its
        dart survives.
        """
        drop = set(vertices)
        drop_edges = {normalize_edge(u, v) for u, v in edges}
        keep = [v for v in range(self.vertex_count) if v not in drop]
        index = {v: i for i, v in enumerate(keep)}
        rotation = [
            [index[w] for w in self.rotation[v] if w in index and normalize_edge(v, w) not in drop_edges]
            for v in keep
        ]
        outer = None
        if self.outer_dart is not None:
            a, b = self.outer_dart
            if a in index and b in index and normalize_edge(a, b) not in drop_edges:
                outer = (index[a], index[b])
        return PlaneGraph([self.labels[v] for v in keep], rotation, outer_dart=outer), index

    # -- labels -----------------------------------------------------------

    def index_of(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise UnknownLabel(f"unknown vertex label {label!r}")

    def indices_of(self, labels: Iterable[str]) -> List[int]:
        return [self.index_of(label) for label in labels]

    def describe(self, vertices: Iterable[int]) -> List[str]:
        return [self.labels[v] for v in vertices]

    # -- connectivity -----------------------------------------------------

    @property
    def components(self) -> Tuple[frozenset, ...]:
        return self._components

    def is_connected(self) -> bool:
        return len(self._components) <= 1

    def to_networkx(self) -> nx.Graph:
        """Abstract graph (embedding forgotten) as a fresh networkx graph."""
        return self._nx.copy()

    # -- identity ---------------------------------------------------------

    def digest(self) -> str:
        """sha256 over the canonical pg1 text and the outer designation."""
        from graphs.pg1 import dumps_pg1

        outer = "" if self.outer_dart is None else " ".join(self.describe(self.outer_dart))
        return hashlib.sha256(f"{dumps_pg1(self)}#outer {outer}\n".encode()).hexdigest()

    def __eq__(self, other):
        if not isinstance(other, PlaneGraph):
            return NotImplemented
        return self.labels == other.labels and self.rotation == other.rotation

    def __hash__(self):
        return hash((self.labels, self.rotation))

    def __repr__(self):
        return f"PlaneGraph(n={self.vertex_count}, m={self.edge_count}, faces={len(self.faces)})"


def build_plane_graph(
    labels: Sequence[str],
    rotation: Union[Mapping[str, Sequence[str]], Sequence[Sequence[str]]],
    outer: Optional[Sequence[str]] = None,
) -> PlaneGraph:
    """Validate a labelled rotation system and trace its faces.

    Args:
        labels: vertex labels; their order fixes the internal indices.
        rotation: clockwise neighbour labels, either keyed by label or aligned
            with ``labels``. Labels missing from a mapping get no neighbours.
        outer: optional dart ``(a, b)`` whose right-hand face is the unbounded face.

    Raises:
        SymmetryViolation, NotSimple, UnknownLabel, NotPlane
    """
    labels = [str(label) for label in labels]
    index = {}
    for i, label in enumerate(labels):
        if label in index:
            raise NotSimple(f"duplicate label {label!r}")
        index[label] = i

    def resolve(label):
        try:
            return index[str(label)]
        except KeyError:
            raise UnknownLabel(f"unknown vertex label {label!r}")

    if isinstance(rotation, Mapping):
        for key in rotation:
            resolve(key)
        rows = [rotation.get(label, ()) for label in labels]
    else:
        rows = list(rotation)
    indexed = [[resolve(w) for w in row] for row in rows]
    outer_dart = None if outer is None else (resolve(outer[0]), resolve(outer[1]))
    return PlaneGraph(labels, indexed, outer_dart=outer_dart)


def check_cycle(graph: PlaneGraph, vertices: Sequence[int]) -> Tuple[int, ...]:
    """Vertex sequence as a tuple, or NotACycle."""
    seq = tuple(int(v) for v in vertices)
    if len(seq) < 3 or len(set(seq)) != len(seq):
        raise NotACycle(f"{seq} is not a sequence of at least 3 distinct vertices")
    for v in seq:
        if not 0 <= v < graph.vertex_count:
            raise NotACycle(f"{v} is not a vertex")
    for i, v in enumerate(seq):
        w = seq[(i + 1) % len(seq)]
        if not graph.has_edge(v, w):
            raise NotACycle(f"{graph.labels[v]!r} and {graph.labels[w]!r} are not adjacent")
    return seq


def orient_cycle(
    graph: PlaneGraph,
    vertices: Sequence[int],
    reference_face: Optional[FacialWalk] = None,
) -> CycleHandle:
    """Write a cycle clockwise: its interior, the side away from ``reference_face``
    (default: the designated unbounded face), ends up on the right.

    When the reference face lies in another component, the side spanning
    fewer faces is taken as the interior.
    """
    seq = check_cycle(graph, vertices)
    regions = graph.face_regions(CycleHandle(seq).edges())
    right = regions[graph.face_of_dart(seq[0], seq[1]).index]
    left = regions[graph.face_of_dart(seq[1], seq[0]).index]
    reference = reference_face if reference_face is not None else graph.outer_face
    if reference is not None and regions[reference.index] in (left, right):
        flip = regions[reference.index] == right
    else:
        flip = regions.count(right) > regions.count(left)
    if flip:
        seq = tuple(reversed(seq))
    start = seq.index(min(seq))
    return CycleHandle(seq[start:] + seq[:start])


def trace_faces(graph: PlaneGraph) -> Tuple[FacialWalk, ...]:
    """Facial walks of ``graph``, lowest directed edge first (traced at construction)."""
    return graph.faces


def sigma_measure(graph: PlaneGraph) -> int:
    """|V| + |E|."""
    return graph.sigma


def is_two_connected(graph: PlaneGraph) -> bool:
    """2-connected, equivalently (for plane graphs on ≥3 vertices) every face boundary is a cycle."""
    if graph.vertex_count < 3:
        return False
    return nx.is_biconnected(graph.to_networkx()) and all(f.is_cycle for f in graph.faces)
