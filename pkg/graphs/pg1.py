"""
pg1 text format for plane graphs.

    # seed: 7
    pg1 3
    a: b c
    b: c a
    c: a b

The header gives the vertex count; each following line lists a vertex label
and its neighbours in clockwise order. Blank lines and ``#`` comments are
ignored. Vertex indices follow the order of the line heads, so writing and
re-reading reproduces the rotation system exactly.
"""
import logging
import re
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple, Union

from graphs.errors import MalformedInput
from graphs.plane_core import PlaneGraph

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\S+")
_META = re.compile(r"^\s*#\s*([\w.-]+)\s*:\s*(.*?)\s*$")


def _tokens(line: str) -> List[Tuple[int, str]]:
    """(1-based column, token) pairs of the non-comment part of a line."""
    body = line.split("#", 1)[0]
    return [(m.start() + 1, m.group()) for m in _TOKEN.finditer(body)]


def loads_pg1(text: str) -> PlaneGraph:
    """Parse pg1 text.

    Raises:
        MalformedInput: with the line and column of the first bad token
        PlaneGraphError: when the rotation system itself is invalid
    """
    header_seen = False
    expected = 0
    labels: List[str] = []
    rows: List[List[Tuple[int, int, str]]] = []
    last_line = 0

    for lineno, line in enumerate(text.splitlines(), start=1):
        last_line = lineno
        tokens = _tokens(line)
        if not tokens:
            continue
        if not header_seen:
            col, word = tokens[0]
            if word != "pg1":
                raise MalformedInput(f"expected header 'pg1 <n>', found {word!r}", lineno, col)
            if len(tokens) != 2:
                col = tokens[2][0] if len(tokens) > 2 else col + len(word)
                raise MalformedInput("header must be 'pg1 <n>'", lineno, col)
            col, count = tokens[1]
            if not count.isdigit():
                raise MalformedInput(f"vertex count {count!r} is not a non-negative integer", lineno, col)
            expected = int(count)
            header_seen = True
            continue

        col, head = tokens[0]
        if not head.endswith(":") or len(head) == 1:
            raise MalformedInput(f"expected '<label>:', found {head!r}", lineno, col)
        label = head[:-1]
        if ":" in label:
            raise MalformedInput(f"label {label!r} contains ':'", lineno, col)
        if label in labels:
            raise MalformedInput(f"label {label!r} declared twice", lineno, col)
        if len(labels) == expected:
            raise MalformedInput(f"more than the {expected} declared vertices", lineno, col)
        labels.append(label)
        rows.append([(lineno, c, w) for c, w in tokens[1:]])

    if not header_seen:
        raise MalformedInput("missing header 'pg1 <n>'", max(last_line, 1), 1)
    if len(labels) != expected:
        raise MalformedInput(f"header declares {expected} vertices, found {len(labels)}", max(last_line, 1), 1)

    index = {label: i for i, label in enumerate(labels)}
    rotation = []
    for row in rows:
        indexed = []
        for lineno, col, word in row:
            if word not in index:
                raise MalformedInput(f"neighbour {word!r} is not a declared label", lineno, col)
            indexed.append(index[word])
        rotation.append(indexed)
    return PlaneGraph(labels, rotation)


def pg1_metadata(text: str) -> Dict[str, str]:
    """``# key: value`` comment lines, in file order."""
    meta = {}
    for line in text.splitlines():
        m = _META.match(line)
        if m:
            meta[m.group(1)] = m.group(2)
    return meta


def dumps_pg1(graph: PlaneGraph, metadata: Optional[Mapping[str, object]] = None) -> str:
    """Canonical pg1 text; metadata becomes leading ``# key: value`` lines."""
    lines = [f"# {key}: {value}" for key, value in (metadata or {}).items()]
    lines.append(f"pg1 {graph.vertex_count}")
    for v, label in enumerate(graph.labels):
        nbrs = " ".join(graph.labels[w] for w in graph.rotation[v])
        lines.append(f"{label}: {nbrs}".rstrip())
    return "\n".join(lines) + "\n"


def load_pg1(path: Union[str, Path]) -> PlaneGraph:
    return loads_pg1(Path(path).read_text(encoding="utf-8"))


def save_pg1(graph: PlaneGraph, path: Union[str, Path], metadata: Optional[Mapping[str, object]] = None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_pg1(graph, metadata), encoding="utf-8")
    logger.debug(f"wrote {graph!r} to {path}")
