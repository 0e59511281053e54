"""col1 colouring files: one ``<label> <0|1|2>`` pair per line, ``#`` comments allowed."""
import re
from pathlib import Path
from typing import Union

from coloring.types import Coloring
from graphs.errors import MalformedInput
from graphs.plane_core import PlaneGraph

_TOKEN = re.compile(r"\S+")


def loads_col1(text: str, graph: PlaneGraph) -> Coloring:
    """Parse a colouring of ``graph``; labels must be declared there.

    Raises:
        MalformedInput
    """
    assignment = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        tokens = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(body)]
        if not tokens:
            continue
        if len(tokens) != 2:
            col = tokens[2][0] if len(tokens) > 2 else tokens[0][0] + len(tokens[0][1])
            raise MalformedInput("expected '<label> <colour>'", lineno, col)
        (lcol, label), (ccol, colour) = tokens
        try:
            v = graph.index_of(label)
        except ValueError:
            raise MalformedInput(f"unknown vertex label {label!r}", lineno, lcol)
        if v in assignment:
            raise MalformedInput(f"vertex {label!r} coloured twice", lineno, lcol)
        if colour not in ("0", "1", "2"):
            raise MalformedInput(f"colour {colour!r} is not 0, 1 or 2", lineno, ccol)
        assignment[v] = int(colour)
    return Coloring(assignment)


def dumps_col1(graph: PlaneGraph, coloring: Coloring) -> str:
    return "".join(f"{graph.labels[v]} {c}\n" for v, c in sorted(coloring.items()))


def load_col1(path: Union[str, Path], graph: PlaneGraph) -> Coloring:
    return loads_col1(Path(path).read_text(encoding="utf-8"), graph)
