"""Value types shared by the surgeries, the extension engine and the oracle."""
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

from graphs.plane_core import FacialWalk, PlaneGraph

COLORS = (0, 1, 2)


class Coloring(Mapping[int, int]):
    """Immutable partial map vertex -> colour in {0, 1, 2}."""

    __slots__ = ("_assignment",)

    def __init__(self, assignment: Optional[Mapping[int, int]] = None):
        data = dict(assignment or {})
        for v, c in data.items():
            if c not in COLORS:
                raise ValueError(f"colour {c!r} of vertex {v} is not one of {COLORS}")
        self._assignment = data

    def __getitem__(self, v: int) -> int:
        return self._assignment[v]

    def __iter__(self) -> Iterator[int]:
        return iter(self._assignment)

    def __len__(self) -> int:
        return len(self._assignment)

    def __hash__(self):
        return hash(frozenset(self._assignment.items()))

    def __repr__(self):
        return f"Coloring({dict(sorted(self._assignment.items()))})"

    def extended(self, updates: Mapping[int, int]) -> "Coloring":
        merged = dict(self._assignment)
        merged.update(updates)
        return Coloring(merged)

    def restricted(self, vertices: Iterable[int]) -> "Coloring":
        keep = set(vertices)
        return Coloring({v: c for v, c in self._assignment.items() if v in keep})

    def conflicts(self, graph: PlaneGraph) -> Tuple[Tuple[int, int], ...]:
        """Edges with both ends coloured alike."""
        return tuple(
            (u, v)
            for u, v in graph.edges()
            if u in self._assignment and v in self._assignment and self._assignment[u] == self._assignment[v]
        )

    def is_proper(self, graph: PlaneGraph) -> bool:
        return all(0 <= v < graph.vertex_count for v in self._assignment) and not self.conflicts(graph)

    def is_total(self, graph: PlaneGraph) -> bool:
        return all(v in self._assignment for v in range(graph.vertex_count))

    def to_labels(self, graph: PlaneGraph) -> Dict[str, int]:
        return {graph.labels[v]: c for v, c in sorted(self._assignment.items())}

    @classmethod
    def from_labels(cls, graph: PlaneGraph, mapping: Mapping[str, int]) -> "Coloring":
        return cls({graph.index_of(label): int(c) for label, c in mapping.items()})


@dataclass(frozen=True)
class ExtensionTask:
    """Extend ``boundary_coloring`` (total and proper on the face) to ``graph``."""

    graph: PlaneGraph
    face: FacialWalk
    boundary_coloring: Coloring


@dataclass(frozen=True)
class TraceStep:
    """One applied surgery; ``labels`` names its parameters in the graph it was applied to."""

    kind: str
    labels: Tuple[str, ...]
    sigma_before: int
    sigma_after: Tuple[int, ...]


@dataclass(frozen=True)
class Trace:
    """Audit trail of an extension.

    ``steps`` ends in ``terminal``: ``direct`` (nothing left to colour),
    ``fallback`` (exhaustive search), ``stalled`` (exhaustive search although
    the graph still had a 4- or 6-cycle) or ``split`` (the last step cut the graph
    into the parts recorded in ``branches``).
    """

    steps: Tuple[TraceStep, ...] = ()
    terminal: str = "direct"
    branches: Tuple["Trace", ...] = field(default=())

    def prepend(self, step: TraceStep) -> "Trace":
        return Trace(steps=(step,) + self.steps, terminal=self.terminal, branches=self.branches)

    def depth(self) -> int:
        """Steps on the longest root-to-leaf path."""
        return len(self.steps) + max((b.depth() for b in self.branches), default=0)

    def stalled(self) -> bool:
        return self.terminal == "stalled" or any(b.stalled() for b in self.branches)

    def is_monotone(self, sigma_start: int) -> bool:
        """σ strictly decreases along every root-to-leaf path."""
        sigma = sigma_start
        for step in self.steps:
            if step.sigma_before != sigma or any(s >= sigma for s in step.sigma_after):
                return False
            sigma = step.sigma_after[0] if len(step.sigma_after) == 1 else sigma
        if self.terminal == "split":
            last = self.steps[-1] if self.steps else None
            if last is None or len(last.sigma_after) != len(self.branches):
                return False
            return all(b.is_monotone(s) for b, s in zip(self.branches, last.sigma_after))
        return True

    def summary(self) -> dict:
        return {
            "steps": [
                {
                    "kind": s.kind,
                    "on": list(s.labels),
                    "sigma": [s.sigma_before, list(s.sigma_after)],
                }
                for s in self.steps
            ],
            "terminal": self.terminal,
            "branches": [b.summary() for b in self.branches],
        }
