"""
Command-line entry point.

Every subcommand prints one JSON report on standard output (keys sorted, so
equal inputs give byte-identical reports) and logs to standard error.

Usage:
    python main.py check graph.pg
    python main.py analyze graph.pg --face u1 u2 u3 u4 u5 u6 u7 u8 u9 u10 u11
    python main.py reduce graph.pg --op identify_diagonal --face a b c d --diagonal a c
    python main.py color graph.pg
    python main.py extend graph.pg --face a b c --coloring boundary.col
    python main.py verify graph.pg --coloring full.col
    python main.py gen --n 16 --seed 7 --out g.pg
    python main.py corpus --out corpus/ --check
    python main.py audit --count 200 --seed 0 --jobs 4

Exit codes:
    0  success
    2  infeasible, failed verification, or a failed audit / golden check
    3  invalid input (malformed file, precondition violated)
"""
import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from audit.runner import run_audit
from coloring.col1 import dumps_col1, load_col1
from coloring.colorer import ColoringError, ExtensionEngine, Infeasible, qualifies
from coloring.oracle import verify_coloring
from coloring.types import ExtensionTask
from config.settings import settings
from genlab.corpus import curated_corpus, export_corpus, observe
from genlab.generator import ExhaustedAttempts, GenParams, generate, generation_metadata
from graphs.class_guard import check_class
from graphs.errors import MalformedInput, PlaneGraphError
from graphs.pg1 import dumps_pg1, load_pg1, save_pg1
from graphs.plane_core import FacialWalk, PlaneGraph, orient_cycle
from graphs.structure import (
    chords_of,
    claw_centers,
    classify_cycle,
    d_claw_centers,
    enumerate_collapses,
    find_ears,
    is_special_cycle,
    is_special_face,
)
from reductions.surgery import (
    SurgeryError,
    describe_surgery,
    identify_diagonal,
    identify_six_face,
    remove_and_subdivide,
    split_separating,
    subdivide_edge,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 2
EXIT_INVALID = 3

Outcome = Tuple[int, Dict[str, Any], List[Dict[str, Any]]]


class RunReport(BaseModel):
    """What one invocation printed; ``timings`` only when requested."""

    command: str
    input_digest: str
    exit_code: int
    verdicts: Dict[str, Any]
    traces: List[Dict[str, Any]] = []
    timings: Optional[Dict[str, float]] = None


def _digest(*chunks: bytes) -> str:
    h = hashlib.sha256()
    for chunk in chunks:
        h.update(chunk)
    return h.hexdigest()


def _input_digest(args: argparse.Namespace) -> str:
    paths = [getattr(args, name, None) for name in ("graph", "coloring")]
    files = [Path(p) for p in paths if p]
    if files:
        return _digest(*(f.read_bytes() for f in files if f.exists()))
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("handler", "timings")}
    return _digest(json.dumps(params, sort_keys=True, default=str).encode())


def _face(graph: PlaneGraph, labels: Sequence[str]) -> FacialWalk:
    return graph.find_face(graph.indices_of(labels))


# -- subcommands -------------------------------------------------------------


def cmd_check(args) -> Outcome:
    graph = load_pg1(args.graph)
    return EXIT_OK, check_class(graph).to_json(graph), []


def cmd_analyze(args) -> Outcome:
    graph = load_pg1(args.graph)
    face = _face(graph, args.face)
    g = graph.with_outer(face)
    verdicts: Dict[str, Any] = {
        "face": g.describe(face.walk),
        "degree": face.degree,
        "is_cycle": face.is_cycle,
        "qualifies": qualifies(g, face),
    }
    if face.is_cycle:
        verdicts["chords"] = [g.describe(e) for e in chords_of(g, face.walk)]
        verdicts["claw_centers"] = g.describe(claw_centers(g, face))
        verdicts["d_claw_centers"] = [g.describe(e) for e in d_claw_centers(g, face)]
    if face.is_cycle and face.degree == 11:
        verdicts["ears"] = [
            {"span": g.describe(ear.span), "apex": g.labels[ear.apex]} for ear in find_ears(g, face)
        ]
        verdicts["collapse_states"] = len(enumerate_collapses(g, face))
        verdicts["special_face"] = is_special_face(g, face).to_json()
    if args.cycle:
        cycle = orient_cycle(g, g.indices_of(args.cycle))
        kind = classify_cycle(g, cycle)
        entry: Dict[str, Any] = {
            "cycle": g.describe(cycle.vertices),
            "kind": kind.kind.value,
            "interior": sorted(g.describe(kind.interior)),
            "exterior": sorted(g.describe(kind.exterior)),
        }
        if len(cycle) == 11:
            entry["special_cycle"] = is_special_cycle(g, cycle)[1].to_json()
        verdicts["cycle"] = entry
    return EXIT_OK, verdicts, []


def cmd_reduce(args) -> Outcome:
    graph = load_pg1(args.graph)
    face = _face(graph, args.face) if args.face else None
    if face is not None:
        graph = graph.with_outer(face)
    ix = graph.indices_of
    op = args.op
    if op == "subdivide_edge":
        surgery = subdivide_edge(graph, tuple(ix(args.edge)), args.k, face)
    elif op == "remove_and_subdivide":
        surgery = remove_and_subdivide(graph, tuple(ix(args.edge)), graph.index_of(args.w), face)
    elif op == "identify_diagonal":
        surgery = identify_diagonal(graph, _face(graph, args.target), tuple(ix(args.diagonal)), face)
    elif op == "identify_six_face":
        surgery = identify_six_face(graph, _face(graph, args.target), graph.index_of(args.anchor), face)
    else:
        surgery = split_separating(graph, orient_cycle(graph, ix(args.cycle)), args.padding, face)
    return EXIT_OK, describe_surgery(graph, surgery), []


def cmd_color(args) -> Outcome:
    graph = load_pg1(args.graph)
    colouring, trace = ExtensionEngine().color(graph)
    verdicts = {"coloring": colouring.to_labels(graph), "col1": dumps_col1(graph, colouring)}
    return EXIT_OK, verdicts, [trace.summary()]


def cmd_extend(args) -> Outcome:
    graph = load_pg1(args.graph)
    face = _face(graph, args.face)
    boundary = load_col1(args.coloring, graph)
    colouring, trace = ExtensionEngine().extend(ExtensionTask(graph, face, boundary))
    verdicts = {
        "coloring": colouring.to_labels(graph),
        "col1": dumps_col1(graph, colouring),
        "verified": verify_coloring(graph, colouring),
    }
    return EXIT_OK, verdicts, [trace.summary()]


def cmd_verify(args) -> Outcome:
    graph = load_pg1(args.graph)
    colouring = load_col1(args.coloring, graph)
    uncoloured = [v for v in range(graph.vertex_count) if v not in colouring]
    conflicts = colouring.conflicts(graph)
    valid = not uncoloured and not conflicts
    verdicts = {
        "valid": valid,
        "uncolored": graph.describe(uncoloured),
        "conflicts": [graph.describe(e) for e in conflicts],
    }
    return (EXIT_OK if valid else EXIT_FAILED), verdicts, []


def cmd_gen(args) -> Outcome:
    params = GenParams(
        target_vertex_count=args.n,
        seed=args.seed,
        require_triangle=not args.no_triangle,
        require_four_or_six_cycle=not args.no_four_six,
        max_attempts=args.max_attempts or settings.GEN_MAX_ATTEMPTS,
    )
    graph = generate(params)
    metadata = generation_metadata(params)
    if args.out:
        save_pg1(graph, args.out, metadata)
    verdicts = {"params": params.model_dump(), "pg1": dumps_pg1(graph, metadata), "digest": graph.digest()}
    return EXIT_OK, verdicts, []


def cmd_corpus(args) -> Outcome:
    entries = export_corpus(args.out) if args.out else [i.entry() for i in curated_corpus().values()]
    verdicts: Dict[str, Any] = {"instances": [e.model_dump() for e in entries]}
    code = EXIT_OK
    if args.check:
        mismatches = {}
        for name, instance in curated_corpus().items():
            seen = observe(instance)
            if seen != dict(instance.expected):
                mismatches[name] = seen
        verdicts["mismatches"] = mismatches
        code = EXIT_FAILED if mismatches else EXIT_OK
    return code, verdicts, []


def cmd_audit(args) -> Outcome:
    report, table = run_audit(args.count, args.min_n, args.max_n, args.seed, args.jobs)
    print(table.to_string(), file=sys.stderr)
    verdicts = report.model_dump(exclude={"rows": {"__all__": {"pg1"}}})
    return (EXIT_OK if report.passed else EXIT_FAILED), verdicts, []


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plane3col", description="3-colouring tools for plane graphs")
    parser.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="class membership with witnesses")
    p.add_argument("graph")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("analyze", help="structure around a face")
    p.add_argument("graph")
    p.add_argument("--face", nargs="+", required=True, help="boundary labels in walk order")
    p.add_argument("--cycle", nargs="+", help="also classify this cycle")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("reduce", help="apply one surgery")
    p.add_argument("graph")
    p.add_argument(
        "--op",
        required=True,
        choices=["subdivide_edge", "remove_and_subdivide", "identify_diagonal", "identify_six_face", "split_separating"],
    )
    p.add_argument("--face", nargs="+", help="designated face to track")
    p.add_argument("--edge", nargs=2, help="edge to subdivide, or the chord for remove_and_subdivide")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--w", help="vertex removed by remove_and_subdivide")
    p.add_argument("--target", nargs="+", help="4-face or 6-face to identify across")
    p.add_argument("--diagonal", nargs=2)
    p.add_argument("--anchor")
    p.add_argument("--cycle", nargs="+")
    p.add_argument("--padding", type=int, choices=[0, 3, 5], default=0)
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("color", help="3-colour a whole class graph")
    p.add_argument("graph")
    p.set_defaults(handler=cmd_color)

    p = sub.add_parser("extend", help="extend a boundary colouring of a face")
    p.add_argument("graph")
    p.add_argument("--face", nargs="+", required=True)
    p.add_argument("--coloring", required=True)
    p.set_defaults(handler=cmd_extend)

    p = sub.add_parser("verify", help="check a colouring is total and proper")
    p.add_argument("graph")
    p.add_argument("--coloring", required=True)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("gen", help="generate a random class graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-triangle", action="store_true")
    p.add_argument("--no-four-six", action="store_true")
    p.add_argument("--max-attempts", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("corpus", help="list or export the curated corpus")
    p.add_argument("--out")
    p.add_argument("--check", action="store_true", help="recompute expected outcomes")
    p.set_defaults(handler=cmd_corpus)

    p = sub.add_parser("audit", help="property suite over generated graphs")
    p.add_argument("--count", type=int, default=settings.AUDIT_COUNT)
    p.add_argument("--min-n", type=int, default=settings.AUDIT_MIN_N)
    p.add_argument("--max-n", type=int, default=settings.AUDIT_MAX_N)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=settings.AUDIT_JOBS)
    p.set_defaults(handler=cmd_audit)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run the subcommand, print the report; return the exit code."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        digest = _input_digest(args)
    except OSError as e:
        digest = ""
        logger.error(f"cannot read input: {e}")
    try:
        code, verdicts, traces = args.handler(args)
    except MalformedInput as e:
        logger.error(f"malformed input: {e}")
        code, verdicts, traces = EXIT_INVALID, {"error": str(e), "line": e.line, "column": e.column}, []
    except Infeasible as e:
        logger.error(f"infeasible: {e}")
        code, verdicts, traces = EXIT_FAILED, {"error": str(e), "infeasible": True}, []
    except ExhaustedAttempts as e:
        logger.error(str(e))
        code, verdicts, traces = EXIT_FAILED, {"error": str(e), "attempts": e.attempts, "rate": e.rate}, []
    except (ColoringError, SurgeryError, PlaneGraphError, ValueError, OSError) as e:
        logger.error(f"invalid input: {e}")
        code, verdicts, traces = EXIT_INVALID, {"error": str(e), "type": type(e).__name__}, []

    report = RunReport(
        command=args.command,
        input_digest=digest,
        exit_code=code,
        verdicts=verdicts,
        traces=traces,
        timings={"total_seconds": round(time.perf_counter() - start, 6)} if args.timings else None,
    )
    payload = report.model_dump()
    if payload["timings"] is None:
        del payload["timings"]
    print(json.dumps(payload, sort_keys=True, indent=2, default=str))
    return code


def main():
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    sys.exit(run())


if __name__ == "__main__":
    main()
