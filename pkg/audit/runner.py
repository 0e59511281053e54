"""
Audit runner: generate a seeded batch, run the property suite on each case,
summarise with pandas.

Only graphs with a qualifying face count toward the requested number; cases
are drawn in chunks until that many exist or the plan runs out. Cases whose
generation exhausted its attempts are reported separately and never pass.

Cases are independent; with ``jobs > 1`` they fan out over a process pool.
``map`` keeps the input order, so the report does not depend on ``jobs``.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel

from audit.properties import AuditRow, audit_graph
from config.settings import settings
from genlab.generator import ExhaustedAttempts, GenParams, generate
from graphs.pg1 import dumps_pg1, loads_pg1
from ledger.candidate_ledger import CandidateLedger

logger = logging.getLogger(__name__)

Case = Tuple[int, int]

MAX_DRAW_FACTOR = 4

SUMMARY_COLUMNS = [
    "in_class",
    "euler_ok",
    "detectors_ok",
    "colored_ok",
    "trace_monotone",
    "extension_ok",
    "oracle_agrees",
    "surgery_equivalent",
    "pullback_ok",
    "class_preserved",
    "reduction_complete",
]


class AuditReport(BaseModel):
    """Every row plus aggregate pass rates."""

    seed: int
    count: int
    min_n: int
    max_n: int
    rows: List[AuditRow]
    summary: Dict[str, object]
    passed: bool


def plan_cases(count: int, min_n: int, max_n: int, seed: int) -> List[Case]:
    """(case seed, vertex count) per case, drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    sizes = rng.integers(min_n, max_n, endpoint=True, size=count)
    seeds = rng.integers(0, 2**63, size=count)
    return [(int(s), int(n)) for s, n in zip(seeds, sizes)]


def run_case(case: Case) -> AuditRow:
    """Generate one graph (with a triangle and a 4- or 6-cycle) and audit it; never raises."""
    seed, n = case
    try:
        graph = generate(GenParams(target_vertex_count=n, seed=seed))
    except ExhaustedAttempts as e:
        logger.warning(f"case seed={seed} n={n}: {e}")
        return AuditRow(seed=seed, n=n, error=f"exhausted: {e}")
    try:
        row = audit_graph(graph, seed)
    except Exception as e:
        logger.error(f"case seed={seed} n={n} crashed: {e}")
        return AuditRow(seed=seed, n=n, error=f"crashed: {e}", pg1=dumps_pg1(graph))
    if not row.passed:
        row.pg1 = dumps_pg1(graph)
    return row


def summarize(rows: List[AuditRow]) -> pd.DataFrame:
    """Per property: applicable cases, passes, failures."""
    frame = pd.DataFrame([row.model_dump(exclude={"surgery_kinds", "pg1"}) for row in rows])
    records = []
    for column in SUMMARY_COLUMNS:
        values = frame[column].dropna() if column in frame else pd.Series(dtype=bool)
        records.append(
            {
                "property": column,
                "applicable": int(len(values)),
                "passed": int(values.astype(bool).sum()),
                "failed": int((~values.astype(bool)).sum()),
            }
        )
    return pd.DataFrame(records).set_index("property")


def _exhausted(row: AuditRow) -> bool:
    return (row.error or "").startswith("exhausted")


def _qualified(row: AuditRow) -> bool:
    return row.error is None and row.extension_face_degree is not None


def _run_cases(cases: List[Case], jobs: int) -> List[AuditRow]:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_case, cases))
    return [run_case(case) for case in cases]


def _summary_dict(rows: List[AuditRow], table: pd.DataFrame) -> Dict[str, object]:
    kinds: Dict[str, int] = {}
    for row in rows:
        for kind, count in row.surgery_kinds.items():
            kinds[kind] = kinds.get(kind, 0) + count
    identifications = sum(r.identifications for r in rows)
    return {
        "cases": len(rows),
        "qualified": sum(1 for r in rows if _qualified(r)),
        "exhausted": sum(1 for r in rows if _exhausted(r)),
        "errors": sum(1 for r in rows if r.error is not None and not _exhausted(r)),
        "failures": sum(1 for r in rows if not r.passed and not _exhausted(r)),
        "properties": {prop: {k: int(v) for k, v in rec.items()} for prop, rec in table.to_dict("index").items()},
        "surgeries_by_kind": dict(sorted(kinds.items())),
        "identifications": identifications,
        "identifications_in_class": sum(r.identifications_in_class for r in rows),
        "max_trace_depth": max((r.max_trace_depth for r in rows), default=0),
    }


def run_audit(
    count: Optional[int] = None,
    min_n: Optional[int] = None,
    max_n: Optional[int] = None,
    seed: int = 0,
    jobs: Optional[int] = None,
    ledger: Optional[CandidateLedger] = None,
) -> Tuple[AuditReport, pd.DataFrame]:
    """Run the property suite on ``count`` graphs with a qualifying face.

    At most ``count * MAX_DRAW_FACTOR`` cases are drawn; the report fails when
    fewer than ``count`` of them qualify. Failing cases go to the
    counterexample ledger.
    """
    count = settings.AUDIT_COUNT if count is None else count
    min_n = settings.AUDIT_MIN_N if min_n is None else min_n
    max_n = settings.AUDIT_MAX_N if max_n is None else max_n
    jobs = settings.AUDIT_JOBS if jobs is None else jobs

    plan = plan_cases(count * MAX_DRAW_FACTOR, min_n, max_n, seed)
    logger.info(f"auditing {count} graphs with {min_n} <= n <= {max_n} (seed {seed}, jobs {jobs})")
    rows: List[AuditRow] = []
    qualified = 0
    while qualified < count and len(rows) < len(plan):
        chunk = plan[len(rows): len(rows) + count - qualified]
        fresh = _run_cases(chunk, jobs)
        rows.extend(fresh)
        qualified += sum(1 for r in fresh if _qualified(r))
    if qualified < count:
        logger.warning(f"only {qualified} of {len(rows)} cases had a qualifying face (wanted {count})")

    failing = [r for r in rows if not r.passed and r.pg1 is not None]
    if failing:
        ledger = ledger or CandidateLedger()
        for row in failing:
            ledger.record("audit_failure", loads_pg1(row.pg1), {"seed": row.seed, "n": row.n, "error": row.error})

    table = summarize(rows)
    report = AuditReport(
        seed=seed,
        count=count,
        min_n=min_n,
        max_n=max_n,
        rows=rows,
        summary=_summary_dict(rows, table),
        passed=qualified >= count and all(r.passed for r in rows if not _exhausted(r)),
    )
    return report, table
