import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from config.settings import settings
from graphs.pg1 import dumps_pg1
from graphs.plane_core import PlaneGraph

logger = logging.getLogger(__name__)


class CandidateLedger:
    """Persisted record of instances that contradict the extension property.

    Keeps a bounded in-memory history and appends every entry as one JSON
    line to ``path``. A failing write is logged, never raised.
    """

    def __init__(self, path: Optional[str] = None, max_history: Optional[int] = None):
        self.path = Path(path or settings.CANDIDATES_PATH)
        self.max_history = max_history or settings.LEDGER_MAX_HISTORY
        self.entries: List[Dict[str, Any]] = []

    def record(self, kind: str, graph: PlaneGraph, detail: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Add an entry (``infeasible_extension`` or ``audit_failure``)"""
        entry = {
            "kind": kind,
            "digest": graph.digest(),
            "pg1": dumps_pg1(graph),
            "detail": detail or {},
        }
        self.entries.append(entry)
        if len(self.entries) > self.max_history:
            self.entries = self.entries[-self.max_history:]
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")
            logger.error(f"Counterexample candidate ({kind}) written to {self.path}")
        except Exception as e:
            logger.error(f"Ledger write error: {e}")
        return entry

    def recent(self, limit: Optional[int] = None) -> List[Dict[str, Any]]:
        return self.entries[-(limit or self.max_history):]

    def load(self) -> List[Dict[str, Any]]:
        """Every entry persisted at ``path``; unreadable lines are skipped."""
        if not self.path.exists():
            return []
        entries = []
        try:
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    try:
                        entries.append(json.loads(line))
                    except json.JSONDecodeError as e:
                        logger.warning(f"Skipping unreadable ledger line: {e}")
        except Exception as e:
            logger.error(f"Ledger read error: {e}")
        return entries

    def clear(self):
        """Clear in-memory history (the file is kept)"""
        self.entries.clear()
