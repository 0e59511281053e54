"""
Unit tests for the counterexample ledger
"""
import json

import pytest

from graphs.pg1 import loads_pg1

pytestmark = pytest.mark.unit


class TestCandidateLedger:
    """Recording and reloading candidates"""

    def test_record_appends_json_line(self, ledger, k4):
        entry = ledger.record("infeasible_extension", k4, {"face": ["a", "b", "c"]})
        lines = ledger.path.read_text().splitlines()
        assert len(lines) == 1
        assert json.loads(lines[0]) == entry
        assert entry["digest"] == k4.digest()
        assert loads_pg1(entry["pg1"]) == k4

    def test_history_is_bounded(self, ledger, triangle):
        for i in range(8):
            ledger.record("audit_failure", triangle, {"seed": i})
        assert len(ledger.entries) == 5
        assert ledger.recent(2)[-1]["detail"] == {"seed": 7}
        assert len(ledger.load()) == 8

    def test_clear_keeps_file(self, ledger, triangle):
        ledger.record("audit_failure", triangle)
        ledger.clear()
        assert ledger.entries == []
        assert len(ledger.load()) == 1

    def test_unreadable_lines_skipped(self, ledger, triangle):
        ledger.record("audit_failure", triangle)
        with ledger.path.open("a") as fh:
            fh.write("{not json\n")
        assert len(ledger.load()) == 1

    def test_missing_file_loads_empty(self, ledger):
        assert ledger.load() == []

    def test_write_failure_is_logged(self, tmp_path, triangle, caplog):
        from ledger.candidate_ledger import CandidateLedger

        blocker = tmp_path / "file"
        blocker.write_text("x")
        broken = CandidateLedger(path=str(blocker / "sub" / "c.jsonl"))
        entry = broken.record("audit_failure", triangle)
        assert entry["kind"] == "audit_failure"
        assert "Ledger write error" in caplog.text
