"""Machine-readable verification reports shared by all checks.

A report is a list of named checks; failures always carry a witness.  The
JSON form is deterministic given the inputs (checks sorted by id, no
environment-dependent fields except the separate timing entry).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional

from . import SCHEMA_VERSION, __version__


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    passed: bool
    residual: Optional[str] = None
    witness: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "id": self.check_id,
            "pass": self.passed,
            "residual": self.residual,
            "witness": self.witness,
        }


@dataclass
class Report:
    title: str
    checks: List[CheckResult] = field(default_factory=list)
    timing_ms: Optional[float] = None

    def add(self, check_id: str, passed: bool, residual=None, witness=None):
        if not passed and witness is None:
            witness = residual if residual is not None else "check failed"
        self.checks.append(CheckResult(
            check_id, bool(passed),
            None if residual is None else str(residual),
            None if witness is None else str(witness)))

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self, include_timing: bool = True) -> dict:
        out = {
            "schema": SCHEMA_VERSION + "/report",
            "tool_version": __version__,
            "title": self.title,
            "pass": self.passed,
            "checks": [c.as_dict() for c in sorted(self.checks,
                                                   key=lambda c: c.check_id)],
        }
        if include_timing:
            out["timing_ms"] = self.timing_ms
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.as_dict(include_timing), indent=2, sort_keys=True)

    def __str__(self):
        lines = [f"[{'PASS' if c.passed else 'FAIL'}] {c.check_id}"
                 + (f" (witness: {c.witness})" if not c.passed else "")
                 for c in sorted(self.checks, key=lambda c: c.check_id)]
        return "\n".join(lines)
