"""Check reports shared by every checker and by the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional

PASS = "pass"
FAIL = "fail"
INDETERMINATE = "indeterminate"
ERROR = "error"


@dataclass
class CheckReport:
    check: str
    status: str
    witness: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)
    millis: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self):
        return self.passed

    def rendered_witness(self) -> Optional[Dict[str, str]]:
        if self.witness is None:
            return None
        return {k: _render(v) for k, v in self.witness.items()}


def _render(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_render(x) for x in v) + "]"
    return str(v)


def ok(check: str, **details) -> CheckReport:
    return CheckReport(check, PASS, None, details)


def fail(check: str, **witness) -> CheckReport:
    return CheckReport(check, FAIL, witness)


def indeterminate(check: str, locus, **witness) -> CheckReport:
    witness = dict(witness)
    witness["locus"] = locus
    return CheckReport(check, INDETERMINATE, witness)


def combine(check: str, reports: Iterable[CheckReport]) -> CheckReport:
    """First failure wins; otherwise the first indeterminate; otherwise pass."""
    reports = list(reports)
    for status in (FAIL, ERROR, INDETERMINATE):
        for r in reports:
            if r.status == status:
                w = dict(r.witness or {})
                w.setdefault("part", r.check)
                return CheckReport(check, status, w, {"parts": [p.check for p in reports]})
    return CheckReport(check, PASS, None, {"parts": [p.check for p in reports]})
