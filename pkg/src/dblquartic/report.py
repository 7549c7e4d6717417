"""Structured verification records shared by every suite."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any

REFERENCE = "REFERENCE"  # value quoted from the source being reproduced
TRIVIAL = "TRIVIAL"
DERIVED = "DERIVED"
AXIOM = "AXIOM"
PROVENANCES = (REFERENCE, TRIVIAL, DERIVED, AXIOM)

PASS, FAIL, INCONCLUSIVE, AXIOM_STATUS = "pass", "fail", "inconclusive", "axiom"
STATUSES = (PASS, FAIL, INCONCLUSIVE, AXIOM_STATUS)


def _plain(x: Any) -> Any:
    """Make a value JSON-friendly and deterministic."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


@dataclass
class VerificationReport:
    id: str
    citation: str
    expected: Any
    computed: Any
    provenance: str
    status: str
    millis: int = 0
    detail: Any = None

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status}")

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def to_dict(self) -> dict:
        d = asdict(self)
        d["expected"] = _plain(self.expected)
        d["computed"] = _plain(self.computed)
        d["detail"] = _plain(self.detail)
        if d["detail"] is None:
            del d["detail"]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def check(id: str, citation: str, expected, computed, provenance: str, *, equal=None, detail=None) -> VerificationReport:
    """Build a record whose status is decided by equality (or ``equal``)."""
    ok = (expected == computed) if equal is None else bool(equal)
    return VerificationReport(id, citation, expected, computed, provenance, PASS if ok else FAIL, 0, detail)


def axiom(id: str, citation: str, statement: str) -> VerificationReport:
    return VerificationReport(id, citation, statement, "consumed as recorded fact", AXIOM, AXIOM_STATUS)


@contextmanager
def timed(records: list, enabled: bool):
    """Fill ``millis`` of every record appended inside the block."""
    start = len(records)
    t0 = time.perf_counter()
    yield
    if enabled:
        ms = int((time.perf_counter() - t0) * 1000)
        for r in records[start:]:
            r.millis = ms
