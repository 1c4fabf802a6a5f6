"""Verdict records produced by every verification pass."""
from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

MAX_WITNESSES = 25

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


class InvariantViolation(RuntimeError):
    """An internal consistency guarantee was broken (implementation bug)."""


def fmt(value: Any) -> Any:
    """Serialize exact values as strings; tuples become lists."""
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return str(Fraction(value))
    if isinstance(value, (tuple, list)):
        return [fmt(v) for v in value]
    if isinstance(value, dict):
        return {str(k): fmt(v) for k, v in value.items()}
    return value


def plain(value: Any) -> Any:
    """JSON-friendly copy of an index structure; integers stay integers."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (tuple, list)):
        return [plain(v) for v in value]
    return value


@dataclass
class Certificate:
    check: str
    instance: Any = None
    verdict: str | None = None
    witnesses: list[dict] = field(default_factory=list)
    wall_time_ms: float = 0.0
    stats: dict[str, int] = field(default_factory=dict)
    failures: int = 0
    reason: str = ""

    def fail(self, index=None, expected=None, actual=None, **detail) -> None:
        self.failures += 1
        if len(self.witnesses) >= MAX_WITNESSES:
            return
        rec: dict[str, Any] = {}
        if index is not None:
            rec["index"] = plain(index)
        if expected is not None:
            rec["expected"] = fmt(expected)
        if actual is not None:
            rec["actual"] = fmt(actual)
        for key, val in detail.items():
            rec[key] = plain(val)
        self.witnesses.append(rec)

    def count(self, key: str, by: int = 1) -> None:
        self.stats[key] = self.stats.get(key, 0) + by

    def expect_equal(self, index, expected, actual, **detail) -> bool:
        if expected == actual:
            return True
        self.fail(index=index, expected=expected, actual=actual, **detail)
        return False

    def merge(self, other: "Certificate", prefix: str = "") -> None:
        for w in other.witnesses:
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append({"from": prefix or other.check, **w})
        self.failures += other.failures
        for key, val in other.stats.items():
            self.count(f"{prefix}.{key}" if prefix else key, val)

    def close(self) -> "Certificate":
        if self.verdict != SKIPPED:
            self.verdict = FAIL if self.failures else PASS
        return self

    def skip(self, reason: str) -> "Certificate":
        self.verdict = SKIPPED
        self.stats = {}
        self.witnesses = []
        self.failures = 0
        self.reason = reason
        return self

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self, timings: bool = False) -> dict:
        inst = self.instance
        out: dict[str, Any] = {
            "check": self.check,
            "instance": None if inst is None else {"r": inst.r, "k": inst.k, "n": inst.n},
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "failures": self.failures,
            "stats": dict(sorted(self.stats.items())),
        }
        if self.verdict == SKIPPED:
            out["reason"] = self.reason
        if timings:
            out["wall_time_ms"] = round(self.wall_time_ms, 3)
        return out

    def __str__(self) -> str:
        inst = self.instance
        tag = "" if inst is None else f" J_{inst.r}({inst.k},{inst.n})"
        return f"[{(self.verdict or '?').upper()}] {self.check}{tag}"


@contextmanager
def timed(cert: Certificate):
    start = time.perf_counter()
    try:
        yield cert
    finally:
        cert.wall_time_ms += (time.perf_counter() - start) * 1000.0
        cert.close()
