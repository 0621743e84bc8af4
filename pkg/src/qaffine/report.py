"""Structured pass/fail outcomes shared by every verifier."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any


@dataclass
class VerificationReport:
    check: str
    algebra: str
    status: str = "pass"
    lambda_labels: list | None = None
    depth: int | None = None
    counterexample: dict | None = None
    failures: list[dict] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
    elapsed_ms: float | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def from_failures(cls, check: str, algebra: str, failures: list[dict], **kw) -> "VerificationReport":
        return cls(
            check=check,
            algebra=algebra,
            status="fail" if failures else "pass",
            counterexample=failures[0] if failures else None,
            failures=list(failures),
            **kw,
        )

    def add_failure(self, item: dict) -> None:
        self.failures.append(item)
        if self.counterexample is None:
            self.counterexample = item
        self.status = "fail"

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "check": self.check,
            "algebra": self.algebra,
            "lambda_labels": [str(x) for x in self.lambda_labels] if self.lambda_labels is not None else None,
            "depth": self.depth,
            "status": self.status,
            "counterexample": self.counterexample,
            "elapsed_ms": round(self.elapsed_ms, 3) if (timing and self.elapsed_ms is not None) else None,
        }
        if self.details:
            out["details"] = self.details
        if len(self.failures) > 1:
            out["failure_count"] = len(self.failures)
        return out

    def summary(self) -> str:
        head = f"[{self.status.upper()}] {self.check} on {self.algebra}"
        if self.lambda_labels is not None:
            head += f" labels={','.join(str(x) for x in self.lambda_labels)}"
        if self.depth is not None:
            head += f" depth={self.depth}"
        if self.counterexample:
            head += f" first failure: {self.counterexample}"
        return head


@contextmanager
def timed(report_holder: list):
    """Fill ``elapsed_ms`` on the report appended to ``report_holder``."""
    t0 = time.perf_counter()
    yield
    for r in report_holder:
        r.elapsed_ms = (time.perf_counter() - t0) * 1000.0
