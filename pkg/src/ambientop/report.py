"""Machine-readable verification reports."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .ratfunc import is_symbolic, render


def jsonable(value: Any) -> Any:
    """Map exact values onto JSON-native types; rationals become ``"p/q"``."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if is_symbolic(value):
        return render(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, float):
        raise TypeError("floating-point values are not allowed in reports")
    return render(value)


@dataclass
class Report:
    suite: str
    params: dict = field(default_factory=dict)
    status: str = "pass"
    witnesses: list = field(default_factory=list)
    timing_ms: int = 0
    checks: int = 0
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        self.params = jsonable(self.params)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def check(self, ok: bool, input: Any, expected: Any, actual: Any) -> bool:
        """Count one identity; record a witness when it fails."""
        self.checks += 1
        if not ok:
            self.witnesses.append(
                {"input": jsonable(input), "expected": jsonable(expected), "actual": jsonable(actual)}
            )
            if self.status == "pass":
                self.status = "fail"
        return ok

    def absorb(self, other: Report) -> None:
        """Fold a sub-report's checks and witnesses into this one."""
        self.checks += other.checks
        self.witnesses.extend(other.witnesses)
        if other.status == "error":
            self.status = "error"
        elif other.status == "fail" and self.status == "pass":
            self.status = "fail"

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "suite": self.suite,
            "params": self.params,
            "status": self.status,
            "checks": self.checks,
            "witnesses": self.witnesses,
            "data": jsonable(self.data),
        }
        if timing:
            out["timing_ms"] = self.timing_ms
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> Report:
        return cls(
            suite=d["suite"],
            params=d.get("params", {}),
            status=d.get("status", "pass"),
            witnesses=list(d.get("witnesses", [])),
            timing_ms=d.get("timing_ms", 0),
            checks=d.get("checks", 0),
            data=d.get("data", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> Report:
        return cls.from_dict(json.loads(text))


@contextmanager
def timed(report: Report):
    start = time.perf_counter()
    try:
        yield report
    finally:
        report.timing_ms = int(round((time.perf_counter() - start) * 1000))


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())
