"""Verification reports: per-check status with wall times, assembled in a fixed order."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    exponent: tuple | None
    status: str          # "pass" | "fail" | "error"
    ms: float = 0.0
    detail: str = ""

    def to_json(self, timings: bool = True) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.exponent is not None:
            out["exponent"] = list(self.exponent)
        if self.detail:
            out["detail"] = self.detail
        if timings:
            out["ms"] = round(self.ms, 3)
        return out


@dataclass
class Report:
    title: str
    config: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    sign_vector: list | None = None
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if c.status != "pass"]

    def first_failure(self) -> Check | None:
        bad = self.failures()
        return bad[0] if bad else None

    def add(self, name, exponent, ok, ms=0.0, detail="") -> Check:
        c = Check(name, tuple(exponent) if exponent is not None else None,
                  "pass" if ok else "fail", ms, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.exponent, c.status, c.ms, c.detail))

    def to_json(self, timings: bool = True) -> dict:
        out = {
            "title": self.title,
            "config": self.config,
            "passed": self.passed,
            "checks": [c.to_json(timings) for c in self.checks],
        }
        if self.sign_vector is not None:
            out["sign_vector"] = self.sign_vector
        if self.data:
            out["data"] = self.data
        return out


@contextmanager
def stopwatch():
    """Yields a one-element list that receives the elapsed milliseconds."""
    box = [0.0]
    t = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = (time.perf_counter() - t) * 1000.0
