"""Tri-state verdicts and verification reports."""

from __future__ import annotations

import enum
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any


class Verdict(str, enum.Enum):
    PROVEN = "Proven"
    INCONCLUSIVE = "Inconclusive"
    REFUTED = "Refuted"

    def __str__(self):
        return self.value

    @staticmethod
    def combine(verdicts) -> "Verdict":
        """Refuted dominates Inconclusive, which dominates Proven."""
        verdicts = list(verdicts)
        if any(v is Verdict.REFUTED for v in verdicts):
            return Verdict.REFUTED
        if any(v is Verdict.INCONCLUSIVE for v in verdicts):
            return Verdict.INCONCLUSIVE
        return Verdict.PROVEN


@dataclass
class Check:
    """One named check.

    ``identity`` optionally keeps the unreduced expression whose vanishing
    was certified, as ``(expression, presentation)``, so the classical
    oracle can re-evaluate it independently of the rewriting engine.
    Summary checks hold a list of such pairs.
    """

    name: str
    target: str
    verdict: Verdict
    witness: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    identity: Any = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "target": self.target,
            "verdict": self.verdict.value,
            "witness": self.witness,
        }

    def identities(self) -> list:
        out = []
        stack = [self.identity]
        while stack:
            item = stack.pop()
            if item is None:
                continue
            if isinstance(item, list):
                stack.extend(reversed(item))
            else:
                out.append(item)
        return out


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.checks.extend(other.checks)
        return self

    @property
    def verdict(self) -> Verdict:
        return Verdict.combine(c.verdict for c in self.checks)

    @property
    def all_proven(self) -> bool:
        return bool(self.checks) and self.verdict is Verdict.PROVEN

    def summary(self) -> dict:
        counts = {v.value: 0 for v in Verdict}
        for c in self.checks:
            counts[c.verdict.value] += 1
        counts["total"] = len(self.checks)
        return counts

    def by_name(self, prefix: str) -> list[Check]:
        return [c for c in self.checks if c.name == prefix or c.name.startswith(prefix + ".")]

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)


@contextmanager
def timed():
    """Yield a one-element list that receives the elapsed milliseconds."""
    box = [0.0]
    start = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = (time.perf_counter() - start) * 1000.0
