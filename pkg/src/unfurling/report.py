"""Check reports: a flat list of named pass/fail entries with witnesses."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .scalars import Scalar


class PreconditionError(ValueError):
    """An operation was called on input violating its precondition."""

    def __init__(self, message: str, report: "Report | None" = None):
        super().__init__(message)
        self.report = report


@dataclass
class Check:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.name, "pass": self.passed}
        out.update(jsonable(self.details))
        return out


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed

    def add(self, name: str, passed: bool, **details) -> Check:
        c = Check(name, bool(passed), details)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, dict(c.details)))
        return self

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        entries = [c.to_json() for c in self.checks]
        entries.sort(key=lambda e: json.dumps(e, sort_keys=True))
        out = {"checks": entries, "pass": self.passed}
        for k, v in self.meta.items():
            out[k] = jsonable(v)
        return out


def jsonable(obj: Any):
    """Convert scalars, fractions, tuples and dict keys into JSON-friendly values."""
    if isinstance(obj, Scalar):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(v) for v in obj), key=str)
    return obj


def _key(k) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, tuple):
        return "(" + ",".join(_key(x) for x in k) + ")"
    return str(k)


def emit_report(results: "Report | list[Report]") -> str:
    """Deterministic JSON serialization of one report or a merge of several."""
    if isinstance(results, Report):
        merged = results
    else:
        merged = Report()
        for r in results:
            merged.extend(r)
            merged.meta.update(r.meta)
    return json.dumps(merged.to_json(), sort_keys=True, indent=2)
