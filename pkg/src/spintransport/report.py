"""Check results and run reports."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class Check:
    """One measured quantity against its bound.

    ``relation`` is ``"<="`` (value must not exceed bound) or ``">="``.
    """

    name: str
    value: float
    bound: float
    relation: str = "<="

    @property
    def passed(self) -> bool:
        if math.isnan(self.value):
            return False
        if self.relation == "<=":
            return bool(self.value <= self.bound)
        return bool(self.value >= self.bound)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name}: {self.value:.6g} {self.relation} {self.bound:.6g}"

    def to_dict(self) -> dict:
        return {"name": self.name, "value": _num(self.value), "bound": float(self.bound),
                "relation": self.relation, "passed": self.passed}


def _num(v):
    v = float(v)
    return None if math.isnan(v) else v


@dataclass
class RunReport:
    scenario: str
    name: str
    summary: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    series: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "name": self.name,
            "passed": self.passed,
            "summary": {k: _jsonable(v) for k, v in self.summary.items()},
            "checks": [c.to_dict() for c in self.checks],
            "series": dict(self.series),
        }

    def write(self, path) -> Path:
        return write_json(path, self.to_dict())


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, str) or v is None:
        return v
    if isinstance(v, int):
        return v
    return _num(v)


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8", newline="\n")
    return path
