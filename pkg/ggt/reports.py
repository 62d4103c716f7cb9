"""
Versioned report documents.

Every report serialises with sorted keys so that equal inputs give
byte-identical JSON.
"""

import json
import os
from typing import Any, Dict, List

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class Check(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class Report(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: str
    case: str = ""
    parameters: Dict[str, Any] = Field(default_factory=dict)
    results: Dict[str, Any] = Field(default_factory=dict)
    checks: List[Check] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name=name, passed=bool(passed), detail=detail))
        return bool(passed)

    def to_json(self) -> str:
        return dump_json(self)

    def save(self, filepath: str) -> None:
        directory = os.path.dirname(filepath)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(filepath, "w") as f:
            f.write(self.to_json())


def dump_json(report: BaseModel) -> str:
    data = report.model_dump(mode="json")
    if isinstance(report, Report):
        data["passed"] = report.passed
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def simple_report(kind: str, results: Dict[str, Any], **parameters: Any) -> Report:
    return Report(kind=kind, parameters=parameters, results=results)
