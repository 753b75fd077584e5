"""
Comparison Reports
==================

Every command returns a Report: the inputs echoed back, the computed results,
and a list of Checks recording which two engines were compared, at what
tolerance, and whether they agreed. Reports carry no timestamps, so repeated
runs with the same arguments produce byte-identical files.

Sample Input:
    report = Report("partition", inputs={"group": "SU2"})
    report.add_check("z_vs_kernel", ("partition_function", "heat_kernel"), 1.0, 1.0, 1e-10)
    report.to_dict()["passed"]

Expected Output:
    True
"""

import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..config import get_settings
from ..core.utils import save_csv_file, save_json_file, to_jsonable, write_csv


def measured(value: Any, error_estimate: float = 0.0, kind: str = "tolerance") -> Dict[str, Any]:
    """A numeric result paired with its error estimate (tolerance or stderr)."""
    return {"value": value, "error_estimate": error_estimate, "error_kind": kind}


@dataclass
class Check:
    """One cross-engine comparison: |value_a - value_b| <= tolerance."""

    name: str
    engines: Tuple[str, str]
    value_a: Any
    value_b: Any
    tolerance: float
    note: Optional[str] = None

    @property
    def deviation(self) -> float:
        if self.value_a is None or self.value_b is None:
            return 0.0 if self.value_a == self.value_b else math.inf
        return abs(float(self.value_a) - float(self.value_b))

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "name": self.name,
            "engines": list(self.engines),
            "value_a": self.value_a,
            "value_b": self.value_b,
            "deviation": self.deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    """Result of one command, serializable as JSON or CSV rows."""

    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    rows: List[Dict[str, Any]] = field(default_factory=list)

    def add_check(
        self,
        name: str,
        engines: Tuple[str, str],
        value_a: Any,
        value_b: Any,
        tolerance: float,
        note: Optional[str] = None,
    ) -> Check:
        check = Check(name, tuple(engines), value_a, value_b, tolerance, note)
        self.checks.append(check)
        return check

    def add_assertion(self, name: str, engines: Tuple[str, str], ok: bool, note: Optional[str] = None) -> Check:
        """A pass/fail property with no natural pair of numbers (slopes, monotonicity)."""
        return self.add_check(name, engines, 1.0 if ok else 0.0, 1.0, 0.0, note)

    def add_row(self, engine: str, value: Any, error_estimate: float = 0.0, **params: Any) -> None:
        """One CSV row per (parameter point, engine)."""
        self.rows.append({"engine": engine, **params, "value": value, "error_estimate": error_estimate})

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        settings = get_settings()
        return to_jsonable({
            "schema": settings.SCHEMA,
            "command": self.command,
            "version": settings.APP_VERSION,
            "inputs": self.inputs,
            "results": self.results,
            "checks": [check.to_dict() for check in self.checks],
            "passed": self.passed,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        write_csv(self.rows, buffer)
        return buffer.getvalue()

    def write(self, path: Path, fmt: str = "json") -> Path:
        path = Path(path)
        if fmt == "csv":
            save_csv_file(self.rows, path)
        else:
            save_json_file(self.to_dict(), path)
        return path
