"""Deterministic run reports: JSON document, CSV table, atomic writes.

Reports with equal config and seed serialize byte-identically, so no
wall-clock data is stored in the files; timing is printed to standard output
by the command line layer instead.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class CheckResult:
    name: str
    status: str
    witness: str | None = None
    data: dict | None = None

    def __post_init__(self):
        if self.status not in (PASS, FAIL, SKIPPED):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FAIL and not self.witness:
            raise ValueError("failing checks must carry a witness")


@dataclass
class Report:
    command: str
    config: dict
    checks: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    tool: str = "coneforms"
    version: str = "0.1.0"

    def add(self, name: str, ok: bool, witness: str | None = None,
            data: dict | None = None):
        self.checks.append(CheckResult(
            name, PASS if ok else FAIL,
            witness=None if ok else (witness or "unspecified failure"),
            data=data))

    def skip(self, name: str, reason: str):
        self.checks.append(CheckResult(name, SKIPPED, witness=reason))

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def to_document(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "tool": self.tool,
            "version": self.version,
            "command": self.command,
            "config": self.config,
            "checks": [
                {"name": c.name, "status": c.status,
                 **({"witness": c.witness} if c.witness else {}),
                 **({"data": c.data} if c.data else {})}
                for c in self.checks
            ],
            "results": self.results,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), sort_keys=True, indent=2,
                          separators=(",", ": ")) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "status", "witness"])
        for c in self.checks:
            writer.writerow([c.name, c.status, c.witness or ""])
        return buf.getvalue()

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            mark = {"pass": "PASS", "fail": "FAIL", "skipped": "SKIP"}[c.status]
            extra = f"  ({c.witness})" if c.status != PASS and c.witness else ""
            lines.append(f"[{mark}] {c.name}{extra}")
        return lines


def atomic_write(path: str, content: str):
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as handle:
        handle.write(content)
    os.replace(tmp, path)


def write_report(report: Report, out_dir: str, basename: str) -> dict:
    json_path = os.path.join(out_dir, basename + ".json")
    csv_path = os.path.join(out_dir, basename + ".csv")
    atomic_write(json_path, report.to_json())
    atomic_write(csv_path, report.to_csv())
    return {"json": json_path, "csv": csv_path}
