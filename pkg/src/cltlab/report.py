"""Check reports: JSON documents plus CSV sidecars.

Schema ``clt-report/1``: scenario echo, seed, one record per executed
check (id, property, status, witness, tolerances, timing), and a summary.
``stable_body`` strips the volatile fields so reruns with one seed can be
compared byte for byte.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

SCHEMA = "clt-report/1"

__all__ = [
    "CheckRecord",
    "Report",
    "SCHEMA",
    "stable_body",
    "write_profile_csv",
    "read_profile_csv",
    "write_catalogue_csv",
]


def _plain(obj):
    """Coerce numpy scalars/arrays and tuples into JSON-clean values."""
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return obj


@dataclass
class CheckRecord:
    id: str
    property: str
    status: str  # "pass" | "fail"
    witness: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    timing_s: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "property": self.property,
            "status": self.status,
            "witness": _plain(self.witness),
            "tolerances": _plain(self.tolerances),
            "timing_s": round(self.timing_s, 6),
        }


@dataclass
class Report:
    scenario: dict
    seed: int
    checks: list[CheckRecord] = field(default_factory=list)

    def add(self, record: CheckRecord):
        if any(c.id == record.id for c in self.checks):
            raise ValueError(f"duplicate check id {record.id!r}")
        self.checks.append(record)

    def run(self, check_id: str, prop: str, fn, tolerances: dict | None = None) -> CheckRecord:
        """Execute a check callable returning (ok, witness); records timing
        and failure on exception."""
        t0 = time.perf_counter()
        try:
            ok, witness = fn()
        except Exception as exc:  # checks must never take the runner down
            ok, witness = False, {"error": f"{type(exc).__name__}: {exc}"}
        rec = CheckRecord(
            id=check_id,
            property=prop,
            status="pass" if ok else "fail",
            witness=witness if isinstance(witness, dict) else {"value": witness},
            tolerances=tolerances or {},
            timing_s=time.perf_counter() - t0,
        )
        self.add(rec)
        return rec

    @property
    def n_failed(self) -> int:
        return sum(1 for c in self.checks if not c.passed)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "scenario": _plain(self.scenario),
            "seed": int(self.seed),
            "checks": [c.to_dict() for c in self.checks],
            "summary": {
                "total": len(self.checks),
                "passed": len(self.checks) - self.n_failed,
                "failed": self.n_failed,
            },
            "created": datetime.now(timezone.utc).isoformat(),
        }

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n")
        return path


def stable_body(report_dict: dict) -> str:
    """The report serialized without timestamps and timings.

    Witness entries named ``elapsed_s`` are wall-clock measurements backing
    budget verdicts; the verdicts stay, the measurements are volatile."""
    body = json.loads(json.dumps(report_dict))  # deep copy via JSON
    body.pop("created", None)
    for check in body.get("checks", ()):
        check.pop("timing_s", None)
        if isinstance(check.get("witness"), dict):
            check["witness"].pop("elapsed_s", None)
    return json.dumps(body, indent=2, sort_keys=True)


def write_profile_csv(profile, path) -> Path:
    """Distance profile as rows (point index, first coord, second coord,
    value); 1D clouds write a zero second coordinate."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pts = profile.cloud.points
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "x", "y", "value"])
        for i, val in enumerate(profile.values):
            x = pts[i, 0]
            y = pts[i, 1] if pts.shape[1] > 1 else 0.0
            w.writerow([i, repr(float(x)), repr(float(y)), repr(float(val))])
    return path


def read_profile_csv(path) -> list[tuple[int, float, float, float]]:
    out = []
    with Path(path).open() as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["index", "x", "y", "value"]:
            raise ValueError(f"unexpected profile header {header}")
        for row in reader:
            out.append((int(row[0]), float(row[1]), float(row[2]), float(row[3])))
    return out


def write_catalogue_csv(catalogue, path, profile_refs: dict[str, str] | None = None) -> Path:
    """Catalogue table: label, tag, family parameter, indicator cardinality,
    and the profile CSV each entry points at (when emitted)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    profile_refs = profile_refs or {}
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["label", "tag", "family", "parameter", "cardinality", "profile_csv"])
        for e in catalogue.entries:
            fam = e.family[0] if e.family else ""
            par = repr(float(e.family[1])) if e.family else ""
            w.writerow(
                [e.label, e.kind, fam, par, int(e.indicator.mask.sum()), profile_refs.get(e.label, "")]
            )
    return path
