"""Check reports, the versioned JSON document, CSV tables and the text summary."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

SCHEMA_VERSION = 1
STATUSES = ("pass", "fail", "inconclusive")


class ReportError(ValueError):
    pass


@dataclass
class CheckReport:
    """One named check. ``passed`` holds iff error <= tolerance and the
    underlying computation converged; non-convergence is reported as
    status "inconclusive" and counts as a failure."""
    suite: str
    check: str
    anchor: str
    error: float
    tolerance: float
    seed: int
    wall_time: float = 0.0
    converged: bool = True

    def __post_init__(self):
        if not self.anchor:
            raise ReportError(f"check {self.check!r} has an empty anchor")
        self.error = float(self.error)
        self.tolerance = float(self.tolerance)

    @property
    def passed(self) -> bool:
        return self.converged and math.isfinite(self.error) and self.error <= self.tolerance

    @property
    def status(self) -> str:
        if not self.converged:
            return "inconclusive"
        return "pass" if self.passed else "fail"

    @property
    def key(self):
        return (self.suite, self.check)

    def as_dict(self):
        d = asdict(self)
        del d["converged"]
        d["passed"] = self.passed
        d["status"] = self.status
        if not math.isfinite(d["error"]):
            d["error"] = None
        return d

    @classmethod
    def from_dict(cls, d):
        try:
            err = d["error"]
            return cls(d["suite"], d["check"], d["anchor"], math.inf if err is None else err,
                       d["tolerance"], d["seed"], d.get("wall_time", 0.0),
                       d.get("status") != "inconclusive")
        except (KeyError, TypeError) as exc:
            raise ReportError(f"malformed check entry: {exc}") from None


def sort_reports(reports):
    return sorted(reports, key=lambda r: r.key)


def to_document(reports, config: dict, seed: int, backend: str) -> dict:
    rs = sort_reports(reports)
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "backend": backend,
        "config": config,
        "summary": {"total": len(rs), "passed": sum(r.passed for r in rs),
                    "failed": sum(not r.passed for r in rs)},
        "reports": [r.as_dict() for r in rs],
    }


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, doc):
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(dumps(doc))
    tmp.replace(path)


def read_json(path):
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ReportError(f"cannot read report {path}: {exc}") from None
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise ReportError(f"{path}: unsupported schema_version")
    return [CheckReport.from_dict(d) for d in doc.get("reports", [])]


def write_csv(path, rows, columns):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({c: row[c] for c in columns})


def summarize(reports) -> str:
    """Text table, one row per check, ordered by suite then name."""
    header = ("suite", "check", "anchor", "error", "tolerance", "result")
    rows = [(r.suite, r.check, r.anchor, f"{r.error:.3e}", f"{r.tolerance:.1e}",
             {"pass": "PASS", "fail": "FAIL", "inconclusive": "FAIL (inconclusive)"}[r.status])
            for r in sort_reports(reports)]
    widths = [max([len(h)] + [len(row[i]) for row in rows]) for i, h in enumerate(header)]
    fmt = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    lines = [fmt(header), fmt(["-" * w for w in widths])]
    lines += [fmt(row) for row in rows]
    return "\n".join(lines) + "\n"
