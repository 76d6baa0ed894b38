"""Structured verification reports.

Rows are deterministic given a RunConfig: every value derives from the
config seed, no timestamps are stored, and serialisation uses sorted keys
with full-precision floats, so identical configs reproduce byte-identical
files.
"""

from __future__ import annotations

import csv
import json
import io
from dataclasses import dataclass, field, asdict
from pathlib import Path

__all__ = ["RunConfig", "ReportRow", "Report", "ANCHORS"]

# Check families a row may cite; rows outside this enumeration are rejected.
ANCHORS = frozenset(
    {
        "grid-isotropy",
        "haar-consistency",
        "body-algebra",
        "polar-duality",
        "volume-closed-form",
        "volume-moment-identity",
        "moment-monotonicity",
        "norm-moment-lower-bound",
        "norm-moment-ratio",
        "norm-moment-closed-form",
        "section-average-identity",
        "radon-normalization",
        "section-closed-form",
        "ik-closed-form",
        "ik-linear-image",
        "ik-scaling",
        "ik-convention-factor",
        "ik-average-identity",
        "ik-solver-recovery",
        "intersection-convexity",
        "intersection-roundness",
        "isotropic-constant",
        "centroid-closed-form",
        "centroid-sandwich",
        "section-shadow-product",
        "volume-product-range",
        "slab-sandwich",
        "section-spread",
        "section-spread-roundness",
        "tube-ellipsoid-inclusion",
        "union-radial-sum-distance",
        "ball-sum-growth",
        "outer-volume-ratio",
        "ik-volume-ratio-lower",
        "ik-volume-ratio-upper",
        "bm-upper-anchor",
        "distance-metric-properties",
        "determinism",
    }
)


@dataclass
class RunConfig:
    """Explicit knobs for a verification run; recorded in every output."""

    seed: int = 7
    grid_resolution: int = 2000
    grassmann_count: int = 500
    mc_count: int = 200_000
    probe_count: int = 200_000
    tolerance_scale: float = 1.0
    out_dir: str = "runs"

    def __post_init__(self):
        for name in ("grid_resolution", "grassmann_count", "mc_count", "probe_count"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.tolerance_scale <= 0:
            raise ValueError("tolerance_scale must be positive")

    def to_dict(self):
        return asdict(self)


@dataclass
class ReportRow:
    check_id: str
    anchor: str
    status: str  # pass | fail | info
    value: float | None = None
    target: float | None = None
    inputs: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    error: float | None = None  # error bar where a Monte Carlo stage is involved
    sensitivity: float | None = None  # value shift under halved resolution
    seed: int = 0

    def __post_init__(self):
        if self.anchor not in ANCHORS:
            raise ValueError(f"row {self.check_id!r} cites unknown anchor {self.anchor!r}")
        if self.status not in ("pass", "fail", "info"):
            raise ValueError(f"row {self.check_id!r} has invalid status {self.status!r}")

    def to_dict(self):
        return {
            "check_id": self.check_id,
            "anchor": self.anchor,
            "status": self.status,
            "value": self.value,
            "target": self.target,
            "inputs": self.inputs,
            "extras": self.extras,
            "error": self.error,
            "sensitivity": self.sensitivity,
            "seed": self.seed,
        }


CSV_FIELDS = [
    "check_id",
    "anchor",
    "status",
    "value",
    "target",
    "error",
    "sensitivity",
    "seed",
    "inputs",
    "extras",
]


def _jsonable(obj):
    """Round-trip numpy scalars/arrays into plain JSON types."""
    import numpy as np

    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


@dataclass
class Report:
    config: RunConfig
    suite: str
    rows: list = field(default_factory=list)

    def add(self, row: ReportRow):
        self.rows.append(row)

    def failed(self):
        return [r for r in self.rows if r.status == "fail"]

    def to_json(self) -> str:
        payload = {
            "suite": self.suite,
            "config": self.config.to_dict(),
            "rows": [_jsonable(r.to_dict()) for r in self.rows],
        }
        return json.dumps(payload, sort_keys=True, indent=1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            d = _jsonable(row.to_dict())
            d["inputs"] = json.dumps(d["inputs"], sort_keys=True)
            d["extras"] = json.dumps(d["extras"], sort_keys=True)
            writer.writerow({k: ("" if d[k] is None else d[k]) for k in CSV_FIELDS})
        return buf.getvalue()

    def write(self, out_dir) -> tuple:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        json_path = out / "report.json"
        csv_path = out / "report.csv"
        json_path.write_text(self.to_json())
        csv_path.write_text(self.to_csv())
        return json_path, csv_path

    def summary_lines(self):
        lines = []
        for row in self.rows:
            val = "" if row.value is None else f" value={row.value:.6g}"
            tgt = "" if row.target is None else f" target={row.target:.6g}"
            lines.append(f"[{row.status.upper():4s}] {row.check_id}{val}{tgt}")
        counts = {
            "pass": sum(r.status == "pass" for r in self.rows),
            "fail": sum(r.status == "fail" for r in self.rows),
            "info": sum(r.status == "info" for r in self.rows),
        }
        lines.append(
            f"-- {self.suite}: {counts['pass']} pass, {counts['fail']} fail, {counts['info']} info"
        )
        return lines
