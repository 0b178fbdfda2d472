"""Parameter sweeps, figure presets and their CSV/JSON rendering."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BlindSpotError, DomainError
from .model import InterferometerConfig, build_report, hl, n_inside, parity_signal, snl

AXES = ("g", "r", "n_th", "phi")
CSV_HEADER = ("axis_value", "delta_phi", "snl", "hl", "parity", "n_bar")


@dataclass(frozen=True)
class SweepSpec:
    """One axis swept over ``[min, max]`` in ``steps`` points.

    ``fixed`` holds the other parameters. ``anchors`` are extra axis values
    merged into the grid exactly, so anchor cross-checks hit the same
    configuration bit for bit.
    """

    axis: str
    min: float
    max: float
    steps: int
    fixed: dict = field(default_factory=dict)
    anchors: tuple = ()

    def __post_init__(self):
        if self.axis not in AXES:
            raise DomainError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)) or self.min > self.max:
            raise DomainError(f"need finite min <= max, got [{self.min}, {self.max}]")
        if int(self.steps) != self.steps or self.steps < 2:
            raise DomainError(f"steps must be an integer >= 2, got {self.steps!r}")
        unknown = set(self.fixed) - set(AXES)
        if unknown:
            raise DomainError(f"unknown fixed parameters {sorted(unknown)}")

    def grid(self) -> np.ndarray:
        values = np.linspace(self.min, self.max, int(self.steps))
        if self.anchors:
            values = np.union1d(values, np.asarray(self.anchors, dtype=float))
        return values

    def configs(self) -> list[InterferometerConfig]:
        base = {name: 0.0 for name in AXES}
        base.update({k: v for k, v in self.fixed.items() if k != self.axis})
        return [InterferometerConfig(**{**base, self.axis: float(x)}) for x in self.grid()]


@dataclass(frozen=True)
class FigurePreset:
    id: str
    sweep: SweepSpec
    series: tuple = ("delta_phi", "snl", "hl")
    title: str = ""


FIGURES: dict[str, FigurePreset] = {
    "fig2": FigurePreset(
        "fig2",
        SweepSpec("g", 0.05, 3.0, 200, {"r": 0.0, "n_th": 0.0, "phi": 0.0}, anchors=(2.0,)),
        title="sensitivity vs g, vacuum inputs (r = 0, n_th = 0)",
    ),
    "fig3": FigurePreset(
        "fig3",
        SweepSpec("n_th", 0.0, 20.0, 200, {"g": 2.0, "r": 0.0, "phi": 0.0}),
        title="sensitivity vs n_th with r = 0, g = 2",
    ),
    "fig4": FigurePreset(
        "fig4",
        SweepSpec("n_th", 0.0, 20.0, 200, {"g": 2.0, "r": 2.0, "phi": 0.0}),
        title="sensitivity vs n_th with r = 2, g = 2",
    ),
    "fig5": FigurePreset(
        "fig5",
        SweepSpec("g", 0.5, 3.0, 200, {"r": 2.0, "n_th": 20.0, "phi": 0.0}, anchors=(2.0,)),
        title="sensitivity vs g with r = 2, n_th = 20",
    ),
    "fig6": FigurePreset(
        "fig6",
        SweepSpec("r", 0.0, 3.0, 200, {"g": 2.0, "n_th": 20.0, "phi": 0.0}, anchors=(2.0,)),
        title="sensitivity vs r with g = 2, n_th = 20",
    ),
}


def run_sweep(spec: SweepSpec) -> list[dict]:
    """Evaluate every grid point, in ascending axis order.

    A blind-spot point (e.g. ``g = 0``) gets ``nan`` for ``delta_phi``
    instead of aborting the sweep.
    """
    rows = []
    for cfg in spec.configs():
        try:
            report = build_report(cfg)
            values = report.as_dict()
        except BlindSpotError:
            n_bar = n_inside(cfg)
            values = {
                "delta_phi": math.nan,
                "snl": snl(cfg) if n_bar > 0 else math.nan,
                "hl": hl(cfg) if n_bar > 0 else math.nan,
                "parity": parity_signal(cfg),
                "n_bar": n_bar,
            }
        rows.append({"axis_value": getattr(cfg, spec.axis), **{k: values[k] for k in CSV_HEADER[1:]}})
    return rows


def format_number(x: float) -> str:
    """12 significant digits; scientific notation below 1e-4."""
    return f"{x:.12g}"


def rounded(record: dict) -> dict:
    """Round every float to its CSV text so JSON and CSV carry identical values."""
    return {k: float(format_number(v)) if isinstance(v, float) else v for k, v in record.items()}


def rows_to_csv(rows: list[dict], header=CSV_HEADER) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(row[k]) if isinstance(row[k], float) else row[k] for k in header])
    return buf.getvalue()


def rows_to_json(rows: list[dict], **meta) -> str:
    payload = {**meta, "rows": [rounded(r) for r in rows]}
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"
