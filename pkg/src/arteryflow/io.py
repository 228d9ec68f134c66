"""CSV output: one file per snapshot plus run metrics."""
from __future__ import annotations

import csv
import math
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .core import Snapshot, SnapshotSeries

SNAPSHOT_HEADER = ("x", "A", "Q", "u", "p", "k", "A0")
INDEX_FILE = "snapshots.csv"
METRICS_FILE = "metrics.csv"


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


@dataclass
class RunMetrics:
    max_abs_q_final: float
    mass_drift_relative: float
    l2_error_vs_reference: float | None
    clamp_event_total: int
    wall_time: float
    steps: int = 0

    @classmethod
    def from_series(cls, series: SnapshotSeries, reference=None) -> "RunMetrics":
        """Metrics of a finished run; ``reference(x, t)`` gives an exact discharge."""
        final = series.snapshots[-1]
        dx = series.grid.dx
        mass = float(np.sum(final.a)) * dx
        drift = abs(mass - series.mass_initial) / series.mass_initial
        l2 = None
        if reference is not None:
            l2 = l2_error(final.q, reference(final.x, final.t), dx)
        return cls(float(np.max(np.abs(final.q))), drift, l2, series.clamp_events,
                   series.wall_time, series.steps)


def l2_error(values, ref, dx) -> float:
    """``sqrt(sum((v - ref)^2) dx)``."""
    diff = np.asarray(values, dtype=float) - np.asarray(ref, dtype=float)
    return math.sqrt(float(np.sum(diff * diff)) * dx)


def snapshot_filename(i: int) -> str:
    return f"snapshot_{i:04d}.csv"


def write_snapshots(series: SnapshotSeries, path, metrics: RunMetrics | None = None) -> list[Path]:
    """Write every snapshot, an index of times, and ``metrics.csv``.

    Values use 17 significant digits so re-reading is bit exact.
    """
    if not series.snapshots:
        raise ValueError("empty snapshot series")
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    k = series.geometry.k
    a0 = series.geometry.a0
    written = []
    for i, snap in enumerate(series.snapshots):
        target = out / snapshot_filename(i)
        with open(target, "w", newline="", encoding="ascii") as fh:
            fh.write(",".join(SNAPSHOT_HEADER) + "\n")
            for row in zip(snap.x, snap.a, snap.q, snap.u, snap.p, k, a0):
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        written.append(target)
    with open(out / INDEX_FILE, "w", newline="", encoding="ascii") as fh:
        fh.write("index,t,file\n")
        for i, snap in enumerate(series.snapshots):
            fh.write(f"{i},{_fmt(snap.t)},{snapshot_filename(i)}\n")
    written.append(out / INDEX_FILE)
    if metrics is None:
        metrics = RunMetrics.from_series(series)
    written.append(write_metrics(metrics, out / METRICS_FILE))
    return written


def write_metrics(metrics: RunMetrics, path) -> Path:
    path = Path(path)
    row = asdict(metrics)
    with open(path, "w", newline="", encoding="ascii") as fh:
        fh.write(",".join(row) + "\n")
        fh.write(",".join("" if v is None else (str(v) if isinstance(v, int) else _fmt(v))
                          for v in row.values()) + "\n")
    return path


def read_metrics(path) -> RunMetrics:
    with open(path, newline="", encoding="ascii") as fh:
        row = next(csv.DictReader(fh))
    kinds = {f.name: f for f in fields(RunMetrics)}
    values = {}
    for name, raw in row.items():
        if name not in kinds:
            continue
        if raw == "":
            values[name] = None
        elif name in ("clamp_event_total", "steps"):
            values[name] = int(raw)
        else:
            values[name] = float(raw)
    return RunMetrics(**values)


def read_snapshot(path) -> tuple[Snapshot, np.ndarray, np.ndarray]:
    """One snapshot CSV as ``(Snapshot with t = nan, k, A0)``."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    x, a, q, u, p, k, a0 = data.T
    return Snapshot(float("nan"), x, a, q, u, p), k, a0


def read_snapshots(path) -> list[Snapshot]:
    """All snapshots listed in the index of an output directory."""
    out = Path(path)
    snaps = []
    with open(out / INDEX_FILE, newline="", encoding="ascii") as fh:
        for row in csv.DictReader(fh):
            snap, _, _ = read_snapshot(out / row["file"])
            snap.t = float(row["t"])
            snaps.append(snap)
    return snaps


def ensure_writable(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise PermissionError(f"{out}: directory not writable")
    return out
