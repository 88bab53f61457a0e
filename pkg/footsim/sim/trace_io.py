"""CSV writers and readers for traces, metrics and workspace results."""

__all__ = [
    "write_trace",
    "read_trace",
    "write_metrics",
    "write_cloud",
    "write_summary",
]

import csv
import logging
from pathlib import Path
from typing import Union

import numpy as np

from footsim.config import CSV_FLOAT_FORMAT
from footsim.errors import ScenarioParseError
from footsim.models import MetricsReport, WorkspaceSummary
from footsim.sim.teleop import SimTrace

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_trace(trace: SimTrace, path: PathLike) -> Path:
    """One row per step: t, phase, then the numeric columns (fixed %.9e format)."""
    path = _prepare(path)
    names = trace.columns[1:]
    row_format = ",".join([CSV_FLOAT_FORMAT] * len(names))
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(["t", "phase"] + names) + "\n")
        for row, phase in zip(trace.rows, trace.phases):
            fh.write(f"{CSV_FLOAT_FORMAT % row[0]},{phase}," + row_format % tuple(row[1:]) + "\n")
    logger.info("Wrote trace (%d rows) to %s", len(trace), path)
    return path


def read_trace(path: PathLike) -> SimTrace:
    """Reads a trace written by write_trace."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[:2] != ["t", "phase"]:
            raise ScenarioParseError(f"{path}: not a trace file (header must start with t,phase)", line=1)
        values, phases = [], []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(header):
                raise ScenarioParseError(f"{path}: expected {len(header)} fields", line=lineno)
            try:
                values.append([float(record[0])] + [float(v) for v in record[2:]])
            except ValueError as e:
                raise ScenarioParseError(f"{path}: {e}", line=lineno) from None
            phases.append(record[1])

    columns = [header[0]] + header[2:]
    rows = np.array(values, dtype=float).reshape(len(values), len(columns))
    dt = float(rows[1, 0] - rows[0, 0]) if len(values) > 1 else 0.0
    return SimTrace(columns=columns, rows=rows, phases=phases, dt=dt, name=path.stem)


def write_metrics(report: MetricsReport, path: PathLike) -> Path:
    """metric,phase_group,axis,value rows; groups without samples are left out."""
    path = _prepare(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["metric", "phase_group", "axis", "value"])
        for row in report.rows:
            if row.value is None:
                continue
            writer.writerow([row.metric, row.phase_group, row.axis, CSV_FLOAT_FORMAT % row.value])
    logger.info("Wrote metrics to %s", path)
    return path


def write_cloud(points: np.ndarray, path: PathLike) -> Path:
    path = _prepare(path)
    np.savetxt(path, points, fmt=CSV_FLOAT_FORMAT, delimiter=",", header="x,y,z", comments="")
    logger.info("Wrote %d workspace points to %s", points.shape[0], path)
    return path


def write_summary(summary: WorkspaceSummary, path: PathLike) -> Path:
    path = _prepare(path)
    fields = ["volume_m3", "rect_x_m", "rect_y_m", "rect_area_m2", "height_m", "voxel_m"]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields + ["samples"])
        writer.writerow([CSV_FLOAT_FORMAT % getattr(summary, f) for f in fields] + [summary.samples])
    logger.info("Wrote workspace summary to %s", path)
    return path
