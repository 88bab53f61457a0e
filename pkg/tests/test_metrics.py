import csv

import numpy as np
import pytest

from footsim.errors import DomainError
from footsim.sim.metrics import compute_metrics, rmse
from footsim.sim.teleop import SimTrace, trace_columns
from footsim.sim.trace_io import write_metrics

DT = 0.001


def make_trace(phases, fill=None):
    """Zero trace over the given phase labels; fill(columns, rows, t) edits it in place."""
    columns = trace_columns()
    rows = np.zeros((len(phases), len(columns)))
    t = (np.arange(len(phases)) + 1) * DT
    rows[:, 0] = t
    if fill:
        fill(columns, rows, t)
    return SimTrace(columns=columns, rows=rows, phases=list(phases), dt=DT, name="synthetic")


def set_column(columns, rows, name, values):
    rows[:, columns.index(name)] = values


def test_rmse_of_nothing():
    assert rmse(np.zeros((0,))) is None


def test_constant_error():
    def fill(columns, rows, t):
        set_column(columns, rows, "right_ax", 0.3)
        set_column(columns, rows, "right_x", 0.1)

    report = compute_metrics(make_trace(["a_idle"] * 50 + ["c_grasp_lift"] * 50, fill))
    assert report.get("position_rmse_right", "free", "x") == pytest.approx(0.2)
    assert report.get("position_rmse_right", "contact", "x") == pytest.approx(0.2)
    assert report.get("position_rmse_right", "free", "y") == 0.0
    assert report.get("position_rmse_left", "contact", "x") == 0.0


def test_perfect_tracking():
    def fill(columns, rows, t):
        for side in ("left", "right"):
            for i, axis in enumerate("xyz"):
                path = np.sin(3 * t + i)
                set_column(columns, rows, f"{side}_a{axis}", path)
                set_column(columns, rows, f"{side}_{axis}", path)
                set_column(columns, rows, f"{side}_f{axis}", 2 * path)
                set_column(columns, rows, f"{side}_fd{axis}", 2 * path)

    report = compute_metrics(make_trace(["b_retrieve"] * 300 + ["d_work"] * 300, fill))
    assert all(row.value == 0.0 for row in report.rows)


def test_sinusoid_amplitude():
    amplitude = 0.04

    def fill(columns, rows, t):
        # ten full periods
        set_column(columns, rows, "left_fz", amplitude * np.sin(2 * np.pi * t))

    report = compute_metrics(make_trace(["e_disturb"] * 10000, fill))
    value = report.get("force_rmse_left", "contact", "z")
    assert value == pytest.approx(amplitude / np.sqrt(2), rel=0.01)


def test_absent_group(tmp_path, caplog):
    trace = make_trace(["a_idle"] * 20 + ["f_retreat"] * 20)
    report = compute_metrics(trace)
    assert report.get("position_rmse_left", "contact", "y") is None
    assert report.get("force_rmse_right", "contact", "x") is None
    assert "contact" in caplog.text

    path = write_metrics(report, tmp_path / "metrics.csv")
    with path.open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6
    assert {r["phase_group"] for r in rows} == {"free"}


def test_custom_groups():
    def fill(columns, rows, t):
        set_column(columns, rows, "left_ay", 1.0)

    trace = make_trace(["a_idle"] * 10 + ["b_retrieve"] * 10, fill)
    report = compute_metrics(trace, groups={"idle": ["a_idle"], "moving": ["b_retrieve"]})
    assert report.get("position_rmse_left", "idle", "y") == pytest.approx(1.0)
    assert report.get("force_rmse_left", "contact", "x") is None


def test_empty_trace():
    with pytest.raises(DomainError):
        compute_metrics(make_trace([]))
