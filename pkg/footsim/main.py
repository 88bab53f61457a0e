"""
Command-line front end of the foot-platform telemanipulation simulator.

Commands: fk, jacobian, workspace, simulate, metrics. All numeric output is in
SI units; angles may be given with a 'deg' suffix and lengths with 'mm'.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from footsim.config import (
    DEFAULT_SCENARIO,
    JOINT_NAMES,
    WORKSPACE_CLOUD_POINTS,
    WORKSPACE_SAMPLES,
    WORKSPACE_SEED,
    WORKSPACE_VOXEL,
)
from footsim.errors import EXIT_DOMAIN, EXIT_FAULT, EXIT_IO, EXIT_OK, DomainError, FootsimError
from footsim.sim.kinematics import (
    LimitPolicy,
    default_chain,
    forward_kinematics,
    translational_jacobian,
)
from footsim.sim.metrics import compute_metrics
from footsim.sim.scenario_file import load_scenario
from footsim.sim.teleop import run_scenario
from footsim.sim.trace_io import read_trace, write_cloud, write_metrics, write_summary, write_trace
from footsim.sim.utils import clamp_joints, parse_quantity, validate_joints
from footsim.sim.workspace import sample_workspace

logger = logging.getLogger("footsim")


def _num(value: float) -> str:
    # no negative zero in printed output
    return f"{round(value, 3) + 0.0:.3f}"


def _joints(values: List[str], strict: bool):
    q = [parse_quantity(v) for v in values]
    ok, message = validate_joints(q)
    if not ok:
        if strict:
            raise DomainError(f"limit violation: {message}")
        logger.warning("%s; using clamped joints", message)
        clamped, _ = clamp_joints(q)
        q = list(clamped.as_array())
    return q


def cmd_fk(args) -> int:
    q = _joints(args.joints, args.strict)
    frames = forward_kinematics(default_chain(), q, policy=LimitPolicy.UNCHECKED)
    tip = frames[-1].translation
    print("tip: " + " ".join(_num(v) for v in tip))
    if args.frames:
        for row, frame in zip(default_chain().rows, frames):
            print(f"frame {row.name}: " + " ".join(_num(v) for v in frame.translation))
    return EXIT_OK


def cmd_jacobian(args) -> int:
    q = _joints(args.joints, args.strict)
    jac = translational_jacobian(q)
    print("      " + " ".join(f"{name:>10}" for name in JOINT_NAMES))
    for axis, row in zip("xyz", jac):
        print(f"{axis}:    " + " ".join(f"{round(v, 6) + 0.0:>10.6f}" for v in row))
    return EXIT_OK


def cmd_workspace(args) -> int:
    result = sample_workspace(
        samples=None if args.grid else args.samples,
        samples_per_axis=args.grid,
        voxel=args.voxel,
        freeze_rotations=args.freeze_rotations,
        seed=args.seed,
        cloud_points=args.cloud_points,
        workers=args.workers,
    )
    s = result.summary
    write_cloud(result.cloud, args.cloud)
    write_summary(s, args.summary)
    print(f"volume_m3: {s.volume_m3:.4f}")
    print(f"rect_x_m: {s.rect_x_m:.3f}")
    print(f"rect_y_m: {s.rect_y_m:.3f}")
    print(f"rect_area_m2: {s.rect_area_m2:.4f}")
    print(f"height_m: {s.height_m:.3f}")
    if result.hull_volume_m3 is not None:
        print(f"hull_volume_m3: {result.hull_volume_m3:.4f}")
    if not s.sufficient:
        print("warning: too few samples for a volume estimate")
    return EXIT_OK


def _report(report) -> None:
    for row in report.rows:
        if row.value is not None:
            print(f"{row.metric} {row.phase_group} {row.axis}: {row.value:.4f}")


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario, args.set or ())
    trace = run_scenario(scenario)
    trace_path = Path(args.trace or f"{scenario.name}_trace.csv")
    metrics_path = Path(args.metrics or f"{scenario.name}_metrics.csv")

    write_trace(trace, trace_path)
    if len(trace):
        report = compute_metrics(trace)
        write_metrics(report, metrics_path)
        print(f"scenario {scenario.name}: {len(trace)} steps, trace {trace_path}, metrics {metrics_path}")
        _report(report)
    if trace.faults:
        fault = trace.faults[0]
        print(f"simulation fault at t={fault.t:.6f} s ({fault.phase}): {fault.message}", file=sys.stderr)
        return EXIT_FAULT
    return EXIT_OK


def cmd_metrics(args) -> int:
    trace = read_trace(args.trace)
    report = compute_metrics(trace)
    out = Path(args.out or Path(args.trace).with_name(Path(args.trace).stem + "_metrics.csv"))
    write_metrics(report, out)
    _report(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="footsim", description="Foot-platform telemanipulation simulator")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fk", help="pedal tip position for five joint values")
    p.add_argument("joints", nargs=5, help="d1 d2 theta phi psi (suffix deg/mm allowed)")
    p.add_argument("--frames", action="store_true", help="also list every chain frame")
    p.add_argument("--strict", action="store_true", help="reject out-of-limit joints instead of clamping")
    p.set_defaults(func=cmd_fk)

    p = sub.add_parser("jacobian", help="3x5 translational Jacobian")
    p.add_argument("joints", nargs=5)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("workspace", help="workspace volume and point cloud")
    p.add_argument("--voxel", type=parse_quantity, default=WORKSPACE_VOXEL, help="voxel edge (m, or mm suffix)")
    p.add_argument("--samples", type=int, default=WORKSPACE_SAMPLES, help="Monte Carlo rotation samples")
    p.add_argument("--grid", type=int, default=None, help="regular grid points per rotation axis")
    p.add_argument("--seed", type=int, default=WORKSPACE_SEED)
    p.add_argument("--freeze-rotations", action="store_true")
    p.add_argument("--cloud", default="workspace_cloud.csv")
    p.add_argument("--summary", default="workspace_summary.csv")
    p.add_argument("--cloud-points", type=int, default=WORKSPACE_CLOUD_POINTS)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_workspace)

    p = sub.add_parser("simulate", help="run a teleoperation scenario")
    p.add_argument("scenario", nargs="?", default=DEFAULT_SCENARIO, help="scenario file or bundled name")
    p.add_argument("--trace", default=None)
    p.add_argument("--metrics", default=None)
    p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE", help="override a scenario value")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("metrics", help="recompute metrics from a trace file")
    p.add_argument("trace")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s", force=True)
    try:
        return args.func(args)
    except FootsimError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
