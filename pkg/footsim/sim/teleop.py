"""
Bipedal position-force teleoperation loop.

Each foot platform drives one arm through the position telefunctioning map;
the arm's interaction force with the grasp object is mapped back through the
force telefunctioning map and rendered on the platform by inverse dynamics.
Each arm works in its own Cartesian frame, placed in the shared world frame of
the object by a base translation and an optional x-axis mirror.
"""

__all__ = [
    "SimTrace",
    "channel_buffer",
    "channel_transmit",
    "phase_labels",
    "trace_columns",
    "run_scenario",
]

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, List

import numpy as np
from scipy.spatial.transform import Rotation

from footsim.config import JOINT_NAMES
from footsim.errors import DomainError, SimulationFault
from footsim.models import ChannelConfig, ImpulseTarget, ScenarioConfig, SimFault
from footsim.sim.contact import ContactForces, ContactSite
from footsim.sim.kinematics import closed_form_tip, default_chain
from footsim.sim.platform import initial_platform_state, platform_inverse_dynamics, platform_step
from footsim.sim.robot import (
    damping_basis,
    damping_from_basis,
    ds_desired_velocity,
    impedance_control_force,
    initial_arm_state,
    arm_step,
    orientation_error,
    orientation_pd_torque,
)

logger = logging.getLogger(__name__)

SIDES = ("left", "right")
SIDE_COLUMNS = (
    [f"q_{name}" for name in JOINT_NAMES]
    + ["fx", "fy", "fz"]
    + ["x", "y", "z", "vx", "vy", "vz"]
    + ["fux", "fuy", "fuz", "fex", "fey", "fez"]
    + ["ax", "ay", "az", "fdx", "fdy", "fdz"]
    + ["fn", "eo"]
)
OBJECT_COLUMNS = ["ox", "oy", "oz"]


def trace_columns() -> List[str]:
    """Numeric trace columns in file order (the phase label follows t)."""
    cols = ["t"]
    for side in SIDES:
        cols += [f"{side}_{c}" for c in SIDE_COLUMNS]
    return cols + OBJECT_COLUMNS


@dataclass
class SimTrace:
    """Time-ordered records of both sides, one row per step; a dataclass around one large array"""

    columns: List[str]
    rows: np.ndarray  # (steps, len(columns))
    phases: List[str]
    dt: float
    name: str = "scenario"
    faults: List[SimFault] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        try:
            return self.rows[:, self.columns.index(name)]
        except ValueError:
            raise KeyError(f"no trace column {name!r}") from None

    def block(self, side: str, names) -> np.ndarray:
        """(steps, len(names)) array of one side's columns"""
        idx = [self.columns.index(f"{side}_{n}") for n in names]
        return self.rows[:, idx]

    @property
    def times(self) -> np.ndarray:
        return self.column("t")

    def __len__(self) -> int:
        return self.rows.shape[0]


def channel_buffer(config: ChannelConfig, initial) -> Deque:
    """FIFO pre-filled with the initial value, one slot per delayed step."""
    return deque(np.array(initial, dtype=float) for _ in range(config.delay_steps))


def channel_transmit(value, config: ChannelConfig, buffer: Deque):
    """Pushes value and returns the one sent delay_steps earlier (delay 0 is identity)."""
    if len(buffer) != config.delay_steps:
        raise DomainError(f"channel buffer holds {len(buffer)} values, expected {config.delay_steps}")
    buffer.append(value)
    return buffer.popleft()


def phase_labels(config: ScenarioConfig, steps: int) -> List[str]:
    """Phase label of each step, by the step's start time."""
    labels = []
    bounds = [(int(round(p.start / config.dt)), p.label.value) for p in config.phases]
    current = 0
    for k in range(steps):
        while current + 1 < len(bounds) and k >= bounds[current + 1][0]:
            current += 1
        labels.append(bounds[current][1])
    return labels


class _Side:
    """Mutable per-side loop state: platform, arm, channels and contact site."""

    def __init__(self, name: str, config: ScenarioConfig, times: np.ndarray):
        side = getattr(config, name)
        self.name = name
        self.base = np.asarray(side.base, dtype=float)
        self.mirror = np.array([-1.0 if side.mirror else 1.0, 1.0, 1.0])
        self.human = config.human_for(name)
        self.refs = self.human.reference_table(times)

        self.platform = initial_platform_state(config.platform, self.refs[0])
        tip = closed_form_tip(self.platform.q)
        upsilon = config.telefunctioning.upsilon_matrix
        self.arm = initial_arm_state(upsilon @ tip, config.arm.orientation_initial)
        self.basis = np.eye(3)
        self.tau_u = platform_inverse_dynamics(config.platform, self.platform, np.zeros(5), np.zeros(3))

        self.position_channel = channel_buffer(config.channel, tip)
        self.force_channel = channel_buffer(config.channel, np.zeros(3))
        self.site = ContactSite(name)

    def mirrored(self, v: np.ndarray) -> np.ndarray:
        """Arm-frame vector to world frame and back (the mirror is its own inverse)"""
        return self.mirror * v

    def world_position(self) -> np.ndarray:
        return self.base + self.mirror * self.arm.x


def _impulse_windows(config: ScenarioConfig):
    windows = []
    for d in config.disturbances:
        k0 = int(round(d.start / config.dt))
        k1 = k0 + max(1, int(round(d.duration / config.dt)))
        windows.append((k0, k1, d.target, np.asarray(d.force, dtype=float)))
    return windows


def _active_force(windows, k: int, target: ImpulseTarget) -> np.ndarray:
    force = np.zeros(3)
    for k0, k1, tgt, f in windows:
        if tgt == target and k0 <= k < k1:
            force = force + f
    return force


def run_scenario(config: ScenarioConfig) -> SimTrace:
    """
    Runs the fixed-step loop. Each step: left platform, right platform, left arm,
    right arm, object. Contacts use the object pose at the start of the step; the
    reflected force reaches the platforms through the channel at the end of it.
    A simulation fault stops the run and is reported in the trace, not raised.
    """
    dt = config.dt
    steps = int(round(config.duration / dt))
    times = np.arange(steps) * dt
    labels = phase_labels(config, steps)

    geometry = default_chain().geometry
    params = config.platform
    tele = config.telefunctioning
    upsilon, omega = tele.upsilon_matrix, tele.omega_matrix
    arm_params = config.arm.dynamics()
    damping_spec = config.arm.damping_spec()
    kp, kd = config.arm.kp, config.arm.kd
    target = Rotation.from_rotvec(config.arm.orientation_target).as_matrix()
    kappa = params.inertia_compensation

    sides = [_Side(name, config, times) for name in SIDES]
    windows = _impulse_windows(config)

    obj = config.object
    obj_center = np.asarray(obj.center, dtype=float) if obj else np.zeros(3)
    obj_velocity = np.zeros(3)
    obj_weight = obj.mass * arm_params.gravity_array if obj else np.zeros(3)
    table_z = obj_center[2] - obj.half_extents[2] if obj else 0.0
    resting = obj is not None and not obj.fixed

    columns = trace_columns()
    rows = np.empty((steps, len(columns)))
    faults: List[SimFault] = []
    logger.info("Running scenario %r: %d steps of %.4f s", config.name, steps, dt)

    phase = labels[0] if labels else ""
    done = 0
    for k in range(steps):
        if labels[k] != phase:
            phase = labels[k]
            logger.info("t=%.3f s: phase %s", k * dt, phase)
        t1 = (k + 1) * dt
        try:
            for s in sides:
                s.platform = platform_step(params, s.platform, s.human, s.tau_u, dt, q_ref=s.refs[k], geometry=geometry)

            received = [channel_transmit(closed_form_tip(s.platform.q, geometry), config.channel, s.position_channel) for s in sides]

            object_force = np.zeros(3)
            records = []
            for s, x_p in zip(sides, received):
                if obj is not None:
                    contact = s.site.update(s.world_position(), s.mirrored(s.arm.x_dot), obj_center, obj_velocity, obj)
                else:
                    contact = ContactForces()
                object_force -= contact.total
                contact_arm = s.mirrored(contact.total)
                target_side = ImpulseTarget.LEFT if s.name == "left" else ImpulseTarget.RIGHT
                f_ext = contact_arm + s.mirrored(_active_force(windows, k, target_side))

                attractor = upsilon @ x_p
                xd_dot = ds_desired_velocity(x_p, s.arm.x, upsilon)
                s.basis = damping_basis(xd_dot, s.basis)
                f_u = impedance_control_force(damping_from_basis(s.basis, damping_spec), xd_dot, s.arm.x_dot, arm_params)
                err = orientation_error(s.arm.rotation, target)
                tau_o = orientation_pd_torque(err, s.arm.omega, kp, kd)
                s.arm = arm_step(s.arm, arm_params, f_u, f_ext, tau_o, dt)

                # force the arm exerts on the environment, mapped to the platform
                reflected = -(omega @ contact_arm)
                records.append((attractor, f_u, f_ext, reflected, contact.normal_magnitude, math.sqrt(err @ err)))

            if obj is not None and not obj.fixed:
                net = object_force + obj_weight + _active_force(windows, k, ImpulseTarget.OBJECT)
                if resting and net[2] > 0:
                    resting = False
                    logger.info("t=%.3f s: object lifted", t1)
                if not resting:
                    obj_velocity = obj_velocity + net / obj.mass * dt
                    obj_center = obj_center + obj_velocity * dt
                    if obj_center[2] - obj.half_extents[2] <= table_z and obj_velocity[2] <= 0:
                        obj_center[2] = table_z + obj.half_extents[2]
                        obj_velocity = np.zeros(3)
                        resting = True
                        logger.info("t=%.3f s: object set down", t1)
                if not (np.all(np.isfinite(obj_center)) and np.all(np.isfinite(obj_velocity))):
                    raise SimulationFault("object state became non-finite")

            for s, rec in zip(sides, records):
                f_p = channel_transmit(rec[3], config.channel, s.force_channel)
                s.tau_u = platform_inverse_dynamics(params, s.platform, kappa * s.platform.q_ddot, f_p, geometry)
        except SimulationFault as e:
            fault = SimFault(message=e.message, phase=labels[k], t=t1)
            faults.append(fault)
            logger.error("Simulation fault at t=%.6f s (%s): %s", t1, labels[k], e.message)
            break

        parts = [[t1]]
        for s, (attractor, f_u, f_ext, reflected, fn, eo) in zip(sides, records):
            parts += [
                s.platform.q,
                s.platform.tip_force_measured,
                s.arm.x,
                s.arm.x_dot,
                f_u,
                f_ext,
                attractor,
                reflected,
                [fn, eo],
            ]
        parts.append(obj_center)
        rows[k] = np.concatenate(parts)
        done = k + 1

    if not faults:
        logger.info("Scenario %r finished", config.name)
    return SimTrace(
        columns=columns,
        rows=rows[:done].copy(),
        phases=labels[:done],
        dt=dt,
        name=config.name,
        faults=faults,
    )
