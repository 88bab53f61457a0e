"""
Simulation package initialization.
Exposes kinematics, platform, robot, teleoperation and analysis functions.
"""

from footsim.sim.contact import ContactSite, contact_force, penetration
from footsim.sim.kinematics import (
    LimitPolicy,
    RigidTransform,
    build_chain,
    closed_form_tip,
    default_chain,
    dh_transform,
    forward_kinematics,
    tip_frame,
    translational_jacobian,
)
from footsim.sim.metrics import compute_metrics
from footsim.sim.platform import (
    PlatformState,
    current_to_torque,
    platform_inverse_dynamics,
    platform_step,
    torque_to_current,
)
from footsim.sim.robot import (
    ArmState,
    arm_step,
    damping_matrix,
    ds_desired_velocity,
    impedance_control_force,
    orientation_error,
    orientation_pd_torque,
)
from footsim.sim.scenario_file import load_scenario, parse_scenario
from footsim.sim.teleop import SimTrace, channel_transmit, run_scenario
from footsim.sim.trace_io import read_trace, write_metrics, write_trace
from footsim.sim.utils import clamp_joints, require_joints, validate_joints
from footsim.sim.workspace import sample_workspace

__all__ = [
    "LimitPolicy",
    "RigidTransform",
    "build_chain",
    "default_chain",
    "dh_transform",
    "forward_kinematics",
    "tip_frame",
    "closed_form_tip",
    "translational_jacobian",
    "sample_workspace",
    "validate_joints",
    "require_joints",
    "clamp_joints",
    "PlatformState",
    "platform_inverse_dynamics",
    "platform_step",
    "torque_to_current",
    "current_to_torque",
    "ArmState",
    "ds_desired_velocity",
    "damping_matrix",
    "impedance_control_force",
    "orientation_error",
    "orientation_pd_torque",
    "arm_step",
    "ContactSite",
    "contact_force",
    "penetration",
    "SimTrace",
    "channel_transmit",
    "run_scenario",
    "compute_metrics",
    "load_scenario",
    "parse_scenario",
    "read_trace",
    "write_trace",
    "write_metrics",
]
