"""
Telemanipulator side: DS attractor, velocity-aligned damping, impedance law,
orientation PD and the Cartesian point-mass arm.
"""

__all__ = [
    "ArmState",
    "initial_arm_state",
    "ds_desired_velocity",
    "damping_basis",
    "damping_from_basis",
    "damping_matrix",
    "impedance_control_force",
    "orientation_error",
    "orientation_pd_torque",
    "arm_step",
]

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation

from footsim.config import DIRECTION_EPSILON, MAX_TIME_STEP, PI_AXIS_TOLERANCE, ROTATION_DRIFT_TOLERANCE
from footsim.errors import DomainError, SimulationFault
from footsim.models import ArmDynamicsParams, DampingSpec

logger = logging.getLogger(__name__)


@dataclass
class ArmState:
    """Per-step arm state; a plain dataclass since it is rebuilt every step"""

    x: np.ndarray
    x_dot: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    omega: np.ndarray = field(default_factory=lambda: np.zeros(3))


def initial_arm_state(x, rotvec=(0.0, 0.0, 0.0)) -> ArmState:
    """Arm at rest at x with orientation given as a rotation vector."""
    return ArmState(x=np.asarray(x, dtype=float).copy(), rotation=Rotation.from_rotvec(rotvec).as_matrix())


def ds_desired_velocity(x_p: np.ndarray, x_r: np.ndarray, upsilon: np.ndarray) -> np.ndarray:
    """Linear DS with attractor upsilon @ x_p: desired velocity upsilon @ x_p - x_r."""
    return upsilon @ x_p - x_r


def damping_basis(direction: np.ndarray, previous_basis: np.ndarray) -> np.ndarray:
    """
    Orthonormal basis whose first column is the unit direction.
    The other two columns follow the previous basis; a degenerate direction keeps it.
    """
    norm = math.sqrt(direction @ direction)
    if norm < DIRECTION_EPSILON:
        return previous_basis
    e1 = direction / norm

    # Gram-Schmidt against the previous second axis, or the least aligned world axis
    helper = previous_basis[:, 1]
    e2 = helper - (helper @ e1) * e1
    if e2 @ e2 < 0.01:
        helper = np.eye(3)[np.argmin(np.abs(e1))]
        e2 = helper - (helper @ e1) * e1
    e2 /= math.sqrt(e2 @ e2)
    e3 = np.cross(e1, e2)
    return np.column_stack((e1, e2, e3))


def damping_from_basis(basis: np.ndarray, damping_spec: DampingSpec) -> np.ndarray:
    d = (basis * damping_spec.eigenvalues) @ basis.T
    return 0.5 * (d + d.T)


def damping_matrix(xd_dot: np.ndarray, damping_spec: DampingSpec, previous_basis: np.ndarray) -> np.ndarray:
    """D = Q diag(lambda) Q^T with Q's first column along the desired velocity."""
    return damping_from_basis(damping_basis(xd_dot, previous_basis), damping_spec)


def impedance_control_force(
    damping: np.ndarray, xd_dot: np.ndarray, x_dot: np.ndarray, params: ArmDynamicsParams
) -> np.ndarray:
    """F_u = D (xd_dot - x_dot) + G"""
    return damping @ (xd_dot - x_dot) + params.gravity_compensation


def _vee(m: np.ndarray) -> np.ndarray:
    return np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])


def _log_map(r: np.ndarray) -> np.ndarray:
    """Rotation vector of a rotation matrix."""
    v = _vee(r)
    s = 0.5 * math.sqrt(v @ v)
    c = 0.5 * (r[0, 0] + r[1, 1] + r[2, 2] - 1.0)
    angle = math.atan2(s, c)
    if s > 1e-6:
        return (angle / (2.0 * s)) * v
    if c > 0:
        return 0.5 * v
    # near pi: axis from the symmetric part, sign from the skew part
    outer = (0.5 * (r + r.T) - c * np.eye(3)) / (1.0 - c)
    i = int(np.argmax(np.diag(outer)))
    axis = outer[:, i] / math.sqrt(outer[i, i])
    axis /= np.linalg.norm(axis)
    if axis @ v < 0:
        axis = -axis
    return angle * axis


def _exp_map(v: np.ndarray) -> np.ndarray:
    """Rotation matrix of a rotation vector (Rodrigues)."""
    angle = math.sqrt(v @ v)
    k = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
    if angle < 1e-12:
        return np.eye(3) + k
    return np.eye(3) + (math.sin(angle) / angle) * k + ((1.0 - math.cos(angle)) / angle**2) * (k @ k)


def orientation_error(rotation: np.ndarray, target: np.ndarray) -> np.ndarray:
    """
    Axis-angle of target @ rotation^T.
    At an angle of pi the axis sign is fixed so its largest-magnitude component is positive.
    """
    err = _log_map(target @ rotation.T)
    angle = math.sqrt(err @ err)
    if abs(angle - np.pi) < PI_AXIS_TOLERANCE and err[np.argmax(np.abs(err))] < 0:
        err = -err
    return err


def orientation_pd_torque(err: np.ndarray, omega: np.ndarray, kp: float, kd: float) -> np.ndarray:
    if kp < 0 or kd < 0:
        raise DomainError("orientation gains must be >= 0")
    return kp * err - kd * omega


def _orthonormalize(rotation: np.ndarray) -> np.ndarray:
    u, _, vt = np.linalg.svd(rotation)
    r = u @ vt
    if np.linalg.det(r) < 0:
        u[:, -1] = -u[:, -1]
        r = u @ vt
    return r


def arm_step(
    state: ArmState,
    params: ArmDynamicsParams,
    f_u: np.ndarray,
    f_ext: np.ndarray,
    tau_orient: np.ndarray,
    dt: float,
) -> ArmState:
    """m*xdd = F_u + F_ext + m*gravity, velocity first then position; world-frame omega."""
    if not 0 < dt <= MAX_TIME_STEP:
        raise DomainError(f"time step must be in (0, {MAX_TIME_STEP}] s, got {dt}")

    accel = (f_u + f_ext + params.mass * params.gravity_array) / params.mass
    x_dot = state.x_dot + accel * dt
    x = state.x + x_dot * dt

    omega = state.omega + tau_orient / params.rotational_inertia * dt
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(x_dot)) and np.all(np.isfinite(omega))):
        raise SimulationFault("arm state became non-finite")

    rotation = _exp_map(omega * dt) @ state.rotation
    if np.abs(rotation.T @ rotation - np.eye(3)).max() > ROTATION_DRIFT_TOLERANCE:
        rotation = _orthonormalize(rotation)
    return ArmState(x=x, x_dot=x_dot, rotation=rotation, omega=omega)
