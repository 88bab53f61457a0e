"""
Haptic master: joint-space dynamics of one foot platform driven by a scripted foot.

The plant integrated is  b * qdd = tau_d - tau_u + g(q), with tau_d the foot
torque and tau_u the actuator torque. g is the joint-space load of the
mechanism's weight; the inverse-dynamics command adds +g to compensate it.
"""

__all__ = [
    "PlatformState",
    "initial_platform_state",
    "gravity_torque",
    "platform_inverse_dynamics",
    "platform_step",
    "foot_force",
    "torque_to_current",
    "current_to_torque",
]

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from footsim.config import JOINT_NAMES, MAX_TIME_STEP, PRISMATIC_JOINTS
from footsim.errors import DomainError, SimulationFault
from footsim.models import ChainGeometry, HumanFootModel, PlatformDynamicsParams, PlatformMode
from footsim.sim.kinematics import translational_jacobian
from footsim.sim.utils import JointsLike, joint_vector

logger = logging.getLogger(__name__)

_REVOLUTE = np.array([name not in PRISMATIC_JOINTS for name in JOINT_NAMES])


@dataclass
class PlatformState:
    """Per-step platform state; a plain dataclass since it is rebuilt every step"""

    q: np.ndarray  # (5,) joints
    q_dot: np.ndarray = field(default_factory=lambda: np.zeros(5))
    q_ddot: np.ndarray = field(default_factory=lambda: np.zeros(5))  # last computed acceleration
    tip_force_measured: np.ndarray = field(default_factory=lambda: np.zeros(3))  # monitored foot force
    foot_torque: np.ndarray = field(default_factory=lambda: np.zeros(5))  # tau_d of the last step
    t: float = 0.0
    jacobian: Optional[np.ndarray] = None  # translational Jacobian at q, filled on first use


def initial_platform_state(params: PlatformDynamicsParams, q: JointsLike, t: float = 0.0) -> PlatformState:
    """Platform at rest at q (clamped into the limits)."""
    q0 = np.clip(joint_vector(q), params.limits.lower_array, params.limits.upper_array)
    return PlatformState(q=q0, t=t)


def _state_jacobian(state: PlatformState, geometry: Optional[ChainGeometry]) -> np.ndarray:
    if state.jacobian is None:
        state.jacobian = translational_jacobian(state.q, geometry)
    return state.jacobian


def gravity_torque(params: PlatformDynamicsParams, q: np.ndarray) -> np.ndarray:
    """g(q): constant load on the slides, lever-arm (cos) load on the rotations."""
    gains = np.asarray(params.gravity_gains, dtype=float)
    if not gains.any():
        return np.zeros(5)
    return gains * np.where(_REVOLUTE, np.cos(q), 1.0)


def platform_inverse_dynamics(
    params: PlatformDynamicsParams,
    state: PlatformState,
    q_ddot_est: np.ndarray,
    reflected_force: np.ndarray,
    geometry: Optional[ChainGeometry] = None,
) -> np.ndarray:
    """
    Actuator torques tau_u = -b*qdd + g(q) + J^T F for a reflected tip force F
    (already mapped through the force telefunctioning matrix).
    """
    jac = _state_jacobian(state, geometry)
    tau = gravity_torque(params, state.q) + jac.T @ np.asarray(reflected_force, dtype=float)
    if params.mode == PlatformMode.DYNAMIC:
        tau = tau - params.inertia_array * np.asarray(q_ddot_est, dtype=float)
    return tau


def foot_force(
    params: PlatformDynamicsParams,
    q: np.ndarray,
    foot_torque: np.ndarray,
    geometry: Optional[ChainGeometry] = None,
    jacobian: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Tip force equivalent to the foot torque on the moving joints (J^T pseudo-inverse)."""
    moving = params.moving_mask
    if jacobian is None:
        jacobian = translational_jacobian(q, geometry)
    jac = jacobian[:, moving]
    tau = foot_torque[moving]
    force = None
    if jac.shape[1] >= 3:
        # least squares through the normal equations; full row rank inside the limits
        try:
            force = np.linalg.solve(jac @ jac.T, jac @ tau)
        except np.linalg.LinAlgError:
            force = None
    if force is None:
        force = np.linalg.pinv(jac.T) @ tau
    if params.ft_resolution > 0:
        force = np.round(force / params.ft_resolution) * params.ft_resolution
    return force


def _actuator_torque(params: PlatformDynamicsParams, tau_u: np.ndarray) -> np.ndarray:
    tau = np.where(params.actuated_mask, tau_u, 0.0)
    if params.saturate:
        cap = params.effort_cap
        tau = np.clip(tau, -cap, cap)
    return tau


def platform_step(
    params: PlatformDynamicsParams,
    state: PlatformState,
    human: HumanFootModel,
    tau_u: np.ndarray,
    dt: float,
    *,
    q_ref: Optional[np.ndarray] = None,
    geometry: Optional[ChainGeometry] = None,
) -> PlatformState:
    """
    Advances the platform by one semi-implicit Euler step.

    q_ref overrides the foot reference at the state's time (precomputed tables).
    Joints leaving the limits are clamped and their velocity zeroed.
    """
    if not 0 < dt <= MAX_TIME_STEP:
        raise DomainError(f"time step must be in (0, {MAX_TIME_STEP}] s, got {dt}")

    if q_ref is None:
        q_ref = human.reference(state.t)
    moving = params.moving_mask
    tau_a = _actuator_torque(params, np.asarray(tau_u, dtype=float))
    load = gravity_torque(params, state.q)
    spring = human.stiffness_array * (q_ref - state.q)

    if params.mode == PlatformMode.IDEAL:
        # massless: the foot damping alone balances the remaining torques
        damping = human.damping_array
        q_dot = np.zeros(5)
        np.divide(spring - tau_a + load, damping, out=q_dot, where=moving & (damping > 0))
        q_dot[~moving] = 0.0
        foot_torque = spring - damping * q_dot
        q_ddot = (q_dot - state.q_dot) / dt
    else:
        foot_torque = spring - human.damping_array * state.q_dot
        q_ddot = np.where(moving, (foot_torque - tau_a + load) / params.inertia_array, 0.0)
        q_dot = np.where(moving, state.q_dot + q_ddot * dt, 0.0)

    q = state.q + q_dot * dt
    lower, upper = params.limits.lower_array, params.limits.upper_array
    hit = (q < lower) | (q > upper)
    if hit.any():
        q = np.clip(q, lower, upper)
        q_dot = np.where(hit, 0.0, q_dot)
        q_ddot = np.where(hit, 0.0, q_ddot)

    measured = foot_force(params, state.q, foot_torque, geometry, _state_jacobian(state, geometry))

    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(q_dot)) and np.all(np.isfinite(measured))):
        raise SimulationFault(f"platform state became non-finite at t={state.t + dt:.6f}", t=state.t + dt)

    return PlatformState(
        q=q,
        q_dot=q_dot,
        q_ddot=q_ddot,
        tip_force_measured=measured,
        foot_torque=foot_torque,
        t=state.t + dt,
    )


def _effective_ratio(params: PlatformDynamicsParams, joint_index: int) -> float:
    if not 0 <= joint_index < 5:
        raise DomainError(f"joint index must be in 0..4, got {joint_index}")
    if not params.actuated[joint_index]:
        raise DomainError(f"joint {JOINT_NAMES[joint_index]} is passive, it has no motor current")
    ratio = params.transmission_ratios[joint_index]
    if JOINT_NAMES[joint_index] in PRISMATIC_JOINTS:
        # belt pulley turns the slide force into motor torque
        return ratio / params.pulley_radius
    return ratio


def torque_to_current(params: PlatformDynamicsParams, tau: float, joint_index: int) -> float:
    """Motor current (A) producing joint effort tau: i = tau / (k_tau * ratio)."""
    return tau / (params.motor_torque_constant * _effective_ratio(params, joint_index))


def current_to_torque(params: PlatformDynamicsParams, current: float, joint_index: int) -> float:
    """Joint effort produced by a motor current: tau = k_tau * ratio * i."""
    return params.motor_torque_constant * _effective_ratio(params, joint_index) * current
