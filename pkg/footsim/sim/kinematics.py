"""DH kinematic chain of the foot platform: row transforms, FK, closed-form tip and Jacobian."""

__all__ = [
    "LimitPolicy",
    "RigidTransform",
    "build_chain",
    "default_chain",
    "dh_transform",
    "forward_kinematics",
    "tip_frame",
    "closed_form_tip",
    "tip_positions",
    "translational_jacobian",
]

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import List, Optional

import numpy as np

from footsim.config import RIGID_TOLERANCE
from footsim.errors import DomainError
from footsim.models import ChainGeometry, DhRow, JointKind, JointLimits, KinematicChain
from footsim.sim.utils import JointsLike, clamp_joints, joint_vector, require_joints

logger = logging.getLogger(__name__)


class LimitPolicy(str, Enum):
    VALIDATE = "validate"  # reject out-of-limit joints
    CLAMP = "clamp"  # clamp into the limit box
    UNCHECKED = "unchecked"  # evaluate as given (analysis only)


@dataclass(frozen=True)
class RigidTransform:
    """Rotation (3x3, orthonormal) plus translation (m)."""

    rotation: np.ndarray
    translation: np.ndarray

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "RigidTransform":
        matrix = np.asarray(matrix, dtype=float)
        return cls(matrix[:3, :3].copy(), matrix[:3, 3].copy())

    def matrix(self) -> np.ndarray:
        """4x4 homogeneous form"""
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m

    def compose(self, other: "RigidTransform") -> "RigidTransform":
        """self * other"""
        return RigidTransform(self.rotation @ other.rotation, self.rotation @ other.translation + self.translation)

    def inverse(self) -> "RigidTransform":
        rt = self.rotation.T
        return RigidTransform(rt, -(rt @ self.translation))

    def is_rigid(self, tol: float = RIGID_TOLERANCE) -> bool:
        r = self.rotation
        ortho = np.max(np.abs(r.T @ r - np.eye(3)))
        return bool(ortho <= tol and abs(np.linalg.det(r) - 1.0) <= tol)


def build_chain(geometry: Optional[ChainGeometry] = None) -> KinematicChain:
    """
    DH table of the foot platform, base frame to pedal tip.
    Nine rows: the three starred rows and the first/last fixed rows only reshape frames.
    """
    g = geometry or ChainGeometry()
    half_pi = math.pi / 2
    rows = (
        DhRow(name="1", alpha=-half_pi),
        DhRow(name="2", beta_offset=-half_pi, alpha=-half_pi, joint_kind=JointKind.PRISMATIC_ON_D),
        DhRow(name="2*", joint_kind=JointKind.PRISMATIC_ON_D),
        DhRow(name="3", d_offset=g.d2_star, alpha=math.pi, a=g.a2_star),
        DhRow(name="4", d_offset=g.d3, alpha=-half_pi, a=-g.a3, joint_kind=JointKind.REVOLUTE_ON_BETA),
        DhRow(name="4*", alpha=-half_pi, a=g.a4, joint_kind=JointKind.REVOLUTE_ON_BETA),
        DhRow(name="5", beta_offset=half_pi, alpha=half_pi),
        DhRow(name="6", beta_offset=math.pi, d_offset=g.d5, joint_kind=JointKind.REVOLUTE_ON_BETA),
        DhRow(name="7", a=g.a6),
    )
    return KinematicChain(geometry=g, rows=rows)


@lru_cache(maxsize=1)
def default_chain() -> KinematicChain:
    return build_chain()


def dh_transform(row: DhRow, joint_value: float = 0.0) -> RigidTransform:
    """Rz(beta) * Tz(d) * Rx(alpha) * Tx(a), with the joint value added to beta or d."""
    if not math.isfinite(joint_value):
        raise DomainError(f"joint value for row {row.name!r} must be finite, got {joint_value}")

    beta, d = row.beta_offset, row.d_offset
    if row.joint_kind == JointKind.REVOLUTE_ON_BETA:
        beta += joint_value
    elif row.joint_kind == JointKind.PRISMATIC_ON_D:
        d += joint_value

    cb, sb = math.cos(beta), math.sin(beta)
    ca, sa = math.cos(row.alpha), math.sin(row.alpha)
    rotation = np.array(
        [
            [cb, -sb * ca, sb * sa],
            [sb, cb * ca, -cb * sa],
            [0.0, sa, ca],
        ]
    )
    translation = np.array([row.a * cb, row.a * sb, d])
    return RigidTransform(rotation, translation)


def _apply_policy(q: JointsLike, limits: Optional[JointLimits], policy: LimitPolicy) -> np.ndarray:
    if policy == LimitPolicy.VALIDATE:
        return require_joints(q, limits)
    if policy == LimitPolicy.CLAMP:
        clamped, _ = clamp_joints(q, limits)
        return clamped.as_array()
    arr = joint_vector(q)
    if not np.all(np.isfinite(arr)):
        raise DomainError("joint values must be finite")
    return arr


def forward_kinematics(
    chain: KinematicChain,
    q: JointsLike,
    policy: LimitPolicy = LimitPolicy.VALIDATE,
    limits: Optional[JointLimits] = None,
) -> List[RigidTransform]:
    """Frames of every row relative to the base; element k is the product of rows 0..k."""
    values = _apply_policy(q, limits, policy)
    joint_of_row = dict(zip(chain.joint_rows, values))

    frames = []
    current = np.eye(4)
    for i, row in enumerate(chain.rows):
        current = current @ dh_transform(row, float(joint_of_row.get(i, 0.0))).matrix()
        frames.append(RigidTransform.from_matrix(current))
    return frames


def tip_frame(
    chain: KinematicChain,
    q: JointsLike,
    policy: LimitPolicy = LimitPolicy.VALIDATE,
    limits: Optional[JointLimits] = None,
) -> RigidTransform:
    """Pedal-tip frame (last FK frame)"""
    return forward_kinematics(chain, q, policy, limits)[-1]


def _tip_xyz(d1, d2, th, ph, ps, g: ChainGeometry):
    # Works elementwise on scalars or arrays.
    sth, cth = np.sin(th), np.cos(th)
    sph, cph = np.sin(ph), np.cos(ph)
    sps, cps = np.sin(ps), np.cos(ps)
    x = d2 + (g.d5 + g.a3) * sph - g.a6 * sps * cph
    y = d1 + g.d5 * cph * sth + g.a6 * (cth * cps + sps * sth * sph) + g.a3 * sth * (cph - 1.0)
    z = (
        g.a2_star
        - g.a6 * (cps * sth - cth * sph * sps)
        - g.a3 * cth
        + g.d5 * cth * cph
        + g.a3 * cth * cph
    )
    return x, y, z


def closed_form_tip(q: JointsLike, geometry: Optional[ChainGeometry] = None) -> np.ndarray:
    """Pedal tip position from the closed-form expression (no limit check)."""
    d1, d2, th, ph, ps = joint_vector(q)
    x, y, z = _tip_xyz(d1, d2, th, ph, ps, geometry or default_chain().geometry)
    return np.array([x, y, z])


def tip_positions(joints: np.ndarray, geometry: Optional[ChainGeometry] = None) -> np.ndarray:
    """Vectorized closed_form_tip over an (N, 5) array, returns (N, 3)."""
    joints = np.asarray(joints, dtype=float)
    x, y, z = _tip_xyz(*joints.T, geometry or default_chain().geometry)
    return np.column_stack((x, y, z))


def translational_jacobian(q: JointsLike, geometry: Optional[ChainGeometry] = None) -> np.ndarray:
    """3x5 matrix of tip-position derivatives w.r.t. (d1, d2, theta, phi, psi)."""
    g = geometry or default_chain().geometry
    _, _, th, ph, ps = joint_vector(q)
    sth, cth = math.sin(th), math.cos(th)
    sph, cph = math.sin(ph), math.cos(ph)
    sps, cps = math.sin(ps), math.cos(ps)

    jac = np.zeros((3, 5))
    jac[0, 1] = 1.0
    jac[1, 0] = 1.0

    # theta
    jac[1, 2] = g.d5 * cph * cth + g.a6 * (sps * cth * sph - sth * cps) + g.a3 * cth * (cph - 1.0)
    jac[2, 2] = -g.a6 * (cps * cth + sth * sph * sps) + g.a3 * sth - g.d5 * sth * cph - g.a3 * sth * cph
    # phi
    jac[0, 3] = (g.d5 + g.a3) * cph + g.a6 * sps * sph
    jac[1, 3] = -g.d5 * sph * sth + g.a6 * sps * sth * cph - g.a3 * sth * sph
    jac[2, 3] = g.a6 * cth * cph * sps - g.d5 * cth * sph - g.a3 * cth * sph
    # psi
    jac[0, 4] = -g.a6 * cps * cph
    jac[1, 4] = g.a6 * (cps * sth * sph - cth * sps)
    jac[2, 4] = g.a6 * (sps * sth + cth * sph * cps)
    return jac
