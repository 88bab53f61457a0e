"""
Virtual-wall contact between an arm tip and the grasp object.

Normal force: penalty spring along the least-penetrated face normal plus a
damper on the penetration rate, faded in over the first millimeter.
Tangential force: stick spring anchored where contact began, viscous term on
the slip velocity, capped by Coulomb friction; the anchor slides when the cap
is hit.
"""

__all__ = ["ContactForces", "ContactSite", "penetration", "contact_force"]

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from footsim.config import WALL_DAMPING_RAMP
from footsim.models import GraspObject

logger = logging.getLogger(__name__)

_ZERO = np.zeros(3)


@dataclass
class ContactForces:
    """Forces on the arm tip (world frame); the object receives the opposite"""

    normal: np.ndarray = field(default_factory=lambda: np.zeros(3))
    tangential: np.ndarray = field(default_factory=lambda: np.zeros(3))
    normal_magnitude: float = 0.0
    depth: float = 0.0

    @property
    def total(self) -> np.ndarray:
        return self.normal + self.tangential


def penetration(x: np.ndarray, center: np.ndarray, obj: GraspObject) -> Tuple[float, np.ndarray]:
    """(depth, outward normal) of the least-penetrated face; depth 0 outside."""
    rel = np.asarray(x, dtype=float) - center
    gaps = obj.half_extents_array - np.abs(rel)
    if np.any(gaps <= 0):
        return 0.0, _ZERO
    axis = int(np.argmin(gaps))
    normal = np.zeros(3)
    normal[axis] = 1.0 if rel[axis] >= 0 else -1.0
    return float(gaps[axis]), normal


def _normal_force(
    x: np.ndarray, x_dot: np.ndarray, center: np.ndarray, obj_velocity: np.ndarray, obj: GraspObject
) -> Tuple[float, np.ndarray, float]:
    depth, normal = penetration(x, center, obj)
    if depth <= 0:
        return 0.0, _ZERO, 0.0
    entry_rate = max(0.0, -float((x_dot - obj_velocity) @ normal))
    ramp = min(1.0, depth / WALL_DAMPING_RAMP)
    magnitude = obj.wall_stiffness * depth + obj.wall_damping * ramp * entry_rate
    return magnitude, normal, depth


def contact_force(
    x: np.ndarray,
    x_dot: np.ndarray,
    obj: GraspObject,
    center: Optional[np.ndarray] = None,
    obj_velocity: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Normal wall force on a point at x moving with x_dot; zero outside the object."""
    center = np.asarray(obj.center, dtype=float) if center is None else center
    obj_velocity = _ZERO if obj_velocity is None else obj_velocity
    magnitude, normal, _ = _normal_force(np.asarray(x, float), np.asarray(x_dot, float), center, obj_velocity, obj)
    return magnitude * normal


class ContactSite:
    """Contact state of one arm tip against the object (stick anchor, friction mode)."""

    def __init__(self, name: str):
        self.name = name
        self.in_contact = False
        self.sliding = False
        self.anchor: Optional[np.ndarray] = None  # tangential tip offset where sticking began

    def update(
        self,
        x: np.ndarray,
        x_dot: np.ndarray,
        center: np.ndarray,
        obj_velocity: np.ndarray,
        obj: GraspObject,
    ) -> ContactForces:
        magnitude, normal, depth = _normal_force(x, x_dot, center, obj_velocity, obj)
        if depth <= 0:
            if self.in_contact:
                logger.debug("%s: contact released", self.name)
            self.in_contact = False
            self.sliding = False
            self.anchor = None
            return ContactForces()

        rel = x - center
        rel_t = rel - (rel @ normal) * normal
        vel = x_dot - obj_velocity
        vel_t = vel - (vel @ normal) * normal

        if not self.in_contact or self.anchor is None:
            logger.debug("%s: contact made, depth %.4f m", self.name, depth)
            self.in_contact = True
            self.anchor = rel_t.copy()
        # keep the anchor on the current face plane
        anchor_t = self.anchor - (self.anchor @ normal) * normal

        stretch = rel_t - anchor_t
        tangential = -obj.tangential_stiffness * stretch - obj.tangential_damping * vel_t
        cap = obj.friction_coefficient * magnitude
        size = math.sqrt(tangential @ tangential)
        self.sliding = size > cap
        if self.sliding:
            tangential = tangential * (cap / size)
            if obj.tangential_stiffness > 0:
                # slide the anchor so the spring alone carries the capped force
                anchor_t = rel_t + tangential / obj.tangential_stiffness
        self.anchor = anchor_t

        return ContactForces(
            normal=magnitude * normal,
            tangential=tangential,
            normal_magnitude=magnitude,
            depth=depth,
        )
