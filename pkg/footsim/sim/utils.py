"""Joint-vector validation, limit policies and unit parsing."""

__all__ = [
    "joint_vector",
    "validate_joints",
    "require_joints",
    "clamp_joints",
    "parse_quantity",
]

import logging
import math
import re
from typing import Optional, Tuple, Union

import numpy as np

from footsim.config import JOINT_NAMES
from footsim.errors import DomainError
from footsim.models import JointLimits, PlatformJoints

logger = logging.getLogger(__name__)

JointsLike = Union[PlatformJoints, np.ndarray, list, tuple]

_DEFAULT_LIMITS = JointLimits()
_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(deg|mm|rad|m)?\s*$")


def joint_vector(q: JointsLike) -> np.ndarray:
    """Returns q as a float array of shape (5,)."""
    if isinstance(q, PlatformJoints):
        return q.as_array()
    arr = np.asarray(q, dtype=float)
    if arr.shape != (5,):
        raise DomainError(f"expected 5 joint values, got shape {arr.shape}")
    return arr


def validate_joints(q: JointsLike, limits: Optional[JointLimits] = None) -> Tuple[bool, str]:
    """Checks finiteness and limits. Returns (is_valid, message)."""
    limits = limits or _DEFAULT_LIMITS
    try:
        arr = joint_vector(q)
    except DomainError as e:
        return False, str(e)

    if not np.all(np.isfinite(arr)):
        return False, "joint values must be finite"

    for name, value, lo, hi in zip(JOINT_NAMES, arr, limits.lower, limits.upper):
        if value < lo or value > hi:
            return False, f"joint {name} = {value:.6g} outside limits [{lo:.6g}, {hi:.6g}]"

    return True, "Joints within limits"


def require_joints(q: JointsLike, limits: Optional[JointLimits] = None) -> np.ndarray:
    """Like validate_joints but raises DomainError; returns the joint array."""
    ok, message = validate_joints(q, limits)
    if not ok:
        raise DomainError(message)
    return joint_vector(q)


def clamp_joints(q: JointsLike, limits: Optional[JointLimits] = None) -> Tuple[PlatformJoints, np.ndarray]:
    """Clamps q into the limit box. Returns (clamped joints, mask of clamped axes)."""
    limits = limits or _DEFAULT_LIMITS
    arr = joint_vector(q)
    if not np.all(np.isfinite(arr)):
        raise DomainError("joint values must be finite")
    clamped = np.clip(arr, limits.lower_array, limits.upper_array)
    mask = clamped != arr
    if mask.any():
        names = [n for n, m in zip(JOINT_NAMES, mask) if m]
        logger.debug("Clamped joints %s to limits", names)
    return PlatformJoints.from_array(clamped), mask


def parse_quantity(text: str) -> float:
    """
    Parses a CLI number with an optional unit suffix into SI units.
    'deg' converts to radians, 'mm' to meters; 'rad', 'm' and no suffix pass through.
    """
    match = _QUANTITY.match(text)
    if not match:
        raise DomainError(f"cannot parse quantity {text!r}")
    value, unit = float(match.group(1)), match.group(2)
    if unit == "deg":
        return math.radians(value)
    if unit == "mm":
        return value / 1000.0
    return value
