"""
Reachable-workspace estimate of one foot platform.

The rotational joints are sampled and their tip offsets voxelized; the two
prismatic slides then sweep every voxel layer over an exact rectangle, applied
as a max-filter dilation of the occupancy grid.
"""

__all__ = ["WorkspaceResult", "sample_workspace", "prismatic_rectangle"]

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import ndimage
from scipy.spatial import ConvexHull, QhullError

from footsim.config import (
    WORKSPACE_BATCH,
    WORKSPACE_CLOUD_POINTS,
    WORKSPACE_MIN_SAMPLES,
    WORKSPACE_SAMPLES,
    WORKSPACE_SEED,
    WORKSPACE_VOXEL,
)
from footsim.errors import DomainError
from footsim.models import JointLimits, KinematicChain, WorkspaceSummary
from footsim.sim.kinematics import default_chain, tip_positions

logger = logging.getLogger(__name__)


@dataclass
class WorkspaceResult:
    cloud: np.ndarray  # (N, 3) tip positions of full random configurations
    summary: WorkspaceSummary
    hull_volume_m3: Optional[float] = None  # convex hull of the cloud, for comparison


def prismatic_rectangle(chain: KinematicChain, limits: JointLimits) -> Tuple[float, float]:
    """(x, y) extent of the tip over the d1 x d2 limit box with the rotations at zero."""
    lo, hi = limits.lower_array, limits.upper_array
    corners = np.zeros((4, 5))
    corners[:, 0] = (lo[0], lo[0], hi[0], hi[0])
    corners[:, 1] = (lo[1], hi[1], lo[1], hi[1])
    tips = tip_positions(corners, chain.geometry)
    extent = tips.max(axis=0) - tips.min(axis=0)
    return float(extent[0]), float(extent[1])


def _rotation_samples(
    limits: JointLimits,
    samples: Optional[int],
    samples_per_axis: Optional[int],
    freeze_rotations: bool,
    rng: np.random.Generator,
) -> np.ndarray:
    lo, hi = limits.lower_array[2:], limits.upper_array[2:]
    if freeze_rotations:
        return np.clip(np.zeros((1, 3)), lo, hi)
    if samples_per_axis is not None:
        axes = [np.linspace(a, b, samples_per_axis) for a, b in zip(lo, hi)]
        grid = np.meshgrid(*axes, indexing="ij")
        return np.column_stack([g.ravel() for g in grid])
    return rng.uniform(lo, hi, size=(samples, 3))


def _offsets(chain: KinematicChain, rotations: np.ndarray, center: np.ndarray) -> np.ndarray:
    joints = np.zeros((rotations.shape[0], 5))
    joints[:, 0] = center[1]
    joints[:, 1] = center[0]
    joints[:, 2:] = rotations
    return tip_positions(joints, chain.geometry)


def sample_workspace(
    chain: Optional[KinematicChain] = None,
    *,
    samples: Optional[int] = WORKSPACE_SAMPLES,
    samples_per_axis: Optional[int] = None,
    voxel: float = WORKSPACE_VOXEL,
    limits: Optional[JointLimits] = None,
    freeze_rotations: bool = False,
    seed: int = WORKSPACE_SEED,
    cloud_points: int = WORKSPACE_CLOUD_POINTS,
    workers: int = 1,
) -> WorkspaceResult:
    """
    Estimates the workspace volume by voxel occupancy.

    Monte Carlo over the rotations by default; a regular grid when samples_per_axis
    is given. Batches may be evaluated by several workers; their occupancy is
    combined in batch order so the result does not depend on the worker count.
    """
    chain = chain or default_chain()
    limits = limits or JointLimits()

    if not voxel > 0:
        raise DomainError(f"voxel size must be positive, got {voxel}")
    if samples_per_axis is not None:
        if samples_per_axis < 1:
            raise DomainError("samples_per_axis must be at least 1")
        total = samples_per_axis**3
    else:
        if samples is None or samples < 1:
            raise DomainError("sample count must be at least 1")
        total = samples
    if workers < 1:
        raise DomainError("workers must be at least 1")

    rng = np.random.default_rng(seed)
    rotations = _rotation_samples(limits, samples, samples_per_axis, freeze_rotations, rng)
    if not freeze_rotations and total < WORKSPACE_MIN_SAMPLES:
        logger.warning("Only %d rotation samples, volume estimate is not reliable", total)

    lo, hi = limits.lower_array, limits.upper_array
    # x follows d2, y follows d1
    span = np.array([hi[1] - lo[1], hi[0] - lo[0]])
    center = np.array([(hi[1] + lo[1]) / 2, (hi[0] + lo[0]) / 2])

    batches = [rotations[i : i + WORKSPACE_BATCH] for i in range(0, rotations.shape[0], WORKSPACE_BATCH)]
    if workers > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _offsets(chain, b, center), batches))
    else:
        parts = [_offsets(chain, b, center) for b in batches]
    points = np.concatenate(parts)

    # cells on an absolute lattice, padded by half the prismatic rectangle plus one voxel
    cells = np.floor(points / voxel).astype(np.int64)
    pad = np.array([int(np.ceil(span[0] / 2 / voxel)) + 1, int(np.ceil(span[1] / 2 / voxel)) + 1, 1])
    index = cells - cells.min(axis=0) + pad
    shape = tuple(int(n) for n in index.max(axis=0) + pad + 1)

    occupied = np.zeros(shape, dtype=np.uint8)
    occupied[index[:, 0], index[:, 1], index[:, 2]] = 1

    kernel = (int(round(span[0] / voxel)) + 1, int(round(span[1] / voxel)) + 1, 1)
    swept = ndimage.maximum_filter(occupied, size=kernel, mode="constant", cval=0)
    count = int(np.count_nonzero(swept))
    volume = count * voxel**3

    rect_x, rect_y = prismatic_rectangle(chain, limits)
    height = float(points[:, 2].max() - points[:, 2].min())

    cloud_rng = np.random.default_rng(seed + 1)
    cloud = tip_positions(cloud_rng.uniform(lo, hi, size=(cloud_points, 5)), chain.geometry)

    hull_volume = None
    if cloud_points >= 4:
        try:
            hull_volume = float(ConvexHull(cloud).volume)
        except QhullError:
            hull_volume = 0.0  # flat or degenerate cloud

    summary = WorkspaceSummary(
        volume_m3=volume,
        rect_x_m=rect_x,
        rect_y_m=rect_y,
        height_m=height,
        voxel_m=voxel,
        samples=int(rotations.shape[0]),
        sufficient=freeze_rotations or total >= WORKSPACE_MIN_SAMPLES,
    )
    logger.info("Workspace: %d voxels occupied, volume %.4f m^3", count, volume)
    return WorkspaceResult(cloud=cloud, summary=summary, hull_volume_m3=hull_volume)
