"""Tracking and force-transparency RMSE per phase group."""

__all__ = ["DEFAULT_GROUPS", "rmse", "compute_metrics"]

import logging
from typing import Dict, Optional, Sequence

import numpy as np

from footsim.config import CONTACT_PHASES, FREE_PHASES
from footsim.errors import DomainError
from footsim.models import MetricRow, MetricsReport

logger = logging.getLogger(__name__)

DEFAULT_GROUPS: Dict[str, Sequence[str]] = {"free": FREE_PHASES, "contact": CONTACT_PHASES}
AXES = ("x", "y", "z")


def rmse(error: np.ndarray) -> Optional[float]:
    """Root mean square along the first axis; None for no samples."""
    if error.shape[0] == 0:
        return None
    return float(np.sqrt(np.mean(np.square(error))))


def compute_metrics(trace, groups: Optional[Dict[str, Sequence[str]]] = None) -> MetricsReport:
    """
    position_rmse_<side>: attractor minus arm position, per group and axis.
    force_rmse_<side>: measured foot force minus mapped arm force, contact group only.
    Groups without samples are reported with value None.
    """
    if len(trace) == 0:
        raise DomainError("cannot compute metrics of an empty trace")
    groups = groups or DEFAULT_GROUPS
    phases = np.asarray(trace.phases)

    report = MetricsReport()
    for side in ("left", "right"):
        position_error = trace.block(side, ("ax", "ay", "az")) - trace.block(side, ("x", "y", "z"))
        force_error = trace.block(side, ("fx", "fy", "fz")) - trace.block(side, ("fdx", "fdy", "fdz"))

        for group, labels in groups.items():
            mask = np.isin(phases, list(labels))
            if not mask.any():
                logger.warning("No samples in phase group %r", group)
            for i, axis in enumerate(AXES):
                report.rows.append(
                    MetricRow(metric=f"position_rmse_{side}", phase_group=group, axis=axis, value=rmse(position_error[mask, i]))
                )
        if "contact" in groups:
            mask = np.isin(phases, list(groups["contact"]))
            for i, axis in enumerate(AXES):
                report.rows.append(
                    MetricRow(metric=f"force_rmse_{side}", phase_group="contact", axis=axis, value=rmse(force_error[mask, i]))
                )
    return report
