"""
Foot-platform telemanipulation simulator.
Exposes the data models and the error hierarchy for easy imports.
"""

from footsim.errors import DomainError, FootsimError, ScenarioParseError, SimulationFault
from footsim.models import (
    ArmDynamicsParams,
    ChannelConfig,
    DampingSpec,
    DhRow,
    GraspObject,
    HumanFootModel,
    KinematicChain,
    MetricsReport,
    PlatformDynamicsParams,
    PlatformJoints,
    ScenarioConfig,
    ScenarioPhase,
    SimFault,
    TelefunctioningPair,
    WorkspaceSummary,
)

__all__ = [
    "FootsimError",
    "DomainError",
    "ScenarioParseError",
    "SimulationFault",
    "ArmDynamicsParams",
    "ChannelConfig",
    "DampingSpec",
    "DhRow",
    "GraspObject",
    "HumanFootModel",
    "KinematicChain",
    "MetricsReport",
    "PlatformDynamicsParams",
    "PlatformJoints",
    "ScenarioConfig",
    "ScenarioPhase",
    "SimFault",
    "TelefunctioningPair",
    "WorkspaceSummary",
]
