"""
Pydantic models for the simulator - data contracts shared by the sim modules,
scenario files and the CLI.
"""

import math
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from footsim import config

Vec3 = Tuple[float, float, float]
Vec5 = Tuple[float, float, float, float, float]
Mat3 = Tuple[Vec3, Vec3, Vec3]
Knots = List[Tuple[float, float]]


def _finite(values, what: str):
    if not all(math.isfinite(v) for v in np.ravel(np.asarray(values, dtype=float))):
        raise ValueError(f"{what} must be finite")
    return values


# --------------------------------------------------------------------------
# Kinematics
# --------------------------------------------------------------------------


class JointKind(str, Enum):
    """How a DH row consumes its joint value"""

    REVOLUTE_ON_BETA = "RevoluteOnBeta"
    PRISMATIC_ON_D = "PrismaticOnD"
    FIXED = "Fixed"


class DhRow(BaseModel):
    """One line of the DH table: T = Rz(beta) Tz(d) Rx(alpha) Tx(a)"""

    model_config = ConfigDict(frozen=True)

    name: str = ""  # e.g. '3T4', target frame of the row
    beta_offset: float = 0.0
    d_offset: float = 0.0
    alpha: float = 0.0
    a: float = 0.0
    joint_kind: JointKind = JointKind.FIXED

    @model_validator(mode="after")
    def _check_finite(self) -> "DhRow":
        _finite((self.beta_offset, self.d_offset, self.alpha, self.a), f"DH row {self.name!r}")
        return self


class ChainGeometry(BaseModel):
    """Named link constants of the foot platform (meters)"""

    model_config = ConfigDict(frozen=True)

    d2_star: float = config.D2_STAR
    d3: float = config.D3
    a2_star: float = config.A2_STAR
    a3: float = config.A3
    a4: float = config.A4
    d5: float = config.D5
    a6: float = config.A6

    @model_validator(mode="after")
    def _check_finite(self) -> "ChainGeometry":
        _finite(tuple(self.model_dump().values()), "chain geometry")
        return self


_JOINT_ORDER = (
    JointKind.PRISMATIC_ON_D,
    JointKind.PRISMATIC_ON_D,
    JointKind.REVOLUTE_ON_BETA,
    JointKind.REVOLUTE_ON_BETA,
    JointKind.REVOLUTE_ON_BETA,
)


class KinematicChain(BaseModel):
    """Ordered DH rows from the base frame to the pedal tip"""

    model_config = ConfigDict(frozen=True)

    geometry: ChainGeometry = Field(default_factory=ChainGeometry)
    rows: Tuple[DhRow, ...]

    @field_validator("rows")
    @classmethod
    def _check_joint_rows(cls, rows):
        kinds = tuple(r.joint_kind for r in rows if r.joint_kind != JointKind.FIXED)
        if kinds != _JOINT_ORDER:
            raise ValueError(
                "chain needs exactly five joint rows ordered d1, d2 (prismatic), "
                f"theta, phi, psi (revolute); got {[k.value for k in kinds]}"
            )
        return rows

    @property
    def joint_rows(self) -> List[int]:
        """Row indices driven by d1, d2, theta, phi, psi (in that order)"""
        return [i for i, r in enumerate(self.rows) if r.joint_kind != JointKind.FIXED]


class PlatformJoints(BaseModel):
    """Generalized coordinates of one foot platform (m, m, rad, rad, rad)"""

    model_config = ConfigDict(frozen=True)

    d1: float = 0.0
    d2: float = 0.0
    theta: float = 0.0
    phi: float = 0.0
    psi: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.d1, self.d2, self.theta, self.phi, self.psi], dtype=float)

    @classmethod
    def from_array(cls, values) -> "PlatformJoints":
        values = np.asarray(values, dtype=float).reshape(5)
        return cls(**dict(zip(config.JOINT_NAMES, (float(v) for v in values))))


class JointLimits(BaseModel):
    """Closed joint-limit box, lower/upper per joint in chain order"""

    model_config = ConfigDict(frozen=True)

    lower: Vec5 = tuple(config.JOINT_LIMITS[n][0] for n in config.JOINT_NAMES)
    upper: Vec5 = tuple(config.JOINT_LIMITS[n][1] for n in config.JOINT_NAMES)

    @model_validator(mode="after")
    def _check_order(self) -> "JointLimits":
        _finite(self.lower + self.upper, "joint limits")
        for name, lo, hi in zip(config.JOINT_NAMES, self.lower, self.upper):
            if lo > hi:
                raise ValueError(f"joint {name}: lower limit {lo} above upper limit {hi}")
        return self

    @cached_property
    def lower_array(self) -> np.ndarray:
        return np.asarray(self.lower, dtype=float)

    @cached_property
    def upper_array(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=float)

    def with_range(self, joint: str, lo: float, hi: float) -> "JointLimits":
        """Copy with one joint's range replaced"""
        i = config.JOINT_NAMES.index(joint)
        lower, upper = list(self.lower), list(self.upper)
        lower[i], upper[i] = lo, hi
        return JointLimits(lower=tuple(lower), upper=tuple(upper))


class WorkspaceSummary(BaseModel):
    """Reachable-workspace figures of one foot"""

    volume_m3: float
    rect_x_m: float  # x extent (d2 sweep), rotations at zero
    rect_y_m: float  # y extent (d1 sweep), rotations at zero
    height_m: float  # z extent of the sampled tip positions
    voxel_m: float
    samples: int
    sufficient: bool = True  # False when fewer samples than a volume claim needs

    @property
    def rect_area_m2(self) -> float:
        """Area of the prismatic XY rectangle (0.350 m x 0.293 m by default)."""
        return self.rect_x_m * self.rect_y_m


# --------------------------------------------------------------------------
# Platform (haptic master)
# --------------------------------------------------------------------------


class PlatformMode(str, Enum):
    DYNAMIC = "dynamic"
    IDEAL = "ideal"  # massless platform, first-order through the foot damping


class PlatformDynamicsParams(BaseModel):
    """Joint-space model of the haptic device and its actuators"""

    joint_inertias: Vec5 = config.PLATFORM_INERTIAS
    gravity_gains: Vec5 = config.PLATFORM_GRAVITY_GAINS
    motor_torque_constant: float = config.MOTOR_TORQUE_CONSTANT  # k_tau, N*m/A
    transmission_ratios: Vec5 = config.TRANSMISSION_RATIOS
    pulley_radius: float = config.PULLEY_RADIUS
    actuated: Tuple[bool, bool, bool, bool, bool] = config.ACTUATED_JOINTS
    peak_effort: Tuple[Optional[float], ...] = config.PEAK_JOINT_EFFORT
    saturate: bool = True
    mode: PlatformMode = PlatformMode.DYNAMIC
    lock_passive: bool = True
    inertia_compensation: float = Field(default=config.INERTIA_COMPENSATION, ge=0.0, lt=1.0)
    ft_resolution: float = Field(default=config.FT_RESOLUTION, ge=0.0)
    limits: JointLimits = Field(default_factory=JointLimits)

    @model_validator(mode="after")
    def _check_positive(self) -> "PlatformDynamicsParams":
        if any(not (b > 0 and math.isfinite(b)) for b in self.joint_inertias):
            raise ValueError("joint inertias must be positive")
        if not self.motor_torque_constant > 0:
            raise ValueError("motor torque constant must be positive")
        if not self.pulley_radius > 0:
            raise ValueError("pulley radius must be positive")
        if any(not r > 0 for r in self.transmission_ratios):
            raise ValueError("transmission ratios must be positive")
        if len(self.peak_effort) != 5:
            raise ValueError("peak_effort needs one entry per joint")
        if any(p is not None and not p > 0 for p in self.peak_effort):
            raise ValueError("peak efforts must be positive (or null for uncapped)")
        _finite(self.gravity_gains, "gravity gains")
        return self

    @cached_property
    def inertia_array(self) -> np.ndarray:
        return np.asarray(self.joint_inertias, dtype=float)

    @cached_property
    def actuated_mask(self) -> np.ndarray:
        return np.asarray(self.actuated, dtype=bool)

    @cached_property
    def moving_mask(self) -> np.ndarray:
        """Joints integrated by the simulator; passive joints stay put when locked"""
        if self.lock_passive:
            return self.actuated_mask.copy()
        return np.ones(5, dtype=bool)

    @cached_property
    def effort_cap(self) -> np.ndarray:
        return np.array([np.inf if p is None else p for p in self.peak_effort], dtype=float)


class HumanFootModel(BaseModel):
    """Scripted foot: PD coupling to a piecewise-linear joint trajectory"""

    trajectory: Dict[str, Knots] = Field(default_factory=dict)  # joint name -> [(t, value)]
    stiffness: Vec5 = config.FOOT_STIFFNESS
    damping: Vec5 = config.FOOT_DAMPING

    @field_validator("trajectory")
    @classmethod
    def _check_knots(cls, trajectory):
        for joint, knots in trajectory.items():
            if joint not in config.JOINT_NAMES:
                raise ValueError(f"unknown joint {joint!r} (expected one of {config.JOINT_NAMES})")
            if not knots:
                raise ValueError(f"joint {joint}: empty knot list")
            _finite(knots, f"joint {joint} knots")
            times = [t for t, _ in knots]
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ValueError(f"joint {joint}: knot times must be strictly increasing")
        return trajectory

    @model_validator(mode="after")
    def _check_gains(self) -> "HumanFootModel":
        if any(k < 0 for k in self.stiffness) or any(c < 0 for c in self.damping):
            raise ValueError("foot stiffness and damping must be >= 0")
        return self

    @cached_property
    def stiffness_array(self) -> np.ndarray:
        return np.asarray(self.stiffness, dtype=float)

    @cached_property
    def damping_array(self) -> np.ndarray:
        return np.asarray(self.damping, dtype=float)

    def reference_table(self, times) -> np.ndarray:
        """Reference joints at each time, shape (len(times), 5); end values hold outside the knots"""
        times = np.asarray(times, dtype=float)
        table = np.zeros((times.size, 5))
        for i, joint in enumerate(config.JOINT_NAMES):
            knots = self.trajectory.get(joint)
            if knots:
                kt, kv = zip(*knots)
                table[:, i] = np.interp(times, kt, kv)
        return table

    def reference(self, t: float) -> np.ndarray:
        return self.reference_table([t])[0]


# --------------------------------------------------------------------------
# Robot arm
# --------------------------------------------------------------------------


class ArmDynamicsParams(BaseModel):
    """Isotropic Cartesian point mass with isotropic rotational inertia"""

    model_config = ConfigDict(frozen=True)

    mass: float = Field(default=config.ARM_MASS, gt=0.0)
    rotational_inertia: float = Field(default=config.ARM_ROTATIONAL_INERTIA, gt=0.0)
    gravity: Vec3 = config.GRAVITY

    @cached_property
    def gravity_array(self) -> np.ndarray:
        return np.asarray(self.gravity, dtype=float)

    @cached_property
    def gravity_compensation(self) -> np.ndarray:
        """G = -m*gravity, the force that cancels the weight"""
        return -(self.mass * self.gravity_array)


class DampingSpec(BaseModel):
    """Eigenvalues of the velocity-aligned damping matrix (N*s/m), task direction first"""

    model_config = ConfigDict(frozen=True)

    lambda1: float = Field(default=config.DAMPING_EIGENVALUES[0], gt=0.0)
    lambda2: float = Field(default=config.DAMPING_EIGENVALUES[1], gt=0.0)
    lambda3: float = Field(default=config.DAMPING_EIGENVALUES[2], gt=0.0)

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return np.array([self.lambda1, self.lambda2, self.lambda3], dtype=float)


class ArmConfig(BaseModel):
    """Arm dynamics plus controller gains, as written in a scenario file"""

    mass: float = Field(default=config.ARM_MASS, gt=0.0)
    rotational_inertia: float = Field(default=config.ARM_ROTATIONAL_INERTIA, gt=0.0)
    gravity: Vec3 = config.GRAVITY
    damping: Vec3 = config.DAMPING_EIGENVALUES
    kp: float = Field(default=config.ORIENTATION_KP, ge=0.0)
    kd: float = Field(default=config.ORIENTATION_KD, ge=0.0)
    orientation_target: Vec3 = (0.0, 0.0, 0.0)  # rotation vector (rad) of R_d
    orientation_initial: Vec3 = (0.0, 0.0, 0.0)  # rotation vector (rad) of R at t = 0

    def dynamics(self) -> ArmDynamicsParams:
        return ArmDynamicsParams(mass=self.mass, rotational_inertia=self.rotational_inertia, gravity=self.gravity)

    def damping_spec(self) -> DampingSpec:
        return DampingSpec(lambda1=self.damping[0], lambda2=self.damping[1], lambda3=self.damping[2])


# --------------------------------------------------------------------------
# Teleoperation
# --------------------------------------------------------------------------


class TelefunctioningPair(BaseModel):
    """Position map (platform -> robot) and force map (robot -> platform)"""

    upsilon: Mat3 = tuple(
        tuple(config.POSITION_SCALE if i == j else 0.0 for j in range(3)) for i in range(3)
    )
    omega: Mat3 = tuple(
        tuple(config.FORCE_SCALE[i] if i == j else 0.0 for j in range(3)) for i in range(3)
    )

    @model_validator(mode="after")
    def _check_finite(self) -> "TelefunctioningPair":
        _finite(self.upsilon, "upsilon")
        _finite(self.omega, "omega")
        return self

    @cached_property
    def upsilon_matrix(self) -> np.ndarray:
        return np.asarray(self.upsilon, dtype=float)

    @cached_property
    def omega_matrix(self) -> np.ndarray:
        return np.asarray(self.omega, dtype=float)


class ChannelConfig(BaseModel):
    """In-process communication channel, delay quantized to whole steps"""

    delay: float = Field(default=0.0, ge=0.0)  # s
    sample_period: float = Field(default=config.TIME_STEP, gt=0.0)  # s, set to the scenario dt

    @property
    def delay_steps(self) -> int:
        return int(round(self.delay / self.sample_period))


class GraspObject(BaseModel):
    """Axis-aligned box the arms squeeze (virtual walls)"""

    center: Vec3 = (0.0, 0.0, 0.0)
    half_extents: Vec3 = config.OBJECT_HALF_EXTENTS
    wall_stiffness: float = Field(default=config.WALL_STIFFNESS, gt=0.0)
    wall_damping: float = Field(default=config.WALL_DAMPING, ge=0.0)
    mass: float = Field(default=config.OBJECT_MASS, gt=0.0)
    friction_coefficient: float = Field(default=config.FRICTION_COEFFICIENT, ge=0.0)
    tangential_stiffness: float = Field(default=config.TANGENTIAL_STIFFNESS, ge=0.0)
    tangential_damping: float = Field(default=config.TANGENTIAL_DAMPING, ge=0.0)
    fixed: bool = False  # static wall, never moves

    @field_validator("half_extents")
    @classmethod
    def _check_extents(cls, v):
        if any(not h > 0 for h in v):
            raise ValueError("half extents must be positive")
        return v

    @cached_property
    def half_extents_array(self) -> np.ndarray:
        return np.asarray(self.half_extents, dtype=float)


class PhaseLabel(str, Enum):
    A_IDLE = "a_idle"
    B_RETRIEVE = "b_retrieve"
    C_GRASP_LIFT = "c_grasp_lift"
    D_WORK = "d_work"
    E_DISTURB = "e_disturb"
    F_RETREAT = "f_retreat"


class ScenarioPhase(BaseModel):
    label: PhaseLabel
    start: float = Field(ge=0.0)
    end: float

    @model_validator(mode="after")
    def _check_span(self) -> "ScenarioPhase":
        if not self.end > self.start:
            raise ValueError(f"phase {self.label.value}: end must be after start")
        return self


class ImpulseTarget(str, Enum):
    OBJECT = "object"
    LEFT = "left"
    RIGHT = "right"


class ImpulseDisturbance(BaseModel):
    """Constant world-frame force applied over a short window"""

    start: float = Field(ge=0.0)
    duration: float = Field(default=config.IMPULSE_DURATION, gt=0.0)
    force: Vec3 = (0.0, 0.0, -config.IMPULSE_FORCE)
    target: ImpulseTarget = ImpulseTarget.OBJECT


class SideConfig(BaseModel):
    """Placement of one arm in the world frame, optional own foot trajectory"""

    base: Vec3
    mirror: bool = False  # reflect the x axis of the arm frame
    trajectory: Optional[Dict[str, Knots]] = None


def _reference_phases() -> List["ScenarioPhase"]:
    bounds = ((0.0, 4.0), (4.0, 16.0), (16.0, 28.0), (28.0, 38.0), (38.0, 48.0), (48.0, 60.0))
    return [ScenarioPhase(label=label, start=s, end=e) for label, (s, e) in zip(PhaseLabel, bounds)]


class ScenarioConfig(BaseModel):
    """Complete description of one bipedal teleoperation run"""

    name: str = "scenario"
    duration: float = Field(gt=0.0)
    dt: float = Field(default=config.TIME_STEP, gt=0.0, le=config.MAX_TIME_STEP)
    telefunctioning: TelefunctioningPair = Field(default_factory=TelefunctioningPair)
    channel: ChannelConfig = Field(default_factory=ChannelConfig)
    platform: PlatformDynamicsParams = Field(default_factory=PlatformDynamicsParams)
    human: HumanFootModel = Field(default_factory=HumanFootModel)
    arm: ArmConfig = Field(default_factory=ArmConfig)
    object: Optional[GraspObject] = None
    phases: List[ScenarioPhase] = Field(default_factory=_reference_phases)
    left: SideConfig = Field(default_factory=lambda: SideConfig(base=(-0.25, -1.5, -1.415), mirror=True))
    right: SideConfig = Field(default_factory=lambda: SideConfig(base=(0.25, -1.5, -1.415)))
    disturbances: List[ImpulseDisturbance] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_consistency(self) -> "ScenarioConfig":
        if not self.phases:
            raise ValueError("at least one phase is required")
        order = list(PhaseLabel)
        if abs(self.phases[0].start) > 1e-9:
            raise ValueError("first phase must start at t = 0")
        for prev, cur in zip(self.phases, self.phases[1:]):
            if order.index(cur.label) <= order.index(prev.label):
                raise ValueError(f"phase {cur.label.value} out of order after {prev.label.value}")
            if abs(cur.start - prev.end) > 1e-9:
                raise ValueError(f"phase {cur.label.value} does not start where {prev.label.value} ends")
        if self.phases[-1].end < self.duration - 1e-9:
            raise ValueError("phases must cover the whole duration")
        if "sample_period" not in self.channel.model_fields_set:
            self.channel = self.channel.model_copy(update={"sample_period": self.dt})
        elif abs(self.channel.sample_period - self.dt) > 1e-12:
            raise ValueError(f"channel sample_period {self.channel.sample_period} must equal dt {self.dt}")
        if self.platform.mode == PlatformMode.IDEAL:
            moving = self.platform.moving_mask
            if any(c <= 0 for c, m in zip(self.human.damping, moving) if m):
                raise ValueError("ideal platform mode needs positive foot damping on every moving joint")
        return self

    def human_for(self, side: str) -> HumanFootModel:
        """Foot model of one side; a side trajectory replaces the shared one"""
        own = getattr(self, side).trajectory
        if own is None:
            return self.human
        return self.human.model_copy(update={"trajectory": own})


# --------------------------------------------------------------------------
# Results
# --------------------------------------------------------------------------


class SimFault(BaseModel):
    """Diagnostic record of a run stopped by a non-finite state"""

    message: str
    phase: str
    t: float


class MetricRow(BaseModel):
    metric: str  # e.g. 'position_rmse_right'
    phase_group: str  # 'free' or 'contact'
    axis: str  # 'x', 'y' or 'z'
    value: Optional[float] = None  # None when the phase group has no samples


class MetricsReport(BaseModel):
    rows: List[MetricRow] = Field(default_factory=list)

    def get(self, metric: str, phase_group: str, axis: str) -> Optional[float]:
        for row in self.rows:
            if (row.metric, row.phase_group, row.axis) == (metric, phase_group, axis):
                return row.value
        return None
