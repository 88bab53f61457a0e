"""
Simulator configuration constants.
All tunable values are centralized here for easy maintenance.
Scenario files and CLI flags override the simulation defaults; nothing is read
from environment variables.
"""

import math

# Platform Geometry (meters), shared by both feet
D2_STAR = 0.170  # offset along the d2 slide axis to the pitch assembly
D3 = 0.170  # offset back from the pitch assembly to the pedal axis
A2_STAR = 0.243  # height of the pitch axis above the slides
A3 = 0.046  # pitch axis to ankle-roll axis
A4 = 0.046  # ankle-roll axis to yaw axis
D5 = 0.040  # yaw axis to pedal surface
A6 = 0.300  # pedal length to the tip

# Generalized coordinates, in chain order
JOINT_NAMES = ("d1", "d2", "theta", "phi", "psi")
PRISMATIC_JOINTS = ("d1", "d2")

# Joint Limits (meters / radians)
JOINT_LIMITS = {
    "d1": (-0.175, 0.175),
    "d2": (-0.1465, 0.1465),
    "theta": (math.radians(-80.0), math.radians(80.0)),
    "phi": (math.radians(-25.0), math.radians(45.0)),
    "psi": (math.radians(-45.0), math.radians(45.0)),
}

# Numerical Tolerances
RIGID_TOLERANCE = 1e-12  # orthonormality / det tolerance for a single transform
DIRECTION_EPSILON = 1e-6  # m/s, below this the DS direction is degenerate
PI_AXIS_TOLERANCE = 1e-9  # rad, rotations this close to pi use the axis-sign rule
ROTATION_DRIFT_TOLERANCE = 1e-12  # max |R^T R - I| before the arm rotation is re-projected

# Workspace Estimation
WORKSPACE_VOXEL = 0.005  # m, voxel edge (5 mm)
WORKSPACE_SAMPLES = 1_000_000  # Monte Carlo samples of the rotational joints
WORKSPACE_MIN_SAMPLES = 10_000  # below this the volume is reported but flagged
WORKSPACE_CLOUD_POINTS = 20_000  # exported point cloud size
WORKSPACE_SEED = 0
WORKSPACE_BATCH = 250_000  # samples per worker batch

# Platform (haptic master) Dynamics
PLATFORM_INERTIAS = (3.0, 3.0, 0.05, 0.05, 0.05)  # kg for slides, kg*m^2 for rotations
PLATFORM_GRAVITY_GAINS = (0.0, 0.0, 0.0, 0.0, 0.0)  # static load model, zero = horizontal slides
MOTOR_TORQUE_CONSTANT = 0.1  # N*m/A, placeholder (not published)
TRANSMISSION_RATIOS = (1.0, 1.0, 4.47, 1.0, 1.0)  # pitch pulley reduces 4.47:1
PULLEY_RADIUS = 0.00915  # m, belt pulley of the linear axes
ACTUATED_JOINTS = (True, True, True, False, False)  # 3-DoF build, phi/psi passive
PEAK_JOINT_EFFORT = (45.3, 45.3, 1.923, None, None)  # N, N, N*m; None = uncapped
INERTIA_COMPENSATION = 0.5  # gain on the one-step-delayed acceleration estimate
FT_RESOLUTION = 0.0  # N, 0 disables rounding of the measured foot force (sensor: 1/50 N)

# Human Foot Coupling
FOOT_STIFFNESS = (2000.0, 2000.0, 50.0, 50.0, 50.0)  # N/m, N*m/rad
FOOT_DAMPING = (150.0, 150.0, 3.0, 3.0, 3.0)  # N*s/m, N*m*s/rad

# Telemanipulator (robot arm)
ARM_MASS = 3.0  # kg, isotropic Cartesian inertia
ARM_ROTATIONAL_INERTIA = 0.1  # kg*m^2
GRAVITY = (0.0, 0.0, -9.81)  # m/s^2
DAMPING_EIGENVALUES = (60.0, 90.0, 90.0)  # N*s/m, task-aligned first
ORIENTATION_KP = 25.0
ORIENTATION_KD = 10.0

# Telefunctioning
POSITION_SCALE = 5.0  # foot position amplified five times
FORCE_SCALE = (1.0, 1.0, 0.2)  # reflected force, z scaled down five times

# Grasp Object (virtual walls)
OBJECT_HALF_EXTENTS = (0.1, 0.1, 0.1)  # m
OBJECT_MASS = 0.5  # kg
WALL_STIFFNESS = 1.0e4  # N/m
WALL_DAMPING = 50.0  # N*s/m
WALL_DAMPING_RAMP = 0.001  # m, penetration over which wall damping fades in
FRICTION_COEFFICIENT = 1.0  # Coulomb cap on the tangential grip force
TANGENTIAL_STIFFNESS = 2000.0  # N/m, stick spring at each contact
TANGENTIAL_DAMPING = 20.0  # N*s/m, viscous term on tangential slip velocity

# Disturbances (hammering)
IMPULSE_FORCE = 20.0  # N, downward on the object
IMPULSE_DURATION = 0.05  # s

# Simulation
TIME_STEP = 0.001  # s, 1 kHz
MAX_TIME_STEP = 0.01  # s
FREE_PHASES = ("a_idle", "b_retrieve", "f_retreat")
CONTACT_PHASES = ("c_grasp_lift", "d_work", "e_disturb")

# Output
CSV_FLOAT_FORMAT = "%.9e"
DEFAULT_SCENARIO = "grasp_reference"
