import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.spatial.transform import Rotation

from footsim.errors import DomainError, SimulationFault
from footsim.models import ArmDynamicsParams, DampingSpec
from footsim.sim.robot import (
    ArmState,
    arm_step,
    damping_basis,
    damping_matrix,
    ds_desired_velocity,
    impedance_control_force,
    orientation_error,
    orientation_pd_torque,
)

DT = 0.001
UPSILON = 5 * np.eye(3)


def free_motion(attractor, x0, eigen, seconds, params=None, impulse=None):
    """Closed loop of DS + damping + impedance toward a static attractor; returns positions."""
    params = params or ArmDynamicsParams()
    state = ArmState(x=np.asarray(x0, float))
    basis = np.eye(3)
    positions = [state.x]
    for k in range(int(round(seconds / DT))):
        xd = attractor - state.x
        basis = damping_basis(xd, basis)
        d = damping_matrix(xd, eigen, basis)
        f_ext = impulse(k) if impulse else np.zeros(3)
        state = arm_step(state, params, impedance_control_force(d, xd, state.x_dot, params), f_ext, np.zeros(3), DT)
        positions.append(state.x)
    return np.array(positions)


class TestDs:
    def test_amplified_foot(self):
        assert_allclose(ds_desired_velocity(np.array([0.01, 0, 0]), np.zeros(3), UPSILON), [0.05, 0, 0])

    def test_fixed_point(self):
        x_p = np.array([0.013, -0.2, 0.31])
        assert np.array_equal(ds_desired_velocity(x_p, UPSILON @ x_p, UPSILON), np.zeros(3))

    def test_identity_map(self):
        assert_allclose(ds_desired_velocity(np.zeros(3), np.ones(3), np.eye(3)), -np.ones(3))


class TestDamping:
    def test_axis_aligned(self):
        d = damping_matrix(np.array([1.0, 0, 0]), DampingSpec(lambda1=4, lambda2=7, lambda3=7), np.eye(3))
        assert_allclose(d, np.diag([4, 7, 7]), atol=1e-12)

    def test_isotropic(self, rng):
        eigen = DampingSpec(lambda1=3, lambda2=3, lambda3=3)
        for _ in range(20):
            assert_allclose(damping_matrix(rng.normal(size=3), eigen, np.eye(3)), 3 * np.eye(3), atol=1e-12)

    def test_diagonal_direction_eigenpair(self):
        v = np.array([1.0, 1.0, 0]) / math.sqrt(2)
        d = damping_matrix(v, DampingSpec(lambda1=2, lambda2=1, lambda3=1), np.eye(3))
        values, vectors = np.linalg.eigh(d)
        top = vectors[:, np.argmax(values)]
        assert values.max() == pytest.approx(2.0, abs=1e-10)
        assert_allclose(abs(top @ v), 1.0, atol=1e-10)

    def test_random_directions(self, rng):
        basis = np.eye(3)
        for _ in range(1000):
            v = rng.normal(size=3) * rng.uniform(0.01, 10)
            lam = rng.uniform(1, 200, size=3)
            eigen = DampingSpec(lambda1=lam[0], lambda2=lam[1], lambda3=lam[2])
            basis = damping_basis(v, basis)
            d = damping_matrix(v, eigen, basis)
            unit = v / np.linalg.norm(v)
            assert np.max(np.abs(d - d.T)) <= 1e-12
            assert np.all(np.linalg.eigvalsh(d) > 0)
            assert np.max(np.abs(d @ unit - lam[0] * unit)) <= 1e-10

    def test_degenerate_direction_keeps_basis(self):
        eigen = DampingSpec(lambda1=1, lambda2=5, lambda3=9)
        previous = Rotation.from_rotvec([0.3, -0.2, 0.5]).as_matrix()
        d = damping_matrix(np.array([1e-8, 0, 0]), eigen, previous)
        assert_allclose(d, previous @ np.diag([1, 5, 9]) @ previous.T, atol=1e-12)

    def test_non_positive_eigenvalue_rejected(self):
        with pytest.raises(ValueError):
            DampingSpec(lambda1=0.0)


class TestImpedance:
    def test_matched_velocity_leaves_gravity_compensation(self):
        params = ArmDynamicsParams(mass=3.0)
        f = impedance_control_force(np.eye(3) * 60, np.array([0.1, 0.2, 0]), np.array([0.1, 0.2, 0]), params)
        assert_allclose(f, [0, 0, 3 * 9.81])

    def test_unit_damping(self):
        params = ArmDynamicsParams(gravity=(0, 0, 0))
        assert_allclose(impedance_control_force(np.eye(3), np.array([1.0, 0, 0]), np.zeros(3), params), [1, 0, 0])

    def test_free_motion_monotone(self):
        attractor = np.array([0.3, -0.2, 0.1])
        positions = free_motion(attractor, np.zeros(3), DampingSpec(), 3.0)
        distance = np.linalg.norm(positions - attractor, axis=1)
        assert np.all(np.diff(distance) < 0)

    def test_converges_within_horizon(self):
        attractor = np.array([0.3, -0.2, 0.1])
        positions = free_motion(attractor, np.zeros(3), DampingSpec(), 10.0)
        assert np.linalg.norm(positions[-1] - attractor) < 1e-3

    def test_selective_compliance(self):
        """Orthogonal push while moving along x: stiffer orthogonal damping, smaller excursion."""
        attractor = np.array([0.5, 0, 0])

        def push(k):
            return np.array([0, 30.0, 0]) if 200 <= k < 250 else np.zeros(3)

        peaks = []
        for lam in (30.0, 60.0, 120.0):
            positions = free_motion(attractor, np.zeros(3), DampingSpec(lambda1=60, lambda2=lam, lambda3=lam), 2.0, impulse=push)
            peaks.append(np.max(np.abs(positions[:, 1])))
        assert peaks[0] > peaks[1] > peaks[2]

    def test_energy_non_increasing_isotropic(self):
        lam, mass = 50.0, 3.0
        params = ArmDynamicsParams(mass=mass)
        eigen = DampingSpec(lambda1=lam, lambda2=lam, lambda3=lam)
        attractor = np.array([-0.2, 0.4, 0.1])
        state = ArmState(x=np.zeros(3), x_dot=np.array([0.5, 0, -0.3]))
        basis = np.eye(3)

        def energy(s):
            return 0.5 * mass * s.x_dot @ s.x_dot + 0.5 * lam * (s.x - attractor) @ (s.x - attractor)

        previous = energy(state)
        for _ in range(3000):
            xd = attractor - state.x
            basis = damping_basis(xd, basis)
            f_u = impedance_control_force(damping_matrix(xd, eigen, basis), xd, state.x_dot, params)
            state = arm_step(state, params, f_u, np.zeros(3), np.zeros(3), DT)
            current = energy(state)
            assert current <= previous * (1 + 1e-9) + 1e-15
            previous = current


class TestOrientation:
    def test_identical_is_zero(self):
        r = Rotation.random(random_state=1).as_matrix()
        assert_allclose(orientation_error(r, r), np.zeros(3), atol=1e-12)

    def test_quarter_turn_about_z(self):
        target = Rotation.from_euler("z", 90, degrees=True).as_matrix()
        assert_allclose(orientation_error(np.eye(3), target), [0, 0, math.pi / 2], atol=1e-12)

    def test_half_turn_axis_sign(self):
        for axis in (np.array([1.0, 0, 0]), np.array([0, -1.0, 0]), np.array([0.6, -0.8, 0])):
            target = Rotation.from_rotvec(math.pi * axis).as_matrix()
            err = orientation_error(np.eye(3), target)
            assert np.linalg.norm(err) == pytest.approx(math.pi)
            assert err[np.argmax(np.abs(err))] > 0

    def test_agrees_with_rotation_vector(self):
        for seed in range(50):
            r = Rotation.random(random_state=seed)
            assert_allclose(orientation_error(np.eye(3), r.as_matrix()), r.as_rotvec(), atol=1e-10)

    def test_norm_invariant_under_common_rotation(self):
        for seed in range(20):
            r, r_d, q = Rotation.random(3, random_state=seed).as_matrix()
            base = np.linalg.norm(orientation_error(r, r_d))
            assert np.linalg.norm(orientation_error(q @ r, q @ r_d)) == pytest.approx(base, abs=1e-9)
            assert np.linalg.norm(orientation_error(r_d, r)) == pytest.approx(base, abs=1e-9)

    def test_pd_torque(self):
        assert_allclose(orientation_pd_torque(np.zeros(3), np.zeros(3), 25, 10), np.zeros(3))
        assert_allclose(orientation_pd_torque(np.array([0, 0, 0.1]), np.array([3.0, -1, 0]), 10, 0), [0, 0, 1])

    def test_negative_gain(self):
        with pytest.raises(DomainError):
            orientation_pd_torque(np.zeros(3), np.zeros(3), -1, 0)

    def test_closed_loop_converges(self):
        params = ArmDynamicsParams(gravity=(0, 0, 0))
        target = Rotation.from_rotvec([0.1, 0.2, -0.3]).as_matrix()
        axis = np.array([1.0, 2.0, -0.5]) / np.linalg.norm([1.0, 2.0, -0.5])
        start = Rotation.from_rotvec(2.5 * axis).as_matrix() @ target
        state = ArmState(x=np.zeros(3), rotation=start)
        norms = []
        for _ in range(2000):
            err = orientation_error(state.rotation, target)
            norms.append(np.linalg.norm(err))
            state = arm_step(state, params, np.zeros(3), np.zeros(3), orientation_pd_torque(err, state.omega, 25, 10), DT)
        assert np.linalg.norm(orientation_error(state.rotation, target)) < 0.05
        assert np.all(np.diff(norms) <= 1e-12)


class TestArmStep:
    def test_gravity_compensated_rest(self):
        params = ArmDynamicsParams(mass=3.0)
        state = ArmState(x=np.array([0.1, 0.2, 0.3]))
        for _ in range(100):
            state = arm_step(state, params, np.array([0, 0, 3.0 * 9.81]), np.zeros(3), np.zeros(3), DT)
        assert_allclose(state.x, [0.1, 0.2, 0.3], atol=0)
        assert_allclose(state.x_dot, np.zeros(3), atol=0)

    def test_ballistic_velocity(self):
        params = ArmDynamicsParams(mass=2.0, gravity=(0, 0, 0))
        force = np.array([1.0, -2.0, 0.5])
        state = ArmState(x=np.zeros(3))
        for _ in range(500):
            state = arm_step(state, params, force, np.zeros(3), np.zeros(3), DT)
        assert_allclose(state.x_dot, force * 0.5 / 2.0, atol=1e-9)

    def test_rotation_update_is_exact_for_one_step(self):
        omega = np.array([3.0, -2.0, 5.0])
        state = ArmState(x=np.zeros(3), omega=omega)
        after = arm_step(state, ArmDynamicsParams(), np.zeros(3), np.zeros(3), np.zeros(3), DT)
        assert_allclose(after.rotation, Rotation.from_rotvec(omega * DT).as_matrix(), atol=1e-14)

    def test_rotation_stays_orthonormal(self):
        params = ArmDynamicsParams()
        state = ArmState(x=np.zeros(3), omega=np.array([3.0, -2.0, 5.0]))
        for _ in range(1000):
            state = arm_step(state, params, np.zeros(3), np.zeros(3), np.zeros(3), DT)
            r = state.rotation
            assert np.max(np.abs(r.T @ r - np.eye(3))) <= 1e-9
            assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-9)

    def test_non_finite_faults(self):
        with pytest.raises(SimulationFault):
            arm_step(ArmState(x=np.zeros(3)), ArmDynamicsParams(), np.array([np.inf, 0, 0]), np.zeros(3), np.zeros(3), DT)

    def test_bad_time_step(self):
        with pytest.raises(DomainError):
            arm_step(ArmState(x=np.zeros(3)), ArmDynamicsParams(), np.zeros(3), np.zeros(3), np.zeros(3), 0.0)
