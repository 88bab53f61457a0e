import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from footsim.errors import DomainError
from footsim.models import DhRow, JointKind, KinematicChain, PlatformJoints
from footsim.sim.kinematics import (
    LimitPolicy,
    RigidTransform,
    closed_form_tip,
    dh_transform,
    forward_kinematics,
    tip_frame,
    tip_positions,
    translational_jacobian,
)
from footsim.sim.utils import clamp_joints, validate_joints

from conftest import random_joints


def rot_x(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])


class TestDhTransform:
    def test_fixed_zero_row_is_identity(self):
        t = dh_transform(DhRow(), 0.7)
        assert_allclose(t.matrix(), np.eye(4), atol=1e-15)

    def test_first_row_is_pure_x_rotation(self, chain):
        t = dh_transform(chain.rows[0])
        assert_allclose(t.rotation, rot_x(-math.pi / 2), atol=1e-15)
        assert_allclose(t.translation, np.zeros(3), atol=1e-15)

    def test_pitch_row_at_zero(self, chain):
        t = dh_transform(chain.rows[4], 0.0)
        assert_allclose(t.rotation, rot_x(-math.pi / 2), atol=1e-15)
        assert_allclose(t.translation, [-0.046, 0.0, 0.170], atol=1e-15)

    def test_fixed_row_ignores_joint_value(self, chain):
        row = chain.rows[3]
        assert_allclose(dh_transform(row, 1.3).matrix(), dh_transform(row, 0.0).matrix())

    def test_non_finite_joint_value(self, chain):
        with pytest.raises(DomainError):
            dh_transform(chain.rows[1], float("nan"))

    def test_every_row_is_rigid(self, chain, rng):
        for row in chain.rows:
            assert dh_transform(row, rng.uniform(-1, 1)).is_rigid(1e-12)


class TestChain:
    def test_nine_rows_five_joints(self, chain):
        assert len(chain.rows) == 9
        assert [chain.rows[i].joint_kind for i in chain.joint_rows] == [
            JointKind.PRISMATIC_ON_D,
            JointKind.PRISMATIC_ON_D,
            JointKind.REVOLUTE_ON_BETA,
            JointKind.REVOLUTE_ON_BETA,
            JointKind.REVOLUTE_ON_BETA,
        ]

    def test_alphas_are_quarter_turns(self, chain):
        for row in chain.rows:
            quarter = row.alpha / (math.pi / 2)
            assert abs(quarter - round(quarter)) < 1e-12

    def test_rejects_wrong_joint_order(self, chain):
        rows = list(chain.rows)
        rows[1], rows[4] = rows[4], rows[1]
        with pytest.raises(ValueError):
            KinematicChain(geometry=chain.geometry, rows=tuple(rows))

    def test_geometry_is_frozen(self, chain):
        with pytest.raises(Exception):
            chain.geometry.a6 = 1.0


class TestForwardKinematics:
    def test_home_tip(self, chain):
        frames = forward_kinematics(chain, PlatformJoints())
        assert len(frames) == 9
        assert_allclose(frames[-1].translation, [0.0, 0.300, 0.283], atol=1e-12)

    def test_prismatic_offsets(self, chain):
        tip = tip_frame(chain, PlatformJoints(d1=0.1, d2=0.05))
        assert_allclose(tip.translation, [0.05, 0.400, 0.283], atol=1e-12)

    def test_frames_are_cumulative_products(self, chain, rng):
        q = random_joints(rng, 1)[0]
        frames = forward_kinematics(chain, q)
        values = dict(zip(chain.joint_rows, q))
        product = np.eye(4)
        for i, row in enumerate(chain.rows):
            product = product @ dh_transform(row, values.get(i, 0.0)).matrix()
            assert_allclose(frames[i].matrix(), product, atol=1e-12)

    def test_matches_closed_form(self, chain, rng):
        for q in random_joints(rng, 1000):
            fk = forward_kinematics(chain, q)[-1].translation
            assert_allclose(fk, closed_form_tip(q), atol=1e-9)

    def test_products_stay_rigid(self, chain, rng):
        for q in random_joints(rng, 200):
            for frame in forward_kinematics(chain, q):
                assert frame.is_rigid(1e-10)

    def test_validate_policy_rejects_out_of_limit(self, chain):
        with pytest.raises(DomainError):
            forward_kinematics(chain, [0, 0, 0, 0, math.radians(200)])

    def test_clamp_policy(self, chain):
        frames = forward_kinematics(chain, [0, 0, 0, 0, math.radians(200)], policy=LimitPolicy.CLAMP)
        expected = closed_form_tip([0, 0, 0, 0, math.radians(45)])
        assert_allclose(frames[-1].translation, expected, atol=1e-12)

    def test_unchecked_policy(self, chain):
        q = [0.5, 0, 0, 0, 0]
        assert_allclose(tip_frame(chain, q, policy=LimitPolicy.UNCHECKED).translation, [0.0, 0.8, 0.283], atol=1e-12)


class TestClosedForm:
    def test_home(self):
        assert_allclose(closed_form_tip(PlatformJoints()), [0.0, 0.3, 0.283], atol=1e-15)

    def test_yaw_only(self):
        s = 0.3 * math.sin(math.radians(45))
        assert_allclose(closed_form_tip([0, 0, 0, 0, math.radians(45)]), [-s, s, 0.283], atol=1e-12)

    def test_limit_corners_finite(self, limits):
        lo, hi = limits.lower_array, limits.upper_array
        for mask in range(32):
            q = np.where([(mask >> i) & 1 for i in range(5)], hi, lo)
            assert np.all(np.isfinite(closed_form_tip(q)))

    def test_prismatic_linearity(self, rng):
        for q in random_joints(rng, 100):
            delta = rng.uniform(-0.05, 0.05)
            moved = q.copy()
            moved[0] += delta
            assert_allclose(closed_form_tip(moved) - closed_form_tip(q), [0.0, delta, 0.0], atol=1e-12)

    def test_vectorized_matches_scalar(self, rng):
        joints = random_joints(rng, 50)
        batch = tip_positions(joints)
        for q, tip in zip(joints, batch):
            assert_allclose(tip, closed_form_tip(q), atol=1e-15)


class TestJacobian:
    def test_columns_at_home(self):
        jac = translational_jacobian(PlatformJoints())
        assert_allclose(jac[:, 0], [0, 1, 0], atol=1e-15)
        assert_allclose(jac[:, 1], [1, 0, 0], atol=1e-15)
        assert_allclose(jac[:, 2], [0, 0.04, -0.3], atol=1e-12)
        assert_allclose(jac[:, 4], [-0.3, 0, 0], atol=1e-12)

    def test_matches_central_differences(self, rng):
        h = 1e-6
        for q in random_joints(rng, 100):
            jac = translational_jacobian(q)
            for j in range(5):
                step = np.zeros(5)
                step[j] = h
                fd = (closed_form_tip(q + step) - closed_form_tip(q - step)) / (2 * h)
                assert_allclose(jac[:, j], fd, atol=1e-6)

    def test_maps_joint_velocity(self, rng):
        q = random_joints(rng, 1)[0]
        q_dot = rng.normal(size=5)
        dt = 1e-7
        moved = (closed_form_tip(q + q_dot * dt) - closed_form_tip(q - q_dot * dt)) / (2 * dt)
        assert_allclose(translational_jacobian(q) @ q_dot, moved, atol=1e-6)


class TestRigidTransform:
    def test_inverse_composes_to_identity(self, chain, rng):
        t = tip_frame(chain, random_joints(rng, 1)[0])
        assert_allclose(t.compose(t.inverse()).matrix(), np.eye(4), atol=1e-12)

    def test_identity(self):
        assert RigidTransform.identity().is_rigid()


class TestJointPolicies:
    def test_validate(self):
        ok, _ = validate_joints(PlatformJoints(d1=0.1))
        assert ok
        ok, message = validate_joints([0.2, 0, 0, 0, 0])
        assert not ok
        assert "d1" in message

    def test_validate_non_finite(self):
        ok, _ = validate_joints([0, 0, float("inf"), 0, 0])
        assert not ok

    def test_clamp(self):
        clamped, mask = clamp_joints([0.2, 0, 0, math.radians(-30), 0])
        assert clamped.d1 == pytest.approx(0.175)
        assert clamped.phi == pytest.approx(math.radians(-25))
        assert mask.tolist() == [True, False, False, True, False]
