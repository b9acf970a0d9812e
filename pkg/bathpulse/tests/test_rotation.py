#------------------------------------------------------------------------------
# Name:         test_rotation.py
# Purpose:      Test propagators, rotation matrices and the v <-> axis-angle maps
#
# Author:       bathpulse developers
#
# Created:      19.10.2026
# Copyright:    (c) bathpulse developers
# Licence:      This file is part of bathpulse. You can redistribute it or modify
#               under the terms of GNU General Public License, v.3
#               http://www.gnu.org/licenses/gpl-3.0.html
#------------------------------------------------------------------------------
from __future__ import absolute_import, division
import unittest

import numpy as np

from bathpulse.rotation import (AxisAngle, propagator, propagators, rotation_matrix,
                                rotation_matrices, compose, pauli_components,
                                quaternion_rotation_matrices, axis_angle_from_v,
                                v_from_axis_angle, FunctionTrajectory, VectorTrajectory,
                                PulseTrajectory, as_trajectory)
from bathpulse.pulse import lookup, constant_pulse
from bathpulse.utils import PAULI, SIGMA_Z
from bathpulse.exceptions import PulseDomainError

Y = (0., 1., 0.)
Z = (0., 0., 1.)

# cone of half angle ALPHA precessing about z at rate OMEGA
ALPHA = 0.7
OMEGA = 2.3


def cone_axis(t):
    t = np.asarray(t, dtype=float)
    return np.stack([np.sin(ALPHA) * np.cos(OMEGA * t),
                     np.sin(ALPHA) * np.sin(OMEGA * t),
                     np.cos(ALPHA) * np.ones_like(t)], axis=-1)


def cone_axis_derivative(t):
    t = np.asarray(t, dtype=float)
    return np.stack([-OMEGA * np.sin(ALPHA) * np.sin(OMEGA * t),
                     OMEGA * np.sin(ALPHA) * np.cos(OMEGA * t),
                     np.zeros_like(t)], axis=-1)


def wobbling_angle(t):
    return 2.5 * np.asarray(t) + 0.4 * np.sin(3 * np.asarray(t))


def wobbling_angle_derivative(t):
    return 2.5 + 1.2 * np.cos(3 * np.asarray(t))


def random_axis_angles(seed, n=20):
    rng = np.random.RandomState(seed)
    axes = rng.normal(size=(n, 3))
    axes /= np.linalg.norm(axes, axis=1)[:, None]
    return axes, rng.uniform(-3 * np.pi, 3 * np.pi, n)


class PropagatorTest(unittest.TestCase):

    def test_identity(self):
        np.testing.assert_allclose(propagator(AxisAngle(Y, 0.)), np.eye(2))

    def test_pi_about_y(self):
        np.testing.assert_allclose(propagator(AxisAngle(Y, np.pi)),
                                   [[0, -1], [1, 0]], atol=1e-15)

    def test_half_pi_about_z(self):
        expected = np.diag([np.exp(-1j * np.pi / 4), np.exp(1j * np.pi / 4)])
        np.testing.assert_allclose(propagator(AxisAngle(Z, np.pi / 2)), expected, atol=1e-15)

    def test_unitary(self):
        p = propagators(*random_axis_angles(0))
        product = np.matmul(np.conj(np.swapaxes(p, -1, -2)), p)
        np.testing.assert_allclose(product, np.broadcast_to(np.eye(2), product.shape),
                                   atol=1e-14)

    def test_non_unit_axis(self):
        with self.assertRaises(PulseDomainError):
            AxisAngle((1., 1., 0.), 0.3)

    def test_compose_same_axis(self):
        u = compose(AxisAngle(Y, 0.4), AxisAngle(Y, 0.9))
        np.testing.assert_allclose(u, propagator(AxisAngle(Y, 1.3)), atol=1e-14)

    def test_compose_order(self):
        first, second = AxisAngle((1., 0., 0.), 0.5), AxisAngle(Z, 1.1)
        np.testing.assert_allclose(compose(first, second),
                                   np.dot(propagator(second), propagator(first)))


class RotationMatrixTest(unittest.TestCase):

    def test_identity(self):
        np.testing.assert_allclose(rotation_matrix(AxisAngle(Y, 0.)), np.eye(3))

    def test_pi_about_y(self):
        np.testing.assert_allclose(rotation_matrix(AxisAngle(Y, np.pi)),
                                   np.diag([-1., 1., -1.]), atol=1e-15)

    def test_z_column_of_y_rotation(self):
        psi = 0.83
        d = rotation_matrix(AxisAngle(Y, psi))
        np.testing.assert_allclose(d[:, 2], [-np.sin(psi), 0., np.cos(psi)], atol=1e-15)

    def test_orthogonal(self):
        d = rotation_matrices(*random_axis_angles(1))
        product = np.matmul(np.swapaxes(d, -1, -2), d)
        np.testing.assert_allclose(product, np.broadcast_to(np.eye(3), product.shape),
                                   atol=1e-14)
        np.testing.assert_allclose(np.linalg.det(d), 1., atol=1e-14)

    def test_conjugation(self):
        # column j holds the Pauli components of P^-1 sigma_j P
        axes, angles = random_axis_angles(2, 5)
        for axis, angle in zip(axes, angles):
            aa = AxisAngle(axis, angle)
            p = propagator(aa)
            d = rotation_matrix(aa)
            for j in range(3):
                rotated = np.dot(np.conj(p.T), np.dot(PAULI[j], p))
                np.testing.assert_allclose(pauli_components(rotated), d[:, j], atol=1e-14)

    def test_quaternion_rotation_matrices(self):
        axes, angles = random_axis_angles(3)
        q = np.concatenate([np.cos(angles / 2)[:, None],
                            np.sin(angles / 2)[:, None] * axes], axis=1)
        np.testing.assert_allclose(quaternion_rotation_matrices(q),
                                   rotation_matrices(axes, angles), atol=1e-14)

    def test_pauli_components(self):
        np.testing.assert_allclose(pauli_components(SIGMA_Z), [0., 0., 1.])


class AxisAngleFromVTest(unittest.TestCase):

    def test_constant_pulse(self):
        pulse = constant_pulse(1.3)
        t = np.linspace(0., 1., 11)
        traj = axis_angle_from_v(pulse, t)
        np.testing.assert_allclose(traj.angles, 1.3 * t, atol=1e-10)
        np.testing.assert_allclose(traj.axes, np.tile(Y, (11, 1)), atol=1e-10)
        self.assertEqual(len(traj), 11)

    def test_corpse_angle_through_zero(self):
        pulse = lookup('CORPSE-Pi')
        t = np.linspace(0., 1., 27)
        traj = axis_angle_from_v(pulse, t)
        np.testing.assert_allclose(traj.angles, pulse.angle(t), atol=1e-9)
        np.testing.assert_allclose(traj.axes, np.tile(Y, (27, 1)), atol=1e-9)

    def test_unsorted_times(self):
        pulse = lookup('SCORPSE-Pi')
        t = np.array([0.9, 0.1, 0.5, 1.0])
        traj = axis_angle_from_v(pulse, t)
        np.testing.assert_allclose(traj.times, t)
        np.testing.assert_allclose(traj.angles, pulse.angle(t), atol=1e-9)
        self.assertAlmostEqual(traj[3].angle, np.pi, places=4)

    def test_zero_vector(self):
        traj = axis_angle_from_v(lambda t: np.zeros((len(t), 3)), np.linspace(0, 1, 5))
        np.testing.assert_allclose(traj.angles, 0., atol=1e-15)
        np.testing.assert_allclose(traj.axes, np.tile(Y, (5, 1)))

    def test_time_outside_window(self):
        with self.assertRaises(PulseDomainError):
            axis_angle_from_v(constant_pulse(np.pi), [0.5, 1.2])

    def test_round_trip_of_smooth_trajectory(self):
        def v(t):
            return v_from_axis_angle(cone_axis, wobbling_angle, t,
                                     axis_derivative=cone_axis_derivative,
                                     angle_derivative=wobbling_angle_derivative)
        t = np.linspace(0., 1., 11)
        traj = axis_angle_from_v(v, t)
        np.testing.assert_allclose(traj.propagators(),
                                   propagators(cone_axis(t), wobbling_angle(t)), atol=1e-8)

    def test_finite_difference_derivatives(self):
        t = np.linspace(0.1, 0.9, 9)
        analytic = v_from_axis_angle(cone_axis, wobbling_angle, t,
                                     axis_derivative=cone_axis_derivative,
                                     angle_derivative=wobbling_angle_derivative)
        numeric = v_from_axis_angle(cone_axis, wobbling_angle, t)
        np.testing.assert_allclose(numeric, analytic, atol=1e-7)

    def test_fixed_axis_reduces_to_amplitude(self):
        t = np.linspace(0., 1., 7)
        v = v_from_axis_angle(lambda s: np.tile(Y, (len(s), 1)), lambda s: 3 * s ** 2, t)
        np.testing.assert_allclose(v[:, 1], 3 * t, atol=1e-8)
        np.testing.assert_allclose(v[:, [0, 2]], 0., atol=1e-12)

    def test_precessing_axis_at_constant_angle(self):
        # psi = pi: 2 v = -2 (a' x a)
        t = np.linspace(0., 1., 5)
        v = v_from_axis_angle(cone_axis, lambda s: np.pi * np.ones_like(s), t,
                              axis_derivative=cone_axis_derivative,
                              angle_derivative=lambda s: np.zeros_like(s))
        expected = -np.cross(cone_axis_derivative(t), cone_axis(t))
        np.testing.assert_allclose(v, expected, atol=1e-14)


class TrajectoryTest(unittest.TestCase):

    def test_as_trajectory(self):
        pulse = lookup('SYM-Pi')
        traj = as_trajectory(pulse)
        self.assertIsInstance(traj, PulseTrajectory)
        self.assertIs(as_trajectory(traj), traj)
        np.testing.assert_allclose(traj.breakpoints, [5 / 17., 12 / 17.])

    def test_vector_trajectory_matches_pulse(self):
        pulse = lookup('CORPSE-Pi')
        axis = np.asarray(pulse.axis)
        vector = VectorTrajectory(lambda t: pulse.amplitude(t)[:, None] * axis,
                                  breakpoints=pulse.breakpoints())
        t = np.array([[0.05, 0.3], [0.7, 1.]])
        np.testing.assert_allclose(vector.rotation_matrices(t),
                                   PulseTrajectory(pulse).rotation_matrices(t), atol=1e-10)

    def test_function_trajectory_shape(self):
        traj = FunctionTrajectory(cone_axis, wobbling_angle)
        self.assertEqual(traj.rotation_matrices(np.zeros((4, 5))).shape, (4, 5, 3, 3))


if __name__ == "__main__":
    unittest.main()
