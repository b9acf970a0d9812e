# Name:    rotation.py
# Purpose: Axis-angle kinematics of a pulse: spin propagators, rotation
#          matrices and conversion between v(t) and (axis(t), psi(t))
# Authors:      bathpulse developers
# Created:      19.10.2026
# Licence:
# This file is part of bathpulse.
# bathpulse is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, version 3 of the License.
# http://www.gnu.org/licenses/gpl-3.0.html
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.
from __future__ import absolute_import, division

import numpy as np

from bathpulse.utils import IDENTITY_2, PAULI, add_logger
from bathpulse.exceptions import PulseDomainError, IntegratorConvergenceError

AXIS_TOLERANCE = 1e-12
STEP_TOLERANCE = 1e-10
MAX_SUBSTEPS = 2 ** 12
# below this |sin(psi/2)| the axis is undefined and the previous one is held
DEGENERATE_SIN = 1e-9
DEFAULT_AXIS = (0., 1., 0.)


class AxisAngle(object):
    """Rotation about the unit `axis` by `angle` (radians)

    The spin propagator of the rotation is
    cos(angle/2) - i sin(angle/2) sigma . axis

    """
    # instance attributes
    axis = None
    angle = None

    def __init__(self, axis, angle):
        self.axis = _unit_vectors(axis).reshape(3)
        self.angle = float(angle)

    def __repr__(self):
        return '<AxisAngle axis=%s angle=%.8f>' % (np.round(self.axis, 8), self.angle)


def _unit_vectors(axes):
    axes = np.array(axes, dtype=float)
    if axes.shape[-1:] != (3,) or not np.all(np.isfinite(axes)):
        raise PulseDomainError('Axis must be a finite 3-vector')
    if np.any(np.abs(np.linalg.norm(axes, axis=-1) - 1.) > AXIS_TOLERANCE):
        raise PulseDomainError('Rotation axis is not a unit vector')
    return axes


def cross_matrix(axes):
    """Matrices K with K x = axis x x, for axes of shape (..., 3)"""
    axes = np.asarray(axes, dtype=float)
    ax, ay, az = axes[..., 0], axes[..., 1], axes[..., 2]
    zero = np.zeros_like(ax)
    return np.stack([np.stack([zero, -az, ay], axis=-1),
                     np.stack([az, zero, -ax], axis=-1),
                     np.stack([-ay, ax, zero], axis=-1)], axis=-2)


def propagators(axes, angles):
    """Spin propagators for arrays of axes (..., 3) and angles (...)"""
    angles = np.asarray(angles, dtype=float)
    sigma_a = np.einsum('...k,kij->...ij', _unit_vectors(axes), PAULI)
    return (np.cos(angles / 2)[..., None, None] * IDENTITY_2
            - 1j * np.sin(angles / 2)[..., None, None] * sigma_a)


def rotation_matrices(axes, angles):
    """Rotation matrices D_axis(-angle) for arrays of axes and angles

    D = cos(psi) 1 - sin(psi) K + (1 - cos(psi)) a a^T, so that column j
    holds the Pauli components of P^-1 sigma_j P.
    """
    axes = _unit_vectors(axes)
    angles = np.asarray(angles, dtype=float)
    cos_psi = np.cos(angles)[..., None, None]
    sin_psi = np.sin(angles)[..., None, None]
    outer = axes[..., :, None] * axes[..., None, :]
    return cos_psi * np.eye(3) - sin_psi * cross_matrix(axes) + (1 - cos_psi) * outer


def propagator(axis_angle):
    """2x2 spin propagator cos(psi/2) 1 - i sin(psi/2) sigma . axis

    Parameters
    ----------
    axis_angle : AxisAngle

    Returns
    -------
    numpy.ndarray (2, 2) complex unitary

    """
    return propagators(axis_angle.axis, axis_angle.angle)


def rotation_matrix(axis_angle):
    """3x3 rotation matrix D_axis(-psi)

    Entry (i, j) is the i-th Pauli component of the toggling-frame
    operator P^-1 sigma_j P.
    """
    return rotation_matrices(axis_angle.axis, axis_angle.angle)


def compose(first, second):
    """Propagator of the rotation `first` followed by `second`"""
    return np.dot(propagator(second), propagator(first))


def pauli_components(matrix):
    """Coefficients c_i of sum_i c_i sigma_i for a traceless 2x2 matrix"""
    return np.einsum('kij,...ji->...k', PAULI, matrix) / 2.


# Unit quaternions q = (q0, q1, q2, q3) stand for q0 1 - i q . sigma.

def quaternion_product(first, second):
    """Quaternion of the matrix product first * second"""
    a0, a = first[..., 0], first[..., 1:]
    b0, b = second[..., 0], second[..., 1:]
    scalar = a0 * b0 - np.sum(a * b, axis=-1)
    vector = a0[..., None] * b + b0[..., None] * a + np.cross(a, b)
    return np.concatenate([scalar[..., None], vector], axis=-1)


def quaternion_to_matrix(q):
    """Spin propagators of quaternions (..., 4)"""
    return (q[..., 0, None, None] * IDENTITY_2
            - 1j * np.einsum('...k,kij->...ij', q[..., 1:], PAULI))


def quaternion_rotation_matrices(q):
    """Rotation matrices D_axis(-psi) straight from quaternions

    cos(psi) = q0^2 - |q|^2, sin(psi) axis = 2 q0 q and
    (1 - cos(psi)) axis axis^T = 2 q q^T; no axis extraction is needed.
    """
    q0, qv = q[..., 0], q[..., 1:]
    cos_psi = (q0 ** 2 - np.sum(qv ** 2, axis=-1))[..., None, None]
    return (cos_psi * np.eye(3) - 2 * q0[..., None, None] * cross_matrix(qv)
            + 2 * qv[..., :, None] * qv[..., None, :])


def _step_quaternions(w, dt):
    # exp(-i dt sigma . w) = cos(|w| dt) - i sin(|w| dt) sigma . w / |w|
    phi = np.linalg.norm(w, axis=-1) * dt
    scalar = np.cos(phi)
    vector = w * (dt * np.sinc(phi / np.pi))[..., None]
    return np.concatenate([scalar[..., None], vector], axis=-1)


def _ordered_product(q):
    # product along axis -2 with later steps on the left
    while q.shape[-2] > 1:
        if q.shape[-2] % 2:
            identity = np.zeros(q.shape[:-2] + (1, 4))
            identity[..., 0] = 1.
            q = np.concatenate([q, identity], axis=-2)
        q = quaternion_product(q[..., 1::2, :], q[..., 0::2, :])
    return q[..., 0, :]


def vector_amplitude(source):
    """Callable v(t) -> (N, 3) and switching instants for a pulse or callable

    Parameters
    ----------
    source : PulseShape or callable
        a callable maps an array of times (N,) to vectors (N, 3)

    """
    if hasattr(source, 'amplitude') and hasattr(source, 'axis'):
        axis = np.asarray(source.axis)

        def v(t):
            return source.amplitude(t)[..., None] * axis
        return v, source.breakpoints()
    return source, np.array([])


def integrate_quaternions(v, knots, substeps):
    """Midpoint-exponential solution of i dP/dt = sigma . v(t) P

    Parameters
    ----------
    v : callable
        times (N,) -> vectors (N, 3)
    knots : numpy.ndarray
        increasing times starting with 0, where the solution is returned
    substeps : int
        midpoint steps in every interval between knots

    Returns
    -------
    numpy.ndarray (len(knots), 4) : quaternions of P at the knots

    """
    knots = np.asarray(knots, dtype=float)
    width = np.diff(knots)
    h = width / substeps
    mids = knots[:-1, None] + h[:, None] * (np.arange(substeps) + 0.5)
    w = np.asarray(v(mids.ravel()), dtype=float).reshape(mids.shape + (3,))
    intervals = _ordered_product(_step_quaternions(w, h[:, None]))
    result = np.zeros((len(knots), 4))
    result[0, 0] = 1.
    for i, q in enumerate(intervals):
        result[i + 1] = quaternion_product(q, result[i])
    return result


def solve_quaternions(v, times, breakpoints=(), tolerance=STEP_TOLERANCE,
                      max_substeps=MAX_SUBSTEPS, log_level=None):
    """Quaternions of P at `times`, converged by step halving

    Steps are aligned with the switching instants, so piecewise-constant
    pulses are integrated exactly by the first iterate. Smooth pulses are
    Richardson-extrapolated (the midpoint product is time-symmetric) and
    renormalised.

    Raises
    ------
    IntegratorConvergenceError : step budget exhausted

    """
    logger = add_logger('bathpulse', log_level)
    times = np.asarray(times, dtype=float)
    knots = np.unique(np.concatenate([[0.], np.asarray(breakpoints, dtype=float),
                                      times.ravel()]))
    where = np.searchsorted(knots, times)

    substeps = 1
    previous = integrate_quaternions(v, knots, substeps)
    previous_extrapolated = extrapolated = None
    while substeps < max_substeps:
        substeps *= 2
        current = integrate_quaternions(v, knots, substeps)
        if np.max(np.abs(current - previous)) < tolerance:
            return current[where]
        extrapolated = (4 * current - previous) / 3.
        extrapolated /= np.linalg.norm(extrapolated, axis=-1)[:, None]
        if (previous_extrapolated is not None and
                np.max(np.abs(extrapolated - previous_extrapolated)) < tolerance):
            logger.debug('Propagator converged with %d substeps', substeps)
            return extrapolated[where]
        previous, previous_extrapolated = current, extrapolated
    raise IntegratorConvergenceError('Pulse propagator did not converge with %d substeps'
                                     % max_substeps, previous_extrapolated, extrapolated,
                                     substeps)


def quaternions_to_axis_angle(q, default_axis=DEFAULT_AXIS):
    """Continuous axis and angle along a sequence of quaternions

    Where sin(psi/2) vanishes the previous axis is held. The axis sign is
    kept continuous by flipping (axis, psi) -> (-axis, -psi) and psi is
    unwrapped by multiples of 4 pi.
    """
    q = np.atleast_2d(q)
    norm = np.linalg.norm(q[:, 1:], axis=-1)
    angles = 2 * np.arctan2(norm, q[:, 0])
    axes = np.empty((len(q), 3))
    defined = norm > DEGENERATE_SIN
    axes[defined] = q[defined, 1:] / norm[defined, None]

    # leading undefined axes take the first defined one, oriented along default_axis
    previous = np.asarray(default_axis, dtype=float)
    if np.any(defined):
        first = axes[np.argmax(defined)]
        previous = -first if np.dot(first, previous) < 0 else first
    previous_angle = 0.
    for i in range(len(q)):
        if not defined[i]:
            axes[i] = previous
            # q0 = +-1: psi = 0 or 2 pi
            angles[i] = 0. if q[i, 0] > 0 else 2 * np.pi
        elif np.dot(axes[i], previous) < 0:
            axes[i] = -axes[i]
            angles[i] = -angles[i]
        angles[i] += 4 * np.pi * np.round((previous_angle - angles[i]) / (4 * np.pi))
        previous, previous_angle = axes[i], angles[i]
    return axes, angles


class RotationTrajectory(object):
    """Sampled trajectory (times, axes, angles) of a pulse propagator"""
    # instance attributes
    times = None
    axes = None
    angles = None
    quaternions = None

    def __init__(self, times, quaternions, default_axis=DEFAULT_AXIS):
        """Extract axes and angles; `times` must be increasing"""
        self.times = np.asarray(times, dtype=float)
        self.quaternions = np.asarray(quaternions, dtype=float)
        self.axes, self.angles = quaternions_to_axis_angle(self.quaternions, default_axis)

    def reordered(self, order):
        """Copy with samples permuted by `order`"""
        traj = RotationTrajectory.__new__(RotationTrajectory)
        traj.times = self.times[order]
        traj.quaternions = self.quaternions[order]
        traj.axes = self.axes[order]
        traj.angles = self.angles[order]
        return traj

    def __len__(self):
        return len(self.times)

    def __getitem__(self, i):
        return AxisAngle(self.axes[i], self.angles[i])

    def propagators(self):
        return quaternion_to_matrix(self.quaternions)


def axis_angle_from_v(v, times, tolerance=STEP_TOLERANCE, max_substeps=MAX_SUBSTEPS,
                      default_axis=DEFAULT_AXIS, log_level=None):
    """Axis and angle of the pulse propagator at `times`

    The Schroedinger equation i dP/dt = sigma . v(t) P is integrated by
    midpoint exponentials with step halving and the axis and angle are
    read from P = cos(psi/2) - i sin(psi/2) sigma . axis.

    Parameters
    ----------
    v : PulseShape or callable
        pulse, or a callable mapping times (N,) to vectors (N, 3)
    times : array-like
        times within [0, 1]
    tolerance : float
        convergence threshold of successive step halvings

    Returns
    -------
    RotationTrajectory

    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0) or np.any(times > 1):
        raise PulseDomainError('Time must lie in [0, 1] (fractions of tau_p)')
    order = np.argsort(times)
    func, breakpoints = vector_amplitude(v)
    q = solve_quaternions(func, times[order], breakpoints, tolerance, max_substeps, log_level)
    # axis continuity is followed in increasing time
    traj = RotationTrajectory(times[order], q, default_axis)
    return traj.reordered(np.argsort(order))


def _derivative(func, t, h):
    return (np.asarray(func(t + h)) - np.asarray(func(t - h))) / (2 * h)


def v_from_axis_angle(axis, angle, t, axis_derivative=None, angle_derivative=None,
                      step=1e-6):
    """Control vector v(t) of a trajectory given as axis and angle paths

    2 v = psi' a + a' sin(psi) - (1 - cos(psi)) (a' x a)

    Parameters
    ----------
    axis : callable
        times (N,) -> unit vectors (N, 3)
    angle : callable
        times (N,) -> angles (N,)
    t : array-like
        evaluation times
    axis_derivative, angle_derivative : callable, optional
        analytic derivatives; central differences with `step` otherwise

    Returns
    -------
    numpy.ndarray (N, 3)

    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a = _unit_vectors(axis(t))
    psi = np.asarray(angle(t), dtype=float)
    if axis_derivative is None:
        da = _derivative(axis, t, step)
    else:
        da = np.asarray(axis_derivative(t), dtype=float)
    if angle_derivative is None:
        dpsi = _derivative(angle, t, step)
    else:
        dpsi = np.asarray(angle_derivative(t), dtype=float)
    two_v = (dpsi[:, None] * a + np.sin(psi)[:, None] * da
             - (1 - np.cos(psi))[:, None] * np.cross(da, a))
    return two_v / 2.


class Trajectory(object):
    """Rotation path of a pulse on [0, 1]

    Subclasses provide rotation_matrices(t) for arrays of times,
    the switching instants and the highest harmonic (used to size
    quadrature rules).
    """
    breakpoints = np.array([])
    max_harmonic = 0

    def rotation_matrices(self, t):
        raise NotImplementedError


class PulseTrajectory(Trajectory):
    """Fixed-axis trajectory of a PulseShape"""

    def __init__(self, pulse):
        self.pulse = pulse
        self.breakpoints = pulse.breakpoints()
        self.max_harmonic = pulse.max_harmonic

    def axis_angle(self, t):
        t = np.asarray(t, dtype=float)
        axes = np.broadcast_to(self.pulse.axis, t.shape + (3,))
        return axes, self.pulse.angle(t)

    def rotation_matrices(self, t):
        return rotation_matrices(*self.axis_angle(t))


class FunctionTrajectory(Trajectory):
    """Trajectory given by callables axis(t) -> (N, 3) and angle(t) -> (N,)"""

    def __init__(self, axis, angle, breakpoints=(), max_harmonic=4):
        self.axis = axis
        self.angle = angle
        self.breakpoints = np.asarray(breakpoints, dtype=float)
        self.max_harmonic = max_harmonic

    def axis_angle(self, t):
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        axes = np.asarray(self.axis(flat), dtype=float).reshape(t.shape + (3,))
        return axes, np.asarray(self.angle(flat), dtype=float).reshape(t.shape)

    def rotation_matrices(self, t):
        return rotation_matrices(*self.axis_angle(t))


class VectorTrajectory(Trajectory):
    """Trajectory of a control vector v(t), obtained by integration"""

    def __init__(self, v, breakpoints=(), max_harmonic=4, tolerance=STEP_TOLERANCE):
        self.v = v
        self.breakpoints = np.asarray(breakpoints, dtype=float)
        self.max_harmonic = max_harmonic
        self.tolerance = tolerance

    def rotation_matrices(self, t):
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        order = np.argsort(flat)
        q = np.empty((len(flat), 4))
        q[order] = solve_quaternions(self.v, flat[order], self.breakpoints, self.tolerance)
        return quaternion_rotation_matrices(q).reshape(t.shape + (3, 3))


def as_trajectory(source):
    """Trajectory of a PulseShape, or `source` itself if it is one"""
    if isinstance(source, Trajectory):
        return source
    return PulseTrajectory(source)
