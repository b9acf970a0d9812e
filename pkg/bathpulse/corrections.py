# Name:    corrections.py
# Purpose: First and second order correction residuals of decoupling pulses
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

from collections import OrderedDict

import numpy as np
from scipy.special import spherical_jn

from bathpulse.pulse import PIECEWISE, _check_time
from bathpulse.rotation import as_trajectory
from bathpulse.utils import (AXIS_LABELS, LEVI_CIVITA, CompositeGaussLegendre,
                             add_logger)
from bathpulse.exceptions import UnsupportedConfigurationError, IntegratorConvergenceError

QUADRATURE_TOLERANCE = 1e-11
QUADRATURE_ORDER = 16
# 64 nodes per period of the highest harmonic
NODES_PER_PERIOD = 64
MAX_DOUBLINGS = 10
Y_AXIS = np.array([0., 1., 0.])

ETA_NAMES = ('eta11', 'eta12', 'eta21', 'eta22', 'eta23')


class CorrectionVector(object):
    """Residuals of the first (eta11, eta12) and second order
    (eta21, eta22, eta23) corrections of a y-axis pulse with z coupling

    First order values are in units of tau_p, second order values in
    units of tau_p**2; coupling and bath prefactors are stripped.
    """

    def __init__(self, eta11, eta12, eta21, eta22, eta23):
        self.eta11 = float(eta11)
        self.eta12 = float(eta12)
        self.eta21 = float(eta21)
        self.eta22 = float(eta22)
        self.eta23 = float(eta23)

    def __repr__(self):
        return 'CorrectionVector(%s)' % ', '.join(
            '%s=%.3e' % (k, v) for k, v in self.as_dict().items())

    def __iter__(self):
        return iter(self.values())

    def values(self):
        return np.array([getattr(self, name) for name in ETA_NAMES])

    def as_dict(self):
        return OrderedDict((name, getattr(self, name)) for name in ETA_NAMES)

    @property
    def first_order(self):
        return np.array([self.eta11, self.eta12])

    @property
    def second_order(self):
        return np.array([self.eta21, self.eta22, self.eta23])

    def order(self, tolerance=1e-4):
        """Highest correction order whose residuals all vanish (0, 1 or 2)"""
        if np.max(np.abs(self.first_order)) >= tolerance:
            return 0
        if np.max(np.abs(self.second_order)) >= tolerance:
            return 1
        return 2


def n_vector(pulse, t):
    """Toggling-frame coupling vectors n_j(t) of a pulse

    Parameters
    ----------
    pulse : PulseShape or rotation.Trajectory
    t : float or numpy.ndarray
        time(s) within [0, 1]

    Returns
    -------
    numpy.ndarray (..., 3, 3) : column j is n_j, the rotated coupling
        direction j; entry (i, j) is n_{i,j}

    """
    t = _check_time(t)
    return as_trajectory(pulse).rotation_matrices(t)


def _segment_integrals(pulse):
    # per segment: int e^{i psi}, int t e^{i psi} and the in-segment part
    # of the double integral of sin(psi(t1) - psi(t2)) over t2 < t1
    start, end = pulse.starts, pulse.ends
    width = end - start
    half = width / 2.
    middle = start + half
    omega = 2 * pulse.amplitudes
    phase = np.exp(1j * pulse.angle(middle))
    plain = width * np.sinc(omega * width / (2 * np.pi))
    first = phase * plain
    moment = phase * (middle * plain + 2j * half ** 2 * spherical_jn(1, omega * half))
    x = omega * width
    small = np.abs(x) < 1e-2
    safe_x = np.where(small, 1., x)
    ratio = np.where(small, x / 6. - x ** 3 / 120. + x ** 5 / 5040.,
                     (safe_x - np.sin(safe_x)) / safe_x ** 2)
    inside = width ** 2 * ratio
    return first, moment, inside


def _eta_closed_form(pulse):
    first, moment, inside = _segment_integrals(pulse)
    before = np.cumsum(first) - first
    eta23 = 2 * np.sum(np.imag(first * np.conj(before)) + inside)
    total, total_moment = np.sum(first), np.sum(moment)
    return np.array([total.imag, total.real, total_moment.imag, total_moment.real, eta23])


def _eta_quadrature(pulse, n_panels, order=QUADRATURE_ORDER):
    rule = CompositeGaussLegendre.from_breakpoints(pulse.breakpoints(), n_panels, order)
    psi = pulse.angle(rule.nodes)
    partial_nodes, _ = rule.partial_nodes()
    partial_psi = pulse.angle(partial_nodes)
    sin_psi, cos_psi = np.sin(psi), np.cos(psi)
    cum_sin = rule.cumulative(sin_psi, np.sin(partial_psi))
    cum_cos = rule.cumulative(cos_psi, np.cos(partial_psi))
    t = rule.nodes
    return np.array([rule.integrate(sin_psi),
                     rule.integrate(cos_psi),
                     rule.integrate(t * sin_psi),
                     rule.integrate(t * cos_psi),
                     2 * rule.integrate(sin_psi * cum_cos - cos_psi * cum_sin)])


def _converged(evaluate, n_panels, tolerance, max_doublings, logger, what):
    previous = evaluate(n_panels)
    for _ in range(max_doublings):
        n_panels *= 2
        current = evaluate(n_panels)
        change = np.max(np.abs(current - previous))
        logger.debug('%s: %d panels, change %.2e', what, n_panels, change)
        if change < tolerance:
            return current
        previous = current
    raise IntegratorConvergenceError('%s did not converge with %d panels' % (what, n_panels),
                                     previous, current, n_panels)


def initial_panels(max_harmonic, order=QUADRATURE_ORDER):
    """Number of panels giving NODES_PER_PERIOD nodes per highest harmonic"""
    return max(4, int(np.ceil(NODES_PER_PERIOD * max(1, max_harmonic) / order)))


def eta_specific(pulse, tau_p=1., method='auto', tolerance=QUADRATURE_TOLERANCE,
                 log_level=None):
    """Correction residuals eta11 ... eta23 of a y-axis pulse, z coupling

        eta11 = int sin(psi)     eta12 = int cos(psi)
        eta21 = int t sin(psi)   eta22 = int t cos(psi)
        eta23 = int int sin(psi(t1) - psi(t2)) sgn(t1 - t2)

    Parameters
    ----------
    pulse : PulseShape
        pulse with the fixed axis y
    tau_p : float
        pulse duration; first order scales as tau_p, second as tau_p**2
    method : str
        'closed-form' (piecewise-constant pulses only), 'quadrature' or
        'auto' (closed form when available)
    tolerance : float
        agreement of successive panel doublings for quadrature

    Returns
    -------
    CorrectionVector

    Raises
    ------
    UnsupportedConfigurationError : the axis is not y, or closed form for
        a harmonic pulse

    """
    logger = add_logger('bathpulse', log_level)
    if np.max(np.abs(np.asarray(pulse.axis) - Y_AXIS)) > 1e-12:
        raise UnsupportedConfigurationError('eta_specific needs a pulse about y; '
                                            'use general_residuals for axis %s' % pulse.axis)
    if method == 'auto':
        method = 'closed-form' if pulse.kind == PIECEWISE else 'quadrature'
    if method == 'closed-form':
        if pulse.kind != PIECEWISE:
            raise UnsupportedConfigurationError('Closed form is available for '
                                                'piecewise-constant pulses only')
        values = _eta_closed_form(pulse)
    elif method == 'quadrature':
        values = _converged(lambda n: _eta_quadrature(pulse, n),
                            initial_panels(pulse.max_harmonic), tolerance,
                            MAX_DOUBLINGS, logger, 'eta quadrature')
    else:
        raise ValueError('Unknown method %r' % method)
    values = values * np.array([tau_p, tau_p, tau_p ** 2, tau_p ** 2, tau_p ** 2])
    return CorrectionVector(*values)


def _label(*axes):
    return ''.join(AXIS_LABELS[a] for a in axes)


# (l, m) pairs with l <= m
UPPER_PAIRS = [(l, m) for l in range(3) for m in range(l, 3)]
# (j, k) pairs with j < k
STRICT_PAIRS = [(j, k) for j in range(3) for k in range(j + 1, 3)]


class GeneralResiduals(object):
    """All 39 correction residuals of a pulse with an arbitrary axis

    Attributes
    ----------
    first_order : numpy.ndarray (3, 3)
        int n_{i,j}
    second_order_a : numpy.ndarray (3, 3)
        int t n_{i,j}
    double_integrals : numpy.ndarray (3, 3, 3, 3)
        K[j, l, k, m] = int int n_{j,l}(t1) n_{k,m}(t2) sgn(t1 - t2)
    second_order_b : OrderedDict
        (i, l, m), l <= m : sum_jk eps_ijk K[j, l, k, m]; 18 values,
        the raw integral also for l = m
    second_order_c : OrderedDict
        (j, k), j < k : sum_i K[i, j, i, k]; 3 values

    """

    def __init__(self, first_order, second_order_a, double_integrals):
        self.first_order = np.asarray(first_order)
        self.second_order_a = np.asarray(second_order_a)
        self.double_integrals = np.asarray(double_integrals)
        b = np.einsum('ijk,jlkm->ilm', LEVI_CIVITA, self.double_integrals)
        self.second_order_b = OrderedDict(
            ((i, l, m), b[i, l, m]) for i in range(3) for l, m in UPPER_PAIRS)
        c = np.einsum('ijik->jk', self.double_integrals)
        self.second_order_c = OrderedDict(((j, k), c[j, k]) for j, k in STRICT_PAIRS)

    def __len__(self):
        return (self.first_order.size + self.second_order_a.size
                + len(self.second_order_b) + len(self.second_order_c))

    def flat(self):
        """Ordered dict of all 39 labelled residuals"""
        result = OrderedDict()
        for i in range(3):
            for j in range(3):
                result['first_%s' % _label(i, j)] = self.first_order[i, j]
        for i in range(3):
            for j in range(3):
                result['second_a_%s' % _label(i, j)] = self.second_order_a[i, j]
        for (i, l, m), value in self.second_order_b.items():
            result['second_b_%s_%s' % (_label(i), _label(l, m))] = value
        for (j, k), value in self.second_order_c.items():
            result['second_c_%s' % _label(j, k)] = value
        return result

    def reduced(self, coupling='general', static_bath=False):
        """Residuals relevant for a coupling structure

        Parameters
        ----------
        coupling : str
            'general' keeps every residual; 'z' (coupling along z only)
            keeps the z column of the first and time-weighted residuals
            and the three l = m = z double integrals
        static_bath : bool
            drop the time-weighted residuals (bath commuting with coupling)

        Returns
        -------
        OrderedDict

        """
        if coupling not in ('general', 'z'):
            raise UnsupportedConfigurationError('Unknown coupling %r' % coupling)
        keep = []
        for key in self.flat():
            if static_bath and key.startswith('second_a'):
                continue
            if coupling == 'z':
                if key.startswith('second_c'):
                    continue
                if key.startswith('second_b') and not key.endswith('_zz'):
                    continue
                if key.startswith(('first', 'second_a')) and not key.endswith('z'):
                    continue
            keep.append(key)
        flat = self.flat()
        return OrderedDict((key, flat[key]) for key in keep)

    def max_abs(self, coupling='general', static_bath=False):
        return max(abs(v) for v in self.reduced(coupling, static_bath).values())


def _general_quadrature(trajectory, n_panels, order=QUADRATURE_ORDER):
    rule = CompositeGaussLegendre.from_breakpoints(trajectory.breakpoints, n_panels, order)
    d = trajectory.rotation_matrices(rule.nodes)
    partial_nodes, _ = rule.partial_nodes()
    cumulative = rule.cumulative(d, trajectory.rotation_matrices(partial_nodes))
    total = rule.integrate(d)
    weighted = rule.integrate(rule.nodes[..., None, None] * d)
    # int int f(t1) g(t2) sgn(t1 - t2) = int f(t1) (2 G(t1) - G(1)) dt1
    signed = 2 * cumulative - total
    double = np.einsum('pn,pnjl,pnkm->jlkm', rule.weights, d, signed)
    return np.concatenate([total.ravel(), weighted.ravel(), double.ravel()])


def general_residuals(trajectory, tolerance=QUADRATURE_TOLERANCE, log_level=None):
    """All 39 first and second order residuals for an arbitrary rotation path

    The double integrals are reduced to single integrals over cumulative
    Gauss-Legendre sums.

    Parameters
    ----------
    trajectory : PulseShape or rotation.Trajectory

    Returns
    -------
    GeneralResiduals

    """
    logger = add_logger('bathpulse', log_level)
    trajectory = as_trajectory(trajectory)
    values = _converged(lambda n: _general_quadrature(trajectory, n),
                        initial_panels(trajectory.max_harmonic), tolerance,
                        MAX_DOUBLINGS, logger, 'general residuals')
    return GeneralResiduals(values[:9].reshape(3, 3), values[9:18].reshape(3, 3),
                            values[18:].reshape(3, 3, 3, 3))


def double_integral_grid(f, g, n=2000):
    """Direct midpoint-grid double integral of f(t1) g(t2) sgn(t1 - t2)

    O(n**2) reference for the cumulative reduction; f and g map times
    (N,) to values (N,).
    """
    t = (np.arange(n) + 0.5) / n
    sign = np.sign(t[:, None] - t[None, :])
    return np.sum(f(t)[:, None] * g(t)[None, :] * sign) / n ** 2

