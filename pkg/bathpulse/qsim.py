# Name:    qsim.py
# Purpose: Exact simulation of a spin coupled to a small quantum bath during
#          a pulse and extraction of the pulse error scaling
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

import warnings
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.linalg import expm, polar

from bathpulse.rotation import propagators
from bathpulse.utils import PAULI, IDENTITY_2, add_logger, panel_edges
from bathpulse.exceptions import (UnsupportedConfigurationError, IntegratorConvergenceError,
                                  ScalingFitError, PulseDomainError)
from bathpulse.warnings import FloorContaminationWarning

MAX_BATH_SPINS = 4
HERMITIAN_TOLERANCE = 1e-12
NORM_TOLERANCE = 1e-10
# absolute floor of the step-doubling test
INTEGRATOR_TOLERANCE = 1e-12
RELATIVE_TOLERANCE = 0.01
MAX_STEPS = 2 ** 16
# grid points below FLOOR_FACTOR * INTEGRATOR_TOLERANCE are not fitted
FLOOR_FACTOR = 100.
MIN_FIT_POINTS = 4
PERTURBATIVE_WINDOW = 0.3
DEFAULT_TAU_GRID = np.logspace(-3, -1, 8)

COUPLING_Z = 'z-only'
COUPLING_GENERAL = 'general'


def operator_norm(matrix):
    """Spectral norm (largest singular value)"""
    return float(np.linalg.norm(matrix, 2))


def _check_hermitian(matrix, what):
    matrix = np.array(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise PulseDomainError('%s must be a square matrix' % what)
    if np.max(np.abs(matrix - matrix.conj().T), initial=0.) > HERMITIAN_TOLERANCE:
        raise PulseDomainError('%s is not Hermitian' % what)
    return matrix


class BathSpec(object):
    """Bath Hamiltonian and coupling operators

    The total Hamiltonian during a pulse of duration tau_p is
    1 x H_b + sum_j lambda_j sigma_j x A_j + sum_j v_j(t/tau_p)/tau_p sigma_j x 1
    with the spin as first tensor factor.

    Parameters
    ----------
    h_b : numpy.ndarray (d, d)
        bath Hamiltonian, d = 2**n_spins
    operators : sequence of three (d, d) arrays
        coupling operators A_x, A_y, A_z, each of unit operator norm or zero
    lambdas : 3-vector
        coupling strengths

    """
    # instance attributes
    h_b = None
    operators = None
    lambdas = None

    def __init__(self, h_b, operators, lambdas):
        self.h_b = _check_hermitian(h_b, 'H_b')
        dim = self.h_b.shape[0]
        n_spins = int(round(np.log2(dim))) if dim > 0 else 0
        if 2 ** n_spins != dim or not 1 <= n_spins <= MAX_BATH_SPINS:
            raise UnsupportedConfigurationError('Bath dimension %d is not 2**N with 1 <= N <= %d'
                                                % (dim, MAX_BATH_SPINS))
        if len(operators) != 3:
            raise PulseDomainError('Three coupling operators (x, y, z) are needed')
        self.operators = np.array([_check_hermitian(a, 'A_%s' % label)
                                   for a, label in zip(operators, 'xyz')])
        if self.operators.shape != (3, dim, dim):
            raise PulseDomainError('Coupling operators must match the dimension of H_b')
        for a, label in zip(self.operators, 'xyz'):
            norm = operator_norm(a)
            if norm != 0 and abs(norm - 1.) > NORM_TOLERANCE:
                raise PulseDomainError('A_%s must have unit operator norm, not %.6g'
                                       % (label, norm))
        self.lambdas = np.array(lambdas, dtype=float).reshape(3)
        self.n_spins = n_spins
        self.dim = dim
        for a in self.operators:
            a.flags.writeable = False
        self.h_b.flags.writeable = False

    def __repr__(self):
        return '<BathSpec N_b=%d omega_b=%.4g lambda=%s>' % (self.n_spins, self.omega_b,
                                                            self.lambdas)

    @property
    def omega_b(self):
        return operator_norm(self.h_b)

    @property
    def total_dim(self):
        return 2 * self.dim

    def coupling(self):
        """sum_j lambda_j sigma_j x A_j"""
        return sum(lam * np.kron(s, a) for lam, s, a in zip(self.lambdas, PAULI, self.operators))

    def static_hamiltonian(self):
        """1 x H_b + coupling, the part without pulse"""
        return np.kron(IDENTITY_2, self.h_b) + self.coupling()

    def hamiltonian(self, v, tau_p=1.):
        """Total Hamiltonian for control vectors v (..., 3) in units of 1/tau_p"""
        return self.static_hamiltonian() + _spin_field(np.asarray(v) / tau_p, self.dim)


def _spin_field(v, dim):
    # sigma . v x 1 for vectors (..., 3)
    spin = np.einsum('...k,kij->...ij', v, PAULI)
    eye = np.eye(dim)
    field = spin[..., :, None, :, None] * eye[:, None, :]
    return field.reshape(spin.shape[:-2] + (2 * dim, 2 * dim))


def _step_unitaries(generators, h):
    # exp(-i h M) of Hermitian M (..., D, D)
    w, vecs = np.linalg.eigh(generators)
    phases = np.exp(-1j * h[..., None] * w)
    return np.matmul(vecs * phases[..., None, :], np.conj(np.swapaxes(vecs, -1, -2)))


def time_ordered_product(steps):
    """Product U_N ... U_2 U_1 of unitaries stacked as (N, D, D)"""
    steps = np.asarray(steps)
    while len(steps) > 1:
        if len(steps) % 2:
            steps = np.concatenate([steps, np.eye(steps.shape[-1])[None]])
        steps = np.matmul(steps[1::2], steps[0::2])
    return steps[0]


def _midpoint_unitary(pulse, bath, tau_p, edges, substeps):
    # time in units of tau_p: generator tau_p H_static + sigma . v(s) x 1
    width = np.diff(edges) / substeps
    left = np.repeat(edges[:-1], substeps)
    h = np.repeat(width, substeps)
    index = np.tile(np.arange(substeps), len(width))
    mids = left + (index + 0.5) * h
    v = pulse.amplitude(mids)[:, None] * pulse.axis
    generators = tau_p * bath.static_hamiltonian() + _spin_field(v, bath.dim)
    return time_ordered_product(_step_unitaries(generators, h))


def distance(u, v):
    """Global-phase-invariant distance sqrt(1 - |tr(U^+ V)| / dim)

    Evaluated as ||V^+ U - e^{i phi} 1||_F / sqrt(2 dim) with
    phi = arg tr(V^+ U), which is free of cancellation for close unitaries.

    Returns
    -------
    float in [0, 1]

    """
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError('Unitaries of shapes %s and %s cannot be compared'
                         % (u.shape, v.shape))
    dim = u.shape[0]
    w = np.dot(np.conj(v.T), u)
    trace = np.trace(w)
    phase = np.exp(1j * np.angle(trace)) if trace != 0 else 1.
    d = np.linalg.norm(w - phase * np.eye(dim)) / np.sqrt(2 * dim)
    return float(min(1., d))


def target(pulse, bath, tau_p):
    """Decoupled evolution (P_theta on the spin) x exp(-i tau_p H_b)

    The spin factor is the propagator of the net rotation psi(1) actually
    produced by the waveform.
    """
    spin = propagators(pulse.axis, pulse.angle(1.))
    return np.kron(spin, expm(-1j * tau_p * bath.h_b))


def evolve(pulse, bath, tau_p, steps=None, tolerance=INTEGRATOR_TOLERANCE,
           max_steps=MAX_STEPS, log_level=None):
    """Time-ordered propagator of spin and bath during the pulse

    Midpoint exponentials of the total Hamiltonian on steps aligned with
    the switching instants (exact for piecewise-constant pulses). The
    step count is doubled, with Richardson extrapolation projected back
    to a unitary, until successive results are closer than
    max(0.01 * pulse error, tolerance).

    Parameters
    ----------
    pulse : PulseShape
    bath : BathSpec
    tau_p : float
        pulse duration
    steps : int
        initial number of steps; 8 per harmonic for smooth pulses when None
    tolerance : float
        absolute convergence floor
    max_steps : int
        step budget

    Returns
    -------
    numpy.ndarray (2d, 2d) unitary

    Raises
    ------
    IntegratorConvergenceError : budget exhausted

    """
    logger = add_logger('bathpulse', log_level)
    if tau_p < 0:
        raise PulseDomainError('tau_p must be nonnegative')
    if steps is None:
        steps = max(1, 8 * pulse.max_harmonic)
    if steps < 1:
        raise PulseDomainError('steps must be >= 1')
    edges = panel_edges(pulse.breakpoints(), steps)
    reference = target(pulse, bath, tau_p)

    substeps = 1
    previous = _midpoint_unitary(pulse, bath, tau_p, edges, substeps)
    previous_extrapolated = extrapolated = None
    while substeps * (len(edges) - 1) < max_steps:
        substeps *= 2
        current = _midpoint_unitary(pulse, bath, tau_p, edges, substeps)
        threshold = max(RELATIVE_TOLERANCE * distance(current, reference), tolerance)
        if distance(current, previous) < threshold:
            logger.debug('tau_p=%.3g: exact steps, %d substeps', tau_p, substeps)
            return current
        extrapolated = polar((4 * current - previous) / 3.)[0]
        if previous_extrapolated is not None:
            threshold = max(RELATIVE_TOLERANCE * distance(extrapolated, reference), tolerance)
            if distance(extrapolated, previous_extrapolated) < threshold:
                logger.debug('tau_p=%.3g: converged with %d steps', tau_p,
                             substeps * (len(edges) - 1))
                return extrapolated
        previous, previous_extrapolated = current, extrapolated
    raise IntegratorConvergenceError('Propagator at tau_p=%g did not converge within %d steps'
                                     % (tau_p, max_steps), previous_extrapolated,
                                     extrapolated, substeps * (len(edges) - 1))


class ScalingReport(object):
    """Pulse errors over a tau_p grid and the fitted log-log slope

    Attributes
    ----------
    tau_grid : numpy.ndarray
    distances : numpy.ndarray
        nan where evolution failed
    used : numpy.ndarray of bool
        points entering the fit
    slope, intercept : float
        log(distance) = slope * log(tau_p) + intercept
    fit_residual : float
        rms deviation of the fitted points

    """

    def __init__(self, tau_grid, distances, used, slope, intercept, fit_residual):
        self.tau_grid = np.asarray(tau_grid, dtype=float)
        self.distances = np.asarray(distances, dtype=float)
        self.used = np.asarray(used, dtype=bool)
        self.slope = float(slope)
        self.intercept = float(intercept)
        self.fit_residual = float(fit_residual)

    def __repr__(self):
        return '<ScalingReport slope=%.4f points=%d/%d>' % (self.slope, np.sum(self.used),
                                                            len(self.used))

    @property
    def excluded(self):
        return self.tau_grid[~self.used]

    def rows(self):
        """(tau_p, distance, used) tuples"""
        return list(zip(self.tau_grid, self.distances, self.used))

    def summary(self):
        return OrderedDict([('slope', self.slope),
                            ('intercept', self.intercept),
                            ('fit_residual', self.fit_residual),
                            ('points', int(np.sum(self.used))),
                            ('excluded', [float(t) for t in self.excluded])])


def _pulse_error(args):
    pulse, bath, tau_p, tolerance = args
    return distance(evolve(pulse, bath, tau_p, tolerance=tolerance), target(pulse, bath, tau_p))


def scaling_exponent(pulse, bath, tau_grid=None, workers=None,
                     tolerance=INTEGRATOR_TOLERANCE, log_level=None):
    """Fit the power law of the pulse error d(tau_p)

    The slope is order + 1 for a pulse whose corrections vanish up to
    `order`. Points below FLOOR_FACTOR * tolerance, or where the
    evolution does not converge, are excluded with a
    FloorContaminationWarning.

    Parameters
    ----------
    pulse : PulseShape
    bath : BathSpec
    tau_grid : array-like
        strictly increasing durations, 8 points in [1e-3, 1e-1] by default
    workers : int
        threads evaluating grid points (ordering of results is kept)

    Returns
    -------
    ScalingReport

    Raises
    ------
    ScalingFitError : fewer than four usable points

    """
    logger = add_logger('bathpulse', log_level)
    tau_grid = DEFAULT_TAU_GRID if tau_grid is None else np.asarray(tau_grid, dtype=float)
    if np.any(tau_grid <= 0) or np.any(np.diff(tau_grid) <= 0):
        raise PulseDomainError('tau_p grid must be positive and strictly increasing')
    scale = np.max(tau_grid) * (np.max(np.abs(bath.lambdas)) + bath.omega_b)
    if scale > PERTURBATIVE_WINDOW:
        logger.warning('tau_p * (lambda + omega_b) = %.3g exceeds the perturbative window %.2g',
                       scale, PERTURBATIVE_WINDOW)

    def job(tau_p):
        try:
            return _pulse_error((pulse, bath, tau_p, tolerance))
        except IntegratorConvergenceError as e:
            logger.warning('tau_p=%g skipped: %s', tau_p, e)
            return np.nan

    with ThreadPoolExecutor(max_workers=workers) as executor:
        distances = np.array(list(executor.map(job, tau_grid)))

    floor = FLOOR_FACTOR * tolerance
    used = np.isfinite(distances) & (distances >= floor)
    if not np.all(used):
        message = 'Excluded %d grid point(s) at the numerical floor: tau_p = %s' % (
            np.sum(~used), ', '.join('%g' % t for t in tau_grid[~used]))
        warnings.warn(message, FloorContaminationWarning)
        logger.warning(message)
    if np.sum(used) < MIN_FIT_POINTS:
        raise ScalingFitError('Only %d usable grid points, %d needed'
                              % (np.sum(used), MIN_FIT_POINTS))
    log_tau, log_d = np.log(tau_grid[used]), np.log(distances[used])
    slope, intercept = np.polyfit(log_tau, log_d, 1)
    fit_residual = np.sqrt(np.mean((log_d - (slope * log_tau + intercept)) ** 2))
    logger.info('%s: slope %.4f from %d points', getattr(pulse, 'name', pulse), slope,
                np.sum(used))
    return ScalingReport(tau_grid, distances, used, slope, intercept, fit_residual)


class RandomBathConfig(object):
    """Parameters of a reproducible random bath

    Parameters
    ----------
    seed : int
    n_spins : int
        1 to 4 bath spins
    omega_b : float
        operator norm of H_b; 0 gives a static bath
    lambdas : 3-vector
        coupling strengths; only lambda_z is used for z-only coupling
    coupling : str
        'z-only' or 'general'

    """

    def __init__(self, seed=0, n_spins=2, omega_b=1., lambdas=(0., 0., 1.),
                 coupling=COUPLING_Z):
        self.seed = seed
        self.n_spins = n_spins
        self.omega_b = omega_b
        self.lambdas = np.array(lambdas, dtype=float).reshape(3)
        self.coupling = coupling


def _bath_operator(n_spins, site, pauli):
    ops = [IDENTITY_2] * n_spins
    ops[site] = pauli
    result = ops[0]
    for op in ops[1:]:
        result = np.kron(result, op)
    return result


def _random_hermitian(rng, dim):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (x + x.conj().T) / 2.


def _normalized(matrix, norm):
    return matrix * (norm / operator_norm(matrix))


def random_bath(config):
    """Random BathSpec, identical for identical configurations

    H_b holds random fields on every bath spin and random exchange
    couplings between all pairs, scaled to operator norm omega_b. The
    coupling operators are random Hermitian matrices of unit norm;
    z-only coupling leaves A_x = A_y = 0 and lambda_x = lambda_y = 0.

    Raises
    ------
    UnsupportedConfigurationError : bath size or coupling structure

    """
    n_spins = config.n_spins
    if not 1 <= n_spins <= MAX_BATH_SPINS:
        raise UnsupportedConfigurationError('Bath size %r is not within 1..%d'
                                            % (n_spins, MAX_BATH_SPINS))
    if config.coupling not in (COUPLING_Z, COUPLING_GENERAL):
        raise UnsupportedConfigurationError('Unknown coupling %r' % config.coupling)
    rng = np.random.RandomState(config.seed)
    dim = 2 ** n_spins

    h_b = np.zeros((dim, dim), dtype=complex)
    for site in range(n_spins):
        for pauli, field in zip(PAULI, rng.normal(size=3)):
            h_b += field * _bath_operator(n_spins, site, pauli)
    for first in range(n_spins):
        for second in range(first + 1, n_spins):
            exchange = rng.normal(size=(3, 3))
            for a in range(3):
                for b in range(3):
                    h_b += exchange[a, b] * np.dot(_bath_operator(n_spins, first, PAULI[a]),
                                                   _bath_operator(n_spins, second, PAULI[b]))
    h_b = _normalized(h_b, config.omega_b) if config.omega_b > 0 else np.zeros((dim, dim))

    operators = [_normalized(_random_hermitian(rng, dim), 1.) for _ in range(3)]
    lambdas = config.lambdas.copy()
    if config.coupling == COUPLING_Z:
        operators[0] = np.zeros((dim, dim))
        operators[1] = np.zeros((dim, dim))
        lambdas[:2] = 0.
    return BathSpec(h_b, operators, lambdas)


# preset name : (omega_b, lambdas, coupling)
BATH_PRESETS = OrderedDict([
    ('z-dyn', (1., (0., 0., 1.), COUPLING_Z)),
    ('z-static', (0., (0., 0., 1.), COUPLING_Z)),
    ('general-dyn', (1., (1., 1., 1.), COUPLING_GENERAL)),
])


def bath_preset(name, seed=0, n_spins=2):
    """Random bath of a named preset: 'z-dyn', 'z-static' or 'general-dyn'"""
    if name not in BATH_PRESETS:
        raise UnsupportedConfigurationError('Unknown bath preset %r, use one of %s'
                                            % (name, list(BATH_PRESETS)))
    omega_b, lambdas, coupling = BATH_PRESETS[name]
    return random_bath(RandomBathConfig(seed, n_spins, omega_b, lambdas, coupling))
