# Name:    designer.py
# Purpose: Root finding of pulse parameters that cancel correction residuals
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
from scipy.optimize import minimize_scalar

from bathpulse.pulse import (PIECEWISE, HARMONIC, ANGLE_TOLERANCE, PulseShape, lookup,
                             harmonic_pulse)
from bathpulse.corrections import eta_specific, ETA_NAMES
from bathpulse.utils import add_logger, parse_angle
from bathpulse.exceptions import (PulseDomainError, DesignConvergenceError,
                                  SingularJacobianError, UnsupportedConfigurationError)

DESIGN_TOLERANCE = 1e-10
MAX_ITERATIONS = 200
JACOBIAN_STEP = 1e-7
MIN_DAMPING = 2. ** -30
CONDITION_LIMIT = 1e14


def _is_close(theta, value):
    return abs(theta - value) < 1e-9


def default_targets(theta, symmetric, second_order):
    """Residuals that must be zeroed explicitly

    For v(t) = v(1 - t) the identities psi(1 - t) = theta - psi(t) make
    eta12 follow from eta11 and one of eta21, eta22 follow from the other;
    at theta = pi eta21 = eta11 / 2 so eta22 is the free one.
    """
    if not symmetric:
        targets = ['eta11', 'eta12']
        if second_order:
            targets += ['eta21', 'eta22', 'eta23']
        return targets
    targets = ['eta11']
    if second_order:
        targets.append('eta21' if _is_close(theta, np.pi / 2) else 'eta22')
        targets.append('eta23')
    return targets


class CompositeFamily(object):
    """Piecewise-constant pulses with a fixed sign pattern

    Parameters are the segment magnitudes followed by the free switching
    instants. Symmetric families mirror the instants about t = 1/2.

    Parameters
    ----------
    name : str
    magnitude_index : list of int
        which magnitude parameter every segment uses
    signs : list of float
        sign of every segment
    symmetric : bool
    second_order : bool
        whether the family is meant to cancel second order residuals

    """
    kind = PIECEWISE
    has_angle_row = True

    def __init__(self, name, magnitude_index, signs, symmetric, second_order):
        self.name = name
        self.magnitude_index = list(magnitude_index)
        self.signs = np.array(signs, dtype=float)
        self.symmetric = symmetric
        self.second_order = second_order
        self.n_segments = len(self.magnitude_index)
        self.n_magnitudes = max(self.magnitude_index) + 1
        if symmetric:
            self.n_instants = (self.n_segments - 1) // 2
        else:
            self.n_instants = self.n_segments - 1

    def with_signs(self, signs):
        if len(signs) != self.n_segments:
            raise UnsupportedConfigurationError('Family %s has %d segments, got %d signs'
                                                % (self.name, self.n_segments, len(signs)))
        return CompositeFamily(self.name, self.magnitude_index, signs, self.symmetric,
                               self.second_order)

    @property
    def n_params(self):
        return self.n_magnitudes + self.n_instants

    def instants(self, x):
        free = list(x[self.n_magnitudes:])
        if self.symmetric:
            return free + [1. - tau for tau in reversed(free)]
        return free

    def build(self, theta, x, check_angle=False, name=None):
        x = np.asarray(x, dtype=float)
        magnitudes = x[:self.n_magnitudes]
        amplitudes = self.signs * magnitudes[self.magnitude_index]
        # iterates may miss psi(1) = theta; that is one of the residual rows
        tolerance = ANGLE_TOLERANCE if check_angle else np.inf
        return PulseShape(PIECEWISE, theta,
                          segments=list(zip(self.instants(x) + [1.], amplitudes)),
                          name=name, angle_tolerance=tolerance)

    def parameters_of(self, pulse):
        if pulse.kind != PIECEWISE or pulse.n_segments != self.n_segments:
            raise UnsupportedConfigurationError('%s is not a %s pulse' % (pulse, self.name))
        magnitudes = np.zeros(self.n_magnitudes)
        for segment, index in reversed(list(enumerate(self.magnitude_index))):
            magnitudes[index] = abs(pulse.amplitudes[segment])
        instants = pulse.breakpoints()[:self.n_instants]
        return np.concatenate([magnitudes, instants])

    def signs_of(self, pulse):
        return np.sign(pulse.amplitudes)


class HarmonicFamily(object):
    """Harmonic-series pulses of a named ansatz; psi(1) = theta holds exactly"""
    kind = HARMONIC
    has_angle_row = False

    def __init__(self, name, ansatz, n_params, symmetric, second_order):
        self.name = name
        self.ansatz = ansatz
        self.n_params = n_params
        self.symmetric = symmetric
        self.second_order = second_order

    def with_signs(self, signs):
        raise UnsupportedConfigurationError('Family %s has no sign pattern' % self.name)

    def build(self, theta, x, check_angle=False, name=None):
        return harmonic_pulse(name, theta, self.ansatz, list(x))

    def parameters_of(self, pulse):
        if pulse.kind != HARMONIC or pulse.ansatz != self.ansatz:
            raise UnsupportedConfigurationError('%s is not a %s pulse' % (pulse, self.name))
        return np.array(pulse.coefficients)

    def signs_of(self, pulse):
        return None


FAMILIES = OrderedDict([
    ('composite3-asym', CompositeFamily('composite3-asym', [0, 0, 0], [1, -1, 1],
                                        symmetric=False, second_order=False)),
    ('composite3-sym', CompositeFamily('composite3-sym', [0, 0, 0], [1, -1, 1],
                                       symmetric=True, second_order=False)),
    ('composite5-sym', CompositeFamily('composite5-sym', [0, 0, 1, 0, 0], [-1, 1, -1, 1, -1],
                                       symmetric=True, second_order=True)),
    ('composite6-asym', CompositeFamily('composite6-asym', [0] * 6, [1, -1, 1, -1, 1, -1],
                                        symmetric=False, second_order=True)),
    ('harmonic38', HarmonicFamily('harmonic38', 'sym', 1, symmetric=True, second_order=False)),
    ('harmonic39', HarmonicFamily('harmonic39', 'asym', 2, symmetric=False,
                                  second_order=False)),
    ('harmonic40', HarmonicFamily('harmonic40', 'sym2nd', 3, symmetric=True,
                                  second_order=True)),
])

# guess name : (family, catalog prefix)
NAMED_GUESSES = OrderedDict([
    ('corpse', ('composite3-asym', 'CORPSE')),
    ('scorpse', ('composite3-sym', 'SCORPSE')),
    ('sym', ('composite3-sym', 'SYM')),
    ('sym2nd', ('composite5-sym', 'SYM2ND')),
    ('asym2nd', ('composite6-asym', 'ASYM2ND')),
    ('cont-sym', ('harmonic38', 'CONT-SYM')),
    ('cont-asym', ('harmonic39', 'CONT-ASYM')),
    ('cont-sym2nd', ('harmonic40', 'CONT-SYM2ND')),
])


def get_family(name):
    try:
        return FAMILIES[name]
    except KeyError:
        raise UnsupportedConfigurationError('Unknown family %r, use one of %s'
                                            % (name, list(FAMILIES)))


def named_guess(name, theta):
    """Family, parameter vector and signs of a printed catalog solution

    Parameters
    ----------
    name : str
        one of NAMED_GUESSES
    theta : float
        pi or pi/2

    Returns
    -------
    family_name : str
    x : numpy.ndarray
    signs : numpy.ndarray or None

    """
    key = name.lower()
    if key not in NAMED_GUESSES:
        raise UnsupportedConfigurationError('Unknown guess %r, use one of %s'
                                            % (name, list(NAMED_GUESSES)))
    family_name, prefix = NAMED_GUESSES[key]
    if _is_close(theta, np.pi):
        suffix = '-Pi'
    elif _is_close(theta, np.pi / 2):
        suffix = '-Pi2'
    else:
        raise UnsupportedConfigurationError('Named guesses exist for theta = pi and pi/2 only')
    try:
        pulse = lookup(prefix + suffix)
    except KeyError:
        raise UnsupportedConfigurationError('No %s pulse for theta = %s' % (prefix, suffix[1:]))
    family = FAMILIES[family_name]
    return family_name, family.parameters_of(pulse), family.signs_of(pulse)


class DesignProblem(object):
    """Square root-finding problem for the parameters of a pulse family

    Parameters
    ----------
    family : str
        one of FAMILIES
    theta : float or str
        target rotation angle
    targets : list of str
        residuals to zero; chosen from the family symmetry when None
    guess : array-like or str
        initial parameters or a name from NAMED_GUESSES
    signs : list of float
        sign pattern of composite families
    tolerance : float
        required residual norm
    max_iter : int

    """

    def __init__(self, family, theta, targets=None, guess=None, signs=None,
                 tolerance=DESIGN_TOLERANCE, max_iter=MAX_ITERATIONS):
        self.theta = parse_angle(theta)
        self.family_name = family
        self.family = get_family(family)
        if isinstance(guess, str):
            guess_family, guess, guess_signs = named_guess(guess, self.theta)
            if guess_family != family:
                raise UnsupportedConfigurationError('Guess belongs to family %s, not %s'
                                                    % (guess_family, family))
            if signs is None:
                signs = guess_signs
        if signs is not None:
            self.family = self.family.with_signs(signs)
        if guess is None:
            raise UnsupportedConfigurationError('An initial guess is required')
        self.guess = np.array(guess, dtype=float).reshape(-1)
        if not np.all(np.isfinite(self.guess)):
            raise PulseDomainError('Initial guess must be finite')
        if len(self.guess) != self.family.n_params:
            raise UnsupportedConfigurationError('Family %s takes %d parameters, got %d'
                                                % (family, self.family.n_params,
                                                   len(self.guess)))
        if targets is None:
            targets = default_targets(self.theta, self.family.symmetric,
                                      self.family.second_order)
        unknown = set(targets) - set(ETA_NAMES)
        if unknown:
            raise UnsupportedConfigurationError('Unknown targets %s' % sorted(unknown))
        self.targets = list(targets)
        n_rows = len(self.targets) + int(self.family.has_angle_row)
        if n_rows != self.family.n_params:
            raise UnsupportedConfigurationError(
                '%d residuals for %d parameters: the system must be square'
                % (n_rows, self.family.n_params))
        self.tolerance = tolerance
        self.max_iter = max_iter

    def pulse(self, x, check_angle=False, name=None):
        return self.family.build(self.theta, x, check_angle=check_angle, name=name)

    def residuals(self, x):
        """Residual vector; PulseDomainError for parameters breaking the ordering"""
        pulse = self.pulse(x)
        eta = eta_specific(pulse).as_dict()
        rows = [eta[name] for name in self.targets]
        if self.family.has_angle_row:
            rows.insert(0, pulse.angle(1.) - self.theta)
        return np.array(rows)


class DesignResult(object):
    """Solution of a DesignProblem, verified by eta_specific"""

    def __init__(self, pulse, x, residuals, nit, norm, success):
        self.pulse = pulse
        self.x = x
        self.residuals = residuals
        self.nit = nit
        self.norm = norm
        self.success = success

    def __repr__(self):
        return '<DesignResult success=%s nit=%d norm=%.2e x=%s>' % (
            self.success, self.nit, self.norm, self.x)

    def report(self):
        """Convergence report as an ordered dict"""
        report = OrderedDict([('converged', self.success),
                              ('iterations', self.nit),
                              ('residual_norm', self.norm),
                              ('angle', self.pulse.angle(1.))])
        report['parameters'] = [float(v) for v in self.x]
        report.update(self.residuals.as_dict())
        return report


def jacobian(func, x, f0=None, step=JACOBIAN_STEP):
    """Central-difference Jacobian with steps step * max(|x_i|, 1)"""
    x = np.asarray(x, dtype=float)
    columns = []
    for i in range(len(x)):
        h = step * max(abs(x[i]), 1.)
        dx = np.zeros_like(x)
        dx[i] = h
        columns.append((func(x + dx) - func(x - dx)) / (2 * h))
    return np.array(columns).T


def solve(problem, log_level=None):
    """Damped Newton iteration from the problem guess

    Steps are halved until the residual norm decreases and the switching
    instants stay ordered.

    Returns
    -------
    DesignResult

    Raises
    ------
    SingularJacobianError : Jacobian singular at an iterate
    DesignConvergenceError : no convergence within max_iter

    """
    logger = add_logger('bathpulse', log_level)
    x = problem.guess.copy()
    try:
        f = problem.residuals(x)
    except PulseDomainError as e:
        raise DesignConvergenceError('Invalid initial guess: %s' % e, x, np.inf, 0)
    norm = np.linalg.norm(f)
    nit = 0
    while norm >= problem.tolerance:
        if nit >= problem.max_iter:
            raise DesignConvergenceError('No convergence after %d iterations, residual norm '
                                         '%.3e' % (nit, norm), x, norm, nit)
        nit += 1
        try:
            jac = jacobian(problem.residuals, x)
        except PulseDomainError:
            raise DesignConvergenceError('Iterate too close to the domain boundary',
                                         x, norm, nit)
        condition = np.linalg.cond(jac) if np.all(np.isfinite(jac)) else np.inf
        if not np.isfinite(condition) or condition > CONDITION_LIMIT:
            raise SingularJacobianError('Singular Jacobian at %s; try a perturbed guess' % x,
                                        x, norm, nit)
        step = np.linalg.solve(jac, -f)
        damping = 1.
        while damping >= MIN_DAMPING:
            x_new = x + damping * step
            try:
                f_new = problem.residuals(x_new)
            except PulseDomainError:
                damping /= 2.
                continue
            if np.linalg.norm(f_new) < norm:
                break
            damping /= 2.
        else:
            raise DesignConvergenceError('Line search failed at residual norm %.3e' % norm,
                                         x, norm, nit)
        x, f = x_new, f_new
        norm = np.linalg.norm(f)
        logger.debug('iteration %d: damping %.3g, residual norm %.3e', nit, damping, norm)

    pulse = problem.pulse(x, check_angle=True, name=problem.family_name)
    residuals = eta_specific(pulse)
    logger.info('%s converged in %d iterations: %s', problem.family_name, nit, x)
    return DesignResult(pulse, x, residuals, nit, norm, True)


def polish(name, log_level=None):
    """Catalog pulse with its parameters re-solved to DESIGN_TOLERANCE

    Catalog values carry six printed digits, which leaves correction
    residuals near 1e-6. Newton iteration from the printed values removes
    them while moving each parameter by less than the printed precision.
    Reference pulses (CONST-Pi, CONST-Pi2) are returned unchanged.

    Parameters
    ----------
    name : str
        catalog or reference name, case-insensitive
    log_level : int

    Returns
    -------
    pulse : PulseShape
        named like the catalog entry
    polished : bool
        False for reference pulses

    Raises
    ------
    KeyError : unknown name
    DesignConvergenceError : the printed values do not converge

    """
    logger = add_logger('bathpulse', log_level)
    printed = lookup(name)
    guess_name = printed.name.rsplit('-', 1)[0].lower()
    if guess_name not in NAMED_GUESSES:
        return printed, False
    problem = DesignProblem(NAMED_GUESSES[guess_name][0], printed.theta, guess=guess_name)
    result = solve(problem, log_level=log_level)
    logger.info('%s polished: largest parameter change %.2e', printed.name,
                np.max(np.abs(result.x - problem.guess)))
    return problem.pulse(result.x, check_angle=True, name=printed.name), True


def max_amplitude(pulse, samples=20001):
    """Global maximum of |v(t)| and its location

    Piecewise-constant pulses return the largest segment magnitude and
    the start of that segment; smooth pulses are sampled densely and
    refined by a bounded scalar minimisation.

    Returns
    -------
    value : float
    location : float

    """
    if pulse.kind == PIECEWISE:
        index = int(np.argmax(np.abs(pulse.amplitudes)))
        return float(abs(pulse.amplitudes[index])), float(pulse.starts[index])
    t = np.linspace(0., 1., samples)
    v = np.abs(pulse.amplitude(t))
    index = int(np.argmax(v))
    dt = t[1] - t[0]
    bounds = (max(0., t[index] - dt), min(1., t[index] + dt))
    result = minimize_scalar(lambda s: -abs(pulse.amplitude(s)), bounds=bounds,
                             method='bounded', options={'xatol': 1e-12})
    if -result.fun >= v[index]:
        return float(-result.fun), float(result.x)
    return float(v[index]), float(t[index])
