# Name:    pulse.py
# Purpose: Container of PulseShape class and of the catalog of decoupling pulses
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

import json
from collections import OrderedDict

import numpy as np

from bathpulse.utils import parse_angle, CompositeGaussLegendre
from bathpulse.exceptions import PulseDomainError, PulseDefinitionError

PIECEWISE = 'piecewise-constant'
HARMONIC = 'harmonic-series'
KINDS = (PIECEWISE, HARMONIC)

# printed parameters are rounded to six digits
ANGLE_TOLERANCE = 1e-4
AXIS_TOLERANCE = 1e-12
Y_AXIS = (0., 1., 0.)


def _sym_coefficients(theta, a):
    # v = theta/2 + (a - theta/2) cos(2 pi t) - a cos(4 pi t)
    cos_c = [theta / 2., a - theta / 2., -a]
    return cos_c, [0., 0., 0.]


def _asym_coefficients(theta, a, b):
    # symmetric part plus b sin(2 pi t) - (b/2) sin(4 pi t)
    cos_c, _ = _sym_coefficients(theta, a)
    return cos_c, [0., b, -b / 2.]


def _sym2nd_coefficients(theta, a, b, c):
    cos_c = [theta / 2., a - theta / 2., b - a, c - b, -c]
    return cos_c, [0.] * 5


def _fourier_coefficients(theta, *coefficients):
    if len(coefficients) % 2 != 1:
        raise PulseDomainError('Fourier coefficients must be [c0, a1, b1, a2, b2, ...]')
    cos_c = [coefficients[0]] + list(coefficients[1::2])
    sin_c = [0.] + list(coefficients[2::2])
    return cos_c, sin_c


# name : (number of parameters or None for any, coefficient builder)
HARMONIC_ANSATZ = OrderedDict([
    ('sym', (1, _sym_coefficients)),
    ('asym', (2, _asym_coefficients)),
    ('sym2nd', (3, _sym2nd_coefficients)),
    ('fourier', (None, _fourier_coefficients)),
])


class PulseShape(object):
    """Control waveform v(t) on the normalized pulse window [0, 1]

    The pulse acts on the spin as sigma . axis v(t) with a fixed unit
    axis; time is measured in units of the pulse duration tau_p and the
    amplitude in units of 1/tau_p. The accumulated rotation angle is
    psi(t) = 2 int_0^t v(s) ds and psi(1) must reproduce the target
    angle theta.

    Parameters
    ----------
    kind : str
        'piecewise-constant' or 'harmonic-series'
    theta : float or str
        target rotation angle (radians, or a string like 'pi/2')
    segments : list of (float, float)
        piecewise-constant only: (end time, amplitude) of every segment.
        End times are strictly increasing and the last one equals 1.
    ansatz : str
        harmonic-series only: 'sym', 'asym', 'sym2nd' or 'fourier'
    coefficients : list of float
        harmonic-series only: (a,), (a, b), (a, b, c) for the named
        ansatz, or [c0, a1, b1, a2, b2, ...] for 'fourier'
    axis : 3-vector
        fixed unit rotation axis, y by default
    name : str
        optional label
    angle_tolerance : float
        allowed mismatch between psi(1) and theta

    Examples
    --------
        >>> p = PulseShape(PIECEWISE, 'pi', segments=[(1., np.pi / 2)])
        >>> p.angle(0.5)
        1.5707963267948966
        >>> q = PulseShape(HARMONIC, np.pi, ansatz='sym', coefficients=[-2.159224])

    """
    # instance attributes
    kind = None
    theta = None
    axis = None
    name = None
    ansatz = None
    coefficients = None
    ends = None
    amplitudes = None
    cos_coefficients = None
    sin_coefficients = None

    def __init__(self, kind, theta, segments=None, ansatz=None, coefficients=None,
                 axis=Y_AXIS, name=None, angle_tolerance=ANGLE_TOLERANCE):
        """Validate and store the waveform"""
        if kind not in KINDS:
            raise PulseDomainError('Unknown pulse kind %r, use one of %s' % (kind, KINDS))
        self.kind = kind
        self.theta = parse_angle(theta)
        self.name = name
        self.axis = _unit_axis(axis)

        if kind == PIECEWISE:
            self._init_segments(segments)
        else:
            self._init_harmonics(ansatz, coefficients)

        if not np.isfinite(self.theta):
            raise PulseDomainError('theta must be finite')
        if self.theta != 0 and not self._has_nonzero_amplitude():
            raise PulseDomainError('A pulse with theta != 0 needs a nonzero amplitude')
        mismatch = abs(self.angle(1.) - self.theta)
        if mismatch > angle_tolerance:
            raise PulseDomainError('Accumulated angle %.8f differs from theta %.8f by %.2e'
                                   % (self.angle(1.), self.theta, mismatch))

    def _init_segments(self, segments):
        if segments is None or len(segments) == 0:
            raise PulseDomainError('A piecewise-constant pulse needs segments')
        segments = np.array(segments, dtype=float)
        if segments.ndim != 2 or segments.shape[1] != 2:
            raise PulseDomainError('Segments must be (end time, amplitude) pairs')
        ends, amplitudes = segments[:, 0], segments[:, 1]
        if not np.all(np.isfinite(segments)):
            raise PulseDomainError('Segment end times and amplitudes must be finite')
        if ends[0] <= 0 or np.any(np.diff(ends) <= 0):
            raise PulseDomainError('Segment end times must increase strictly in (0, 1]')
        if ends[-1] != 1.:
            raise PulseDomainError('The last segment must end at 1, not %r' % ends[-1])
        self.ends = _readonly(ends)
        self.amplitudes = _readonly(amplitudes)
        self.starts = _readonly(np.concatenate([[0.], ends[:-1]]))
        durations = self.ends - self.starts
        self._angle_at_starts = _readonly(
            np.concatenate([[0.], 2 * np.cumsum(self.amplitudes * durations)[:-1]]))

    def _init_harmonics(self, ansatz, coefficients):
        if ansatz not in HARMONIC_ANSATZ:
            raise PulseDomainError('Unknown harmonic ansatz %r, use one of %s'
                                   % (ansatz, list(HARMONIC_ANSATZ)))
        if coefficients is None:
            raise PulseDomainError('A harmonic-series pulse needs coefficients')
        coefficients = [float(c) for c in np.atleast_1d(coefficients)]
        n_params, builder = HARMONIC_ANSATZ[ansatz]
        if n_params is not None and len(coefficients) != n_params:
            raise PulseDomainError('Ansatz %r takes %d coefficients, got %d'
                                   % (ansatz, n_params, len(coefficients)))
        if not np.all(np.isfinite(coefficients)):
            raise PulseDomainError('Coefficients must be finite')
        cos_c, sin_c = builder(self.theta, *coefficients)
        self.ansatz = ansatz
        self.coefficients = tuple(coefficients)
        self.cos_coefficients = _readonly(np.array(cos_c, dtype=float))
        self.sin_coefficients = _readonly(np.array(sin_c, dtype=float))
        self._harmonics = np.arange(len(cos_c))

    def _has_nonzero_amplitude(self):
        if self.kind == PIECEWISE:
            return bool(np.any(self.amplitudes != 0))
        return bool(np.any(self.cos_coefficients != 0) or np.any(self.sin_coefficients != 0))

    @property
    def max_harmonic(self):
        """Highest harmonic of the waveform (0 for piecewise-constant pulses)"""
        if self.kind == PIECEWISE:
            return 0
        return len(self.cos_coefficients) - 1

    @property
    def n_segments(self):
        return 0 if self.kind == HARMONIC else len(self.ends)

    def __repr__(self):
        label = self.name or self.kind
        return '<PulseShape %s theta=%.6f>' % (label, self.theta)

    def __eq__(self, other):
        if not isinstance(other, PulseShape):
            return NotImplemented
        return self.to_dict(with_name=False) == other.to_dict(with_name=False)

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def breakpoints(self):
        """Switching instants (interior segment ends), empty for harmonic pulses"""
        if self.kind == PIECEWISE:
            return self.ends[:-1].copy()
        return np.array([])

    def amplitude(self, t):
        """Amplitude v(t) for scalar or array t, without domain checks"""
        t = np.asarray(t, dtype=float)
        if self.kind == PIECEWISE:
            return self.amplitudes[self._segment_index(t)]
        phases = 2 * np.pi * t[..., None] * self._harmonics
        return (np.cos(phases) @ self.cos_coefficients
                + np.sin(phases) @ self.sin_coefficients)

    def angle(self, t):
        """Accumulated angle psi(t) = 2 int_0^t v(s) ds, without domain checks

        Piecewise-constant pulses are summed exactly segment by segment;
        the trigonometric series is integrated term by term.
        """
        t = np.asarray(t, dtype=float)
        if self.kind == PIECEWISE:
            index = self._segment_index(t)
            return (self._angle_at_starts[index]
                    + 2 * self.amplitudes[index] * (t - self.starts[index]))
        k = self._harmonics[1:]
        phases = 2 * np.pi * t[..., None] * k
        integral = (self.cos_coefficients[0] * t
                    + np.sin(phases) @ (self.cos_coefficients[1:] / (2 * np.pi * k))
                    + (1 - np.cos(phases)) @ (self.sin_coefficients[1:] / (2 * np.pi * k)))
        return 2 * integral

    def _segment_index(self, t):
        # half-open segments [t_{i-1}, t_i), the last one closed
        index = np.searchsorted(self.ends, t, side='right')
        return np.minimum(index, len(self.ends) - 1)

    def is_symmetric(self, samples=1001, tolerance=1e-9):
        """Check v(t) = v(1 - t) on a grid avoiding the switching instants"""
        t = (np.arange(samples) + 0.5) / samples
        v = self.amplitude(t)
        scale = max(1., np.max(np.abs(v)))
        return bool(np.all(np.abs(v - self.amplitude(1. - t)) <= tolerance * scale))

    def parameters(self):
        """Ordered dict of the printed parameters of the pulse"""
        if self.kind == HARMONIC:
            if self.ansatz == 'fourier':
                names = ['c%d' % i for i in range(len(self.coefficients))]
            else:
                names = ['a', 'b', 'c'][:len(self.coefficients)]
            return OrderedDict(zip(names, self.coefficients))
        params = OrderedDict()
        for i, (end, amp) in enumerate(zip(self.ends, self.amplitudes)):
            params['v%d' % (i + 1)] = float(amp)
            if i < len(self.ends) - 1:
                params['tau%d' % (i + 1)] = float(end)
        return params

    def to_dict(self, with_name=True):
        """Pulse definition as a JSON-compatible dict"""
        data = OrderedDict()
        if with_name and self.name is not None:
            data['name'] = self.name
        data['kind'] = self.kind
        data['theta'] = float(self.theta)
        data['axis'] = [float(a) for a in self.axis]
        if self.kind == PIECEWISE:
            data['segments'] = [[float(e), float(a)] for e, a in zip(self.ends, self.amplitudes)]
        else:
            data['ansatz'] = self.ansatz
            data['coefficients'] = [float(c) for c in self.coefficients]
        return data

    @classmethod
    def from_dict(cls, data, filename=None, angle_tolerance=ANGLE_TOLERANCE):
        """Create a pulse from a definition dict (see to_dict)

        Raises
        ------
        PulseDefinitionError : missing or malformed fields

        """
        if not isinstance(data, dict):
            raise PulseDefinitionError('Pulse definition must be a JSON object', filename)
        unknown = set(data) - {'name', 'kind', 'theta', 'axis', 'segments', 'ansatz',
                               'coefficients'}
        if unknown:
            raise PulseDefinitionError('Unknown fields %s' % sorted(unknown), filename)
        for key in ('kind', 'theta'):
            if key not in data:
                raise PulseDefinitionError('Missing field %r' % key, filename)
        kind = data['kind']
        if kind == PIECEWISE and 'segments' not in data:
            raise PulseDefinitionError('Missing field "segments"', filename)
        if kind == HARMONIC and 'coefficients' not in data:
            raise PulseDefinitionError('Missing field "coefficients"', filename)
        try:
            return cls(kind, data['theta'],
                       segments=data.get('segments'),
                       ansatz=data.get('ansatz', 'fourier'),
                       coefficients=data.get('coefficients'),
                       axis=data.get('axis', Y_AXIS),
                       name=data.get('name'),
                       angle_tolerance=angle_tolerance)
        except (PulseDomainError, TypeError, ValueError) as e:
            raise PulseDefinitionError(str(e), filename)

    @classmethod
    def load(cls, filename, angle_tolerance=ANGLE_TOLERANCE):
        """Read a pulse definition file (JSON)"""
        with open(filename, 'r') as fobj:
            text = fobj.read()
        try:
            data = json.loads(text, object_pairs_hook=OrderedDict)
        except ValueError as e:
            raise PulseDefinitionError(getattr(e, 'msg', str(e)), filename,
                                       getattr(e, 'lineno', None), getattr(e, 'colno', None))
        return cls.from_dict(data, filename=filename, angle_tolerance=angle_tolerance)

    def save(self, filename):
        """Write the pulse definition file (JSON)"""
        with open(filename, 'w') as fobj:
            json.dump(self.to_dict(), fobj, indent=2)
            fobj.write('\n')


class CatalogEntry(object):
    """Named pulse with its correction order and symmetry"""
    FIRST = 'first'
    SECOND = 'second'
    SYMMETRIC = 'symmetric'
    ASYMMETRIC = 'asymmetric'

    def __init__(self, name, shape, order, symmetry):
        self.name = name
        self.shape = shape
        self.order = order
        self.symmetry = symmetry

    def __repr__(self):
        return '<CatalogEntry %s (%s order, %s)>' % (self.name, self.order, self.symmetry)


def _readonly(array):
    array = np.array(array, dtype=float)
    array.flags.writeable = False
    return array


def _unit_axis(axis):
    axis = np.array(axis, dtype=float).reshape(-1)
    if axis.shape != (3,) or not np.all(np.isfinite(axis)):
        raise PulseDomainError('Axis must be a finite 3-vector')
    if abs(np.linalg.norm(axis) - 1.) > AXIS_TOLERANCE:
        raise PulseDomainError('Axis %s is not a unit vector' % axis)
    return _readonly(axis)


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0) or np.any(t > 1):
        raise PulseDomainError('Time must lie in [0, 1] (fractions of tau_p)')
    return t


def _as_output(value, t):
    return float(value) if np.ndim(t) == 0 else value


def eval_amplitude(pulse, t):
    """Amplitude v(t) of the pulse in units of 1/tau_p

    Parameters
    ----------
    pulse : PulseShape
    t : float or numpy.ndarray
        time(s) as fraction of tau_p, within [0, 1]

    Returns
    -------
    v : float or numpy.ndarray

    Raises
    ------
    PulseDomainError : t outside [0, 1]

    """
    t = _check_time(t)
    return _as_output(pulse.amplitude(t), t)


def accumulated_angle(pulse, t):
    """Accumulated rotation angle psi(t) (radians), psi(0) = 0

    Raises
    ------
    PulseDomainError : t outside [0, 1]

    """
    t = _check_time(t)
    return _as_output(pulse.angle(t), t)


def integrate_amplitude(pulse, t, order=32, n_panels=8):
    """Gauss-Legendre integral of v over [0, t]

    Cross-check of accumulated_angle: the result equals psi(t)/2.
    Panels are aligned with the switching instants.
    """
    t = _check_time(t)
    result = []
    for tt in np.atleast_1d(t):
        if tt == 0:
            result.append(0.)
            continue
        inside = [b / tt for b in pulse.breakpoints() if b < tt]
        rule = CompositeGaussLegendre.from_breakpoints(inside, n_panels, order)
        result.append(tt * rule.integrate(pulse.amplitude(tt * rule.nodes)))
    result = np.array(result)
    return float(result[0]) if np.ndim(t) == 0 else result


def composite_pulse(name, theta, amplitudes, instants, axis=Y_AXIS):
    """Piecewise-constant pulse from signed amplitudes and switching instants

    Parameters
    ----------
    amplitudes : list of float
        signed amplitudes of all n segments
    instants : list of float
        the n - 1 switching instants

    """
    ends = list(instants) + [1.]
    if len(ends) != len(amplitudes):
        raise PulseDomainError('%d amplitudes need %d switching instants'
                               % (len(amplitudes), len(amplitudes) - 1))
    return PulseShape(PIECEWISE, theta, segments=list(zip(ends, amplitudes)),
                      axis=axis, name=name)


def harmonic_pulse(name, theta, ansatz, coefficients, axis=Y_AXIS):
    """Harmonic-series pulse from one of the named ansaetze"""
    return PulseShape(HARMONIC, theta, ansatz=ansatz, coefficients=coefficients,
                      axis=axis, name=name)


def constant_pulse(theta, name=None):
    """Uncorrected rectangular pulse with amplitude theta/2"""
    return PulseShape(PIECEWISE, theta, segments=[(1., parse_angle(theta) / 2.)],
                      name=name)


def alternating(magnitude, n, first=1.):
    """Signed amplitudes +m, -m, +m, ... (or starting with -m)"""
    return [first * magnitude * (-1) ** i for i in range(n)]


def _build_catalog():
    pi, pi2 = np.pi, np.pi / 2
    entries = []

    def add(name, shape, order, symmetry):
        entries.append(CatalogEntry(name, shape, order, symmetry))

    first, second = CatalogEntry.FIRST, CatalogEntry.SECOND
    sym, asym = CatalogEntry.SYMMETRIC, CatalogEntry.ASYMMETRIC

    # piecewise-constant pi pulses
    add('CORPSE-Pi', composite_pulse('CORPSE-Pi', pi, alternating(13 * pi / 6, 3),
                                     [1 / 13., 6 / 13.]), first, asym)
    add('SCORPSE-Pi', composite_pulse('SCORPSE-Pi', pi, alternating(7 * pi / 6, 3, -1.),
                                      [1 / 7., 6 / 7.]), first, sym)
    add('SYM-Pi', composite_pulse('SYM-Pi', pi, alternating(17 * pi / 6, 3),
                                  [5 / 17., 12 / 17.]), first, sym)
    a_sym2, b_sym2 = 10.950120, 7.695376
    add('SYM2ND-Pi', composite_pulse('SYM2ND-Pi', pi, [-a_sym2, a_sym2, -b_sym2, a_sym2, -a_sym2],
                                     [0.022805, 0.275269, 0.724731, 0.977195]), second, sym)
    add('ASYM2ND-Pi', composite_pulse('ASYM2ND-Pi', pi, alternating(11.364434, 6),
                                      [0.252011, 0.310896, 0.584781, 0.752825, 0.796039]),
        second, asym)

    # piecewise-constant pi/2 pulses
    add('CORPSE-Pi2', composite_pulse('CORPSE-Pi2', pi2, alternating(6.345849, 3),
                                      [0.033410, 0.471527]), first, asym)
    add('SYM-Pi2', composite_pulse('SYM-Pi2', pi2, alternating(7.791318, 3),
                                   [0.275201, 0.724799]), first, sym)
    a_sym2, b_sym2 = 11.486275, 8.038405
    add('SYM2ND-Pi2', composite_pulse('SYM2ND-Pi2', pi2,
                                      [-a_sym2, a_sym2, -b_sym2, a_sym2, -a_sym2],
                                      [0.037279, 0.269827, 0.730173, 0.962721]), second, sym)
    add('ASYM2ND-Pi2', composite_pulse('ASYM2ND-Pi2', pi2, alternating(11.563810, 6),
                                       [0.231411, 0.284623, 0.539588, 0.732138, 0.779722]),
        second, asym)

    # continuous pulses
    add('CONT-SYM-Pi', harmonic_pulse('CONT-SYM-Pi', pi, 'sym', [-2.159224]), first, sym)
    add('CONT-SYM-Pi2', harmonic_pulse('CONT-SYM-Pi2', pi2, 'sym', [-5.015588]), first, sym)
    add('CONT-ASYM-Pi', harmonic_pulse('CONT-ASYM-Pi', pi, 'asym', [5.263022, 17.850535]),
        first, asym)
    add('CONT-ASYM-Pi2', harmonic_pulse('CONT-ASYM-Pi2', pi2, 'asym', [-16.809353, 15.634390]),
        first, asym)
    add('CONT-SYM2ND-Pi', harmonic_pulse('CONT-SYM2ND-Pi', pi, 'sym2nd',
                                         [10.804433, 6.831344, 2.174538]), second, sym)
    add('CONT-SYM2ND-Pi2', harmonic_pulse('CONT-SYM2ND-Pi2', pi2, 'sym2nd',
                                          [10.925826, 6.806775, -0.02696178]), second, sym)
    return entries


_CATALOG = None

# uncorrected reference pulses, resolvable by name but not catalog entries
REFERENCE_PULSES = OrderedDict([
    ('CONST-Pi', np.pi),
    ('CONST-Pi2', np.pi / 2),
])


def catalog():
    """All named pulses with amplitudes and instants as printed

    Returns
    -------
    entries : list of CatalogEntry

    """
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _build_catalog()
    return list(_CATALOG)


def lookup(name):
    """Pulse by catalog name or reference name (CONST-Pi, CONST-Pi2)

    Raises
    ------
    KeyError : unknown name

    """
    for entry in catalog():
        if entry.name.lower() == name.lower():
            return entry.shape
    for ref_name, theta in REFERENCE_PULSES.items():
        if ref_name.lower() == name.lower():
            return constant_pulse(theta, name=ref_name)
    raise KeyError('Unknown pulse %r' % name)
