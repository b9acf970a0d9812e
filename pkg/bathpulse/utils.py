# Name:    utils.py
# Purpose: collection of data and funcs used in bathpulse modules
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

import os
import re
import logging

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
PAULI = np.array([SIGMA_X, SIGMA_Y, SIGMA_Z])

LEVI_CIVITA = np.zeros((3, 3, 3))
LEVI_CIVITA[0, 1, 2] = LEVI_CIVITA[1, 2, 0] = LEVI_CIVITA[2, 0, 1] = 1.
LEVI_CIVITA[0, 2, 1] = LEVI_CIVITA[2, 1, 0] = LEVI_CIVITA[1, 0, 2] = -1.

AXIS_LABELS = ('x', 'y', 'z')

_ANGLE_PATTERN = re.compile(r'^\s*([+-]?)\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$')


def add_logger(logName='', logLevel=None):
    """ Creates and returns logger with default formatting for bathpulse

    Parameters
    -----------
    logName : string, optional
        Name of the logger
    logLevel : int, optional
        Level of logging. Overrides (and stores) the LOG_LEVEL environment
        variable

    Returns
    --------
    logging.logger

    See also
    --------
    `<http://docs.python.org/howto/logging.html>`_

    """
    if logLevel is not None:
        os.environ['LOG_LEVEL'] = str(logLevel)
    # create (or take already existing) logger
    # with default logging level WARNING
    logger = logging.getLogger(logName)
    logger.setLevel(int(os.environ.get('LOG_LEVEL', '30')))

    # if logger already exits, default stream handler has been already added
    # otherwise create and add a new handler
    if len(logger.handlers) == 0:
        ch = logging.StreamHandler()
        formatter = logging.Formatter('%(asctime)s|%(levelno)s|%(module)s|'
                                      '%(funcName)s|%(message)s',
                                      datefmt='%I:%M:%S')
        ch.setFormatter(formatter)
        logger.addHandler(ch)

    logger.handlers[0].setLevel(int(os.environ.get('LOG_LEVEL', '30')))

    return logger


def parse_angle(value):
    """Convert an angle given as number or as a string like 'pi/2' to radians

    Parameters
    ----------
    value : float, int or str
        e.g. 3.14, 'pi', '-pi', 'pi/2', '3*pi/2', '0.5pi', '1.5708'

    Returns
    -------
    angle : float

    """
    if isinstance(value, (int, float, np.floating, np.integer)):
        return float(value)
    text = str(value).strip().lower()
    try:
        return float(text)
    except ValueError:
        pass
    match = _ANGLE_PATTERN.match(text)
    if match is None:
        raise ValueError('Cannot parse angle %r' % value)
    sign, factor, divisor = match.groups()
    angle = np.pi * (float(factor) if factor not in ('', '.') else 1.)
    if divisor:
        angle /= float(divisor)
    if sign == '-':
        angle = -angle
    return angle


def format_angle(angle):
    """Short human readable form of an angle ('pi', 'pi/2' or a float)"""
    for text in ('pi', 'pi/2', '-pi', '-pi/2', '0'):
        if abs(parse_angle(text) - angle) < 1e-12:
            return text
    return repr(float(angle))


def panel_edges(breakpoints, n_panels):
    """Edges of quadrature panels on [0, 1] that contain all breakpoints

    Every interval between consecutive breakpoints is split into
    ceil(n_panels * length) equal panels (at least one).

    Parameters
    ----------
    breakpoints : sequence of float
        interior points in (0, 1) where the integrand may have kinks or jumps
    n_panels : int
        approximate number of panels on [0, 1]

    Returns
    -------
    edges : numpy.ndarray
        increasing array starting with 0 and ending with 1

    """
    knots = np.unique(np.concatenate([[0.], np.asarray(breakpoints, float), [1.]]))
    knots = knots[(knots >= 0.) & (knots <= 1.)]
    edges = [knots[:1]]
    for t0, t1 in zip(knots[:-1], knots[1:]):
        n_sub = max(1, int(np.ceil(n_panels * (t1 - t0))))
        edges.append(np.linspace(t0, t1, n_sub + 1)[1:])
    return np.concatenate(edges)


class CompositeGaussLegendre(object):
    """Composite Gauss-Legendre rule on [0, 1] with cumulative integrals

    Nodes and weights of an `order`-point Gauss-Legendre rule are mapped
    onto every panel given by `edges`. Besides plain integrals the rule
    provides integrals from 0 up to every node, which are assembled from
    complete panels plus a second Gauss-Legendre rule on the partial panel
    [edge, node].

    Parameters
    ----------
    edges : array-like
        increasing panel edges, first 0 and last 1
    order : int
        number of Gauss-Legendre nodes per panel

    """
    # instance attributes
    edges = None
    order = None
    nodes = None
    weights = None

    def __init__(self, edges, order=16):
        self.edges = np.asarray(edges, dtype=float)
        self.order = int(order)
        x, w = np.polynomial.legendre.leggauss(self.order)
        self._x = x
        self._w = w
        left = self.edges[:-1, None]
        half = 0.5 * np.diff(self.edges)[:, None]
        # (panels, order)
        self.nodes = left + half * (x[None, :] + 1.)
        self.weights = half * w[None, :]

    @classmethod
    def from_breakpoints(cls, breakpoints, n_panels, order=16):
        """Create the rule with panels aligned to `breakpoints`"""
        return cls(panel_edges(breakpoints, n_panels), order=order)

    @property
    def n_nodes(self):
        return self.nodes.size

    def integrate(self, values):
        """Integral over [0, 1] of values sampled at self.nodes

        The trailing axes of `values` beyond (panels, order) are kept.
        """
        values = np.asarray(values)
        extra = (None,) * (values.ndim - 2)
        return np.sum(self.weights[(Ellipsis,) + extra] * values, axis=(0, 1))

    def partial_nodes(self):
        """Nodes and weights of the rules on [panel start, node]

        Returns
        -------
        nodes : numpy.ndarray (panels, order, order)
        weights : numpy.ndarray (panels, order, order)

        """
        left = self.edges[:-1, None, None]
        half = 0.5 * (self.nodes[:, :, None] - left)
        nodes = left + half * (self._x[None, None, :] + 1.)
        weights = half * self._w[None, None, :]
        return nodes, weights

    def cumulative(self, values, partial_values):
        """Integrals from 0 to every node

        Parameters
        ----------
        values : numpy.ndarray (panels, order, ...)
            integrand at self.nodes
        partial_values : numpy.ndarray (panels, order, order, ...)
            integrand at the nodes returned by self.partial_nodes()

        Returns
        -------
        cumulative : numpy.ndarray (panels, order, ...)

        """
        values = np.asarray(values)
        partial_values = np.asarray(partial_values)
        extra = (None,) * (values.ndim - 2)
        panel_sums = np.sum(self.weights[(Ellipsis,) + extra] * values, axis=1)
        before = np.cumsum(panel_sums, axis=0) - panel_sums
        _, partial_weights = self.partial_nodes()
        inside = np.sum(partial_weights[(Ellipsis,) + extra] * partial_values, axis=2)
        return before[:, None] + inside
