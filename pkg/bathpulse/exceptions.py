# Name:         exceptions.py
# Purpose:      Definitions of bathpulse exceptions
# Authors:      bathpulse developers
# Licence:      This file is part of bathpulse. You can redistribute it or modify
#               under the terms of GNU General Public License, v.3
#               http://www.gnu.org/licenses/gpl-3.0.html
from __future__ import absolute_import


class PulseDomainError(ValueError):
    """ Time, axis or waveform parameters outside their valid domain """
    pass


class PulseDefinitionError(ValueError):
    """ Pulse definition file cannot be parsed """

    def __init__(self, msg, filename=None, lineno=None, colno=None):
        self.filename = filename
        self.lineno = lineno
        self.colno = colno
        location = ''
        if filename is not None:
            location += '%s: ' % filename
        if lineno is not None:
            location += 'line %d, column %d: ' % (lineno, colno or 0)
        super(PulseDefinitionError, self).__init__(location + msg)


class UnsupportedConfigurationError(ValueError):
    """ The requested computation is not available for this pulse or bath """
    pass


class DesignConvergenceError(RuntimeError):
    """ Root finder did not converge; keeps the best iterate """

    def __init__(self, msg, best_x=None, best_norm=None, nit=None):
        self.best_x = best_x
        self.best_norm = best_norm
        self.nit = nit
        super(DesignConvergenceError, self).__init__(msg)


class SingularJacobianError(DesignConvergenceError):
    """ Jacobian of the design residuals is singular at the iterate """
    pass


class IntegratorConvergenceError(RuntimeError):
    """ Step doubling exhausted the step budget before convergence """

    def __init__(self, msg, previous=None, current=None, steps=None):
        self.previous = previous
        self.current = current
        self.steps = steps
        super(IntegratorConvergenceError, self).__init__(msg)


class ScalingFitError(RuntimeError):
    """ Too few usable points to fit a scaling exponent """
    pass
