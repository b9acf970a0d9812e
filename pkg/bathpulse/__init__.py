# Name: __init__.py
# Purpose: Use the current folder as a package
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
from __future__ import absolute_import
import os

if 'LOG_LEVEL' not in os.environ:
    os.environ['LOG_LEVEL'] = '30'

from bathpulse.pulse import (PulseShape, CatalogEntry, eval_amplitude, accumulated_angle,
                             catalog, lookup, constant_pulse)
from bathpulse.rotation import AxisAngle, propagator, rotation_matrix
from bathpulse.corrections import CorrectionVector, eta_specific, general_residuals
from bathpulse.designer import DesignProblem, solve, max_amplitude
from bathpulse.qsim import BathSpec, evolve, target, distance, scaling_exponent, random_bath

__version__ = '0.1.0'

__all__ = ['PulseShape', 'CatalogEntry', 'eval_amplitude', 'accumulated_angle', 'catalog',
           'lookup', 'constant_pulse', 'AxisAngle', 'propagator', 'rotation_matrix',
           'CorrectionVector', 'eta_specific', 'general_residuals', 'DesignProblem', 'solve',
           'max_amplitude', 'BathSpec', 'evolve', 'target', 'distance', 'scaling_exponent',
           'random_bath']
