# Name:    cli.py
# Purpose: Command line front end of bathpulse
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
"""bathpulse command line

    bathpulse catalog [--theta pi] [--order second] [--symmetry symmetric] [--name CORPSE-Pi]
    bathpulse residuals (--name CORPSE-Pi | --file pulse.json) [--general] [--tau-p 1]
    bathpulse design --family harmonic38 --theta pi --guess -2 [--output pulse.json]
    bathpulse scaling (--name CORPSE-Pi | --file pulse.json) --bath z-dyn --seed 7 [--as-printed]

Common flags: --format csv|json, --output FILE, --log-level LEVEL.
Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
"""
from __future__ import print_function, absolute_import, division

import os
import sys
import argparse
from collections import OrderedDict

import numpy as np

from bathpulse.pulse import PulseShape, catalog, lookup
from bathpulse.corrections import eta_specific, general_residuals
from bathpulse.designer import FAMILIES, DesignProblem, solve, polish
from bathpulse.qsim import BATH_PRESETS, bath_preset, scaling_exponent
from bathpulse.exporter import Exporter, output_path
from bathpulse.utils import add_logger, parse_angle, format_angle
from bathpulse.exceptions import (PulseDomainError, PulseDefinitionError,
                                  UnsupportedConfigurationError, DesignConvergenceError,
                                  IntegratorConvergenceError, ScalingFitError)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

USAGE_ERRORS = (PulseDomainError, PulseDefinitionError, UnsupportedConfigurationError,
                KeyError, ValueError, IOError, OSError)
NUMERICAL_ERRORS = (DesignConvergenceError, IntegratorConvergenceError, ScalingFitError)


class UsageError(Exception):
    """ Invalid command line """
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # usage errors exit with EXIT_USAGE instead of argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError('%s: error: %s' % (self.prog, message))


def _add_common(parser):
    parser.add_argument('--format', choices=Exporter.FORMATS, default='csv',
                        help='report format (default csv)')
    parser.add_argument('--output', default=None,
                        help='output file; bare names go to $BATHPULSE_OUTPUT_DIR')
    parser.add_argument('--log-level', type=int, default=None,
                        help='logging level, e.g. 10 for DEBUG')


def _add_pulse_source(parser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--name', help='catalog name, or CONST-Pi / CONST-Pi2')
    source.add_argument('--file', help='pulse definition file (JSON)')


def _csv_floats(text):
    return [float(v) for v in text.split(',')]


def _csv_signs(text):
    signs = []
    for item in text.split(','):
        item = item.strip()
        signs.append(-1. if item.startswith('-') else 1.)
    return signs


def create_parser():
    parser = _ArgumentParser(prog='bathpulse', description=__doc__,
                             formatter_class=argparse.RawDescriptionHelpFormatter)
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    p = subparsers.add_parser('catalog', help='list the pulse catalog')
    p.add_argument('--theta', type=parse_angle, help='rotation angle, e.g. pi or pi/2')
    p.add_argument('--order', choices=('first', 'second'))
    p.add_argument('--symmetry', choices=('symmetric', 'asymmetric'))
    p.add_argument('--name', help='exact pulse name')
    _add_common(p)

    p = subparsers.add_parser('residuals', help='correction residuals of a pulse')
    _add_pulse_source(p)
    p.add_argument('--general', action='store_true',
                   help='all 39 residuals of the general coupling case')
    p.add_argument('--tau-p', type=float, default=1., help='pulse duration (default 1)')
    _add_common(p)

    p = subparsers.add_parser('design', help='solve for pulse parameters')
    p.add_argument('--family', required=True, choices=list(FAMILIES))
    p.add_argument('--theta', required=True, type=parse_angle)
    p.add_argument('--guess', required=True,
                   help='comma separated parameters or a named guess (corpse, sym, ...)')
    p.add_argument('--targets', type=lambda s: s.split(','),
                   help='comma separated residual names, e.g. eta11,eta12')
    p.add_argument('--signs', type=_csv_signs, help='sign pattern, e.g. --signs=-,+,-')
    p.add_argument('--max-iter', type=int, default=200)
    _add_common(p)

    p = subparsers.add_parser('scaling', help='pulse error scaling in a spin bath')
    _add_pulse_source(p)
    p.add_argument('--bath', choices=list(BATH_PRESETS), default='z-dyn')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--n-spins', type=int, default=2)
    p.add_argument('--tau-min', type=float, default=1e-3)
    p.add_argument('--tau-max', type=float, default=1e-1)
    p.add_argument('--points', type=int, default=8)
    p.add_argument('--workers', type=int, default=None)
    p.add_argument('--as-printed', action='store_true',
                   help='simulate catalog values as printed, without re-solving them')
    _add_common(p)
    return parser


def load_pulse(args):
    if args.file is not None:
        return PulseShape.load(args.file)
    return lookup(args.name)


def cmd_catalog(args):
    """Table of catalog entries matching the filters"""
    rows = []
    for entry in catalog():
        shape = entry.shape
        if args.theta is not None and abs(shape.theta - args.theta) > 1e-9:
            continue
        if args.order is not None and entry.order != args.order:
            continue
        if args.symmetry is not None and entry.symmetry != args.symmetry:
            continue
        if args.name is not None and entry.name.lower() != args.name.lower():
            continue
        params = shape.parameters()
        if args.format == 'csv':
            params = ';'.join('%s=%.17g' % item for item in params.items())
        rows.append([entry.name, format_angle(shape.theta), entry.order, entry.symmetry,
                     shape.kind, params])
    Exporter(args.format).export(output_path(args.output),
                                 ['name', 'theta', 'order', 'symmetry', 'kind', 'parameters'],
                                 rows)
    return EXIT_OK


def cmd_residuals(args):
    """Correction residuals and psi(1) of a pulse"""
    pulse = load_pulse(args)
    if args.general:
        values = general_residuals(pulse).flat()
        if args.tau_p != 1.:
            values = OrderedDict((k, v * (args.tau_p if k.startswith('first') else
                                          args.tau_p ** 2)) for k, v in values.items())
    else:
        values = eta_specific(pulse, tau_p=args.tau_p).as_dict()
    values['psi1'] = pulse.angle(1.)
    rows = [[name, float(value)] for name, value in values.items()]
    Exporter(args.format).export(output_path(args.output), ['quantity', 'value'], rows,
                                 metadata={'pulse': pulse.name or args.file})
    return EXIT_OK


def _design_outputs(args):
    pulse_file = output_path(args.output, default='%s.json' % args.family)
    if pulse_file == '-':
        raise UsageError('design writes a pulse file and a report; --output needs a file name')
    stem = os.path.splitext(pulse_file)[0]
    return pulse_file, '%s_report.%s' % (stem, args.format)


def cmd_design(args):
    """Solve a design problem, write the pulse file and a report"""
    logger = add_logger('bathpulse')
    guess = args.guess
    if guess[:1].isdigit() or guess[:1] in '+-.':
        guess = _csv_floats(guess)
    problem = DesignProblem(args.family, args.theta, targets=args.targets, guess=guess,
                            signs=args.signs, max_iter=args.max_iter)
    pulse_file, report_file = _design_outputs(args)
    try:
        result = solve(problem)
    except DesignConvergenceError as e:
        # the best iterate is kept for inspection
        best = problem.pulse(e.best_x if e.best_x is not None else problem.guess,
                             name='%s-UNCONVERGED' % args.family)
        best.save(pulse_file)
        summary = OrderedDict([('converged', False), ('iterations', e.nit),
                               ('residual_norm', e.best_norm), ('message', str(e))])
        Exporter(args.format).export(report_file, ['parameter', 'value'],
                                     _parameter_rows(best), summary)
        logger.warning('Design did not converge; best iterate written to %s', pulse_file)
        raise
    result.pulse.save(pulse_file)
    report = result.report()
    summary = OrderedDict((k, v) for k, v in report.items() if k != 'parameters')
    Exporter(args.format).export(report_file, ['parameter', 'value'],
                                 _parameter_rows(result.pulse), summary,
                                 metadata={'family': args.family})
    print(pulse_file)
    return EXIT_OK


def _parameter_rows(pulse):
    return [[name, float(value)] for name, value in pulse.parameters().items()]


def cmd_scaling(args):
    """Pulse error over a tau_p grid and fitted exponent

    Catalog pulses are re-solved from their printed values first unless
    --as-printed is given; pulse files are simulated as they are.

    """
    if args.points < 2 or not 0 < args.tau_min < args.tau_max:
        raise UsageError('Need 0 < --tau-min < --tau-max and --points >= 2')
    if args.file is None and not args.as_printed:
        pulse, polished = polish(args.name)
    else:
        pulse, polished = load_pulse(args), False
    bath = bath_preset(args.bath, seed=args.seed, n_spins=args.n_spins)
    grid = np.logspace(np.log10(args.tau_min), np.log10(args.tau_max), args.points)
    report = scaling_exponent(pulse, bath, grid, workers=args.workers)
    rows = [[tau, distance, used] for tau, distance, used in report.rows()]
    summary = report.summary()
    summary['bath'] = args.bath
    summary['seed'] = args.seed
    summary['polished'] = polished
    default = 'scaling_%s.%s' % (pulse.name or 'pulse', args.format)
    Exporter(args.format).export(output_path(args.output, default=default),
                                 ['tau_p', 'distance', 'used'], rows, summary,
                                 metadata={'pulse': pulse.name or args.file})
    print('slope=%.6f' % report.slope)
    return EXIT_OK


COMMANDS = OrderedDict([
    ('catalog', cmd_catalog),
    ('residuals', cmd_residuals),
    ('design', cmd_design),
    ('scaling', cmd_scaling),
])


def main(argv=None):
    """Run the command line; returns the exit code"""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    logger = add_logger('bathpulse', args.log_level)
    try:
        return COMMANDS[args.command](args)
    except NUMERICAL_ERRORS as e:
        logger.error('%s', e)
        return EXIT_NUMERICAL
    except UsageError as e:
        logger.error('%s', e)
        return EXIT_USAGE
    except USAGE_ERRORS as e:
        logger.error('%s', e)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
