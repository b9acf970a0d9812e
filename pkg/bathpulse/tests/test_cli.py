#------------------------------------------------------------------------------
# Name:         test_cli.py
# Purpose:      Test the bathpulse command line
#
# Author:       bathpulse developers
#
# Created:      19.10.2026
# Copyright:    (c) bathpulse developers
# Licence:      This file is part of bathpulse. You can redistribute it or modify
#               under the terms of GNU General Public License, v.3
#               http://www.gnu.org/licenses/gpl-3.0.html
#------------------------------------------------------------------------------
from __future__ import print_function, absolute_import, division
import os
import json
import unittest

try:
    from mock import patch
except ImportError:
    from unittest.mock import patch
import numpy as np

try:
    from StringIO import StringIO
except ImportError:
    from io import StringIO

from bathpulse import cli
from bathpulse.cli import main, EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL
from bathpulse.pulse import PulseShape, lookup
from bathpulse.corrections import eta_specific
from bathpulse.qsim import ScalingReport
from bathpulse.exporter import OUTPUT_DIR_VARIABLE
from bathpulse.exceptions import ScalingFitError
from bathpulse.tests.bathpulse_test_base import BathpulseTestBase


def read_csv(text):
    lines = [line for line in text.splitlines() if not line.startswith('#')]
    header = lines[0].split(',')
    return [dict(zip(header, line.split(','))) for line in lines[1:]]


def trailer(text):
    return dict(line[2:].split('=', 1) for line in text.splitlines() if line.startswith('# '))


class CliTest(BathpulseTestBase):

    def run_cli(self, argv):
        with patch('sys.stdout', new_callable=StringIO) as stdout:
            with patch('sys.stderr', new_callable=StringIO):
                code = main(argv)
        return code, stdout.getvalue()

    def test_catalog(self):
        code, out = self.run_cli(['catalog'])
        self.assertEqual(code, EXIT_OK)
        rows = read_csv(out)
        self.assertEqual(len(rows), 15)
        self.assertEqual(rows[0]['name'], 'CORPSE-Pi')
        self.assertEqual(rows[0]['theta'], 'pi')

    def test_catalog_filters(self):
        code, out = self.run_cli(['catalog', '--theta', 'pi', '--order', 'second'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual([row['name'] for row in read_csv(out)],
                         ['SYM2ND-Pi', 'ASYM2ND-Pi', 'CONT-SYM2ND-Pi'])
        code, out = self.run_cli(['catalog', '--theta', 'pi/2', '--symmetry', 'asymmetric',
                                  '--format', 'json'])
        names = [row['name'] for row in json.loads(out)['rows']]
        self.assertEqual(names, ['CORPSE-Pi2', 'ASYM2ND-Pi2', 'CONT-ASYM-Pi2'])

    def test_catalog_unknown_name_is_empty(self):
        code, out = self.run_cli(['catalog', '--name', 'NOPE'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(read_csv(out), [])

    def test_usage_error(self):
        self.assertEqual(self.run_cli(['catalog', '--bogus'])[0], EXIT_USAGE)
        self.assertEqual(self.run_cli([])[0], EXIT_USAGE)
        self.assertEqual(self.run_cli(['residuals'])[0], EXIT_USAGE)
        self.assertEqual(self.run_cli(['catalog', '--theta', 'half'])[0], EXIT_USAGE)

    def test_residuals_from_file(self):
        code, out = self.run_cli(['residuals', '--file', self.test_file_constant,
                                  '--format', 'json'])
        self.assertEqual(code, EXIT_OK)
        values = dict((row['quantity'], row['value']) for row in json.loads(out)['rows'])
        self.assertAlmostEqual(values['eta11'], 2 / np.pi, places=12)
        self.assertAlmostEqual(values['eta22'], -2 / np.pi ** 2, places=12)
        self.assertAlmostEqual(values['psi1'], np.pi, places=12)

    def test_residuals_to_file(self):
        code, _ = self.run_cli(['residuals', '--name', 'CORPSE-Pi', '--output',
                                self.tmp_filename])
        self.assertEqual(code, EXIT_OK)
        with open(self.tmp_filename) as fobj:
            rows = read_csv(fobj.read())
        values = dict((row['quantity'], float(row['value'])) for row in rows)
        self.assertLess(abs(values['eta11']), 1e-12)
        self.assertEqual(len(values), 6)

    def test_residuals_general(self):
        code, out = self.run_cli(['residuals', '--name', 'CONT-SYM-Pi', '--general'])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(read_csv(out)), 40)

    def test_residuals_errors(self):
        self.assertEqual(self.run_cli(['residuals', '--name', 'NOPE'])[0], EXIT_USAGE)
        self.assertEqual(self.run_cli(['residuals', '--file', self.test_file_malformed])[0],
                         EXIT_USAGE)
        self.assertEqual(self.run_cli(['residuals', '--file', 'missing.json'])[0], EXIT_USAGE)

    def test_design(self):
        code, out = self.run_cli(['design', '--family', 'harmonic38', '--theta', 'pi',
                                  '--guess', '-2', '--output', self.tmp_filename])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.strip(), self.tmp_filename)
        pulse = PulseShape.load(self.tmp_filename)
        self.assertAlmostEqual(pulse.coefficients[0], -2.159224, places=5)
        report_file = os.path.splitext(self.tmp_filename)[0] + '_report.csv'
        with open(report_file) as fobj:
            summary = trailer(fobj.read())
        os.unlink(report_file)
        self.assertEqual(summary['converged'], 'True')

    def test_design_named_guess_in_output_dir(self):
        tmp_dir = os.path.join(self.tmp_data_path, 'design')
        with patch.dict(os.environ, {OUTPUT_DIR_VARIABLE: tmp_dir}):
            code, out = self.run_cli(['design', '--family', 'composite3-asym', '--theta', 'pi',
                                      '--guess', 'corpse', '--format', 'json'])
        self.assertEqual(code, EXIT_OK)
        pulse_file = os.path.join(tmp_dir, 'composite3-asym.json')
        self.assertEqual(out.strip(), pulse_file)
        pulse = PulseShape.load(pulse_file)
        np.testing.assert_allclose(pulse.breakpoints(), [1 / 13., 6 / 13.], atol=1e-9)
        with open(os.path.join(tmp_dir, 'composite3-asym_report.json')) as fobj:
            report = json.load(fobj)
        self.assertTrue(report['summary']['converged'])

    def test_design_not_converged(self):
        code, _ = self.run_cli(['design', '--family', 'harmonic38', '--theta', 'pi',
                                '--guess', '-2', '--max-iter', '1', '--output',
                                self.tmp_filename])
        self.assertEqual(code, EXIT_NUMERICAL)
        pulse = PulseShape.load(self.tmp_filename)
        self.assertEqual(pulse.name, 'harmonic38-UNCONVERGED')
        os.unlink(os.path.splitext(self.tmp_filename)[0] + '_report.csv')

    def test_design_bad_family_input(self):
        code, _ = self.run_cli(['design', '--family', 'harmonic38', '--theta', 'pi',
                                '--guess', '-2,1'])
        self.assertEqual(code, EXIT_USAGE)

    def test_design_rejects_standard_output(self):
        cwd = os.getcwd()
        os.chdir(self.tmp_data_path)
        try:
            code, _ = self.run_cli(['design', '--family', 'harmonic38', '--theta', 'pi',
                                    '--guess', '-2', '--output', '-'])
            self.assertEqual(code, EXIT_USAGE)
            self.assertFalse(os.path.exists('-'))
            self.assertFalse(os.path.exists('-_report.csv'))
        finally:
            os.chdir(cwd)

    def test_design_signs(self):
        args = cli.create_parser().parse_args(['design', '--family', 'composite3-sym',
                                               '--theta', 'pi', '--guess', '3.7,0.14',
                                               '--signs=-,+,-'])
        self.assertEqual(args.signs, [-1., 1., -1.])

    @patch.object(cli, 'scaling_exponent')
    def test_scaling(self, mock_scaling):
        grid = np.logspace(-3, -1, 4)
        mock_scaling.return_value = ScalingReport(grid, 2 * grid ** 2, [True] * 4, 2., np.log(2),
                                                  0.)
        code, out = self.run_cli(['scaling', '--name', 'CORPSE-Pi', '--bath', 'z-static',
                                  '--points', '4', '--output', self.tmp_filename])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.strip(), 'slope=2.000000')
        pulse, bath, tau_grid = mock_scaling.call_args[0]
        self.assertEqual(pulse.name, 'CORPSE-Pi')
        self.assertEqual(bath.omega_b, 0.)
        np.testing.assert_allclose(tau_grid, grid)
        with open(self.tmp_filename) as fobj:
            text = fobj.read()
        self.assertEqual(len(read_csv(text)), 4)
        self.assertEqual(trailer(text)['bath'], 'z-static')
        self.assertEqual(trailer(text)['polished'], 'True')

    @patch.object(cli, 'scaling_exponent')
    def test_scaling_resolves_printed_catalog_values(self, mock_scaling):
        grid = np.logspace(-3, -1, 4)
        mock_scaling.return_value = ScalingReport(grid, grid ** 3, [True] * 4, 3., 0., 0.)
        code, _ = self.run_cli(['scaling', '--name', 'ASYM2ND-Pi2', '--bath', 'z-dyn',
                                '--seed', '7', '--points', '4', '--output', self.tmp_filename])
        self.assertEqual(code, EXIT_OK)
        pulse = mock_scaling.call_args[0][0]
        printed = lookup('ASYM2ND-Pi2')
        self.assertEqual(pulse.name, 'ASYM2ND-Pi2')
        self.assertLess(np.max(np.abs(eta_specific(pulse).values())), 1e-9)
        self.assertVectorAlmostEqual(pulse.amplitudes, printed.amplitudes, atol=1e-4)
        self.assertVectorAlmostEqual(pulse.breakpoints(), printed.breakpoints(), atol=1e-4)

    @patch.object(cli, 'scaling_exponent')
    def test_scaling_as_printed(self, mock_scaling):
        grid = np.logspace(-3, -1, 4)
        mock_scaling.return_value = ScalingReport(grid, grid ** 2, [True] * 4, 2., 0., 0.)
        code, _ = self.run_cli(['scaling', '--name', 'SYM2ND-Pi', '--as-printed', '--points',
                                '4', '--output', self.tmp_filename])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(mock_scaling.call_args[0][0], lookup('SYM2ND-Pi'))
        with open(self.tmp_filename) as fobj:
            self.assertEqual(trailer(fobj.read())['polished'], 'False')

    @patch.object(cli, 'scaling_exponent')
    def test_scaling_reference_pulse_is_not_resolved(self, mock_scaling):
        grid = np.logspace(-3, -1, 4)
        mock_scaling.return_value = ScalingReport(grid, grid, [True] * 4, 1., 0., 0.)
        code, _ = self.run_cli(['scaling', '--name', 'CONST-Pi2', '--points', '4',
                                '--output', self.tmp_filename])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(mock_scaling.call_args[0][0], lookup('CONST-Pi2'))
        with open(self.tmp_filename) as fobj:
            self.assertEqual(trailer(fobj.read())['polished'], 'False')

    @patch.object(cli, 'scaling_exponent', side_effect=ScalingFitError('too few points'))
    def test_scaling_fit_error(self, mock_scaling):
        code, _ = self.run_cli(['scaling', '--name', 'CONST-Pi', '--output', self.tmp_filename])
        self.assertEqual(code, EXIT_NUMERICAL)

    def test_scaling_invalid_grid(self):
        code, _ = self.run_cli(['scaling', '--name', 'CONST-Pi', '--tau-min', '0.1',
                                '--tau-max', '0.01'])
        self.assertEqual(code, EXIT_USAGE)


if __name__ == "__main__":
    unittest.main()
