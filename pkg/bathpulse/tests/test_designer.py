#------------------------------------------------------------------------------
# Name:         test_designer.py
# Purpose:      Test the root finder of pulse parameters
#
# Author:       bathpulse developers
#
# Created:      19.10.2026
# Copyright:    (c) bathpulse developers
# Licence:      This file is part of bathpulse. You can redistribute it or modify
#               under the terms of GNU General Public License, v.3
#               http://www.gnu.org/licenses/gpl-3.0.html
#------------------------------------------------------------------------------
from __future__ import absolute_import, division
import unittest

try:
    from mock import patch
except ImportError:
    from unittest.mock import patch
import numpy as np

from bathpulse import designer
from bathpulse.designer import (DesignProblem, solve, max_amplitude, default_targets,
                                named_guess, get_family, jacobian, polish, FAMILIES)
from bathpulse.pulse import lookup, PIECEWISE
from bathpulse.corrections import eta_specific
from bathpulse.exceptions import (DesignConvergenceError, SingularJacobianError,
                                  UnsupportedConfigurationError, PulseDomainError)


class DefaultTargetsTest(unittest.TestCase):

    def test_asymmetric(self):
        self.assertEqual(default_targets(np.pi, False, False), ['eta11', 'eta12'])
        self.assertEqual(default_targets(np.pi, False, True),
                         ['eta11', 'eta12', 'eta21', 'eta22', 'eta23'])

    def test_symmetric(self):
        self.assertEqual(default_targets(np.pi, True, False), ['eta11'])
        self.assertEqual(default_targets(np.pi, True, True), ['eta11', 'eta22', 'eta23'])
        self.assertEqual(default_targets(np.pi / 2, True, True), ['eta11', 'eta21', 'eta23'])

    def test_families_are_square(self):
        for name, family in FAMILIES.items():
            targets = default_targets(np.pi, family.symmetric, family.second_order)
            rows = len(targets) + int(family.has_angle_row)
            self.assertEqual(rows, family.n_params, msg=name)


class DesignProblemTest(unittest.TestCase):

    def test_named_guess(self):
        family, x, signs = named_guess('corpse', np.pi)
        self.assertEqual(family, 'composite3-asym')
        np.testing.assert_allclose(x, [13 * np.pi / 6, 1 / 13., 6 / 13.])
        np.testing.assert_array_equal(signs, [1., -1., 1.])

    def test_named_guess_scorpse_signs(self):
        family, x, signs = named_guess('scorpse', np.pi)
        self.assertEqual(family, 'composite3-sym')
        np.testing.assert_allclose(x, [7 * np.pi / 6, 1 / 7.])
        np.testing.assert_array_equal(signs, [-1., 1., -1.])

    def test_named_guess_missing(self):
        with self.assertRaises(UnsupportedConfigurationError):
            named_guess('scorpse', np.pi / 2)
        with self.assertRaises(UnsupportedConfigurationError):
            named_guess('corpse', 1.)
        with self.assertRaises(UnsupportedConfigurationError):
            named_guess('bb1', np.pi)

    def test_unknown_family(self):
        with self.assertRaises(UnsupportedConfigurationError):
            get_family('composite4')

    def test_guess_of_other_family(self):
        with self.assertRaises(UnsupportedConfigurationError):
            DesignProblem('composite3-sym', np.pi, guess='corpse')

    def test_wrong_number_of_parameters(self):
        with self.assertRaises(UnsupportedConfigurationError):
            DesignProblem('harmonic39', np.pi, guess=[1.])

    def test_non_square_targets(self):
        with self.assertRaises(UnsupportedConfigurationError):
            DesignProblem('harmonic38', np.pi, guess=[-2.], targets=['eta11', 'eta12'])

    def test_unknown_target(self):
        with self.assertRaises(UnsupportedConfigurationError):
            DesignProblem('harmonic38', np.pi, guess=[-2.], targets=['eta99'])

    def test_missing_guess(self):
        with self.assertRaises(UnsupportedConfigurationError):
            DesignProblem('harmonic38', np.pi)

    def test_signs_length(self):
        with self.assertRaises(UnsupportedConfigurationError):
            DesignProblem('composite3-asym', np.pi, guess=[7., 0.1, 0.5], signs=[1, -1])

    def test_residuals_of_catalog_solution(self):
        problem = DesignProblem('composite3-asym', np.pi, guess='corpse')
        np.testing.assert_allclose(problem.residuals(problem.guess), 0., atol=1e-12)

    def test_residuals_reject_unordered_instants(self):
        problem = DesignProblem('composite3-asym', np.pi, guess=[7., 0.5, 0.2])
        with self.assertRaises(PulseDomainError):
            problem.residuals(problem.guess)

    def test_symmetric_family_mirrors_instants(self):
        problem = DesignProblem('composite5-sym', np.pi, guess='sym2nd')
        pulse = problem.pulse(problem.guess)
        np.testing.assert_allclose(pulse.breakpoints(), [0.022805, 0.275269, 0.724731,
                                                         0.977195], atol=1e-15)
        self.assertEqual(pulse.kind, PIECEWISE)


class SolveTest(unittest.TestCase):

    def test_harmonic38(self):
        result = solve(DesignProblem('harmonic38', 'pi', guess=[-2.]))
        self.assertTrue(result.success)
        self.assertLess(result.norm, 1e-10)
        self.assertAlmostEqual(result.x[0], -2.159224, places=5)
        self.assertLess(abs(result.residuals.eta11), 1e-10)
        self.assertAlmostEqual(result.pulse.angle(1.), np.pi, places=12)

    def test_composite3_asym_recovers_corpse(self):
        guess = [13 * np.pi / 6 * 1.02, 0.98 / 13., 6.05 / 13.]
        result = solve(DesignProblem('composite3-asym', np.pi, guess=guess))
        np.testing.assert_allclose(result.x, [13 * np.pi / 6, 1 / 13., 6 / 13.], atol=1e-8)
        self.assertAlmostEqual(result.pulse.angle(1.), np.pi, places=9)

    def test_composite3_sym_recovers_sym(self):
        result = solve(DesignProblem('composite3-sym', np.pi, guess=[8.85, 0.296]))
        np.testing.assert_allclose(result.x, [17 * np.pi / 6, 5 / 17.], atol=1e-8)

    def test_report(self):
        result = solve(DesignProblem('harmonic38', np.pi, guess='cont-sym'))
        report = result.report()
        self.assertTrue(report['converged'])
        self.assertEqual(len(report['parameters']), 1)
        self.assertIn('eta23', report)
        self.assertAlmostEqual(report['angle'], np.pi, places=12)

    def test_no_convergence(self):
        problem = DesignProblem('harmonic38', np.pi, guess=[-2.], max_iter=1)
        with self.assertRaises(DesignConvergenceError) as cm:
            solve(problem)
        self.assertEqual(cm.exception.nit, 1)
        self.assertIsNotNone(cm.exception.best_x)
        self.assertTrue(np.isfinite(cm.exception.best_norm))

    def test_invalid_initial_guess(self):
        problem = DesignProblem('composite3-asym', np.pi, guess=[7., 0.5, 0.2])
        with self.assertRaises(DesignConvergenceError):
            solve(problem)

    @patch.object(designer, 'jacobian', return_value=np.zeros((1, 1)))
    def test_singular_jacobian(self, mock_jacobian):
        with self.assertRaises(SingularJacobianError):
            solve(DesignProblem('harmonic38', np.pi, guess=[-2.]))
        self.assertTrue(mock_jacobian.called)

    def test_jacobian_of_linear_map(self):
        matrix = np.array([[1., 2.], [3., -4.]])
        np.testing.assert_allclose(jacobian(lambda x: np.dot(matrix, x), [0.5, 2.]), matrix,
                                   atol=1e-7)


class MaxAmplitudeTest(unittest.TestCase):

    def test_cont_asym_pi(self):
        value, location = max_amplitude(lookup('CONT-ASYM-Pi'))
        self.assertAlmostEqual(value, 26.916283, delta=1e-3)
        self.assertAlmostEqual(location, 0.2977, delta=1e-3)

    def test_cont_asym_pi2(self):
        value, location = max_amplitude(lookup('CONT-ASYM-Pi2'))
        self.assertAlmostEqual(value, 40.572755, delta=1e-3)
        self.assertAlmostEqual(location, 0.4461, delta=1e-3)

    def test_cont_sym_peak_in_the_middle(self):
        value, location = max_amplitude(lookup('CONT-SYM-Pi'))
        self.assertAlmostEqual(value, np.pi + 2 * 2.159224, places=6)
        self.assertAlmostEqual(location, 0.5, places=6)

    def test_piecewise(self):
        value, location = max_amplitude(lookup('SYM2ND-Pi'))
        self.assertEqual(value, 10.950120)
        self.assertEqual(location, 0.)


class PolishTest(unittest.TestCase):

    def test_second_order_catalog_pulse(self):
        printed = lookup('SYM2ND-Pi2')
        pulse, polished = polish('sym2nd-pi2')
        self.assertTrue(polished)
        self.assertEqual(pulse.name, 'SYM2ND-Pi2')
        self.assertEqual(pulse.kind, PIECEWISE)
        self.assertLess(np.max(np.abs(eta_specific(pulse).values())), 1e-9)
        np.testing.assert_allclose(pulse.amplitudes, printed.amplitudes, atol=1e-4)
        np.testing.assert_allclose(pulse.breakpoints(), printed.breakpoints(), atol=1e-4)
        self.assertAlmostEqual(pulse.angle(1.), np.pi / 2, places=9)

    def test_harmonic_catalog_pulse(self):
        pulse, polished = polish('CONT-SYM-Pi')
        self.assertTrue(polished)
        self.assertEqual(pulse.ansatz, 'sym')
        self.assertAlmostEqual(pulse.coefficients[0], -2.159224, delta=1e-5)
        self.assertLess(abs(eta_specific(pulse).eta11), 1e-9)

    def test_reference_pulse_unchanged(self):
        pulse, polished = polish('CONST-Pi')
        self.assertFalse(polished)
        self.assertEqual(pulse, lookup('CONST-Pi'))

    def test_unknown_name(self):
        with self.assertRaises(KeyError):
            polish('NOPE-Pi')


if __name__ == "__main__":
    unittest.main()
