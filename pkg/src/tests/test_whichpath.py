"""
Tests for the recoiling-slit which-path analytics.
"""

import math
import unittest

import numpy as np
from scipy import integrate

from sedkit.errors import ParameterError
from sedkit.whichpath import (WhichPathModel, fringe_contrast, fringe_pattern,
                              fringe_quadrature, path_distinguishability,
                              path_distinguishability_quadrature, single_slit_product,
                              slit_momentum_density, slit_probabilities)

from .common_imports import HelperTestCase, hypothesis, make_doctest, needs_hypothesis

if hypothesis is not None:
    from hypothesis import given, settings, strategies as st
    widths = st.floats(min_value=0.05, max_value=8.0)
    wavenumbers = st.floats(min_value=0.0, max_value=8.0)


class ModelTestCase(HelperTestCase):
    def test_defaults(self):
        model = WhichPathModel()
        self.assertEqual((1.0, 1.0), (model.a, model.k0))

    def test_invalid(self):
        for name, value in (('a', -1.0), ('k0', -0.5), ('a', float('nan')),
                            ('k0', float('inf')), ('a', 'wide')):
            with self.assertRaises(ParameterError) as cm:
                WhichPathModel(**{name: value})
            self.assertEqual(name, cm.exception.key)

    def test_summary(self):
        summary = WhichPathModel(a=0.0, k0=2.0).summary()
        self.assertEqual(1.0, summary['contrast'])


class FringeTestCase(HelperTestCase):
    def test_contrast(self):
        self.assertEqual(1.0, fringe_contrast(WhichPathModel(a=0.0, k0=3.0)))
        self.assertAlmostEqual(0.367879441, fringe_contrast(WhichPathModel(a=1.0, k0=1.0)),
                               places=9)
        self.assertAlmostEqual(math.exp(-1.0), fringe_contrast(WhichPathModel(a=0.5, k0=2.0)))

    def test_point_slit_pattern(self):
        model = WhichPathModel(a=0.0, k0=1.0)
        self.assertAlmostEqual(2.0, fringe_pattern(model, 0.0))
        self.assertAlmostEqual(0.0, fringe_pattern(model, math.pi / 2))

    def test_flat_pattern_for_large_slit_uncertainty(self):
        model = WhichPathModel(a=10.0, k0=1.0)
        xi = np.linspace(-10, 10, 101)
        self.assertLessEqual(np.abs(fringe_pattern(model, xi) - 1.0).max(), 1e-40)
        self.assertLessEqual(fringe_contrast(model), 1e-40)

    def test_pattern_shape(self):
        model = WhichPathModel(a=0.3, k0=2.0)
        xi = np.linspace(-1, 1, 6).reshape(2, 3)
        self.assertEqual((2, 3), fringe_pattern(model, xi).shape)
        self.assertIsInstance(fringe_pattern(model, 0.2), float)

    def test_quadrature_matches_closed_form_on_grid(self):
        xi = np.linspace(-10, 10, 41)
        worst = 0.0
        for a in np.linspace(0.1, 5.0, 20):
            for k0 in np.linspace(0.1, 5.0, 20):
                model = WhichPathModel(a=a, k0=k0)
                difference = fringe_quadrature(model, xi) - fringe_pattern(model, xi)
                worst = max(worst, float(np.abs(difference).max()))
        self.assertLessEqual(worst, 1e-6)

    def test_quadrature_edge_cases(self):
        xi = np.array([-1.0, 0.0, 2.5])
        for model in (WhichPathModel(a=0.0, k0=1.0), WhichPathModel(a=1.5, k0=0.0)):
            self.assertAllClose(fringe_pattern(model, xi), fringe_quadrature(model, xi),
                                rtol=0, atol=1e-9)
        self.assertIsInstance(fringe_quadrature(WhichPathModel(), 0.5), float)

    @needs_hypothesis
    def test_pattern_bounds(self):
        @settings(max_examples=200, deadline=None)
        @given(widths, wavenumbers, st.floats(min_value=-50.0, max_value=50.0))
        def check(a, k0, xi):
            model = WhichPathModel(a=a, k0=k0)
            value = fringe_pattern(model, xi)
            contrast = fringe_contrast(model)
            self.assertGreaterEqual(value, 1.0 - contrast - 1e-12)
            self.assertLessEqual(value, 1.0 + contrast + 1e-12)
        check()


class WhichPathTestCase(HelperTestCase):
    def test_probabilities_sum_to_one(self):
        kappa = np.linspace(-20, 20, 2001)
        for a, k0 in ((0.1, 0.1), (1.0, 1.0), (3.0, 5.0), (10.0, 1.0)):
            p_a, p_b = slit_probabilities(WhichPathModel(a=a, k0=k0), kappa)
            self.assertLessEqual(np.abs(p_a + p_b - 1.0).max(), 1e-12)

    def test_symmetric_point(self):
        self.assertEqual((0.5, 0.5), slit_probabilities(WhichPathModel(a=2.0, k0=3.0), 0.0))

    def test_anticorrelation_limit(self):
        model = WhichPathModel(a=10.0, k0=1.0)
        p_a, p_b = slit_probabilities(model, model.k0)
        self.assertLessEqual(p_a, 1e-43)
        self.assertEqual(1.0, p_b)
        p_a, p_b = slit_probabilities(model, -model.k0)
        self.assertEqual(1.0, p_a)

    def test_density_normalised(self):
        for a, k0 in ((0.2, 0.5), (1.0, 1.0), (4.0, 3.0)):
            model = WhichPathModel(a=a, k0=k0)
            reach = k0 + 10.0 / a
            total, _ = integrate.quad(lambda kappa: slit_momentum_density(model, kappa),
                                      -reach, reach, points=[-k0, k0], limit=200)
            self.assertAlmostEqual(1.0, total, delta=1e-6)

    def test_density_lobes(self):
        model = WhichPathModel(a=5.0, k0=2.0)
        kappa = np.linspace(-4, 4, 801)
        density = slit_momentum_density(model, kappa)
        self.assertAllClose(density, density[::-1], rtol=1e-10)
        peaks = kappa[np.argsort(density)[-2:]]
        self.assertAllClose([-2.0, 2.0], np.sort(peaks), atol=1e-9)

    def test_density_needs_width(self):
        with self.assertRaises(ParameterError) as cm:
            slit_momentum_density(WhichPathModel(a=0.0), 0.0)
        self.assertEqual('a', cm.exception.key)

    def test_distinguishability(self):
        self.assertEqual(0.0, path_distinguishability(WhichPathModel(a=0.0)))
        self.assertAlmostEqual(0.842700793, path_distinguishability(WhichPathModel()), places=9)
        for a, k0 in ((0.3, 0.7), (1.0, 1.0), (2.0, 0.4), (3.0, 2.0)):
            model = WhichPathModel(a=a, k0=k0)
            self.assertAlmostEqual(path_distinguishability(model),
                                   path_distinguishability_quadrature(model), delta=1e-8)
        self.assertEqual(0.0, path_distinguishability_quadrature(WhichPathModel(a=0.0)))

    @needs_hypothesis
    def test_complementarity(self):
        @settings(max_examples=300, deadline=None)
        @given(widths, wavenumbers)
        def check(a, k0):
            model = WhichPathModel(a=a, k0=k0)
            visibility = fringe_contrast(model)
            knowledge = path_distinguishability(model)
            self.assertLessEqual(visibility ** 2 + knowledge ** 2, 1.0 + 1e-15)
        check()

    @needs_hypothesis
    def test_probabilities_property(self):
        @settings(max_examples=300, deadline=None)
        @given(widths, wavenumbers, st.floats(min_value=-100.0, max_value=100.0))
        def check(a, k0, kappa):
            p_a, p_b = slit_probabilities(WhichPathModel(a=a, k0=k0), kappa)
            self.assertTrue(0.0 <= p_a <= 1.0)
            self.assertAlmostEqual(1.0, p_a + p_b, delta=1e-12)
        check()


class SingleSlitTestCase(HelperTestCase):
    def test_scalar(self):
        result = single_slit_product(2.0, 4.0, 8.0)
        self.assertEqual(1.0, result.theta)
        self.assertEqual(4.0, result.delta_p)
        self.assertEqual(8.0, result.product)

    def test_product_is_planck_constant(self):
        rng = np.random.default_rng(12)
        d = 10.0 ** rng.uniform(-9, 0, 1000000)
        p = 10.0 ** rng.uniform(-27, -20, 1000000)
        h = 6.62607015e-34
        result = single_slit_product(d, p, h)
        self.assertLessEqual(np.abs(result.product / h - 1.0).max(), 4.5e-16)
        self.assertAllClose(result.theta * p, result.delta_p, rtol=1e-15)

    def test_invalid(self):
        for args, key in (((0.0, 1.0, 1.0), 'd'), ((1.0, -1.0, 1.0), 'p'),
                          ((1.0, 1.0, 0.0), 'h'), (([1.0, 0.0], 1.0, 1.0), 'd')):
            with self.assertRaises(ParameterError) as cm:
                single_slit_product(*args)
            self.assertEqual(key, cm.exception.key)


def test_suite():
    suite = unittest.TestSuite()
    suite.addTests([unittest.defaultTestLoader.loadTestsFromTestCase(ModelTestCase)])
    suite.addTests([unittest.defaultTestLoader.loadTestsFromTestCase(FringeTestCase)])
    suite.addTests([unittest.defaultTestLoader.loadTestsFromTestCase(WhichPathTestCase)])
    suite.addTests([unittest.defaultTestLoader.loadTestsFromTestCase(SingleSlitTestCase)])
    suite.addTests([make_doctest('whichpath.txt')])
    return suite


if __name__ == '__main__':
    print('to test use test.py %s' % __file__)
