"""
Tests for the layered run configuration.
"""

import os
import unittest

from sedkit.config import RunConfig, SCHEMAS, parse_grid
from sedkit.errors import ConfigError

from .common_imports import HelperTestCase, tmpfile, write_to_file


class GridTestCase(HelperTestCase):
    def test_range(self):
        self.assertEqual((0.5, 1.0, 1.5), parse_grid('0.5:1.5:3'))
        self.assertEqual((2.0,), parse_grid('2:9:1'))
        self.assertEqual(401, len(parse_grid('-10:10:401')))

    def test_list(self):
        self.assertEqual((1.0, 2.5, -3.0), parse_grid('1, 2.5,-3'))
        self.assertEqual((1.0, 2.0), parse_grid([1, 2]))

    def test_invalid(self):
        for text in ('1:2', '1:2:0', '1:2:2.5', 'a,b', '', '1:2:3:4'):
            self.assertRaises(ValueError, parse_grid, text)


class RunConfigTestCase(HelperTestCase):
    def test_defaults(self):
        config = RunConfig.load('sed-run')
        self.assertEqual(1e-3, config['gamma_rad'])
        self.assertEqual(300, config['n_modes'])
        self.assertIsNone(config['bandwidth'])
        self.assertIs(True, config['vacuum'])
        self.assertEqual(0, config['seed'])
        self.assertEqual('csv', config['format'])

    def test_spectrum_defaults(self):
        config = RunConfig.load('sed-spectrum')
        self.assertEqual(500.0, config['t_measure'])
        self.assertEqual(31, len(config['grid']))
        self.assertEqual(0.5, config['grid'][0])
        self.assertEqual(3.5, config['grid'][-1])

    def test_keys_unique_per_command(self):
        for command, options in SCHEMAS.items():
            keys = [option.key for option in RunConfig.options(command)]
            self.assertEqual(len(keys), len(set(keys)), command)

    def test_layering(self):
        with tmpfile(suffix='.ini') as filename:
            write_to_file(filename, "[oscillator]\nomega0 = 2\nmass = 3\n\n"
                                    "[field]\nvacuum = no\n\n[run]\nseed = 7\n")
            config = RunConfig.load('sed-run', filename, {'mass': '4', 'charge': None})
        self.assertEqual(2.0, config['omega0'])
        self.assertEqual(4.0, config['mass'])
        self.assertEqual(1.0, config['charge'])
        self.assertIs(False, config['vacuum'])
        self.assertEqual(7, config['seed'])

    def test_section_and_dict(self):
        config = RunConfig.load('whichpath', overrides={'xi': '0:1:2'})
        self.assertEqual({'a': 1.0, 'k0': 1.0}, config.section('model'))
        nested = config.as_dict()
        self.assertEqual([0.0, 1.0], nested['grid']['xi'])
        self.assertEqual({'seed': 0, 'format': 'csv'}, nested['run'])

    def test_optional_float(self):
        self.assertIsNone(RunConfig.load('walker', overrides={'eval_radius': 'auto'})['eval_radius'])
        self.assertEqual(3.0, RunConfig.load('walker', overrides={'eval_radius': '3'})['eval_radius'])

    def test_float_list(self):
        config = RunConfig.load('walker', overrides={'centers': '-20, 20', 'kind': 'double'})
        self.assertEqual((-20.0, 20.0), config['centers'])

    def _assert_config_error(self, key, *args, **kwargs):
        with self.assertRaises(ConfigError) as cm:
            RunConfig.load(*args, **kwargs)
        self.assertEqual(key, cm.exception.key)

    def test_bad_values(self):
        self._assert_config_error('n_modes', 'sed-run', overrides={'n_modes': '2.5'})
        self._assert_config_error('gamma_rad', 'sed-run', overrides={'gamma_rad': 'nan'})
        self._assert_config_error('vacuum', 'sed-run', overrides={'vacuum': 'maybe'})
        self._assert_config_error('format', 'sed-run', overrides={'format': 'xml'})
        self._assert_config_error('seed', 'sed-run', overrides={'seed': '-1'})
        self._assert_config_error('grid', 'sed-spectrum', overrides={'grid': '1:2'})

    def test_unknown_entries(self):
        self._assert_config_error('command', 'nothing')
        self._assert_config_error('bins', 'whichpath', overrides={'bins': '3'})
        with tmpfile(suffix='.ini') as filename:
            write_to_file(filename, "[model]\nk1 = 2\n")
            self._assert_config_error('k1', 'whichpath', filename)
            write_to_file(filename, "[plot]\nk0 = 2\n")
            self._assert_config_error('plot', 'whichpath', filename)
            write_to_file(filename, "k0 = 2\n")
            self._assert_config_error('config', 'whichpath', filename)

    def test_missing_file(self):
        with tmpfile() as filename:
            missing = filename + '.missing'
        self.assertFalse(os.path.exists(missing))
        self._assert_config_error('config', 'whichpath', missing)

    def test_unknown_lookup(self):
        with self.assertRaises(ConfigError):
            RunConfig.load('whichpath')['bins']


def test_suite():
    suite = unittest.TestSuite()
    suite.addTests([unittest.defaultTestLoader.loadTestsFromTestCase(GridTestCase)])
    suite.addTests([unittest.defaultTestLoader.loadTestsFromTestCase(RunConfigTestCase)])
    return suite


if __name__ == '__main__':
    print('to test use test.py %s' % __file__)
