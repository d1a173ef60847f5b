"""
Tests for the CSV and JSON writers.
"""

import io
import json
import os
import unittest

import numpy as np

from sedkit._io import ensure_dir, to_jsonable, write_csv, write_json

from .common_imports import HelperTestCase, read_file, tmpdir


class CSVTestCase(HelperTestCase):
    def test_values(self):
        f = io.StringIO()
        write_csv(f, ('a', 'b', 'c', 'd'), [(np.float64(0.1), np.int64(3), True, 'x'),
                                            (1e-300, 2, np.bool_(False), 1.0)])
        self.assertEqual("a,b,c,d\n0.1,3,true,x\n1e-300,2,false,1.0\n", f.getvalue())

    def test_exact_round_trip(self):
        value = float(np.nextafter(1.0, 2.0))
        f = io.StringIO()
        write_csv(f, ('v',), [(value,)])
        self.assertEqual(value, float(f.getvalue().splitlines()[1]))

    def test_path(self):
        with tmpdir() as path:
            filename = os.path.join(path, 'table.csv')
            write_csv(filename, ('x',), iter([(1,), (2,)]))
            self.assertEqual("x\n1\n2\n", read_file(filename))


class JSONTestCase(HelperTestCase):
    def test_to_jsonable(self):
        data = to_jsonable({'a': (1, np.float32(0.5)), 'b': np.arange(3),
                            'c': float('nan'), 1: np.bool_(True)})
        self.assertEqual({'a': [1, 0.5], 'b': [0, 1, 2], 'c': None, '1': True}, data)

    def test_write_json_sorted(self):
        with tmpdir() as path:
            filename = os.path.join(ensure_dir(os.path.join(path, 'deep', 'er')), 's.json')
            write_json(filename, {'b': 1, 'a': [np.inf]})
            text = read_file(filename)
            self.assertTrue(text.endswith('\n'))
            self.assertLess(text.index('"a"'), text.index('"b"'))
            self.assertEqual({'a': [None], 'b': 1}, json.loads(text))


def test_suite():
    suite = unittest.TestSuite()
    suite.addTests([unittest.defaultTestLoader.loadTestsFromTestCase(CSVTestCase)])
    suite.addTests([unittest.defaultTestLoader.loadTestsFromTestCase(JSONTestCase)])
    return suite


if __name__ == '__main__':
    print('to test use test.py %s' % __file__)
