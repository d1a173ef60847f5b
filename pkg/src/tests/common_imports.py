"""
Common helpers for the sedkit tests.
"""

import doctest
import os
import os.path
import shutil
import tempfile
import unittest
import warnings

from contextlib import contextmanager

import numpy as np

DOC_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(__file__))), 'doc')

# test.py exports the selected --level, long acceptance runs are level 2
TEST_LEVEL = int(os.environ.get('SEDKIT_TEST_LEVEL', '1'))

try:
    import hypothesis
except ImportError:
    hypothesis = None


def needs_level(level):
    return unittest.skipIf(
        TEST_LEVEL < level,
        "long run, needs test level >= %d (test.py --level %d)" % (level, level))


def needs_hypothesis(test):
    return unittest.skipIf(hypothesis is None, "needs hypothesis")(test)


def make_doctest(filename):
    file_path = os.path.join(DOC_DIR, filename)
    return doctest.DocFileSuite(
        file_path, module_relative=False, encoding='utf-8',
        optionflags=doctest.ELLIPSIS | doctest.NORMALIZE_WHITESPACE)


class HelperTestCase(unittest.TestCase):
    def assertAllClose(self, expected, actual, rtol=1e-7, atol=0.0):
        np.testing.assert_allclose(actual, expected, rtol=rtol, atol=atol)

    def assertWithin(self, expected, actual, relative):
        self.assertLessEqual(abs(actual - expected), relative * abs(expected),
                             "%r not within %g%% of %r" % (actual, 100 * relative, expected))

    @contextmanager
    def quiet(self, category=Warning):
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', category)
            yield


@contextmanager
def tmpfile(**kwargs):
    handle, filename = tempfile.mkstemp(**kwargs)
    try:
        yield filename
    finally:
        os.close(handle)
        os.remove(filename)


@contextmanager
def tmpdir():
    path = tempfile.mkdtemp(prefix='sedkit-test-')
    try:
        yield path
    finally:
        shutil.rmtree(path, ignore_errors=True)


def read_file(name, mode='r'):
    with open(name, mode) as f:
        data = f.read()
    return data


def write_to_file(name, data, mode='w'):
    with open(name, mode) as f:
        f.write(data)
