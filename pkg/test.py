#!/usr/bin/env python
"""
sedkit test runner.

Syntax: test.py [options] [pathname-regexp [test-regexp]]

Test modules live in src/tests and are named 'test*.py'.  Each provides
a test_suite() function; the collected cases are filtered by the two
optional regular expressions.

A leading "!" negates a regexp.  The pathname regexp is matched against
the path below src (tests/test_walker.py), the test regexp against the
full test id (tests.test_walker.ExitAngleTestCase.test_offset_entry).

Long running acceptance tests are at level 2 and skipped by default.

Options:
  -h            print this help message
  -v            verbose (print dots for each test run)
  -vv           very verbose (print test names)
  -q            quiet (do not print anything on success)
  -w            warn about test case classes missing from test_suite()
  --level n     select only tests at level n or lower
  --all-levels  select all tests
  --list-files  list all selected test files
  --list-tests  list all selected test cases
  --coverage    create code coverage reports in ./coverage
"""

import getopt
import importlib
import logging
import os
import re
import sys
import time
import traceback
import unittest

from dataclasses import dataclass

# exported to the test modules as SEDKIT_TEST_LEVEL when --all-levels is given
ALL_LEVELS = 99


def stderr(text):
    sys.stderr.write(text + "\n")


@dataclass
class Options:
    basedir: str = ''           # absolute path of src/
    level: int = 1              # None runs every level
    pathname_regex: str = ''
    test_regex: str = ''
    list_files: bool = False
    list_tests: bool = False
    run_tests: bool = True      # cleared by --list-*
    verbosity: int = 0
    quiet: bool = False
    warn_omitted: bool = False
    coverage: bool = False
    coverdir: str = 'coverage'


def compile_matcher(regex):
    """Predicate for a regexp; empty matches all, a leading '!' negates."""
    if not regex:
        return lambda name: True
    negate = regex.startswith('!')
    if negate:
        regex = regex[1:]
        if not regex:
            return lambda name: False
    search = re.compile(regex).search
    if negate:
        return lambda name: search(name) is None
    return lambda name: search(name) is not None


def get_test_files(cfg):
    """Sorted test module paths below cfg.basedir that pass the path filter."""
    matcher = compile_matcher(cfg.pathname_regex)
    found = []
    for dirpath, _, filenames in os.walk(cfg.basedir):
        if os.path.basename(dirpath) != 'tests':
            continue
        if '__init__.py' not in filenames:
            stderr("%s is not a package" % dirpath)
            continue
        for filename in filenames:
            if not (filename.startswith('test') and filename.endswith('.py')):
                continue
            path = os.path.join(dirpath, filename)
            if matcher(os.path.relpath(path, cfg.basedir)):
                found.append(path)
    return sorted(found)


def module_name(path, cfg):
    relative = os.path.splitext(os.path.relpath(path, cfg.basedir))[0]
    return relative.replace(os.path.sep, '.')


def iter_tests(suite):
    """Flattens nested suites, yielding (test, inherited level)."""
    for test in suite:
        if isinstance(test, unittest.TestCase):
            yield test, getattr(test, 'level', 0)
        else:
            level = getattr(test, 'level', 0)
            for case, case_level in iter_tests(test):
                yield case, max(level, case_level)


def warn_omitted(module, suite, path):
    used = {type(test) for test, _ in iter_tests(suite)}
    for name, item in vars(module).items():
        if (name.endswith('TestCase') and isinstance(item, type)
                and issubclass(item, unittest.TestCase)
                and item.__module__ == module.__name__ and item not in used):
            # surrounded by blank lines so that it stands out
            stderr("\n%s: WARNING: %s not in test suite\n" % (path, name))


def get_test_cases(test_files, cfg):
    """Selected test cases of all given modules, in file order."""
    matcher = compile_matcher(cfg.test_regex)
    selected = []
    for path in test_files:
        module = importlib.import_module(module_name(path, cfg))
        suite = module.test_suite()
        if suite is None:
            continue
        if cfg.warn_omitted:
            warn_omitted(module, suite, path)
        for test, level in iter_tests(suite):
            if cfg.level is not None and level > cfg.level:
                continue
            if matcher(test.id()):
                selected.append(test)
    return selected


class CustomTestResult(unittest.TextTestResult):
    """Keeps the complete traceback of failures and errors."""

    def _full_traceback(self, err):
        return "".join(traceback.format_exception(*err))

    def addFailure(self, test, err):
        super().addFailure(test, err)
        self.failures[-1] = (test, self._full_traceback(err))

    def addError(self, test, err):
        super().addError(test, err)
        self.errors[-1] = (test, self._full_traceback(err))


class CustomTestRunner(unittest.TextTestRunner):
    """TextTestRunner that stays silent on success with -q."""

    resultclass = CustomTestResult

    def __init__(self, cfg):
        super().__init__(verbosity=cfg.verbosity)
        self.quiet = cfg.quiet

    def run(self, test):
        result = self._makeResult()
        started = time.perf_counter()
        test(result)
        elapsed = time.perf_counter() - started
        result.printErrors()
        if not self.quiet:
            run = result.testsRun
            self.stream.writeln(result.separator2)
            self.stream.writeln("Ran %d test%s in %.3fs" % (run, "" if run == 1 else "s", elapsed))
            self.stream.writeln()
        if not result.wasSuccessful():
            counts = [("failures", len(result.failures)), ("errors", len(result.errors))]
            self.stream.writeln("FAILED (%s)" % ", ".join(
                "%s=%d" % item for item in counts if item[1]))
        elif not self.quiet:
            skipped = len(result.skipped)
            self.stream.writeln("OK" + (" (skipped=%d)" % skipped if skipped else ""))
        return result


def parse_args(argv, cfg):
    """Fills cfg from the command line, returns an exit code or None."""
    def usage_error(message):
        stderr('%s: %s' % (argv[0], message))
        stderr('run %s -h for help' % argv[0])
        return 1

    try:
        opts, args = getopt.gnu_getopt(
            argv[1:], 'hvqw',
            ['list-files', 'list-tests', 'level=', 'all-levels', 'coverage'])
    except getopt.GetoptError as exc:
        return usage_error(exc)
    for key, value in opts:
        if key == '-h':
            print(__doc__)
            return 0
        elif key == '-v':
            cfg.verbosity += 1
            cfg.quiet = False
        elif key == '-q':
            cfg.verbosity = 0
            cfg.quiet = True
        elif key == '-w':
            cfg.warn_omitted = True
        elif key in ('--list-files', '--list-tests'):
            setattr(cfg, key[2:].replace('-', '_'), True)
            cfg.run_tests = False
        elif key == '--coverage':
            cfg.coverage = True
        elif key == '--level':
            try:
                cfg.level = int(value)
            except ValueError:
                return usage_error('invalid level: %s' % value)
        elif key == '--all-levels':
            cfg.level = None
    if len(args) > 2:
        return usage_error('too many arguments: %s' % args[2])
    if args:
        cfg.pathname_regex = args[0]
    if len(args) > 1:
        cfg.test_regex = args[1]
    return None


def main(argv):
    cfg = Options(basedir=os.path.abspath(os.path.join(os.path.dirname(argv[0]), 'src')))
    exit_code = parse_args(argv, cfg)
    if exit_code is not None:
        return exit_code

    # common_imports reads the level at import time
    os.environ['SEDKIT_TEST_LEVEL'] = str(ALL_LEVELS if cfg.level is None else cfg.level)
    sys.path[0] = cfg.basedir

    cov = None
    if cfg.run_tests and cfg.coverage:
        from coverage import Coverage
        cov = Coverage(source=[os.path.join(cfg.basedir, 'sedkit')])
        cov.start()

    test_files = get_test_files(cfg)
    test_cases = []
    if cfg.list_tests or cfg.run_tests:
        test_cases = get_test_cases(test_files, cfg)

    # tests that check log output attach their own handlers
    logging.basicConfig()
    logging.root.setLevel(logging.CRITICAL)

    success = True
    if cfg.list_files:
        print("\n".join(os.path.relpath(path, cfg.basedir) for path in test_files))
    if cfg.list_tests:
        print("\n".join(test.id() for test in test_cases))
    if cfg.run_tests:
        success = CustomTestRunner(cfg).run(unittest.TestSuite(test_cases)).wasSuccessful()

    if cov is not None:
        cov.stop()
        try:
            cov.xml_report(outfile='coverage.xml')
            if cfg.coverdir:
                cov.html_report(directory=cfg.coverdir)
        finally:
            # test runs can take a while, so at least try to print something
            cov.report()

    return 0 if success else 1


if __name__ == '__main__':
    sys.exit(main(sys.argv))
