import os
import sys

# for command line options and supported environment variables, please
# see the end of 'setupinfo.py'

if sys.version_info[:2] < (3, 9):
    print("This sedkit version requires Python 3.9 or later.")
    sys.exit(1)

from setuptools import setup

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import versioninfo
import setupinfo

sedkit_version = versioninfo.version()
print("Building sedkit version %s." % sedkit_version)

OPTION_RUN_TESTS = setupinfo.has_option('run-tests')


def read_requirements(filename):
    with open(filename) as f:
        return [line.strip() for line in f
                if line.strip() and not line.startswith('#')]


extra_options = {
    'zip_safe': False,
    # NOTE: keep in sync with Trove classifier list below.
    'python_requires': '>=3.9',
    'install_requires': ['numpy>=1.22', 'scipy>=1.8'],
    'extras_require': {
        'source': read_requirements('requirements.txt'),
        'test': ['hypothesis'],
    },
    'package_dir': {'': 'src'},
    'packages': ['sedkit'],
    'package_data': {'sedkit': ['*.py']},
    'entry_points': {'console_scripts': ['sedkit = sedkit.cli:main']},
    'ext_modules': setupinfo.ext_modules(),
}
extra_options.update(setupinfo.extra_setup_args())

setup(
    name="sedkit",
    version=sedkit_version,
    author="sedkit developers",
    license="BSD-3-Clause",
    description=(
        "Stochastic electrodynamics oscillator simulation, recoiling-slit"
        " which-path analytics and walker exit-angle analysis."
    ),
    long_description=(open('README.rst').read() + "\n\n" + versioninfo.changes()),
    classifiers=[
        versioninfo.dev_status(),
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Programming Language :: Cython',
        # NOTE: keep in sync with 'python_requires' above.
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Operating System :: OS Independent',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    **extra_options
)

if OPTION_RUN_TESTS:
    print("Running tests.")
    import test
    try:
        sys.exit(test.main(sys.argv[:1]))
    except ImportError:
        pass  # we assume that the binaries were not built with this setup.py run
