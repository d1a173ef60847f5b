import sys
import os
import os.path

from setuptools import Extension
from setuptools.command.build_ext import build_ext as _build_ext

try:
    import Cython.Compiler.Version
    CYTHON_INSTALLED = True
except ImportError:
    CYTHON_INSTALLED = False

# pure Python modules that Cython compiles into extension modules
COMPILED_MODULES = [
    "sedkit.vacuum_field",
    "sedkit.dynamics",
    "sedkit.walker",
]

if hasattr(sys, 'pypy_version_info') or (
        getattr(sys, 'implementation', None) and sys.implementation.name != 'cpython'):
    # disable Cython compilation of Python modules in PyPy and other non-CPythons
    del COMPILED_MODULES[:]

SOURCE_PATH = "src"

_system_encoding = sys.getdefaultencoding()
if _system_encoding is None:
    _system_encoding = "iso-8859-1"


def decode_input(data):
    if isinstance(data, str):
        return data
    return data.decode(_system_encoding)


def env_var(name):
    value = os.getenv(name)
    if value:
        value = decode_input(value)
        if sys.platform == 'win32' and ';' in value:
            return value.split(';')
        else:
            return value.split()
    else:
        return []


def ext_modules():
    """Extension modules to build, empty for a pure Python installation.

    The modules are plain Python files, so the package works without
    compilation.  Cython is used when it is installed, unless
    ``--without-cython`` is passed.
    """
    if not COMPILED_MODULES:
        return []
    module_files = [os.path.join(SOURCE_PATH, *module.split('.')) for module in COMPILED_MODULES]
    c_files_exist = [os.path.exists(module + '.c') for module in module_files]

    if CYTHON_INSTALLED and (OPTION_WITH_CYTHON or not all(c_files_exist)):
        print("Building with Cython %s." % Cython.Compiler.Version.version)
        use_cython = True
    elif all(c_files_exist) and not OPTION_WITHOUT_CYTHON:
        print("Building from pre-generated C files.")
        use_cython = False
    else:
        print("Building without Cython, installing pure Python modules.")
        return []

    cythonize_directives = {
        'binding': True,
        'language_level': 3,
    }
    if OPTION_WITH_COVERAGE:
        cythonize_directives['linetrace'] = True

    result = []
    for module, src_file in zip(COMPILED_MODULES, module_files):
        result.append(
            Extension(
                module,
                sources=[src_file + ('.py' if use_cython else '.c')],
                extra_compile_args=cflags(),
                define_macros=define_macros(),
            ))
    if CYTHON_INSTALLED and OPTION_WITH_CYTHON_GDB:
        for ext in result:
            ext.cython_gdb = True

    if use_cython:
        from Cython.Build import cythonize
        if OPTION_SHOW_WARNINGS:
            from Cython.Compiler import Errors
            Errors.LEVEL = 0
        result = cythonize(result, compiler_directives=cythonize_directives)
    return result


def extra_setup_args():
    class OptionalBuildExt(_build_ext):
        """Falls back to the pure Python modules if compilation fails."""
        def run(self):
            try:
                _build_ext.run(self)
            except Exception as e:
                if OPTION_WITH_CYTHON:
                    raise
                print('Compile failed: %s' % e)
                print('Continuing with the pure Python modules.')

        def build_extension(self, ext):
            try:
                _build_ext.build_extension(self, ext)
            except Exception as e:
                if OPTION_WITH_CYTHON:
                    raise
                print('Compiling %s failed: %s' % (ext.name, e))

    return {'cmdclass': {'build_ext': OptionalBuildExt}}


def cflags():
    result = []
    if not OPTION_SHOW_WARNINGS:
        result.append('-w')
    if OPTION_DEBUG_GCC:
        result.append('-g2')
    result.extend(env_var('SEDKIT_CFLAGS'))
    return result


def define_macros():
    macros = []
    if OPTION_WITHOUT_ASSERT:
        macros.append(('PYREX_WITHOUT_ASSERTIONS', None))
    if OPTION_WITH_COVERAGE:
        macros.append(('CYTHON_TRACE_NOGIL', '1'))
    # Disable showing C lines in tracebacks, unless explicitly requested.
    macros.append(('CYTHON_CLINE_IN_TRACEBACK', '1' if OPTION_WITH_CLINES else '0'))
    return macros


def has_option(name):
    try:
        sys.argv.remove('--%s' % name)
        return True
    except ValueError:
        pass
    # allow passing all cmd line options also as environment variables
    env_val = os.getenv(name.upper().replace('-', '_'), 'false').lower()
    if env_val == "true":
        return True
    return False


def option_value(name):
    for index, option in enumerate(sys.argv):
        if option == '--' + name:
            if index + 1 >= len(sys.argv):
                raise SystemExit('The option %s requires a value' % option)
            value = sys.argv[index + 1]
            sys.argv[index:index + 2] = []
            return value
        if option.startswith('--' + name + '='):
            value = option[len(name) + 3:]
            sys.argv[index:index + 1] = []
            return value
    return os.getenv(name.upper().replace('-', '_'))


# pick up any commandline options and/or env variables
OPTION_WITHOUT_ASSERT = has_option('without-assert')
OPTION_WITHOUT_CYTHON = has_option('without-cython')
OPTION_WITH_CYTHON = has_option('with-cython')
OPTION_WITH_CYTHON_GDB = has_option('cython-gdb')
OPTION_WITH_COVERAGE = has_option('with-coverage')
OPTION_WITH_CLINES = has_option('with-clines')
if OPTION_WITHOUT_CYTHON:
    CYTHON_INSTALLED = False
OPTION_DEBUG_GCC = has_option('debug-gcc')
OPTION_SHOW_WARNINGS = has_option('warnings')
