"""
Run configuration of the command line front end.

Every subcommand has a schema of typed options grouped in sections.  A
value comes from, in increasing priority, the schema default, an INI
style configuration file and a command line flag:

    [oscillator]
    gamma_rad = 1e-3

    [ensemble]
    n_members = 4

Unknown sections and keys are rejected.  Keys are unique per subcommand,
so each option is also available as the flag ``--key-name``.
"""

import configparser
import math
from collections import namedtuple

import numpy as np

from .errors import ConfigError

__all__ = ['Option', 'RunConfig', 'SCHEMAS', 'RUN_OPTIONS', 'parse_grid']

Option = namedtuple('Option', 'section key type default help')

FORMATS = ('csv', 'json')


def _as_bool(text):
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ('1', 'true', 'yes', 'on'):
        return True
    if value in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError("not a boolean: %r" % (text,))


def _as_int(text):
    if isinstance(text, bool):
        raise ValueError("not an integer: %r" % (text,))
    if isinstance(text, int):
        return text
    value = float(str(text).strip())
    if not value.is_integer():
        raise ValueError("not an integer: %r" % (text,))
    return int(value)


def _as_float(text):
    value = float(str(text).strip()) if not isinstance(text, float) else text
    if math.isnan(value):
        raise ValueError("not a number: %r" % (text,))
    return value


def _as_optional_float(text):
    if text is None or (isinstance(text, str) and text.strip().lower() in ('', 'none', 'auto')):
        return None
    return _as_float(text)


def _as_str(text):
    return str(text).strip()


def _as_float_list(text):
    if isinstance(text, (list, tuple)):
        return tuple(_as_float(value) for value in text)
    items = [item for item in str(text).split(',') if item.strip()]
    if not items:
        raise ValueError("empty list")
    return tuple(_as_float(item) for item in items)


def parse_grid(text):
    """Parse ``start:stop:count`` (inclusive linspace) or a comma separated list.
    """
    if isinstance(text, (list, tuple)):
        return tuple(_as_float(value) for value in text)
    text = str(text).strip()
    if ':' in text:
        parts = text.split(':')
        if len(parts) != 3:
            raise ValueError("grid must look like start:stop:count, got %r" % text)
        start, stop = _as_float(parts[0]), _as_float(parts[1])
        count = _as_int(parts[2])
        if count < 1:
            raise ValueError("grid needs at least one point")
        if count == 1:
            return (start,)
        return tuple(float(value) for value in np.linspace(start, stop, count))
    return _as_float_list(text)


_TYPES = {
    'bool': _as_bool,
    'int': _as_int,
    'float': _as_float,
    'float?': _as_optional_float,
    'str': _as_str,
    'floats': _as_float_list,
    'grid': parse_grid,
}


RUN_OPTIONS = [
    Option('run', 'seed', 'int', 0, "base seed of all random draws"),
    Option('run', 'format', 'str', 'csv', "output format, csv or json"),
]

_OSCILLATOR = [
    Option('oscillator', 'mass', 'float', 1.0, "particle mass"),
    Option('oscillator', 'charge', 'float', 1.0, "particle charge"),
    Option('oscillator', 'omega0', 'float', 1.0, "natural frequency"),
    Option('oscillator', 'gamma_rad', 'float', 1e-3, "radiation damping time Gamma"),
]

_FIELD = [
    Option('field', 'vacuum', 'bool', True, "drive with the zero-point vacuum field"),
    Option('field', 'hbar', 'float', 1.0, "Planck's constant over 2 pi"),
    Option('field', 'bandwidth', 'float?', None, "field window width (default 50 linewidths)"),
    Option('field', 'n_modes', 'int', 300, "number of field modes"),
]


def _ensemble(**defaults):
    values = dict(n_members=1, t_transient=1e4, t_measure=2e5, sample_stride=5,
                  dt=0.02, x0=0.0, v0=0.0)
    values.update(defaults)
    return [
        Option('ensemble', 'n_members', 'int', values['n_members'], "ensemble size"),
        Option('ensemble', 't_transient', 'float', values['t_transient'],
               "time discarded before measuring"),
        Option('ensemble', 't_measure', 'float', values['t_measure'], "measurement time"),
        Option('ensemble', 'sample_stride', 'int', values['sample_stride'],
               "integration steps per kept sample"),
        Option('ensemble', 'dt', 'float', values['dt'], "integration step"),
        Option('ensemble', 'x0', 'float', values['x0'], "initial position"),
        Option('ensemble', 'v0', 'float', values['v0'], "initial velocity"),
        Option('ensemble', 'random_phase', 'bool', True,
               "start every member at its own oscillation phase"),
    ]


SCHEMAS = {
    'sed-run': _OSCILLATOR + _FIELD + _ensemble() + [
        Option('output', 'bins', 'int', 101, "histogram bins"),
        Option('output', 'write_trajectories', 'bool', False, "write sampled trajectories"),
        Option('output', 'trajectory_stride', 'int', 100,
               "kept samples per written trajectory row"),
    ],
    'sed-spectrum': _OSCILLATOR + _FIELD + _ensemble(t_measure=500.0) + [
        Option('pulse', 'amplitude', 'float', 0.01, "pulse field amplitude"),
        Option('pulse', 't_center', 'float', 10100.0, "time of the pulse maximum"),
        Option('pulse', 'sigma_t', 'float', 20.0, "pulse envelope width"),
        Option('spectrum', 'grid', 'grid', '0.5:3.5:31', "pulse carrier frequencies"),
        Option('spectrum', 'window_length', 'float?', None,
               "energy averaging window (default t_measure)"),
    ],
    'whichpath': [
        Option('model', 'a', 'float', 1.0, "slit position uncertainty"),
        Option('model', 'k0', 'float', 1.0, "particle wavenumber"),
        Option('grid', 'xi', 'grid', '-10:10:401', "screen positions"),
        Option('grid', 'kappa', 'grid', '-5:5:401', "slit recoil wavenumbers"),
        Option('check', 'quadrature', 'bool', True, "cross-check by numerical quadrature"),
    ],
    'walker': [
        Option('input', 'trajectories', 'str', '', "trajectory CSV (empty: synthesize)"),
        Option('synth', 'law', 'str', 'single-slit', "delta, uniform or single-slit"),
        Option('synth', 'angle', 'float', 0.0, "exit angle of the delta law"),
        Option('synth', 'n', 'int', 10000, "number of synthetic walkers"),
        Option('synth', 'noise', 'float', 0.0, "positional noise in mm"),
        Option('geometry', 'kind', 'str', 'single', "single or double"),
        Option('geometry', 'centers', 'floats', '0', "slit centre offsets in mm"),
        Option('geometry', 'width', 'float', 14.25, "slit width in mm"),
        Option('geometry', 'barrier_x', 'float', 0.0, "slit plane position in mm"),
        Option('geometry', 'faraday_wavelength', 'float', 4.75, "Faraday wavelength in mm"),
        Option('geometry', 'axis_angle', 'float', 0.0, "direction of the slit axis"),
        Option('geometry', 'eval_radius', 'float?', None,
               "angle evaluation radius (default two slit widths)"),
        Option('geometry', 'drive_frequency', 'float', 50.0, "bath drive frequency in Hz"),
        Option('geometry', 'viscosity', 'float', 20.0, "oil viscosity in cSt"),
        Option('geometry', 'depth', 'float', 4.0, "oil depth in mm"),
        Option('analysis', 'bins', 'int', 61, "angular histogram bins"),
        Option('analysis', 'symmetrize', 'bool', True, "also emit the symmetrized histogram"),
        Option('analysis', 'max_divergence', 'float?', None,
               "keep walkers whose initial heading is within this angle of the axis"),
        Option('analysis', 'fit', 'bool', True, "emit the single-slit fit curve"),
        Option('analysis', 'fit_points', 'int', 181, "points of the fit curve"),
    ],
}


class RunConfig:
    """Resolved options of one subcommand.

    Use `RunConfig.load()` to build an instance from the schema defaults,
    a configuration file and command line overrides.  Values are looked
    up by key, ``config['gamma_rad']``.
    """
    def __init__(self, command, values):
        self.command = command
        self._values = dict(values)

    @classmethod
    def options(cls, command):
        try:
            return RUN_OPTIONS + SCHEMAS[command]
        except KeyError:
            raise ConfigError("unknown command %r" % (command,), key='command')

    @classmethod
    def load(cls, command, path=None, overrides=None):
        """Resolve the options of ``command``.

        ``overrides`` maps keys to raw values, None meaning "not given".
        """
        options = cls.options(command)
        by_section = {}
        for option in options:
            by_section.setdefault(option.section, {})[option.key] = option
        raw = {option.key: option.default for option in options}

        if path is not None:
            parser = configparser.ConfigParser(interpolation=None)
            try:
                with open(path, encoding='utf-8') as f:
                    parser.read_file(f)
            except OSError as exc:
                raise ConfigError("cannot read %s: %s" % (path, exc.strerror), key='config')
            except configparser.Error as exc:
                raise ConfigError(str(exc).replace('\n', ' '), key='config')
            for section in parser.sections():
                if section not in by_section:
                    raise ConfigError("unknown section [%s]" % section, key=section)
                for key, value in parser.items(section):
                    if key not in by_section[section]:
                        raise ConfigError("unknown key in [%s]" % section, key=key)
                    raw[key] = value

        if overrides:
            known = {option.key for option in options}
            for key, value in overrides.items():
                if key not in known:
                    raise ConfigError("unknown option", key=key)
                if value is not None:
                    raw[key] = value

        values = {}
        for option in options:
            value = raw[option.key]
            if value is not None or option.type != 'float?':
                try:
                    value = _TYPES[option.type](value)
                except (TypeError, ValueError) as exc:
                    raise ConfigError(str(exc), key=option.key)
            values[option.key] = value
        if values['format'] not in FORMATS:
            raise ConfigError("must be one of %s" % ", ".join(FORMATS), key='format')
        if values['seed'] < 0:
            raise ConfigError("must be >= 0", key='seed')
        return cls(command, values)

    def __getitem__(self, key):
        try:
            return self._values[key]
        except KeyError:
            raise ConfigError("no such option for %s" % self.command, key=key)

    def section(self, name):
        """Values of one section as a dict."""
        return {option.key: self._values[option.key]
                for option in self.options(self.command) if option.section == name}

    def as_dict(self):
        """Nested {section: {key: value}} mapping for the provenance block."""
        result = {}
        for option in self.options(self.command):
            value = self._values[option.key]
            if isinstance(value, tuple):
                value = list(value)
            result.setdefault(option.section, {})[option.key] = value
        return result
