# cython: language_level=3

"""
Discrete-mode zero-point vacuum field.

The field driving the oscillator is the finite cosine sum

    E(t) = sum_i A_i cos(w_i t + theta_i)

over N modes inside a window of full width Delta around the oscillator
frequency w0.  Mode i sits at a uniformly jittered position inside the
i-th of N equal-width frequency bins, its phase is uniform on [0, 2 pi)
and its amplitude is

    A_i = sqrt((2/pi) S(w_i) dw),    S(w) = m hbar Gamma w^3 / q^2,

which puts the stationary oscillator variance at hbar / (2 m w0).
Planck's constant only enters through the amplitudes.

Only the x component is modelled; see `sedkit.dynamics` for why the
magnetic force does not contribute.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from ._io import write_csv
from .errors import ParameterError, ParameterWarning

__all__ = ['FieldSpec', 'ModeTable', 'PhasorField',
           'synthesize_modes', 'field_at', 'coherence_time',
           'spectral_density', 'field_autocorrelation']

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# default window width in units of the oscillator linewidth
DEFAULT_BANDWIDTH_LINEWIDTHS = 50.0
MIN_BANDWIDTH_LINEWIDTHS = 10.0


def _check_positive(name, value):
    if not (isinstance(value, (int, float, np.integer, np.floating))
            and math.isfinite(value) and value > 0):
        raise ParameterError("must be a finite number > 0, got %r" % (value,), key=name)


@dataclass(frozen=True)
class FieldSpec:
    """Parameters of the synthesized vacuum field.

    ``gamma_rad`` is the radiation damping time constant Gamma, the
    oscillator linewidth is Gamma * omega0**2.  A ``bandwidth`` of None
    selects 50 linewidths.
    """
    omega0: float = 1.0
    gamma_rad: float = 1e-3
    mass: float = 1.0
    charge: float = 1.0
    hbar: float = 1.0
    bandwidth: float = None
    n_modes: int = 300
    seed: int = 0

    def __post_init__(self):
        for name in ('omega0', 'gamma_rad', 'mass', 'charge', 'hbar'):
            _check_positive(name, getattr(self, name))
        if self.bandwidth is None:
            object.__setattr__(
                self, 'bandwidth', DEFAULT_BANDWIDTH_LINEWIDTHS * self.linewidth)
        _check_positive('bandwidth', self.bandwidth)
        if self.bandwidth > 2.0 * self.omega0:
            raise ParameterError(
                "window [omega0 - bandwidth/2, omega0 + bandwidth/2] "
                "must not reach negative frequencies", key='bandwidth')
        if isinstance(self.n_modes, bool) or int(self.n_modes) != self.n_modes \
                or self.n_modes < 1:
            raise ParameterError("must be an integer >= 1, got %r" % (self.n_modes,),
                                 key='n_modes')
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or self.seed < 0:
            raise ParameterError("must be an unsigned integer, got %r" % (self.seed,),
                                 key='seed')
        object.__setattr__(self, 'n_modes', int(self.n_modes))
        object.__setattr__(self, 'seed', int(self.seed))
        if self.bandwidth < MIN_BANDWIDTH_LINEWIDTHS * self.linewidth:
            warnings.warn(
                "bandwidth %g covers less than %g oscillator linewidths (%g)" % (
                    self.bandwidth, MIN_BANDWIDTH_LINEWIDTHS, self.linewidth),
                ParameterWarning, stacklevel=3)

    @property
    def linewidth(self):
        return self.gamma_rad * self.omega0 ** 2

    @property
    def window(self):
        half = 0.5 * self.bandwidth
        return self.omega0 - half, self.omega0 + half

    def replace(self, **changes):
        return replace(self, **changes)


def spectral_density(spec, omega):
    """S(omega) = m hbar Gamma omega^3 / q^2 of the zero-point field.
    """
    omega = np.asarray(omega, dtype=float)
    return spec.mass * spec.hbar * spec.gamma_rad * omega ** 3 / spec.charge ** 2


def coherence_time(spec):
    """Reciprocal of the vacuum field bandwidth.
    """
    return 1.0 / spec.bandwidth


def _readonly(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ModeTable:
    """Immutable set of (frequency, amplitude, phase) modes.
    """
    frequencies: np.ndarray
    amplitudes: np.ndarray
    phases: np.ndarray
    spec: FieldSpec = field(default=None)

    def __post_init__(self):
        frequencies = _readonly(self.frequencies)
        amplitudes = _readonly(self.amplitudes)
        phases = _readonly(self.phases)
        if not (frequencies.ndim == amplitudes.ndim == phases.ndim == 1) or \
                not (len(frequencies) == len(amplitudes) == len(phases)):
            raise ParameterError("mode arrays must be one-dimensional and of equal length",
                                 key='modes')
        object.__setattr__(self, 'frequencies', frequencies)
        object.__setattr__(self, 'amplitudes', amplitudes)
        object.__setattr__(self, 'phases', phases)

    def __len__(self):
        return len(self.frequencies)

    @property
    def max_frequency(self):
        return float(self.frequencies.max()) if len(self) else 0.0

    def mean_square(self):
        """Long-time average of E(t)**2, i.e. sum(A_i**2) / 2.
        """
        return 0.5 * float(np.dot(self.amplitudes, self.amplitudes))

    def rows(self):
        for index in range(len(self)):
            yield (index, self.frequencies[index], self.amplitudes[index],
                   self.phases[index])

    def write_csv(self, path_or_file):
        write_csv(path_or_file, ('index', 'frequency', 'amplitude', 'phase'),
                  self.rows())

    def __eq__(self, other):
        if not isinstance(other, ModeTable):
            return NotImplemented
        return (np.array_equal(self.frequencies, other.frequencies)
                and np.array_equal(self.amplitudes, other.amplitudes)
                and np.array_equal(self.phases, other.phases))

    __hash__ = None


def synthesize_modes(spec):
    """Draw the mode table of ``spec`` from its seeded generator.

    The jitter positions are drawn first, the phases second; both come
    from ``numpy.random.default_rng(spec.seed)`` so that a spec always
    gives the same table.
    """
    if not isinstance(spec, FieldSpec):
        raise ParameterError("expected a FieldSpec, got %r" % (spec,), key='spec')
    rng = np.random.default_rng(spec.seed)
    n = spec.n_modes
    spacing = spec.bandwidth / n
    lower, _ = spec.window
    frequencies = lower + spacing * (np.arange(n) + rng.random(n))
    phases = np.mod(TWO_PI * rng.random(n), TWO_PI)
    amplitudes = np.sqrt((2.0 / math.pi) * spectral_density(spec, frequencies) * spacing)
    logger.debug("synthesized %d modes in [%g, %g] (seed %d)",
                 n, frequencies[0], frequencies[-1], spec.seed)
    return ModeTable(frequencies, amplitudes, phases, spec)


def field_at(table, t, chunk_size=4096):
    """Evaluate the cosine sum at time(s) ``t``.

    Scalars give a float, arrays give an array of the same shape.
    """
    times = np.asarray(t, dtype=float)
    flat = times.reshape(-1)
    out = np.empty(flat.shape, dtype=float)
    for start in range(0, len(flat), chunk_size):
        chunk = flat[start:start + chunk_size]
        arguments = np.multiply.outer(chunk, table.frequencies) + table.phases
        out[start:start + chunk_size] = np.cos(arguments) @ table.amplitudes
    if times.ndim == 0:
        return float(out[0])
    return out.reshape(times.shape)


def field_autocorrelation(table, lags):
    """Time-averaged <E(t) E(t + lag)> = sum A_i^2/2 cos(w_i lag).
    """
    lags = np.asarray(lags, dtype=float)
    power = 0.5 * table.amplitudes ** 2
    return np.cos(np.multiply.outer(lags, table.frequencies)) @ power


class PhasorField:
    """Evaluates a mode table on the uniform grid ``t0 + j * step``.

    Samples are produced block by block.  At the start of each block the
    mode phasors ``A_i exp(i (w_i t_b + theta_i))`` are computed directly,
    inside the block they are rotated by the precomputed factors
    ``exp(i w_i k step)``, so the cost per sample is one complex
    multiply-add per mode and no rounding error accumulates across blocks.
    """
    def __init__(self, table, t0, step, block=2048):
        if not step > 0:
            raise ParameterError("must be > 0", key='step')
        self.table = table
        self.t0 = float(t0)
        self.step = float(step)
        self.block = int(block)
        offsets = self.step * np.arange(self.block)
        self._rotation = np.exp(1j * np.multiply.outer(table.frequencies, offsets))

    def samples(self, start, count):
        """Field values at grid indices ``start .. start + count - 1``.
        """
        if count <= 0:
            return np.zeros(0)
        table = self.table
        if len(table) == 0:
            return np.zeros(count)
        block = self.block
        first = start // block
        last = (start + count - 1) // block
        block_starts = self.t0 + self.step * (block * np.arange(first, last + 1))
        anchors = table.amplitudes * np.exp(
            1j * (np.multiply.outer(block_starts, table.frequencies) + table.phases))
        values = (anchors @ self._rotation).real.reshape(-1)
        offset = start - first * block
        return values[offset:offset + count]
