# cython: language_level=3

"""
Equation of motion of the radiation-damped, field-driven oscillator.

    m x'' = -m w0^2 x - m Gamma w0^2 x' + q (E_p(t) + E_vac(t))

The motion is one-dimensional along x.  The magnetic part of the Lorentz
force, (v x B)_x, vanishes identically for a velocity along x, so no
magnetic term is applied anywhere in this module.

The right-hand side is linear in the state y = (x, v), so one classic
fourth-order Runge-Kutta step reduces to

    y[n+1] = M y[n] + b0 f(t_n) + bh f(t_n + dt/2) + b1 f(t_n + dt)

with a constant 2x2 matrix M and constant vectors b0, bh, b1 obtained by
applying `rk4_step` to unit states and unit forcings.  The forcing
f = (q/m) E(t) is evaluated exactly at the stage times.  The resulting
recurrence is run through `scipy.signal.lfilter`, which keeps long runs
fast without changing the scheme.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.signal import lfilter, lfiltic

from ._io import write_csv
from .errors import DivergenceError, ParameterError, ParameterWarning
from .vacuum_field import PhasorField

__all__ = ['OscillatorParams', 'PulseSpec', 'Trajectory',
           'pulse_field_at', 'integrate_trajectory', 'rk4_step', 'step_matrices',
           'max_stable_step']

logger = logging.getLogger(__name__)

# steps per segment of the vectorised recurrence
SEGMENT_STEPS = 1 << 15
# minimum number of steps per period of the fastest forcing component
STEPS_PER_PERIOD = 20
PULSE_CUTOFF_SIGMAS = 5.0


def _number(name, value, minimum=0.0, strict=True):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ParameterError("expected a number, got %r" % (value,), key=name)
    if not math.isfinite(value) or value < minimum or (strict and value == minimum):
        raise ParameterError("must be %s %g, got %r" % (
            '>' if strict else '>=', minimum, value), key=name)
    return value


@dataclass(frozen=True)
class OscillatorParams:
    """Mass, charge, natural frequency and damping time Gamma.

    ``gamma_rad = 0`` switches radiation damping off.
    """
    mass: float = 1.0
    charge: float = 1.0
    omega0: float = 1.0
    gamma_rad: float = 1e-3

    def __post_init__(self):
        for name in ('mass', 'charge', 'omega0'):
            object.__setattr__(self, name, _number(name, getattr(self, name)))
        object.__setattr__(self, 'gamma_rad',
                           _number('gamma_rad', self.gamma_rad, strict=False))
        if self.linewidth > 0.1 * self.omega0:
            warnings.warn(
                "linewidth %g is not small against omega0 %g; the oscillator "
                "is not underdamped" % (self.linewidth, self.omega0),
                ParameterWarning, stacklevel=3)

    @classmethod
    def from_field_spec(cls, spec):
        return cls(mass=spec.mass, charge=spec.charge,
                   omega0=spec.omega0, gamma_rad=spec.gamma_rad)

    @property
    def linewidth(self):
        return self.gamma_rad * self.omega0 ** 2

    @property
    def period(self):
        return 2.0 * math.pi / self.omega0

    def jacobian(self):
        return np.array([[0.0, 1.0],
                         [-self.omega0 ** 2, -self.linewidth]])

    def energy(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        return 0.5 * self.mass * (v * v + self.omega0 ** 2 * x * x)


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian excitation pulse E0 exp(-(t-tc)^2/(2 s^2)) cos(wp (t-tc)).
    """
    amplitude: float = 0.0
    omega_p: float = 1.0
    t_center: float = 0.0
    sigma_t: float = 1.0
    enabled: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'amplitude',
                           _number('amplitude', self.amplitude, strict=False))
        object.__setattr__(self, 'omega_p',
                           _number('omega_p', self.omega_p, strict=False))
        try:
            object.__setattr__(self, 't_center', float(self.t_center))
        except (TypeError, ValueError):
            raise ParameterError("expected a number, got %r" % (self.t_center,),
                                 key='t_center')
        if self.enabled:
            object.__setattr__(self, 'sigma_t', _number('sigma_t', self.sigma_t))

    def with_carrier(self, omega_p):
        return replace(self, omega_p=omega_p, enabled=True)

    def disabled(self):
        return replace(self, enabled=False)

    @property
    def end_time(self):
        """Time after which the envelope is below exp(-12.5) of its peak.
        """
        return self.t_center + PULSE_CUTOFF_SIGMAS * self.sigma_t


def pulse_field_at(pulse, t):
    """Pulse field at time(s) ``t``; zero for a missing or disabled pulse.
    """
    times = np.asarray(t, dtype=float)
    if pulse is None or not pulse.enabled:
        values = np.zeros(times.shape)
    else:
        delay = times - pulse.t_center
        values = pulse.amplitude * np.exp(
            -0.5 * (delay / pulse.sigma_t) ** 2) * np.cos(pulse.omega_p * delay)
    if values.ndim == 0:
        return float(values)
    return values


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled states of one integrated particle.

    Sample k is taken at ``t0 + k * dt`` where ``dt`` is the sampling
    interval (integration step times output stride).
    """
    t0: float
    dt: float
    x: np.ndarray
    v: np.ndarray
    params: OscillatorParams = field(default=None)

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        v = np.array(self.v, dtype=float)
        if x.ndim != 1 or x.shape != v.shape or len(x) == 0:
            raise ParameterError("x and v must be non-empty and of equal length",
                                 key='samples')
        if not self.dt > 0:
            raise ParameterError("must be > 0", key='dt')
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'v', v)

    def __len__(self):
        return len(self.x)

    @property
    def times(self):
        return self.t0 + self.dt * np.arange(len(self.x))

    @property
    def t_end(self):
        return self.t0 + self.dt * (len(self.x) - 1)

    def momentum(self):
        return self.params.mass * self.v

    def energy(self):
        return self.params.energy(self.x, self.v)

    def envelope(self):
        """Oscillation amplitude sqrt(x^2 + (v/w0)^2).
        """
        return np.hypot(self.x, self.v / self.params.omega0)

    def window_slice(self, t_start, t_end):
        """Index slice of the samples with t_start <= t <= t_end.
        """
        first = max(0, int(math.ceil((t_start - self.t0) / self.dt - 1e-9)))
        last = min(len(self.x) - 1, int(math.floor((t_end - self.t0) / self.dt + 1e-9)))
        if last < first:
            return slice(0, 0)
        return slice(first, last + 1)

    def rows(self, stride=1):
        times = self.times
        for k in range(0, len(self.x), stride):
            yield times[k], self.x[k], self.v[k]

    def write_csv(self, path_or_file, stride=1):
        write_csv(path_or_file, ('t', 'x', 'v'), self.rows(stride))


def rk4_step(jacobian, y, f0, fh, f1, dt):
    """One classic Runge-Kutta step of y' = J y + (0, f(t)).

    ``f0``, ``fh`` and ``f1`` are the forcings at the start, middle and
    end of the step.
    """
    y = np.asarray(y, dtype=float)

    def rate(state, force):
        derivative = jacobian @ state
        derivative[1] += force
        return derivative

    k1 = rate(y, f0)
    k2 = rate(y + 0.5 * dt * k1, fh)
    k3 = rate(y + 0.5 * dt * k2, fh)
    k4 = rate(y + dt * k3, f1)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_matrices(params, dt):
    """Return (M, b0, bh, b1) of one RK4 step, see the module docstring.
    """
    jacobian = params.jacobian()
    zero = np.zeros(2)
    M = np.column_stack([
        rk4_step(jacobian, (1.0, 0.0), 0.0, 0.0, 0.0, dt),
        rk4_step(jacobian, (0.0, 1.0), 0.0, 0.0, 0.0, dt),
    ])
    b0 = rk4_step(jacobian, zero, 1.0, 0.0, 0.0, dt)
    bh = rk4_step(jacobian, zero, 0.0, 1.0, 0.0, dt)
    b1 = rk4_step(jacobian, zero, 0.0, 0.0, 1.0, dt)
    return M, b0, bh, b1


def max_stable_step(params, field=None, pulse=None):
    """Largest step allowed for the fastest forcing component.
    """
    omega_max = params.omega0
    if field is not None and len(field):
        omega_max = max(omega_max, field.max_frequency)
    if pulse is not None and pulse.enabled:
        omega_max = max(omega_max, pulse.omega_p)
    return 2.0 * math.pi / (omega_max * STEPS_PER_PERIOD)


def _propagate(M, trace, det, y_start, g):
    """States y[1..K] of y[n+1] = M y[n] + g[n] from y[0] = y_start.

    The recurrence is rewritten per component as the second order filter
    y[n+2] - tr(M) y[n+1] + det(M) y[n] = g[n+1] + (M - tr(M) I) g[n]
    (Cayley-Hamilton) and evaluated with lfilter.
    """
    count = g.shape[1]
    states = np.empty((2, count))
    y_next = M @ y_start + g[:, 0]
    states[:, 0] = y_next
    if count > 1:
        denominator = np.array([1.0, -trace, det])
        drive = g[:, 1:] + (M - trace * np.eye(2)) @ g[:, :-1]
        for component in range(2):
            zi = lfiltic([1.0], denominator,
                         [y_next[component], y_start[component]])
            states[component, 1:], _ = lfilter(
                [1.0], denominator, drive[component], zi=zi)
    return states


def integrate_trajectory(params, field=None, pulse=None, x0=0.0, v0=0.0,
                         t_span=(0.0, 100.0), dt=0.02, stride=1):
    """Integrate the equation of motion with a fixed RK4 step.

    ``field`` is a `ModeTable` (or None for no vacuum field), ``pulse`` a
    `PulseSpec` (or None).  Every ``stride``-th state is kept.  Raises
    ParameterError for a step above `max_stable_step()` and
    DivergenceError when the state stops being finite.
    """
    t0, t1 = (float(value) for value in t_span)
    if not t1 > t0:
        raise ParameterError("empty time span (%g, %g)" % (t0, t1), key='t_span')
    dt = _number('dt', dt)
    limit = max_stable_step(params, field, pulse)
    if dt > limit:
        raise ParameterError("step %g exceeds the limit %g set by the fastest "
                             "forcing frequency" % (dt, limit), key='dt')
    stride = int(stride)
    if stride < 1:
        raise ParameterError("must be >= 1", key='stride')

    n_steps = int(math.floor((t1 - t0) / dt + 1e-9))
    M, b0, bh, b1 = step_matrices(params, dt)
    trace = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    coupling = params.charge / params.mass
    has_pulse = pulse is not None and pulse.enabled
    phasors = None
    if field is not None and len(field):
        phasors = PhasorField(field, t0, 0.5 * dt)

    kept = [np.array([[float(x0)], [float(v0)]])]
    y = np.array([float(x0), float(v0)])
    logger.debug("integrating %d steps of %g (stride %d)", n_steps, dt, stride)
    with np.errstate(over='ignore', invalid='ignore'):
        for first in range(0, n_steps, SEGMENT_STEPS):
            count = min(SEGMENT_STEPS, n_steps - first)
            # forcing on the half-step grid t0 + j dt/2, j = 2 first .. 2 (first + count)
            half_steps = np.arange(2 * first, 2 * (first + count) + 1)
            force = np.zeros(len(half_steps))
            if phasors is not None:
                force += phasors.samples(2 * first, len(half_steps))
            if has_pulse:
                force += pulse_field_at(pulse, t0 + (0.5 * dt) * half_steps)
            force *= coupling
            g = (np.outer(b0, force[0:-1:2]) + np.outer(bh, force[1::2])
                 + np.outer(b1, force[2::2]))
            states = _propagate(M, trace, det, y, g)
            finite = np.isfinite(states).all(axis=0)
            if not finite.all():
                raise DivergenceError(first + 1 + int(np.argmin(finite)))
            y = states[:, -1]
            # global step index of column k is first + 1 + k
            offset = (-(first + 1)) % stride
            kept.append(states[:, offset::stride])
    samples = np.concatenate(kept, axis=1)
    return Trajectory(t0, dt * stride, samples[0], samples[1], params)
