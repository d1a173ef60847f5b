"""
Ensembles of SED oscillators and their statistics.

Members run independently, each with its own vacuum field drawn from a
seed derived from ``(base_seed, member index)``.  Results are always
returned and reduced in member order, so the outcome does not depend on
the number of worker threads.
"""

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as _stats

from .dynamics import OscillatorParams, PulseSpec, integrate_trajectory
from .errors import DivergenceError, ParameterError, ParameterWarning
from .vacuum_field import coherence_time, synthesize_modes

__all__ = ['EnsembleSpec', 'DistributionStats', 'ExcitationSpectrum',
           'member_seed', 'member_initial_state', 'run_ensemble',
           'position_distribution',
           'momentum_distribution', 'uncertainty_product', 'mean_energy',
           'excitation_spectrum', 'ks_distance', 'ks_critical_value',
           'effective_sample_count', 'gaussian_cdf', 'arcsine_cdf',
           'ground_state_sigmas', 'bimodality_ratio', 'is_bimodal']

logger = logging.getLogger(__name__)

MIN_HISTOGRAM_BINS = 10
MIN_KS_SAMPLES = 100
BIMODALITY_THRESHOLD = 0.8
MIN_WINDOW_PERIODS = 20
# SeedSequence stream of the initial phases, apart from the field seeds
_PHASE_STREAM = 1


@dataclass(frozen=True)
class EnsembleSpec:
    """How many members to run, for how long, and how to sample them.

    ``dt`` is the integration step, ``sample_stride`` the number of steps
    between kept samples.  ``x0``/``v0`` sets the initial amplitude; with
    ``random_phase`` every member starts at that amplitude with its own
    oscillation phase (see member_initial_state).
    """
    n_members: int = 1
    t_transient: float = 1e4
    t_measure: float = 2e5
    sample_stride: int = 5
    base_seed: int = 0
    dt: float = 0.02
    x0: float = 0.0
    v0: float = 0.0
    random_phase: bool = True

    def __post_init__(self):
        for name in ('n_members', 'sample_stride'):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise ParameterError("must be an integer >= 1, got %r" % (value,), key=name)
            object.__setattr__(self, name, int(value))
        if isinstance(self.base_seed, bool) or int(self.base_seed) != self.base_seed \
                or self.base_seed < 0:
            raise ParameterError("must be an unsigned integer", key='base_seed')
        object.__setattr__(self, 'base_seed', int(self.base_seed))
        object.__setattr__(self, 'random_phase', bool(self.random_phase))
        if not (math.isfinite(self.t_transient) and self.t_transient >= 0):
            raise ParameterError("must be >= 0", key='t_transient')
        if not (math.isfinite(self.t_measure) and self.t_measure > 0):
            raise ParameterError("must be > 0", key='t_measure')
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ParameterError("must be > 0", key='dt')

    @property
    def t_end(self):
        return self.t_transient + self.t_measure

    @property
    def window(self):
        return self.t_transient, self.t_end

    def seeds(self):
        return [member_seed(self.base_seed, index) for index in range(self.n_members)]


def member_seed(base_seed, index):
    """Seed of ensemble member ``index``, derived with numpy's SeedSequence.
    """
    sequence = np.random.SeedSequence([int(base_seed), int(index)])
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def member_initial_state(ens, index, omega0):
    """Initial (x, v) of member ``index``.

    The member keeps the energy of ``(ens.x0, ens.v0)`` and has its
    oscillation phase advanced by a uniform draw on [0, 2 pi) from its own
    SeedSequence stream.  The common state is returned unchanged when
    ``random_phase`` is off or the state is at rest or not finite.
    """
    x0, v0 = float(ens.x0), float(ens.v0)
    amplitude = math.hypot(x0, v0 / omega0)
    if not ens.random_phase or amplitude == 0.0 or not math.isfinite(amplitude):
        return x0, v0
    sequence = np.random.SeedSequence([ens.base_seed, int(index), _PHASE_STREAM])
    shift = np.random.default_rng(sequence).uniform(0.0, 2.0 * math.pi)
    phase = math.atan2(-v0 / omega0, x0) + shift
    return amplitude * math.cos(phase), -amplitude * omega0 * math.sin(phase)


def run_ensemble(params, field_spec, pulse, ens, threads=None):
    """Integrate all members of ``ens`` and return their trajectories.

    ``field_spec`` may be None to run without a vacuum field; otherwise
    member i uses ``field_spec`` with its seed replaced by
    ``member_seed(ens.base_seed, i)``.  ``threads`` caps the number of
    worker threads (None lets the executor decide).
    """
    if params is None:
        params = OscillatorParams.from_field_spec(field_spec)
    if params.linewidth > 0 and ens.t_transient < 5.0 / params.linewidth:
        warnings.warn("transient %g is shorter than 5 relaxation times (%g)" % (
            ens.t_transient, 5.0 / params.linewidth), ParameterWarning, stacklevel=2)

    def run_member(index):
        table = None
        if field_spec is not None:
            table = synthesize_modes(field_spec.replace(
                seed=member_seed(ens.base_seed, index)))
        try:
            x0, v0 = member_initial_state(ens, index, params.omega0)
            trajectory = integrate_trajectory(
                params, table, pulse, x0, v0,
                (0.0, ens.t_end), ens.dt, ens.sample_stride)
        except DivergenceError as exc:
            raise exc.for_member(index) from None
        logger.debug("member %d done (%d samples)", index, len(trajectory))
        return trajectory

    indices = range(ens.n_members)
    if threads == 1 or ens.n_members == 1:
        return [run_member(index) for index in indices]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        # map() yields in submission order regardless of completion order
        return list(executor.map(run_member, indices))


@dataclass(frozen=True, eq=False)
class DistributionStats:
    """Pooled histogram of one quantity plus the moments of the window.

    ``quantity`` is 'x' or 'p'; ``mean``, ``variance`` and ``sigma`` refer
    to that quantity, while ``sigma_x``, ``sigma_p``, ``uncertainty_product``
    and ``mean_energy`` summarise the same pooled samples.
    """
    quantity: str
    edges: np.ndarray
    densities: np.ndarray
    mean: float
    variance: float
    sigma_x: float
    sigma_p: float
    mean_energy: float
    n_samples: int
    window: tuple = field(default=None)

    @property
    def sigma(self):
        return self.sigma_x if self.quantity == 'x' else self.sigma_p

    @property
    def uncertainty_product(self):
        return self.sigma_x * self.sigma_p

    @property
    def centers(self):
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    @property
    def widths(self):
        return np.diff(self.edges)

    def rows(self):
        for left, right, density in zip(self.edges[:-1], self.edges[1:], self.densities):
            yield left, right, density

    def summary(self):
        return {
            'quantity': self.quantity,
            'mean': self.mean,
            'variance': self.variance,
            'sigma_x': self.sigma_x,
            'sigma_p': self.sigma_p,
            'product': self.uncertainty_product,
            'mean_energy': self.mean_energy,
            'n_samples': self.n_samples,
        }


def _pool(trajs, window):
    if not trajs:
        raise ParameterError("no trajectories", key='trajs')
    t_start, t_end = (float(value) for value in window)
    if not t_end >= t_start:
        raise ParameterError("window end before start", key='window')
    xs, vs = [], []
    for traj in trajs:
        if t_start < traj.t0 - 1e-9 * traj.dt or t_end > traj.t_end + 1e-9 * traj.dt:
            raise ParameterError("window (%g, %g) outside the sampled span (%g, %g)" % (
                t_start, t_end, traj.t0, traj.t_end), key='window')
        selection = traj.window_slice(t_start, t_end)
        xs.append(traj.x[selection])
        vs.append(traj.v[selection])
    x = np.concatenate(xs)
    v = np.concatenate(vs)
    if len(x) == 0:
        raise ParameterError("no samples inside the window", key='window')
    return x, v, trajs[0].params


def _distribution(quantity, trajs, window, bins, span):
    bins = int(bins)
    if bins < MIN_HISTOGRAM_BINS:
        raise ParameterError("need at least %d bins" % MIN_HISTOGRAM_BINS, key='bins')
    x, v, params = _pool(trajs, window)
    p = params.mass * v
    values = x if quantity == 'x' else p
    if span is None:
        low, high = float(values.min()), float(values.max())
        if low == high:
            low, high = low - 0.5, high + 0.5
        span = (low, high)
    densities, edges = np.histogram(values, bins=bins, range=span, density=True)
    if not np.all(np.isfinite(densities)):
        raise ParameterError("no samples inside the histogram range", key='span')
    return DistributionStats(
        quantity=quantity,
        edges=edges,
        densities=densities,
        mean=float(values.mean()),
        variance=float(values.var()),
        sigma_x=float(x.std()),
        sigma_p=float(p.std()),
        mean_energy=float(params.energy(x, v).mean()),
        n_samples=len(values),
        window=(float(window[0]), float(window[1])),
    )


def position_distribution(trajs, window, bins=101, span=None):
    """Pooled, normalised histogram of x over all members' samples in ``window``.

    ``span`` fixes the histogram range; the default is the sample range.
    """
    return _distribution('x', trajs, window, bins, span)


def momentum_distribution(trajs, window, bins=101, span=None):
    """Like `position_distribution()` for p = m v.
    """
    return _distribution('p', trajs, window, bins, span)


def uncertainty_product(stats_x, stats_p):
    if stats_x.window != stats_p.window:
        raise ParameterError("statistics come from different windows", key='window')
    return stats_x.sigma_x * stats_p.sigma_p


def mean_energy(trajs, window):
    """Time and ensemble average of m v^2/2 + m w0^2 x^2/2.
    """
    x, v, params = _pool(trajs, window)
    return float(params.energy(x, v).mean())


def gaussian_cdf(sigma, mean=0.0):
    return _stats.norm(loc=mean, scale=sigma).cdf


def arcsine_cdf(amplitude):
    """Cumulative distribution of A cos(phase) for a uniform phase.
    """
    def cdf(x):
        ratio = np.clip(np.asarray(x, dtype=float) / amplitude, -1.0, 1.0)
        return 0.5 + np.arcsin(ratio) / math.pi
    return cdf


def ground_state_sigmas(params, hbar):
    """(sigma_x, sigma_p) of the oscillator ground state.
    """
    sigma_x = math.sqrt(hbar / (2.0 * params.mass * params.omega0))
    sigma_p = math.sqrt(0.5 * hbar * params.mass * params.omega0)
    return sigma_x, sigma_p


def ks_distance(samples, cdf):
    """Kolmogorov-Smirnov sup-distance of the samples against ``cdf``.
    """
    samples = np.asarray(samples, dtype=float).ravel()
    if len(samples) < MIN_KS_SAMPLES:
        raise ParameterError("need at least %d samples, got %d" % (
            MIN_KS_SAMPLES, len(samples)), key='samples')
    return float(_stats.kstest(samples, cdf).statistic)


def effective_sample_count(window_length, tau, n_members=1):
    """Number of effectively independent samples, one per coherence time.
    """
    return n_members * window_length / tau


def ks_critical_value(n_eff, alpha=0.05):
    """Asymptotic KS acceptance threshold, about 1.36/sqrt(n) at 5%.
    """
    return float(_stats.kstwobign.isf(alpha)) / math.sqrt(n_eff)


def bimodality_ratio(stats):
    """Central-bin density over the mean of the two outer-third maxima.

    Values below one mean a deficit in the middle, as for the classical
    turning-point distribution; a Gaussian gives values above one.
    """
    densities = stats.densities
    n = len(densities)
    third = max(1, n // 3)
    center = int(np.searchsorted(stats.edges, stats.mean, side='right')) - 1
    center = min(max(center, 0), n - 1)
    outer = 0.5 * (densities[:third].max() + densities[n - third:].max())
    if outer == 0:
        return math.inf
    return float(densities[center] / outer)


def is_bimodal(stats, threshold=BIMODALITY_THRESHOLD):
    return bimodality_ratio(stats) < threshold


@dataclass(frozen=True, eq=False)
class ExcitationSpectrum:
    """Mean post-pulse energy against pulse carrier frequency.

    ``stderr`` is the standard error of each point over the members,
    ``baseline`` the same measurement with the pulse switched off.
    """
    carriers: np.ndarray
    mean_energy: np.ndarray
    stderr: np.ndarray
    baseline: float
    baseline_stderr: float
    window: tuple
    ensemble: EnsembleSpec
    pulse: PulseSpec

    def peak_carrier(self):
        return float(self.carriers[int(np.argmax(self.mean_energy))])

    def rows(self):
        for carrier, energy, error in zip(self.carriers, self.mean_energy, self.stderr):
            yield carrier, energy, error


def _member_energies(trajs, window):
    return np.array([mean_energy([traj], window) for traj in trajs])


def _mean_and_error(values):
    if len(values) < 2:
        return float(values.mean()), 0.0
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(len(values)))


def excitation_spectrum(params, field_spec, pulse_template, grid, ens,
                        window_length=None, threads=None):
    """Sweep the pulse carrier over ``grid`` and measure the energy left behind.

    Energies are averaged over a window starting 5 sigma_t after the pulse
    centre whose length is the larger of ``window_length`` (default
    ``ens.t_measure``) and 20 oscillator periods.  The baseline repeats the
    measurement with the pulse disabled and the same member seeds.
    """
    if params is None:
        params = OscillatorParams.from_field_spec(field_spec)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise ParameterError("grid must be a non-empty list of frequencies", key='grid')
    if len(grid) > 1 and not np.all(np.diff(grid) > 0):
        raise ParameterError("grid must be strictly ascending", key='grid')
    if not pulse_template.enabled:
        raise ParameterError("the pulse must be enabled", key='pulse')
    if grid[0] > 0.5 * params.omega0 or grid[-1] < 3.5 * params.omega0:
        warnings.warn("carrier grid [%g, %g] does not span [0.5, 3.5] omega0" % (
            grid[0], grid[-1]), ParameterWarning, stacklevel=2)
    if pulse_template.t_center - 5.0 * pulse_template.sigma_t < ens.t_transient:
        warnings.warn("pulse starts before the end of the transient",
                      ParameterWarning, stacklevel=2)

    length = ens.t_measure if window_length is None else float(window_length)
    length = max(length, MIN_WINDOW_PERIODS * params.period)
    start = pulse_template.end_time
    window = (start, start + length)
    run_spec = EnsembleSpec(
        n_members=ens.n_members, t_transient=max(0.0, start),
        t_measure=length, sample_stride=ens.sample_stride,
        base_seed=ens.base_seed, dt=ens.dt, x0=ens.x0, v0=ens.v0,
        random_phase=ens.random_phase)

    with warnings.catch_warnings():
        # the transient has been checked against the pulse above
        warnings.simplefilter('ignore', ParameterWarning)
        baseline_trajs = run_ensemble(params, field_spec, pulse_template.disabled(),
                                      run_spec, threads)
        baseline, baseline_error = _mean_and_error(
            _member_energies(baseline_trajs, window))
        del baseline_trajs

        energies = np.empty(len(grid))
        errors = np.empty(len(grid))
        for index, carrier in enumerate(grid):
            trajs = run_ensemble(params, field_spec, pulse_template.with_carrier(carrier),
                                 run_spec, threads)
            energies[index], errors[index] = _mean_and_error(
                _member_energies(trajs, window))
            logger.info("carrier %g: <E> = %g +- %g", carrier, energies[index], errors[index])
    return ExcitationSpectrum(
        carriers=grid, mean_energy=energies, stderr=errors,
        baseline=baseline, baseline_stderr=baseline_error, window=window,
        ensemble=ens, pulse=pulse_template)
