"""
Command line front end.

    sedkit sed-run      --seed 1 --out run1
    sedkit sed-spectrum --no-vacuum --config spectrum.ini
    sedkit whichpath    --a 2 --k0 0.5 --format json
    sedkit walker       --trajectories walkers.csv --symmetrize

Exit status: 0 on success, 2 for configuration, parameter and input
errors, 3 for numerical failures.  Every run writes ``summary.json``
whose ``provenance`` block holds the resolved configuration, the seeds
and the package version.
"""

import argparse
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from ._io import ensure_dir, write_csv, write_json
from .config import RunConfig, FORMATS
from .dynamics import OscillatorParams, PulseSpec
from .ensemble import (EnsembleSpec, run_ensemble, position_distribution,
                       momentum_distribution, ks_distance, ks_critical_value,
                       effective_sample_count, gaussian_cdf, arcsine_cdf,
                       ground_state_sigmas, bimodality_ratio, excitation_spectrum,
                       MIN_KS_SAMPLES)
from .errors import (ConfigError, DivergenceError, ParameterError, QuadratureError,
                     TrajectoryParseError)
from .vacuum_field import FieldSpec, coherence_time
from . import walker as _walker
from . import whichpath as _whichpath

__all__ = ['main', 'build_parser', 'cmd_sed_run', 'cmd_sed_spectrum',
           'cmd_whichpath', 'cmd_walker']

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# half width of the sed-run histograms in reference standard deviations
HISTOGRAM_SIGMAS = 5.0


class Output:
    """Collects the tables of one run and writes them in the selected format.

    With ``csv`` every table becomes ``<name>.csv`` next to ``summary.json``,
    with ``json`` the tables are embedded in ``summary.json``.
    """
    def __init__(self, directory, fmt):
        self.directory = directory
        self.format = fmt
        self.tables = {}

    def table(self, name, header, rows):
        rows = list(rows)
        if self.format == 'csv':
            write_csv(os.path.join(ensure_dir(self.directory), name + '.csv'), header, rows)
        else:
            self.tables[name] = {'header': list(header), 'rows': rows}

    def finish(self, config, summary, seeds):
        data = {
            'summary': summary,
            'provenance': {
                'command': config.command,
                'version': __version__,
                'config': config.as_dict(),
                'seeds': list(seeds),
            },
        }
        if self.format == 'json':
            data['tables'] = self.tables
        write_json(os.path.join(ensure_dir(self.directory), 'summary.json'), data)


def _oscillator(config):
    return OscillatorParams(mass=config['mass'], charge=config['charge'],
                            omega0=config['omega0'], gamma_rad=config['gamma_rad'])


def _field_spec(config):
    if not config['vacuum']:
        return None
    return FieldSpec(omega0=config['omega0'], gamma_rad=config['gamma_rad'],
                     mass=config['mass'], charge=config['charge'], hbar=config['hbar'],
                     bandwidth=config['bandwidth'], n_modes=config['n_modes'],
                     seed=config['seed'])


def _ensemble(config):
    return EnsembleSpec(n_members=config['n_members'], t_transient=config['t_transient'],
                        t_measure=config['t_measure'], sample_stride=config['sample_stride'],
                        base_seed=config['seed'], dt=config['dt'],
                        x0=config['x0'], v0=config['v0'],
                        random_phase=config['random_phase'])


def _pooled(trajs, window, attribute):
    parts = []
    for traj in trajs:
        values = traj.x if attribute == 'x' else traj.momentum()
        parts.append(values[traj.window_slice(*window)])
    return np.concatenate(parts)


def _histogram_rows(stats):
    return list(stats.rows())


def _histogram_spans(params, field_spec, ens):
    """Histogram ranges of +-5 sigma of the reference distribution, or None.

    The reference is the ground state with the field and the classical
    orbit of the initial amplitude without it.
    """
    if field_spec is not None:
        sigma_x, sigma_p = ground_state_sigmas(params, field_spec.hbar)
    else:
        amplitude = math.hypot(ens.x0, ens.v0 / params.omega0)
        if not (amplitude > 0 and math.isfinite(amplitude)):
            return None, None
        sigma_x = amplitude / math.sqrt(2.0)
        sigma_p = params.mass * params.omega0 * sigma_x
    return ((-HISTOGRAM_SIGMAS * sigma_x, HISTOGRAM_SIGMAS * sigma_x),
            (-HISTOGRAM_SIGMAS * sigma_p, HISTOGRAM_SIGMAS * sigma_p))


def cmd_sed_run(config, out, threads=None):
    """Run an oscillator ensemble and write its position and momentum statistics."""
    params = _oscillator(config)
    field_spec = _field_spec(config)
    ens = _ensemble(config)
    trajs = run_ensemble(params, field_spec, None, ens, threads)
    window = ens.window
    bins = config['bins']
    span_x, span_p = _histogram_spans(params, field_spec, ens)
    stats_x = position_distribution(trajs, window, bins, span_x)
    stats_p = momentum_distribution(trajs, window, bins, span_p)

    x = _pooled(trajs, window, 'x')
    p = _pooled(trajs, window, 'p')
    ks = {}
    if len(x) >= MIN_KS_SAMPLES:
        if field_spec is not None:
            sigma_x, sigma_p = ground_state_sigmas(params, field_spec.hbar)
            n_eff = effective_sample_count(ens.t_measure, coherence_time(field_spec),
                                           ens.n_members)
            ks = {
                'reference': 'gaussian',
                'position': ks_distance(x, gaussian_cdf(sigma_x)),
                'momentum': ks_distance(p, gaussian_cdf(sigma_p)),
                'critical_value': ks_critical_value(n_eff),
                'effective_samples': n_eff,
            }
        else:
            amplitude = math.hypot(ens.x0, ens.v0 / params.omega0)
            if amplitude > 0:
                ks = {
                    'reference': 'arcsine',
                    'amplitude': amplitude,
                    'position': ks_distance(x, arcsine_cdf(amplitude)),
                }
    else:
        logger.warning("only %d samples in the window, skipping KS statistics", len(x))

    output = Output(out, config['format'])
    header = ('bin_left', 'bin_right', 'density')
    output.table('position_histogram', header, _histogram_rows(stats_x))
    output.table('momentum_histogram', header, _histogram_rows(stats_p))
    if config['write_trajectories']:
        stride = config['trajectory_stride']
        rows = [(member,) + row for member, traj in enumerate(trajs)
                for row in traj.rows(stride)]
        output.table('trajectories', ('member', 't', 'x', 'v'), rows)

    summary = {
        'sigma_x': stats_x.sigma_x,
        'sigma_p': stats_x.sigma_p,
        'product': stats_x.uncertainty_product,
        'mean_energy': stats_x.mean_energy,
        'n_samples': stats_x.n_samples,
        'window': list(window),
        'bimodality_ratio': bimodality_ratio(stats_x),
        'ks': ks,
        'vacuum': field_spec is not None,
    }
    seeds = ens.seeds() if field_spec is not None else []
    output.finish(config, summary, seeds)
    logger.info("sigma_x %.6g  sigma_p %.6g  product %.6g  <E> %.6g",
                stats_x.sigma_x, stats_x.sigma_p, stats_x.uncertainty_product,
                stats_x.mean_energy)
    return EXIT_OK


def cmd_sed_spectrum(config, out, threads=None):
    """Sweep the pulse carrier and write the post-pulse energies."""
    params = _oscillator(config)
    field_spec = _field_spec(config)
    ens = _ensemble(config)
    grid = np.array(config['grid'])
    pulse = PulseSpec(amplitude=config['amplitude'], omega_p=float(grid[0]),
                      t_center=config['t_center'], sigma_t=config['sigma_t'])
    spectrum = excitation_spectrum(params, field_spec, pulse, grid, ens,
                                   config['window_length'], threads)

    output = Output(out, config['format'])
    output.table('spectrum', ('omega_p', 'mean_energy', 'stderr'), spectrum.rows())
    output.table('baseline', ('mean_energy', 'stderr'),
                 [(spectrum.baseline, spectrum.baseline_stderr)])

    combined = np.hypot(spectrum.stderr, spectrum.baseline_stderr)
    with np.errstate(divide='ignore', invalid='ignore'):
        deviation = np.where(combined > 0,
                             np.abs(spectrum.mean_energy - spectrum.baseline) / combined,
                             np.where(spectrum.mean_energy == spectrum.baseline, 0.0, np.inf))
    summary = {
        'baseline': spectrum.baseline,
        'baseline_stderr': spectrum.baseline_stderr,
        'peak_carrier': spectrum.peak_carrier(),
        'max_deviation_sigmas': float(deviation.max()),
        'window': list(spectrum.window),
        'n_points': len(grid),
        'vacuum': field_spec is not None,
    }
    seeds = ens.seeds() if field_spec is not None else []
    output.finish(config, summary, seeds)
    logger.info("peak at omega_p = %g, baseline %.6g", summary['peak_carrier'],
                spectrum.baseline)
    return EXIT_OK


def cmd_whichpath(config, out, threads=None):
    """Write the fringe pattern, slit momentum density and which-path table."""
    model = _whichpath.WhichPathModel(a=config['a'], k0=config['k0'])
    xi = np.array(config['xi'])
    kappa = np.array(config['kappa'])
    closed = np.atleast_1d(_whichpath.fringe_pattern(model, xi))

    output = Output(out, config['format'])
    summary = {
        'contrast': _whichpath.fringe_contrast(model),
        'distinguishability': _whichpath.path_distinguishability(model),
    }
    if config['quadrature']:
        numeric = np.atleast_1d(_whichpath.fringe_quadrature(model, xi))
        summary['quadrature_max_error'] = float(np.max(np.abs(closed - numeric)))
        output.table('fringe', ('xi', 'closed_form', 'quadrature'),
                     zip(xi, closed, numeric))
    else:
        output.table('fringe', ('xi', 'closed_form'), zip(xi, closed))

    p_a, p_b = _whichpath.slit_probabilities(model, kappa)
    p_a, p_b = np.atleast_1d(p_a), np.atleast_1d(p_b)
    if model.a > 0:
        density = np.atleast_1d(_whichpath.slit_momentum_density(model, kappa))
        output.table('slit_momentum', ('kappa', 'density', 'p_a', 'p_b'),
                     zip(kappa, density, p_a, p_b))
    else:
        # a point-like slit has no defined recoil density
        output.table('slit_momentum', ('kappa', 'p_a', 'p_b'), zip(kappa, p_a, p_b))
    output.finish(config, summary, [])
    logger.info("contrast %.6g", summary['contrast'])
    return EXIT_OK


def _law(config, geom):
    name = config['law']
    if name == 'delta':
        return _walker.DeltaLaw(config['angle'])
    if name == 'uniform':
        return _walker.UniformLaw()
    if name == 'single-slit':
        return _walker.single_slit_law(geom)
    raise ConfigError("must be delta, uniform or single-slit, got %r" % name, key='law')


def _central_bin_mass(distribution):
    index = int(np.searchsorted(distribution.edges, 0.0, side='right')) - 1
    index = min(max(index, 0), len(distribution.densities) - 1)
    return float(distribution.masses()[index])


def cmd_walker(config, out, threads=None):
    """Exit-angle distributions of recorded or synthesized walker trajectories."""
    geom = _walker.SlitGeometry(
        kind=config['kind'], centers=config['centers'], width=config['width'],
        barrier_x=config['barrier_x'], faraday_wavelength=config['faraday_wavelength'],
        axis_angle=config['axis_angle'], eval_radius=config['eval_radius'],
        drive_frequency=config['drive_frequency'], viscosity=config['viscosity'],
        depth=config['depth'])
    seeds = []
    if config['trajectories']:
        trajs = _walker.load_trajectories(config['trajectories'])
    else:
        law = _law(config, geom)
        trajs = _walker.synthesize_walkers(geom, law, config['n'], config['noise'],
                                           config['seed'])
        seeds = [config['seed']]
    n_loaded = len(trajs)
    if config['max_divergence'] is not None:
        trajs = _walker.select_collimated(trajs, geom, config['max_divergence'])
        logger.info("%d of %d trajectories pass the divergence cut",
                    len(trajs), n_loaded)

    ids, angles = _walker.exit_angles(trajs, geom)
    raw = _walker.angular_histogram(angles, config['bins'], False, geom.eval_radius)
    output = Output(out, config['format'])
    header = ('bin_left_rad', 'bin_right_rad', 'density')
    output.table('angles_raw', header, raw.rows())
    distribution = raw
    if config['symmetrize']:
        distribution = _walker.angular_histogram(angles, config['bins'], True,
                                                 geom.eval_radius)
        output.table('angles_symmetrized', header, distribution.rows())
    output.table('exit_angles', ('id', 'angle_rad'), zip(ids, angles))
    if config['fit']:
        theta = np.linspace(-_walker.HALF_PI, _walker.HALF_PI, config['fit_points'])
        output.table('fit', ('theta_rad', 'value'),
                     zip(theta, _walker.single_slit_fit(theta, geom)))

    offsets = _walker.entry_offsets(trajs, geom)
    summary = {
        'n_trajectories': n_loaded,
        'n_selected': len(trajs),
        'n_angles': len(angles),
        'predicted_peak_angle': _walker.predicted_peak_angle(geom),
        'peak_angles': list(distribution.peak_angles()),
        'central_bin_mass': _central_bin_mass(distribution),
        'symmetrized': distribution.symmetrized,
        'geometry': geom.summary(),
    }
    if len(offsets) >= MIN_KS_SAMPLES:
        half = 0.5 * geom.width
        flat = _walker.UniformLaw(-half, half)
        summary['entry_flatness_ks'] = ks_distance(offsets, flat.cdf)
    output.finish(config, summary, seeds)
    logger.info("%d exit angles, predicted peak at %.4g rad", len(angles),
                summary['predicted_peak_angle'])
    return EXIT_OK


COMMANDS = {
    'sed-run': cmd_sed_run,
    'sed-spectrum': cmd_sed_spectrum,
    'whichpath': cmd_whichpath,
    'walker': cmd_walker,
}

_HELP = {
    'sed-run': "SED oscillator ensemble statistics",
    'sed-spectrum': "pulse excitation spectrum",
    'whichpath': "recoiling-slit fringe and which-path analytics",
    'walker': "walker exit-angle distributions",
}


def _dest(key):
    return 'opt_' + key


def build_parser():
    parser = argparse.ArgumentParser(
        prog='sedkit', description="Stochastic electrodynamics and which-path toolkit.")
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True
    for command in COMMANDS:
        sub = commands.add_parser(command, help=_HELP[command])
        sub.add_argument('--config', metavar='PATH', help="INI style configuration file")
        sub.add_argument('--out', metavar='DIR', default='sedkit-out',
                         help="output directory (default: %(default)s)")
        sub.add_argument('--threads', metavar='N', type=int, default=None,
                         help="maximum number of worker threads")
        sub.add_argument('-v', '--verbose', action='count', default=0,
                         help="log progress (twice for debug output)")
        for option in RunConfig.options(command):
            flag = '--' + option.key.replace('_', '-')
            text = "%s (default: %s)" % (option.help, option.default)
            if option.type == 'bool':
                sub.add_argument(flag, dest=_dest(option.key), default=None,
                                 action=argparse.BooleanOptionalAction, help=text)
            elif option.key == 'format':
                sub.add_argument(flag, dest=_dest(option.key), default=None,
                                 choices=FORMATS, help=text)
            else:
                sub.add_argument(flag, dest=_dest(option.key), default=None,
                                 metavar=option.key.upper(), help=text)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(asctime)-15s  %(message)s")
    logging.captureWarnings(True)

    overrides = {option.key: getattr(args, _dest(option.key))
                 for option in RunConfig.options(args.command)}
    if args.threads is not None and args.threads < 1:
        logger.error("threads: must be >= 1")
        return EXIT_CONFIG
    try:
        config = RunConfig.load(args.command, args.config, overrides)
        return COMMANDS[args.command](config, args.out, args.threads)
    except (ParameterError, TrajectoryParseError) as exc:
        logger.error("%s: %s", args.command, exc)
        return EXIT_CONFIG
    except (DivergenceError, QuadratureError) as exc:
        logger.error("%s: %s", args.command, exc)
        return EXIT_NUMERIC
    except OSError as exc:
        logger.error("%s: %s", args.command, exc)
        return EXIT_CONFIG


if __name__ == '__main__':
    sys.exit(main())
