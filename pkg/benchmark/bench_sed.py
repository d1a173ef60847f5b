"""
Timing runs of the numerical hot paths.

Usage: bench_sed.py [-i] [-l] [benchmark names]

    -i   run against the in-place build in src/
    -l   use the full-size acceptance workloads
"""

import sys
import time

LARGE = False


def initArgs(argv):
    global LARGE
    try:
        argv.remove('-i')
        # run benchmark 'inplace'
        sys.path.insert(0, 'src')
    except ValueError:
        pass
    try:
        argv.remove('-l')
        LARGE = True
    except ValueError:
        pass


class SedBenchMark:
    def __init__(self):
        import numpy as np
        from sedkit import dynamics, ensemble, vacuum_field, walker, whichpath
        self.np = np
        self.dynamics = dynamics
        self.ensemble = ensemble
        self.vacuum_field = vacuum_field
        self.walker = walker
        self.whichpath = whichpath

    def bench_energy_balance(self):
        # one member of the ground state energy run
        t_measure = 2e5 if LARGE else 2e4
        ens = self.ensemble.EnsembleSpec(n_members=1, t_transient=1e4, t_measure=t_measure)
        spec = self.vacuum_field.FieldSpec(gamma_rad=1e-3)
        params = self.dynamics.OscillatorParams(gamma_rad=1e-3)
        trajs = self.ensemble.run_ensemble(params, spec, None, ens, threads=1)
        return self.ensemble.mean_energy(trajs, ens.window)

    def bench_field_synthesis(self):
        spec = self.vacuum_field.FieldSpec(gamma_rad=1e-3, n_modes=300)
        table = self.vacuum_field.synthesize_modes(spec)
        field = self.vacuum_field.PhasorField(table, 0.0, 0.01)
        return field.samples(0, 10**6 if LARGE else 10**5)

    def bench_fringe_quadrature(self):
        xi = self.np.linspace(-10, 10, 41)
        points = 20 if LARGE else 5
        for a in self.np.linspace(0.1, 5, points):
            for k0 in self.np.linspace(0.1, 5, points):
                self.whichpath.fringe_quadrature(self.whichpath.WhichPathModel(a, k0), xi)

    def bench_walker_round_trip(self):
        geom = self.walker.SlitGeometry()
        law = self.walker.single_slit_law(geom)
        trajs = self.walker.synthesize_walkers(geom, law, 10**5 if LARGE else 10**4, seed=1)
        _, angles = self.walker.exit_angles(trajs, geom)
        return self.walker.angular_histogram(angles, symmetrize=True)


def runBenchmarks(bench, names):
    for name in names:
        function = getattr(bench, name)
        start = time.perf_counter()
        function()
        elapsed = time.perf_counter() - start
        print("%-30s %10.3f sec" % (name[len('bench_'):], elapsed))


def main(benchmark_class):
    initArgs(sys.argv)
    bench = benchmark_class()
    import sedkit
    print("Using sedkit %s" % sedkit.__version__)
    print("Running benchmarks in Python %s" % (sys.version_info,))
    print('')

    selected = set(sys.argv[1:])
    names = sorted(name for name in dir(bench) if name.startswith('bench_')
                   and (not selected or name[len('bench_'):] in selected))
    runBenchmarks(bench, names)


if __name__ == '__main__':
    main(SedBenchMark)
