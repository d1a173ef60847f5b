# cython: language_level=3

"""
Angular analysis of bouncing-droplet ("walker") slit trajectories.

Trajectories are timed 2-D positions (seconds, millimetres).  The exit
angle of a trajectory is read where it first leaves the circle of radius
two slit widths around the slit centre after passing the barrier plane.
Angles are binned into normalised, optionally symmetrised distributions
and compared with the single-slit prediction theta ~ lambda_F / w.

The slit axis points along +x for ``axis_angle = 0``; a geometry and its
trajectories can be rotated together, in which case every exit angle
shifts by the rotation angle.
"""

import csv
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import ParameterError, TrajectoryParseError

__all__ = ['WalkerTrajectory', 'SlitGeometry', 'AngularDistribution',
           'DeltaLaw', 'UniformLaw', 'TabulatedLaw', 'single_slit_law',
           'load_trajectories', 'exit_angle', 'exit_angles', 'angular_histogram',
           'predicted_peak_angle', 'single_slit_fit', 'synthesize_walkers',
           'initial_heading', 'select_collimated', 'entry_offsets']

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi
REQUIRED_COLUMNS = ('id', 't', 'x', 'y')


@dataclass(frozen=True, eq=False)
class WalkerTrajectory:
    id: int
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        arrays = [np.array(getattr(self, name), dtype=float) for name in ('t', 'x', 'y')]
        t, x, y = arrays
        if t.ndim != 1 or not (t.shape == x.shape == y.shape):
            raise ParameterError("t, x, y must be one-dimensional and of equal length",
                                 key='samples')
        if len(t) < 2:
            raise ParameterError("trajectory %r has fewer than 2 samples" % (self.id,),
                                 key='samples')
        if not all(np.isfinite(array).all() for array in arrays):
            raise ParameterError("trajectory %r has non-finite values" % (self.id,),
                                 key='samples')
        if not np.all(np.diff(t) > 0):
            raise ParameterError("trajectory %r: times must increase strictly" % (self.id,),
                                 key='t')
        for name, array in zip(('t', 'x', 'y'), arrays):
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    def __len__(self):
        return len(self.t)

    def points(self):
        return np.column_stack([self.x, self.y])


@dataclass(frozen=True)
class SlitGeometry:
    """Slit layout and bath description.

    ``centers`` are the slit centre offsets across the axis, ``width``
    the width of each slit and ``barrier_x`` the position of the slit
    plane along the axis, all in mm.  The default numbers are
    illustrative, not measured values.  ``eval_radius`` defaults to two
    slit widths.
    """
    kind: str = 'single'
    centers: tuple = (0.0,)
    width: float = 14.25
    barrier_x: float = 0.0
    faraday_wavelength: float = 4.75
    axis_angle: float = 0.0
    eval_radius: float = None
    drive_frequency: float = 50.0
    viscosity: float = 20.0
    depth: float = 4.0

    def __post_init__(self):
        if self.kind not in ('single', 'double'):
            raise ParameterError("must be 'single' or 'double', got %r" % (self.kind,),
                                 key='kind')
        centers = tuple(float(center) for center in np.atleast_1d(self.centers))
        if len(centers) != (1 if self.kind == 'single' else 2):
            raise ParameterError("a %s slit needs %d centre(s)" % (
                self.kind, 1 if self.kind == 'single' else 2), key='centers')
        if len(set(centers)) != len(centers):
            raise ParameterError("slit centres must be distinct", key='centers')
        object.__setattr__(self, 'centers', centers)
        for name in ('width', 'faraday_wavelength'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError("must be > 0, got %r" % (value,), key=name)
        if self.eval_radius is None:
            object.__setattr__(self, 'eval_radius', 2.0 * self.width)
        elif not self.eval_radius > 0:
            raise ParameterError("must be > 0", key='eval_radius')

    def rotated(self, phi):
        return replace(self, axis_angle=self.axis_angle + phi)

    def to_frame(self, x, y):
        """Lab coordinates -> slit frame (axis along +x)."""
        cos, sin = math.cos(self.axis_angle), math.sin(self.axis_angle)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return cos * x + sin * y, -sin * x + cos * y

    def to_lab(self, u, w):
        cos, sin = math.cos(self.axis_angle), math.sin(self.axis_angle)
        u = np.asarray(u, dtype=float)
        w = np.asarray(w, dtype=float)
        return cos * u - sin * w, sin * u + cos * w

    def summary(self):
        return {
            'kind': self.kind, 'centers': list(self.centers), 'width': self.width,
            'barrier_x': self.barrier_x, 'faraday_wavelength': self.faraday_wavelength,
            'axis_angle': self.axis_angle, 'eval_radius': self.eval_radius,
            'drive_frequency': self.drive_frequency, 'viscosity': self.viscosity,
            'depth': self.depth,
        }


def _parse_float(text, column, lineno):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise TrajectoryParseError("column %s: not a number: %r" % (column, text), lineno)
    if not math.isfinite(value):
        raise TrajectoryParseError("column %s: not finite: %r" % (column, text), lineno)
    return value


def load_trajectories(path_or_file):
    """Read trajectories from CSV with the header ``id,t,x,y``.

    Rows may come in any order; the result is sorted by id and each
    trajectory by time.  Raises TrajectoryParseError naming the line.
    """
    if hasattr(path_or_file, 'read'):
        return _read_trajectories(path_or_file)
    with open(path_or_file, newline='', encoding='utf-8') as f:
        return _read_trajectories(f)


def _read_trajectories(f):
    reader = csv.reader(f)
    header = None
    for row in reader:
        if row and any(cell.strip() for cell in row):
            header = [cell.strip() for cell in row]
            break
    if header is None:
        raise TrajectoryParseError("empty file")
    header_line = reader.line_num
    missing = [name for name in REQUIRED_COLUMNS if name not in header]
    if missing:
        raise TrajectoryParseError("missing column(s): %s" % ", ".join(missing), header_line)
    columns = [header.index(name) for name in REQUIRED_COLUMNS]

    rows = {}
    for row in reader:
        lineno = reader.line_num
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) < len(header):
            raise TrajectoryParseError("expected %d fields, got %d" % (
                len(header), len(row)), lineno)
        id_text = row[columns[0]].strip()
        try:
            walker_id = int(id_text)
        except ValueError:
            raise TrajectoryParseError("column id: not an integer: %r" % id_text, lineno)
        t, x, y = (_parse_float(row[index].strip(), name, lineno)
                   for index, name in zip(columns[1:], REQUIRED_COLUMNS[1:]))
        rows.setdefault(walker_id, []).append((t, x, y, lineno))
    if not rows:
        raise TrajectoryParseError("no data rows", header_line)

    trajectories = []
    for walker_id in sorted(rows):
        samples = sorted(rows[walker_id])
        for previous, current in zip(samples, samples[1:]):
            if current[0] <= previous[0]:
                raise TrajectoryParseError("id %d: repeated time %r" % (
                    walker_id, current[0]), max(previous[3], current[3]))
        if len(samples) < 2:
            raise TrajectoryParseError("id %d has a single sample" % walker_id,
                                       samples[0][3])
        data = np.array([sample[:3] for sample in samples])
        trajectories.append(WalkerTrajectory(walker_id, data[:, 0], data[:, 1], data[:, 2]))
    return trajectories


def _barrier_crossing(u, barrier):
    """Index of the first sample at or past the barrier plane, or None."""
    past = np.nonzero(u >= barrier)[0]
    return int(past[0]) if len(past) else None


def exit_angle(traj, geom):
    """Angle of the first outward crossing of the evaluation circle.

    The circle of radius ``geom.eval_radius`` is centred on the slit
    centre nearest to where the trajectory passes the barrier plane.
    Between samples the path is taken to be straight, and the segment that
    passes the barrier counts from the barrier plane on.  Returns None when
    the trajectory never crosses the circle after the barrier.
    """
    u, w = geom.to_frame(traj.x, traj.y)
    start = _barrier_crossing(u, geom.barrier_x)
    if start is None:
        return None
    if start > 0:
        # interpolate the crossing of the barrier plane
        fraction = (geom.barrier_x - u[start - 1]) / (u[start] - u[start - 1])
        w_cross = w[start - 1] + fraction * (w[start] - w[start - 1])
        start -= 1
    else:
        fraction = 0.0
        w_cross = w[0]
    center_w = min(geom.centers, key=lambda center: abs(center - w_cross))
    du = u[start:] - geom.barrier_x
    dw = w[start:] - center_w
    radius = geom.eval_radius
    # |p_k + s (p_k+1 - p_k)|^2 = R^2 per segment; the larger root leaves the circle
    pu, pw = du[:-1], dw[:-1]
    su, sw = np.diff(du), np.diff(dw)
    a = su * su + sw * sw
    b = pu * su + pw * sw
    c = pu * pu + pw * pw - radius * radius
    disc = b * b - a * c
    root = np.sqrt(np.maximum(disc, 0.0))
    with np.errstate(divide='ignore', invalid='ignore'):
        # cancellation-free form of (-b + root) / a for b > 0
        s = np.where(b > 0, -c / (b + root), (root - b) / a)
    lower = np.zeros(len(a))
    lower[0] = fraction
    valid = (a > 0) & (disc > 0) & (s >= lower) & (s <= 1.0)
    hits = np.nonzero(valid)[0]
    if not len(hits):
        return None
    k = int(hits[0])
    angle = math.atan2(pw[k] + s[k] * sw[k], pu[k] + s[k] * su[k]) + geom.axis_angle
    return math.remainder(angle, 2.0 * math.pi)


def exit_angles(trajs, geom):
    """Exit angles of all trajectories that cross the evaluation circle.

    Returns (ids, angles) as arrays in input order.
    """
    ids, angles = [], []
    for traj in trajs:
        angle = exit_angle(traj, geom)
        if angle is not None:
            ids.append(traj.id)
            angles.append(angle)
    if len(angles) < len(trajs):
        logger.info("%d of %d trajectories never reach radius %g",
                    len(trajs) - len(angles), len(trajs), geom.eval_radius)
    return np.array(ids, dtype=int), np.array(angles, dtype=float)


@dataclass(frozen=True, eq=False)
class AngularDistribution:
    edges: np.ndarray
    densities: np.ndarray
    symmetrized: bool
    eval_radius: float = None
    n_angles: int = 0

    @property
    def centers(self):
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    @property
    def widths(self):
        return np.diff(self.edges)

    def masses(self):
        return self.densities * self.widths

    def peak_angles(self):
        """Bin centres of the local maxima of the density."""
        d = self.densities
        padded = np.concatenate([[-np.inf], d, [-np.inf]])
        peaks = (padded[1:-1] > padded[:-2]) & (padded[1:-1] >= padded[2:]) & (d > 0)
        return self.centers[peaks]

    def rows(self):
        for left, right, density in zip(self.edges[:-1], self.edges[1:], self.densities):
            yield left, right, density


def symmetric_edges(bins, limit=HALF_PI):
    """Bin edges on [-limit, limit] that are exact negatives of each other."""
    bins = int(bins)
    if bins < 1:
        raise ParameterError("must be >= 1", key='bins')
    return limit * (2.0 * np.arange(bins + 1) - bins) / bins


def angular_histogram(angles, bins=61, symmetrize=False, eval_radius=None,
                      limit=HALF_PI):
    """Normalised histogram of exit angles on [-limit, limit].

    With ``symmetrize`` each angle counts half at +theta and half at
    -theta, which makes the densities an exactly even function of theta.
    Angles outside the range are not counted, and ``n_angles`` is the
    number of angles inside it in both modes.
    """
    angles = np.asarray(angles, dtype=float).ravel()
    if len(angles) == 0:
        raise ParameterError("no angles to histogram", key='angles')
    edges = symmetric_edges(bins, limit) if np.ndim(bins) == 0 else \
        np.asarray(bins, dtype=float)
    counts, edges = np.histogram(angles, bins=edges)
    counts = counts.astype(float)
    n_inside = int(counts.sum())
    if symmetrize:
        counts = 0.5 * (counts + counts[::-1])
    total = counts.sum()
    if total == 0:
        raise ParameterError("no angle inside [%g, %g]" % (edges[0], edges[-1]),
                             key='angles')
    densities = counts / (total * np.diff(edges))
    return AngularDistribution(edges, densities, bool(symmetrize), eval_radius, n_inside)


def predicted_peak_angle(geom):
    """Small-angle diffraction estimate lambda_F / w in radians."""
    return geom.faraday_wavelength / geom.width


def single_slit_fit(theta, geom, amplitude=1.0):
    """Single-slit amplitude curve A |sinc((w/lambda_F) sin theta)|.

    This is a model curve for comparison, its first zero lies at
    sin theta = lambda_F / w.
    """
    theta = np.asarray(theta, dtype=float)
    # numpy's sinc is sin(pi x)/(pi x) and handles x = 0
    curve = amplitude * np.abs(np.sinc(geom.width / geom.faraday_wavelength * np.sin(theta)))
    return float(curve) if curve.ndim == 0 else curve


class DeltaLaw:
    """All exits at one angle."""
    def __init__(self, angle=0.0):
        self.angle = float(angle)

    def sample(self, rng, n):
        return np.full(n, self.angle)

    def cdf(self, theta):
        return np.where(np.asarray(theta, dtype=float) >= self.angle, 1.0, 0.0)


class UniformLaw:
    def __init__(self, low=-HALF_PI, high=HALF_PI):
        if not high > low:
            raise ParameterError("empty angle range", key='law')
        self.low = float(low)
        self.high = float(high)

    def sample(self, rng, n):
        return rng.uniform(self.low, self.high, n)

    def pdf(self, theta):
        theta = np.asarray(theta, dtype=float)
        inside = (theta >= self.low) & (theta <= self.high)
        return np.where(inside, 1.0 / (self.high - self.low), 0.0)

    def cdf(self, theta):
        theta = np.asarray(theta, dtype=float)
        return np.clip((theta - self.low) / (self.high - self.low), 0.0, 1.0)


class TabulatedLaw:
    """Angle law given by density values on an ascending grid.

    The density is linear between grid points; samples are drawn by
    inverting the tabulated cumulative distribution.
    """
    def __init__(self, grid, density):
        grid = np.asarray(grid, dtype=float)
        density = np.asarray(density, dtype=float)
        if grid.ndim != 1 or grid.shape != density.shape or len(grid) < 2:
            raise ParameterError("grid and density must be equal-length 1-D arrays",
                                 key='law')
        if not np.all(np.diff(grid) > 0):
            raise ParameterError("grid must be strictly ascending", key='law')
        if not np.all(np.isfinite(density)) or np.any(density < 0):
            raise ParameterError("density must be finite and non-negative", key='law')
        cumulative = cumulative_trapezoid(density, grid, initial=0.0)
        if not cumulative[-1] > 0:
            raise ParameterError("density integrates to zero", key='law')
        self.grid = grid
        self.density = density / cumulative[-1]
        self._cumulative = cumulative / cumulative[-1]

    def sample(self, rng, n):
        return np.interp(rng.random(n), self._cumulative, self.grid)

    def pdf(self, theta):
        return np.interp(theta, self.grid, self.density, left=0.0, right=0.0)

    def cdf(self, theta):
        return np.interp(theta, self.grid, self._cumulative, left=0.0, right=1.0)

    def peak_angles(self):
        d = self.density
        inner = (d[1:-1] > d[:-2]) & (d[1:-1] >= d[2:])
        return self.grid[1:-1][inner]


def single_slit_law(geom, n_grid=4001):
    """Diffraction-like angle law sinc^2((w/lambda_F) sin theta) on [-pi/2, pi/2]."""
    grid = np.linspace(-HALF_PI, HALF_PI, n_grid)
    return TabulatedLaw(grid, single_slit_fit(grid, geom) ** 2)


def _polyline_samples(vertices, spacing):
    """Points every ``spacing`` along the polyline, vertices included."""
    points = [vertices[0:1]]
    for start, end in zip(vertices[:-1], vertices[1:]):
        length = math.hypot(*(end - start))
        count = max(1, int(math.ceil(length / spacing)))
        fractions = np.arange(1, count + 1) / count
        points.append(start + np.outer(fractions, end - start))
    return np.concatenate(points)


def synthesize_walkers(geom, law, n, noise=0.0, seed=0, speed=10.0):
    """Straight-line walkers with exit angles drawn from ``law``.

    Each walker approaches along the slit axis, passes the barrier plane
    at a position drawn uniformly across a slit, then moves in a straight
    line through the point of the evaluation circle at its drawn angle.
    Positions are sampled every w/20 at constant ``speed`` (mm/s) and get
    Gaussian noise of standard deviation ``noise`` (mm).
    """
    n = int(n)
    if n < 1:
        raise ParameterError("must be >= 1", key='n')
    if not noise >= 0:
        raise ParameterError("must be >= 0", key='noise')
    if not speed > 0:
        raise ParameterError("must be > 0", key='speed')
    rng = np.random.default_rng(seed)
    width = geom.width
    radius = geom.eval_radius
    spacing = width / 20.0
    slits = rng.integers(len(geom.centers), size=n)
    offsets = rng.uniform(-0.5 * width, 0.5 * width, n)
    angles = law.sample(rng, n)

    walkers = []
    for index in range(n):
        center = np.array([geom.barrier_x, geom.centers[slits[index]]])
        entry = center + np.array([0.0, offsets[index]])
        direction = np.array([math.cos(angles[index]), math.sin(angles[index])])
        on_circle = center + radius * direction
        heading = on_circle - entry
        heading /= math.hypot(*heading)
        vertices = np.array([
            entry - np.array([2.0 * width, 0.0]),
            entry,
            on_circle,
            on_circle + radius * heading,
        ])
        points = _polyline_samples(vertices, spacing)
        if noise:
            points = points + rng.normal(0.0, noise, points.shape)
        x, y = geom.to_lab(points[:, 0], points[:, 1])
        path = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(points, axis=0).T))])
        walkers.append(WalkerTrajectory(index, path / speed, x, y))
    return walkers


def initial_heading(traj, geom=None):
    """Direction of the first step, relative to the slit axis if ``geom`` is given."""
    heading = math.atan2(traj.y[1] - traj.y[0], traj.x[1] - traj.x[0])
    if geom is not None:
        heading = math.remainder(heading - geom.axis_angle, 2.0 * math.pi)
    return heading


def select_collimated(trajs, geom, max_divergence):
    """Keep trajectories whose initial heading deviates at most ``max_divergence`` from the axis."""
    return [traj for traj in trajs
            if abs(initial_heading(traj, geom)) <= max_divergence]


def entry_offsets(trajs, geom):
    """Offsets from the nearest slit centre where trajectories pass the barrier."""
    offsets = []
    for traj in trajs:
        u, w = geom.to_frame(traj.x, traj.y)
        start = _barrier_crossing(u, geom.barrier_x)
        if start is None:
            continue
        if start > 0:
            fraction = (geom.barrier_x - u[start - 1]) / (u[start] - u[start - 1])
            w_cross = w[start - 1] + fraction * (w[start] - w[start - 1])
        else:
            w_cross = w[0]
        center = min(geom.centers, key=lambda c: abs(c - w_cross))
        offsets.append(w_cross - center)
    return np.array(offsets, dtype=float)
