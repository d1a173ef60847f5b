"""
Recoiling-slit which-path analysis.

A single slit of Gaussian position uncertainty ``a`` sits in front of a
double slit; the particle has wavenumber ``k0``.  Integrating over the
unobserved slit position gives the screen pattern

    f(xi) = 1 + exp(-a^2 k0^2) cos(2 k0 xi)

while the slit recoil wavenumber kappa carries the which-path
probabilities p_A, p_B with density D(kappa).  Small ``a`` means a
well-known slit position and full fringe contrast, large ``a`` a
well-known slit momentum, certain path knowledge and a flat pattern.

`fringe_quadrature()` evaluates the position integral numerically and
serves as the oracle of the closed form `fringe_pattern()`.
"""

import math
import warnings
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import ParameterError, QuadratureError

__all__ = ['WhichPathModel', 'SingleSlitResult',
           'fringe_pattern', 'fringe_quadrature', 'fringe_contrast',
           'slit_probabilities', 'slit_momentum_density',
           'path_distinguishability', 'path_distinguishability_quadrature',
           'single_slit_product']

SQRT_PI = math.sqrt(math.pi)

# the slit position Gaussian is integrated over +-8 widths
QUADRATURE_HALF_WIDTH = 8.0
QUADRATURE_TOLERANCE = 1e-8


@dataclass(frozen=True)
class WhichPathModel:
    a: float = 1.0
    k0: float = 1.0

    def __post_init__(self):
        for name in ('a', 'k0'):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ParameterError("expected a number, got %r" % (value,), key=name)
            if not (math.isfinite(value) and value >= 0):
                raise ParameterError("must be finite and >= 0, got %r" % (value,), key=name)
            object.__setattr__(self, name, value)

    def summary(self):
        return {'a': self.a, 'k0': self.k0, 'contrast': fringe_contrast(self)}


def fringe_contrast(model):
    """Visibility exp(-a^2 k0^2) of the cos(2 k0 xi) modulation.
    """
    return math.exp(-(model.a * model.k0) ** 2)


def fringe_pattern(model, xi):
    xi = np.asarray(xi, dtype=float)
    result = 1.0 + fringe_contrast(model) * np.cos(2.0 * model.k0 * xi)
    return float(result) if result.ndim == 0 else result


def _quad(function, low, high, **kwargs):
    # quad warns about roundoff even when its error estimate is fine;
    # only the estimate decides
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', integrate.IntegrationWarning)
        value, error = integrate.quad(function, low, high, epsabs=1e-10,
                                      epsrel=1e-10, limit=200, **kwargs)
    if not error <= QUADRATURE_TOLERANCE:
        detail = "; ".join(str(warning.message) for warning in caught)
        raise QuadratureError("error estimate %g above tolerance %g%s" % (
            error, QUADRATURE_TOLERANCE, (" (%s)" % detail) if detail else ""))
    return value


def _fringe_integrals(model):
    """(total, cosine, sine) moments of the slit position Gaussian.

    The screen position only enters through
    cos(2 k0 (xi + z)) = cos(2 k0 xi) cos(2 k0 z) - sin(2 k0 xi) sin(2 k0 z),
    so three integrals over z serve every xi.
    """
    a, k0 = model.a, model.k0
    half = QUADRATURE_HALF_WIDTH * a
    norm = 1.0 / (a * SQRT_PI)

    def gaussian(z):
        return norm * math.exp(-(z / a) ** 2)

    total = _quad(gaussian, -half, half)
    if k0 == 0:
        return total, total, 0.0
    omega = 2.0 * k0
    cosine = _quad(gaussian, -half, half, weight='cos', wvar=omega)
    sine = _quad(gaussian, -half, half, weight='sin', wvar=omega)
    return total, cosine, sine


def fringe_quadrature(model, xi):
    """Screen pattern by adaptive quadrature over the slit position.

    A vanishing ``a`` (point-like slit) is handled analytically.  Raises
    QuadratureError when the integrator misses the 1e-8 tolerance.
    """
    xi = np.asarray(xi, dtype=float)
    if model.a == 0:
        return fringe_pattern(model, xi)
    total, cosine, sine = _fringe_integrals(model)
    phase = 2.0 * model.k0 * xi
    values = total + np.cos(phase) * cosine - np.sin(phase) * sine
    return float(values) if values.ndim == 0 else values


def slit_probabilities(model, kappa):
    """Which-path probabilities (p_A, p_B) given the slit wavenumber kappa.

    p_A = 1 / (1 + exp(4 a^2 kappa k0)) is evaluated as a logistic
    function, which stays accurate in both tails.
    """
    kappa = np.asarray(kappa, dtype=float)
    argument = 4.0 * model.a ** 2 * model.k0 * kappa
    p_a = special.expit(-argument)
    p_b = special.expit(argument)
    if kappa.ndim == 0:
        return float(p_a), float(p_b)
    return p_a, p_b


def slit_momentum_density(model, kappa):
    """Density D(kappa) of the slit recoil wavenumber, two Gaussian lobes at +-k0.
    """
    if not model.a > 0:
        raise ParameterError("the momentum density needs a > 0", key='a')
    kappa = np.asarray(kappa, dtype=float)
    a, k0 = model.a, model.k0
    density = (a / (2.0 * SQRT_PI)) * (
        np.exp(-(a * (kappa + k0)) ** 2) + np.exp(-(a * (kappa - k0)) ** 2))
    return float(density) if density.ndim == 0 else density


def path_distinguishability(model):
    """Mean which-path certainty <|p_A - p_B|> under D, equal to erf(a k0).

    Together with the contrast V it obeys V^2 + D^2 <= 1.
    """
    return float(special.erf(model.a * model.k0))


def path_distinguishability_quadrature(model):
    if not model.a > 0:
        return 0.0
    a, k0 = model.a, model.k0
    reach = k0 + QUADRATURE_HALF_WIDTH / a

    def integrand(kappa):
        p_a, p_b = slit_probabilities(model, kappa)
        return slit_momentum_density(model, kappa) * abs(p_a - p_b)

    # the integrand has a kink at kappa = 0
    return _quad(integrand, -reach, 0.0) + _quad(integrand, 0.0, reach)


SingleSlitResult = namedtuple('SingleSlitResult', 'theta delta_p product')


def single_slit_product(d, p, h):
    """Diffraction angle, momentum spread and d * delta_p of a single slit.

    With theta = (h/p)/d and delta_p = theta p = h/d, the product with the
    slit width is Planck's constant.  Arrays of widths and momenta are
    accepted.
    """
    values = {}
    for name, value in (('d', d), ('p', p), ('h', h)):
        value = np.asarray(value, dtype=float)
        if not np.all(value > 0):
            raise ParameterError("must be > 0", key=name)
        values[name] = value
    d, p, h = values['d'], values['p'], values['h']
    theta = (h / p) / d
    delta_p = h / d
    result = SingleSlitResult(theta, delta_p, d * delta_p)
    if theta.ndim == 0:
        return SingleSlitResult(*(float(value) for value in result))
    return result
