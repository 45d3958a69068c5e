"""Signal distributions.

The firm value has two components, theta = r * x.  The solver needs three
things from the distribution of the interpretive signal x: the density g,
the cdf G, and the lower partial integral

    L(a) = integral_{-inf}^{a} G(t) dt = E[(a - X)^+],

which is the only integral the equilibrium indifference conditions ever
use (every integral of G over an interval is a difference of two L values).
The normal family carries closed forms for all of these; other families can
subclass :class:`XDistribution` and inherit an adaptive-quadrature fallback
for L.

The first signal r only enters the threshold equations through its realized
value and its prior mean r0, so :class:`RDistribution` is a thin sampling
interface used by the Monte Carlo module.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy.special import ndtr, ndtri

from .errors import ParameterError

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Absolute tolerance for the quadrature fallback, and the tail mass at which
# the integration domain is clipped.  Equilibrium residuals are trusted to
# 1e-10, so the fallback has to be a couple of orders tighter.
_QUAD_ABS_TOL = 1e-12
_TAIL_CLIP = 1e-12


class XDistribution:
    """Distribution of the interpretive signal x on the real line.

    Subclasses must set ``mean`` and implement ``pdf``, ``cdf`` and
    ``quantile``.  ``lower_partial_integral`` defaults to adaptive
    quadrature of the cdf on a domain clipped at extreme quantiles;
    override it when a closed form exists.
    """

    mean: float

    def pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, u):
        raise NotImplementedError

    def lower_partial_integral(self, a: float) -> float:
        """E[(a - X)^+], the integral of the cdf over (-inf, a]."""
        lo = float(self.quantile(_TAIL_CLIP))
        if a <= lo:
            return 0.0
        val, _ = integrate.quad(
            self.cdf, lo, float(a), epsabs=_QUAD_ABS_TOL, epsrel=1e-12, limit=400
        )
        return max(val, 0.0)

    def sample(self, rng: np.random.Generator, size=None):
        """Draw via the quantile transform from an explicit generator."""
        return self.quantile(rng.random(size))

    def spread(self) -> float:
        """Central 95% width; used to scale bracket-expansion steps."""
        return float(self.quantile(0.975) - self.quantile(0.025))


class NormalX(XDistribution):
    """Normal signal distribution with closed-form partial integrals."""

    def __init__(self, mu: float, sigma: float):
        if sigma <= 0.0 or not math.isfinite(sigma):
            raise ParameterError(f"sigma must be positive, got {sigma}")
        if not math.isfinite(mu):
            raise ParameterError(f"mu must be finite, got {mu}")
        self.mu = float(mu)
        self.sigma = float(sigma)
        self.mean = float(mu)

    def __repr__(self):
        return f"NormalX(mu={self.mu}, sigma={self.sigma})"

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        out = np.exp(-0.5 * z * z) / (self.sigma * _SQRT_2PI)
        return float(out) if np.isscalar(x) else out

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        out = ndtr(z)
        return float(out) if np.isscalar(x) else out

    def quantile(self, u):
        out = self.mu + self.sigma * ndtri(u)
        return float(out) if np.isscalar(u) else out

    def lower_partial_integral(self, a):
        # E[(a - X)^+] = (a - mu) * Phi(z) + sigma * phi(z),  z = (a - mu) / sigma
        a = np.asarray(a, dtype=float)
        z = (a - self.mu) / self.sigma
        phi = np.exp(-0.5 * z * z) / _SQRT_2PI
        out = (a - self.mu) * ndtr(z) + self.sigma * phi
        out = np.maximum(out, 0.0)
        return float(out) if out.ndim == 0 else out


def make_normal(mu: float, sigma: float) -> NormalX:
    """Normal(mu, sigma) signal distribution; rejects sigma <= 0."""
    return NormalX(mu, sigma)


def interval_cdf_integral(dist: XDistribution, a: float, b: float) -> float:
    """Integral of the cdf over [a, b]; nonnegative, requires a <= b."""
    if a > b:
        raise ParameterError(f"interval endpoints out of order: a={a} > b={b}")
    if a == b:
        return 0.0
    val = dist.lower_partial_integral(b) - dist.lower_partial_integral(a)
    return max(float(val), 0.0)


class RDistribution:
    """Distribution of the first signal r on the positive reals."""

    mean: float

    def quantile(self, u):
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size=None):
        return self.quantile(rng.random(size))


class LogNormalR(RDistribution):
    """Log-normal first signal pinned to a given mean.

    The model constrains r only to positive support with mean r0, so the
    simulator defaults to a log-normal; ``log_sigma`` controls dispersion.
    """

    def __init__(self, mean: float, log_sigma: float = 0.25):
        if mean <= 0.0:
            raise ParameterError(f"r mean must be positive, got {mean}")
        if log_sigma <= 0.0:
            raise ParameterError(f"log_sigma must be positive, got {log_sigma}")
        self.mean = float(mean)
        self.log_sigma = float(log_sigma)
        self._log_mu = math.log(mean) - 0.5 * log_sigma * log_sigma

    def __repr__(self):
        return f"LogNormalR(mean={self.mean}, log_sigma={self.log_sigma})"

    def quantile(self, u):
        out = np.exp(self._log_mu + self.log_sigma * ndtri(u))
        return float(out) if np.isscalar(u) else out


def x_dist_from_config(cfg: dict) -> XDistribution:
    """Build a signal distribution from a config mapping.

    Expected shape: ``{"family": "normal", "mu": ..., "sigma": ...}``.
    """
    try:
        family = cfg["family"]
    except (KeyError, TypeError):
        raise ParameterError(f"distribution config needs a 'family' key: {cfg!r}")
    if family != "normal":
        raise ParameterError(f"unknown distribution family: {family!r}")
    try:
        return make_normal(float(cfg["mu"]), float(cfg["sigma"]))
    except KeyError as exc:
        raise ParameterError(f"normal distribution config needs {exc} key")
