import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from disclosure_eq import (
    LogNormalR,
    ParameterError,
    XDistribution,
    interval_cdf_integral,
    make_normal,
    x_dist_from_config,
)

PHI0 = 1.0 / math.sqrt(2.0 * math.pi)  # standard normal density at zero


class LogisticX(XDistribution):
    """Logistic signal distribution relying on the quadrature fallback."""

    def __init__(self, mu, scale):
        self.mu = float(mu)
        self.scale = float(scale)
        self.mean = float(mu)

    def pdf(self, x):
        z = np.exp(-(np.asarray(x, dtype=float) - self.mu) / self.scale)
        out = z / (self.scale * (1.0 + z) ** 2)
        return float(out) if np.isscalar(x) else out

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.scale
        out = 1.0 / (1.0 + np.exp(-z))
        return float(out) if np.isscalar(x) else out

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        out = self.mu + self.scale * np.log(u / (1.0 - u))
        return float(out) if out.ndim == 0 else out


def test_make_normal_passthrough():
    d = make_normal(1.0, 0.5)
    assert d.mean == 1.0
    assert d.mu == 1.0 and d.sigma == 0.5


def test_cdf_at_mean_is_half():
    assert make_normal(1.0, 0.5).cdf(1.0) == pytest.approx(0.5, abs=1e-15)


def test_partial_integral_at_mean_reduces_to_sigma_phi0():
    # at a = mean the closed form collapses to sigma * phi(0)
    d = make_normal(1.0, 0.5)
    assert d.lower_partial_integral(1.0) == pytest.approx(0.5 * PHI0, abs=1e-15)


@pytest.mark.parametrize("sigma", [0.0, -1.0, math.nan])
def test_make_normal_rejects_bad_sigma(sigma):
    with pytest.raises(ParameterError):
        make_normal(1.0, sigma)


def test_interval_integral_empty_interval():
    d = make_normal(1.0, 0.5)
    assert interval_cdf_integral(d, 0.3, 0.3) == 0.0


def test_interval_integral_rejects_reversed_endpoints():
    d = make_normal(1.0, 0.5)
    with pytest.raises(ParameterError):
        interval_cdf_integral(d, 2.0, 1.0)


def test_interval_integral_matches_quadrature_oracle():
    d = make_normal(1.0, 0.5)
    assert interval_cdf_integral(d, 1.0, 2.0) == pytest.approx(
        oracles.cdf_integral(1.0, 2.0, 1.0, 0.5), abs=1e-10
    )
    # frozen oracle value for the same integral
    assert interval_cdf_integral(d, 1.0, 2.0) == pytest.approx(
        0.8047742111076984, abs=1e-9
    )
    d01 = make_normal(0.0, 1.0)
    assert interval_cdf_integral(d01, -1.0, 1.0) == pytest.approx(
        oracles.cdf_integral(-1.0, 1.0, 0.0, 1.0), abs=1e-10
    )


def test_closed_form_matches_adaptive_quadrature_fallback():
    # the generic quadrature route and the closed form must agree to 1e-10
    # across mean +/- 6 sigma
    d = make_normal(1.0, 0.5)
    for a in np.linspace(1.0 - 3.0, 1.0 + 3.0, 25):
        closed = d.lower_partial_integral(a)
        quad = XDistribution.lower_partial_integral(d, a)
        assert closed == pytest.approx(quad, abs=1e-10)


def test_partial_integral_derivative_is_cdf():
    d = make_normal(1.0, 0.5)
    h = 1e-6
    for a in np.linspace(-1.5, 3.5, 21):
        fd = (d.lower_partial_integral(a + h) - d.lower_partial_integral(a - h)) / (2 * h)
        assert abs(fd - d.cdf(a)) < 1e-6


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(min_value=-4.0, max_value=6.0),
    b=st.floats(min_value=-4.0, max_value=6.0),
)
def test_partial_integral_interval_additivity(a, b):
    # L(b) - L(a) integrates the cdf, so it is nonnegative with slope <= 1
    d = make_normal(1.0, 0.5)
    lo, hi = min(a, b), max(a, b)
    gap = d.lower_partial_integral(hi) - d.lower_partial_integral(lo)
    assert -1e-12 <= gap <= (hi - lo) + 1e-12
    assert gap == pytest.approx(interval_cdf_integral(d, lo, hi), abs=1e-12)


def test_cdf_monotone_with_correct_limits():
    d = make_normal(1.0, 0.5)
    xs = np.linspace(-20.0, 22.0, 400)
    cs = d.cdf(xs)
    assert np.all(np.diff(cs) >= 0.0)
    assert d.cdf(-20.0) == pytest.approx(0.0, abs=1e-15)
    assert d.cdf(22.0) == pytest.approx(1.0, abs=1e-15)


def test_mean_consistent_with_pdf():
    d = make_normal(1.0, 0.5)
    from scipy import integrate

    m, _ = integrate.quad(lambda t: t * d.pdf(t), -20.0, 22.0, epsabs=1e-12)
    assert m == pytest.approx(d.mean, abs=1e-10)


def test_quantile_sampling_passes_ks_band():
    # empirical cdf of 1e6 quantile samples within the 99% Kolmogorov band
    d = make_normal(1.0, 0.5)
    rng = np.random.Generator(np.random.Philox(key=915))
    samples = d.sample(rng, 1_000_000)
    samples = np.sort(samples)
    n = samples.size
    grid = (np.arange(1, n + 1)) / n
    cdf_vals = d.cdf(samples)
    d_stat = max(
        np.max(np.abs(grid - cdf_vals)),
        np.max(np.abs(grid - 1.0 / n - cdf_vals)),
    )
    assert d_stat <= 1.62762 / math.sqrt(n)


def test_quantile_inverts_cdf():
    d = make_normal(1.0, 0.5)
    for u in (0.01, 0.2, 0.5, 0.9, 0.999):
        assert d.cdf(d.quantile(u)) == pytest.approx(u, abs=1e-12)


def test_lognormal_r_mean_and_positivity():
    r = LogNormalR(1.0, log_sigma=0.25)
    rng = np.random.Generator(np.random.Philox(key=5150))
    samples = r.sample(rng, 500_000)
    assert np.all(samples > 0.0)
    se = samples.std(ddof=1) / math.sqrt(samples.size)
    assert abs(samples.mean() - 1.0) < 4.0 * se


def test_lognormal_r_rejects_bad_parameters():
    with pytest.raises(ParameterError):
        LogNormalR(0.0)
    with pytest.raises(ParameterError):
        LogNormalR(1.0, log_sigma=0.0)


def test_quadrature_fallback_against_closed_form():
    # the logistic partial integral has the closed form s*log(1 + exp(z))
    d = LogisticX(1.0, 0.3)
    for a in np.linspace(-2.0, 4.0, 13):
        closed = 0.3 * math.log1p(math.exp((a - 1.0) / 0.3))
        assert d.lower_partial_integral(a) == pytest.approx(closed, abs=1e-10)


def test_x_dist_from_config():
    d = x_dist_from_config({"family": "normal", "mu": 1.0, "sigma": 0.5})
    assert (d.mu, d.sigma) == (1.0, 0.5)
    with pytest.raises(ParameterError):
        x_dist_from_config({"family": "cauchy", "loc": 0.0})
    with pytest.raises(ParameterError):
        x_dist_from_config({"family": "normal", "mu": 1.0})
    with pytest.raises(ParameterError):
        x_dist_from_config({"mu": 1.0, "sigma": 0.5})
