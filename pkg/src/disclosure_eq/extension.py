"""Disclosure equilibrium with an endogenous firm response.

Variation on the baseline game: instead of exogenous outside revelation,
the target firm itself knows x with probability ``p_firm`` and, after the
investor files a simple report, may disclose it.  The firm maximizes the
posterior price, so an informed firm responds exactly when x exceeds the
market's non-disclosure mean mu_nd; silence now carries information about
the firm as well as the investor.

The case split no longer happens at r0 but at a cutoff r_bar > r0.  Writing
c = r0*mu0/r, the sign of

    cutoff_value(r) = p/(1-p) * L(c) - (mu0 - c),   L(a) = E[(a - X)^+],

decides the regime: positive means the simple report is priced below the
prior (investor shorts; mu_nd = x_low_p), negative means above (investor
goes long; mu_nd = x_high_p).  ``cutoff_value`` decreases in r and is
positive at r0, so r_bar is its unique zero on (r0, inf) -- or +inf when
even the r -> inf limit stays positive (the corner regime).

Each regime again reduces to one strictly increasing scalar root function:
``below_cutoff_root`` in x_low_p on (-inf, c) with the linked upper
threshold (1+p)*x_high_p + (1-p)*x_low_p = 2c, and ``above_cutoff_root`` in
x_high_p on (c, inf) with x_low_p + x_high_p = 2c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy import integrate
from scipy.optimize import brentq

from .baseline import DEFAULT_TOL
from .distributions import XDistribution
from .errors import BracketError, DegenerateCaseError, ParameterError, WrongCaseError

_MAX_EXPANSIONS = 200


class ExtCase(str, Enum):
    BELOW_CUTOFF = "below_cutoff"  # r < r_bar: short side
    ABOVE_CUTOFF = "above_cutoff"  # r > r_bar: long side


class FirmAction(str, Enum):
    RESPOND = "respond"
    SILENT = "silent"


@dataclass(frozen=True)
class ExtParams:
    """Primitives of the firm-response game (no outside-revelation q)."""

    alpha: float          # P(investor learns r)
    beta: float           # P(investor learns x | learned r)
    p_firm: float         # P(firm knows x)
    r_obs: float          # realized / disclosed first signal
    r0: float             # prior mean of r
    x_dist: XDistribution

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ParameterError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0.0 < self.beta < 1.0:
            raise ParameterError(f"beta must be in (0, 1), got {self.beta}")
        if not 0.0 < self.p_firm < 1.0:
            raise ParameterError(f"p_firm must be in (0, 1), got {self.p_firm}")
        if self.r_obs <= 0.0:
            raise ParameterError(f"r_obs must be positive, got {self.r_obs}")
        if self.r0 <= 0.0:
            raise ParameterError(f"r0 must be positive, got {self.r0}")
        if self.x_dist.mean <= 0.0:
            raise ParameterError(
                f"the x distribution must have positive mean, got {self.x_dist.mean}"
            )

    @property
    def mu0(self) -> float:
        return self.x_dist.mean

    @property
    def prior_price(self) -> float:
        return self.r0 * self.mu0

    @property
    def neutral_point(self) -> float:
        return self.r0 * self.mu0 / self.r_obs


@dataclass(frozen=True)
class ExtEquilibrium:
    """Solved thresholds and regime cutoff for the firm-response game."""

    case: ExtCase
    x_low_p: float
    x_high_p: float
    mu_nd: float          # equals x_low_p below the cutoff, x_high_p above
    r_bar: float          # regime cutoff; math.inf at the corner
    r_bar_corner: bool    # True when the cutoff condition never crosses zero
    residual: float


def cutoff_value(params: ExtParams, r: float) -> float:
    """Regime indicator at a hypothetical first signal r; decreasing in r."""
    if r <= 0.0:
        raise ParameterError(f"r must be positive, got {r}")
    c = params.r0 * params.mu0 / r
    p = params.p_firm
    return p / (1.0 - p) * params.x_dist.lower_partial_integral(c) - (params.mu0 - c)


def _cutoff_limit(params: ExtParams) -> float:
    # r -> inf limit: c -> 0
    p = params.p_firm
    return p / (1.0 - p) * params.x_dist.lower_partial_integral(0.0) - params.mu0


def solve_cutoff(params: ExtParams, tol: float = DEFAULT_TOL) -> tuple[float, bool]:
    """Regime cutoff r_bar and a corner flag.

    Returns ``(math.inf, True)`` when the cutoff condition stays positive in
    the r -> inf limit, otherwise the unique zero of ``cutoff_value`` on
    (r0, inf) with the flag False.
    """
    if _cutoff_limit(params) >= 0.0:
        return math.inf, True
    lo = params.r0
    hi = 2.0 * params.r0
    for _ in range(_MAX_EXPANSIONS):
        if cutoff_value(params, hi) < 0.0:
            break
        lo = hi
        hi *= 2.0
    else:
        raise BracketError("could not bracket the regime cutoff")
    r_bar = brentq(lambda r: cutoff_value(params, r), lo, hi, xtol=tol, maxiter=200)
    return float(r_bar), False


def _upper_from_lower(params: ExtParams, x_low_p: float) -> float:
    # (1+p)*x_high_p + (1-p)*x_low_p = 2*neutral
    p = params.p_firm
    return (2.0 * params.neutral_point - (1.0 - p) * x_low_p) / (1.0 + p)


def _bracketed_cdf_gap(dist, x_low, x_high, anchor):
    gap = dist.lower_partial_integral(x_high) - dist.lower_partial_integral(x_low)
    return gap - dist.cdf(anchor) * (x_high - x_low)


def below_cutoff_root(params: ExtParams, x_low_p: float) -> float:
    """Indifference residual below the cutoff, as a function of x_low_p.

    Strictly increasing; negative toward -inf and positive at the neutral
    point, where it equals ``cutoff_value(r_obs)``.
    """
    if cutoff_value(params, params.r_obs) <= 0.0:
        raise WrongCaseError("below_cutoff_root requires r_obs < r_bar")
    d = params.x_dist
    beta, p = params.beta, params.p_firm
    x_high_p = _upper_from_lower(params, x_low_p)
    integral = _bracketed_cdf_gap(d, x_low_p, x_high_p, x_high_p)
    return (
        beta / (1.0 - beta) * integral
        + p / (1.0 - p) * d.lower_partial_integral(x_low_p)
        - (params.mu0 - x_low_p)
    )


def above_cutoff_root(params: ExtParams, x_high_p: float) -> float:
    """Indifference residual above the cutoff, as a function of x_high_p.

    Strictly increasing; equals ``cutoff_value(r_obs)`` (negative in this
    regime) at the neutral point and grows without bound above it.
    """
    if cutoff_value(params, params.r_obs) >= 0.0:
        raise WrongCaseError("above_cutoff_root requires r_obs > r_bar")
    d = params.x_dist
    beta, p = params.beta, params.p_firm
    x_low_p = 2.0 * params.neutral_point - x_high_p
    integral = _bracketed_cdf_gap(d, x_low_p, x_high_p, x_low_p)
    return (
        beta / ((1.0 - beta) * (1.0 - p)) * integral
        + p / (1.0 - p) * d.lower_partial_integral(x_high_p)
        - (params.mu0 - x_high_p)
    )


def solve_extension(params: ExtParams, tol: float = DEFAULT_TOL) -> ExtEquilibrium:
    """Solve the firm-response equilibrium for the realized first signal."""
    r_bar, corner = solve_cutoff(params, tol)
    v = cutoff_value(params, params.r_obs)
    if v == 0.0 or params.r_obs == r_bar:
        raise DegenerateCaseError(
            "r_obs sits exactly on the regime cutoff; the equilibrium is not defined"
        )
    c = params.neutral_point
    step = max(1.0, params.x_dist.spread())
    if v > 0.0:
        # short side: expand the bracket downward from the neutral point
        f = lambda x: below_cutoff_root(params, x)
        lo = c - step
        for _ in range(_MAX_EXPANSIONS):
            if f(lo) < 0.0:
                break
            step *= 2.0
            lo -= step
        else:
            raise BracketError("could not bracket the lower threshold")
        if not f(c) > 0.0:
            raise BracketError("indifference residual not positive at the neutral point")
        root = float(brentq(f, lo, c, xtol=tol, maxiter=200))
        x_low_p = root
        x_high_p = _upper_from_lower(params, root)
        case, mu_nd = ExtCase.BELOW_CUTOFF, x_low_p
    else:
        f = lambda x: above_cutoff_root(params, x)
        hi = c + step
        for _ in range(_MAX_EXPANSIONS):
            if f(hi) > 0.0:
                break
            step *= 2.0
            hi += step
        else:
            raise BracketError("could not bracket the upper threshold")
        if not f(c) < 0.0:
            raise BracketError("indifference residual not negative at the neutral point")
        root = float(brentq(f, c, hi, xtol=tol, maxiter=200))
        x_high_p = root
        x_low_p = 2.0 * c - root
        case, mu_nd = ExtCase.ABOVE_CUTOFF, x_high_p
    return ExtEquilibrium(
        case=case,
        x_low_p=x_low_p,
        x_high_p=x_high_p,
        mu_nd=mu_nd,
        r_bar=r_bar,
        r_bar_corner=corner,
        residual=float(f(root)),
    )


def firm_strategy(params: ExtParams, eq: ExtEquilibrium, x: float) -> FirmAction:
    """Informed firm's response to a simple report.

    The firm discloses exactly when doing so raises the price, i.e. when
    x > mu_nd; at the threshold disclosure leaves the price unchanged, so
    the tie goes to silence.
    """
    return FirmAction.RESPOND if x > eq.mu_nd else FirmAction.SILENT


def verify_bayes_extension(params: ExtParams, eq: ExtEquilibrium) -> float:
    """Gap between eq.mu_nd and a direct Bayes recomputation.

    Mixes the three (below cutoff) or four (above cutoff) silence events:
    nobody informed, investor withholding on the interval, and an informed
    firm staying silent below its own threshold.  Interval and tail moments
    come from quadrature of x*g.
    """
    d = params.x_dist
    beta, p = params.beta, params.p_firm
    lo_tail = d.quantile(1e-14)

    def moment(a, b):
        val, _ = integrate.quad(
            lambda t: t * d.pdf(t), a, b, epsabs=1e-12, epsrel=1e-12, limit=400
        )
        return val

    interval_mass = d.cdf(eq.x_high_p) - d.cdf(eq.x_low_p)
    interval_moment = moment(eq.x_low_p, eq.x_high_p)
    if eq.case is ExtCase.BELOW_CUTOFF:
        # firm threshold = x_low_p: an informed firm discloses any withheld x,
        # so the joint informed-informed event never stays silent
        tail_mass = d.cdf(eq.x_low_p)
        tail_moment = moment(lo_tail, eq.x_low_p)
        w_uninf = (1.0 - beta) * (1.0 - p)
        w_interval = beta * (1.0 - p)
        w_tail = p * (1.0 - beta)
    else:
        # firm threshold = x_high_p: the firm stays silent on the whole
        # withheld interval, informed or not
        tail_mass = d.cdf(eq.x_high_p)
        tail_moment = moment(lo_tail, eq.x_high_p)
        w_uninf = (1.0 - beta) * (1.0 - p)
        w_interval = beta
        w_tail = p * (1.0 - beta)
    num = (
        w_uninf * params.mu0
        + w_interval * interval_moment
        + w_tail * tail_moment
    )
    den = w_uninf + w_interval * interval_mass + w_tail * tail_mass
    return abs(num / den - eq.mu_nd)
