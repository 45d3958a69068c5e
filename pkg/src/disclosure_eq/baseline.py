"""Baseline disclosure equilibrium.

Setup: a firm is worth theta = r * x.  An investor learns r with probability
alpha and, given that, learns x with probability beta; they take a position
at the prior price P1 = r0 * mu0, disclose, and unwind at the posterior
price.  Disclosure is truthful; after it, theta leaks from outside sources
with probability q.  The first signal always gets disclosed (two-sided
trading makes silence worthless), so the open question is which x the
investor attaches to the report.

Because the investor can trade either direction, they maximize the absolute
price move.  Withholding x (a "simple" report) yields expected move

    vol_simple(x)    = |q*r*x + (1-q)*r*mu_nd - r0*mu0|,

while disclosing it ("elaborate") yields

    vol_elaborate(x) = |r*x - r0*mu0|,

where mu_nd is the market's mean of x given a simple report.  Moderate x is
withheld, extreme x disclosed: the withholding set is an interval
[x_low, x_high] straddling the value-neutral point r0*mu0/r.  Consistency of
mu_nd with the withholding interval reduces to one strictly increasing
scalar root function per case:

* r < r0 ("short" case): mu_nd = x_low, the upper threshold follows from
  (1+q)*x_high + (1-q)*x_low = 2*r0*mu0/r, and x_low is the unique zero of
  ``short_case_root`` on (mu0, r0*mu0/r).
* r > r0 ("long" case): mu_nd = x_high, (1-q)*x_high + (1+q)*x_low =
  2*r0*mu0/r, and x_high is the unique zero of ``long_case_root`` on
  (r0*mu0/r, mu0).

Roots are found with Brent's bracketed method; the brackets carry a
guaranteed sign change, so convergence is unconditional.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum

from scipy import integrate
from scipy.optimize import brentq

from .distributions import XDistribution
from .errors import BracketError, DegenerateCaseError, ParameterError, WrongCaseError

DEFAULT_TOL = 1e-12


class Case(str, Enum):
    SHORT = "short"  # r below its prior mean: simple reports read as bad news
    LONG = "long"    # r above its prior mean: simple reports read as good news


class Message(str, Enum):
    ELABORATE = "elaborate"  # disclose both r and x
    SIMPLE = "simple"        # disclose r only
    NONE = "none"            # disclose nothing (off-equilibrium for informed types)


class Position(IntEnum):
    SHORT = -1
    LONG = 1


@dataclass(frozen=True)
class ModelParams:
    """Primitives of the baseline game.

    alpha never enters the threshold equations (it matters only for the
    composition of simulated paths), but it is validated here because the
    simulator draws informedness from it.
    """

    alpha: float          # P(learn r)
    beta: float           # P(learn x | learned r)
    q: float              # P(theta revealed by outside sources)
    r_obs: float          # realized / disclosed first signal
    r0: float             # prior mean of r
    x_dist: XDistribution

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ParameterError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0.0 < self.beta < 1.0:
            raise ParameterError(f"beta must be in (0, 1), got {self.beta}")
        if not 0.0 <= self.q <= 1.0:
            raise ParameterError(f"q must be in [0, 1], got {self.q}")
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
        """The x at which disclosing both signals leaves the price unchanged."""
        return self.r0 * self.mu0 / self.r_obs

    @property
    def case(self) -> Case:
        if self.r_obs == self.r0:
            raise DegenerateCaseError("r_obs equals r0; neither case applies")
        return Case.SHORT if self.r_obs < self.r0 else Case.LONG


@dataclass(frozen=True)
class Equilibrium:
    """Solved disclosure thresholds for one realization of the first signal."""

    case: Case
    x_low: float          # lower disclosure threshold
    x_high: float         # upper disclosure threshold
    mu_nd: float          # market mean of x given a simple report
    neutral_point: float  # r0*mu0/r_obs
    residual: float       # root-function value at the returned threshold


@dataclass(frozen=True)
class ReportStats:
    """Observable report statistics implied by an equilibrium."""

    freq_neg: float        # P(x < x_low): negative elaborate reports
    freq_pos: float        # P(x > x_high): positive elaborate reports
    elaborateness: float   # freq_neg + freq_pos
    extremity_neg: float   # P(x in [x_low, neutral])
    extremity_pos: float   # P(x in [neutral, x_high])
    extremity: float       # P(x in [x_low, x_high])
    misleading_prob: float # mass of the withheld region on the wrong side of neutral
    price_reaction: float  # |r0*mu0 - r*mu_nd|: price move on a simple report


def vol_simple(params: ModelParams, mu_nd: float, x: float) -> float:
    """Expected absolute price move from withholding x (simple report)."""
    return abs(
        params.q * params.r_obs * x
        + (1.0 - params.q) * params.r_obs * mu_nd
        - params.prior_price
    )


def vol_elaborate(params: ModelParams, x: float) -> float:
    """Absolute price move from disclosing both signals."""
    return abs(params.r_obs * x - params.prior_price)


def _upper_from_lower(params: ModelParams, x_low: float) -> float:
    # (1+q)*x_high + (1-q)*x_low = 2*neutral
    return (2.0 * params.neutral_point - (1.0 - params.q) * x_low) / (1.0 + params.q)


def _lower_from_upper(params: ModelParams, x_high: float) -> float:
    # (1-q)*x_high + (1+q)*x_low = 2*neutral
    return (2.0 * params.neutral_point - (1.0 - params.q) * x_high) / (1.0 + params.q)


def _bracketed_cdf_gap(dist, x_low, x_high, anchor):
    """integral over [x_low, x_high] of (G(x) - G(anchor)) dx."""
    gap = dist.lower_partial_integral(x_high) - dist.lower_partial_integral(x_low)
    return gap - dist.cdf(anchor) * (x_high - x_low)


def short_case_root(params: ModelParams, x_low: float) -> float:
    """Indifference residual for the short case, as a function of x_low.

    Strictly increasing, negative at mu0 and positive at the neutral point,
    so its zero on (mu0, neutral) is the lower threshold.
    """
    if params.r_obs >= params.r0:
        raise WrongCaseError("short_case_root requires r_obs < r0")
    x_high = _upper_from_lower(params, x_low)
    integral = _bracketed_cdf_gap(params.x_dist, x_low, x_high, x_high)
    return params.beta * integral - (1.0 - params.beta) * (params.mu0 - x_low)


def long_case_root(params: ModelParams, x_high: float) -> float:
    """Indifference residual for the long case, as a function of x_high.

    Strictly increasing, negative at the neutral point and positive at mu0.
    """
    if params.r_obs <= params.r0:
        raise WrongCaseError("long_case_root requires r_obs > r0")
    x_low = _lower_from_upper(params, x_high)
    integral = _bracketed_cdf_gap(params.x_dist, x_low, x_high, x_low)
    return params.beta * integral - (1.0 - params.beta) * (params.mu0 - x_high)


def solve_baseline(params: ModelParams, tol: float = DEFAULT_TOL) -> Equilibrium:
    """Solve the unique disclosure equilibrium for the realized first signal.

    ``tol`` is the argument tolerance handed to the bracketed root finder.
    Raises :class:`DegenerateCaseError` when r_obs == r0 (the two case
    constructions coincide and neither applies) and :class:`BracketError`
    if the analytical sign pattern of the bracket fails numerically.
    """
    if params.r_obs == params.r0:
        raise DegenerateCaseError(
            "r_obs == r0: the disclosure equilibrium is not defined at the boundary"
        )
    c = params.neutral_point
    if params.case is Case.SHORT:
        lo, hi = params.mu0, c
        f = lambda x: short_case_root(params, x)
    else:
        lo, hi = c, params.mu0
        f = lambda x: long_case_root(params, x)
    flo, fhi = f(lo), f(hi)
    if not (flo < 0.0 < fhi):
        raise BracketError(
            f"root bracket lost its sign change: f({lo})={flo}, f({hi})={fhi}"
        )
    root = brentq(f, lo, hi, xtol=tol, maxiter=200)
    root = float(root)
    if params.case is Case.SHORT:
        x_low, x_high, mu_nd = root, _upper_from_lower(params, root), root
    else:
        x_low, x_high, mu_nd = _lower_from_upper(params, root), root, root
    return Equilibrium(
        case=params.case,
        x_low=x_low,
        x_high=x_high,
        mu_nd=mu_nd,
        neutral_point=c,
        residual=float(f(root)),
    )


def verify_bayes(params: ModelParams, eq: Equilibrium) -> float:
    """Gap between eq.mu_nd and a direct Bayes recomputation.

    Recomputes the posterior mean of x given a simple report from the raw
    mixture (uninformed mass at mu0, informed mass on the withheld interval)
    with the interval moment obtained by quadrature of x*g, independent of
    the partial-integral route used by the solver.
    """
    d = params.x_dist
    interval_mass = d.cdf(eq.x_high) - d.cdf(eq.x_low)
    moment, _ = integrate.quad(
        lambda t: t * d.pdf(t), eq.x_low, eq.x_high, epsabs=1e-12, epsrel=1e-12,
        limit=400,
    )
    num = (1.0 - params.beta) * params.mu0 + params.beta * moment
    den = (1.0 - params.beta) + params.beta * interval_mass
    return abs(num / den - eq.mu_nd)


def strategy(params: ModelParams, eq: Equilibrium, x: float | None = None):
    """Equilibrium message and position for an investor who disclosed r.

    ``x is None`` means the investor never learned x (partially informed).
    Ties at the thresholds withhold: the indifference is resolved toward the
    simple report for determinism.
    """
    case_position = Position.SHORT if eq.case is Case.SHORT else Position.LONG
    if x is None:
        return Message.SIMPLE, case_position
    if x < eq.x_low:
        return Message.ELABORATE, Position.SHORT
    if x > eq.x_high:
        return Message.ELABORATE, Position.LONG
    return Message.SIMPLE, case_position


def report_stats(params: ModelParams, eq: Equilibrium) -> ReportStats:
    """Report frequencies, extremity, misleading mass, and price reaction."""
    d = params.x_dist
    c = eq.neutral_point
    g_low, g_high, g_c = d.cdf(eq.x_low), d.cdf(eq.x_high), d.cdf(c)
    freq_neg = g_low
    freq_pos = 1.0 - g_high
    extremity_neg = max(0.0, g_c - g_low)
    extremity_pos = max(0.0, g_high - g_c)
    if eq.case is Case.SHORT:
        misleading = max(0.0, g_high - g_c)
    else:
        misleading = max(0.0, g_c - g_low)
    return ReportStats(
        freq_neg=freq_neg,
        freq_pos=freq_pos,
        elaborateness=freq_neg + freq_pos,
        extremity_neg=extremity_neg,
        extremity_pos=extremity_pos,
        extremity=extremity_neg + extremity_pos,
        misleading_prob=misleading,
        price_reaction=abs(params.prior_price - params.r_obs * eq.mu_nd),
    )
