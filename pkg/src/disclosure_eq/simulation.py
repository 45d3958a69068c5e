"""Monte Carlo simulation of the disclosure game and a deviation checker.

``simulate`` plays out the full date-1/2/3 timeline path by path: draw who
knows what, apply the solved equilibrium strategy, realize outside
revelation (baseline) or the firm's response (extension), price the final
date, and book the round-trip profit against the prior price.  The run is
conditioned on the realized first signal equaling ``params.r_obs`` for the
strata in which the investor learns it, so the empirical non-disclosure
mean, report frequencies, and per-message prices estimate exactly the
quantities the analytic solver produces for that signal; paths on which the
investor never learns the first signal draw it fresh from ``r_dist``, which
is what the market's unconditional pricing of silence assumes.

Random streams are counter-based: path block j uses a Philox generator
keyed by the master seed with counter j << 128, and blocks have a fixed
size, so results are bit-identical across runs and independent of how
blocks might be farmed out to workers.

``deviation_check`` is the no-profitable-deviation certificate.  It prices
every feasible (message, position) pair for a grid of informed types and
for the partially informed type under the equilibrium market beliefs, using
exact expectations rather than sampling, and confirms the equilibrium
action attains the maximum within tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .baseline import (
    Case,
    Equilibrium,
    Message,
    ModelParams,
    Position,
    solve_baseline,
    strategy,
)
from .distributions import LogNormalR, RDistribution
from .errors import EquilibriumViolationError, ParameterError
from .extension import ExtCase, ExtEquilibrium, ExtParams, solve_extension

BASELINE = "baseline"
EXTENSION = "extension"

_BLOCK = 1 << 16  # paths per random block; fixed so streams never depend on scheduling

UNINFORMED = "uninformed"
PARTIAL = "partial"
INFORMED = "informed"

DEVIATION_TOL = 1e-9


@dataclass(frozen=True)
class SimConfig:
    n_paths: int
    seed: int
    model: str  # BASELINE or EXTENSION
    params: ModelParams | ExtParams
    r_dist: RDistribution | None = None  # defaults to LogNormalR(params.r0)
    tol: float = 1e-12

    def __post_init__(self):
        if self.n_paths < 1:
            raise ParameterError(f"n_paths must be >= 1, got {self.n_paths}")
        if self.seed < 0:
            raise ParameterError(f"seed must be nonnegative, got {self.seed}")
        if self.model not in (BASELINE, EXTENSION):
            raise ParameterError(f"unknown model {self.model!r}")
        expected = ModelParams if self.model == BASELINE else ExtParams
        if not isinstance(self.params, expected):
            raise ParameterError(
                f"model {self.model!r} needs {expected.__name__} parameters"
            )


@dataclass(frozen=True)
class Estimate:
    value: float
    se: float


@dataclass(frozen=True)
class SimReport:
    model: str
    n_paths: int
    seed: int
    empirical_mu_nd: Estimate
    mean_profit_by_type: dict
    empirical_freqs: dict
    price_mean_by_message: dict
    counts: dict

    def to_dict(self) -> dict:
        def pack(est):
            return {"value": est.value, "se": est.se}

        return {
            "model": self.model,
            "n_paths": self.n_paths,
            "seed": self.seed,
            "empirical_mu_nd": pack(self.empirical_mu_nd),
            "mean_profit_by_type": {k: pack(v) for k, v in self.mean_profit_by_type.items()},
            "empirical_freqs": {k: pack(v) for k, v in self.empirical_freqs.items()},
            "price_mean_by_message": {
                k: pack(v) for k, v in self.price_mean_by_message.items()
            },
            "counts": dict(self.counts),
        }


class _Moments:
    """Streaming (n, sum, sum of squares) accumulator."""

    __slots__ = ("n", "s", "s2")

    def __init__(self):
        self.n = 0
        self.s = 0.0
        self.s2 = 0.0

    def add(self, values: np.ndarray):
        self.n += int(values.size)
        self.s += float(np.sum(values))
        self.s2 += float(np.sum(values * values))

    def estimate(self) -> Estimate:
        if self.n == 0:
            return Estimate(math.nan, math.nan)
        mean = self.s / self.n
        if self.n == 1:
            return Estimate(mean, math.nan)
        var = max(0.0, (self.s2 - self.n * mean * mean) / (self.n - 1))
        return Estimate(mean, math.sqrt(var / self.n))


def _freq_estimate(count: int, total: int) -> Estimate:
    if total == 0:
        return Estimate(math.nan, math.nan)
    v = count / total
    return Estimate(v, math.sqrt(v * (1.0 - v) / total))


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=block << 128))


def simulate(cfg: SimConfig) -> SimReport:
    """Run the Monte Carlo game and return empirical summaries with SEs."""
    params = cfg.params
    r_dist = cfg.r_dist if cfg.r_dist is not None else LogNormalR(params.r0)
    if cfg.model == BASELINE:
        eq = solve_baseline(params, cfg.tol)
        short_side = eq.case is Case.SHORT
        x_low, x_high = eq.x_low, eq.x_high
    else:
        eq = solve_extension(params, cfg.tol)
        short_side = eq.case is ExtCase.BELOW_CUTOFF
        x_low, x_high = eq.x_low_p, eq.x_high_p
    mu_nd = eq.mu_nd
    neutral = params.neutral_point
    prior = params.prior_price
    r_obs = params.r_obs
    case_pos = -1.0 if short_side else 1.0

    profit_acc = {UNINFORMED: _Moments(), PARTIAL: _Moments(), INFORMED: _Moments()}
    price_acc = {m.value: _Moments() for m in (Message.ELABORATE, Message.SIMPLE, Message.NONE)}
    mu_nd_acc = _Moments()
    counts = {
        "paths": 0,
        "r_informed": 0,
        "x_informed": 0,
        "elaborate": 0,
        "simple": 0,
        "none": 0,
        "mu_nd_obs": 0,
    }
    if cfg.model == EXTENSION:
        counts["firm_responses"] = 0
    misleading_count = 0

    n_blocks = (cfg.n_paths + _BLOCK - 1) // _BLOCK
    for block in range(n_blocks):
        n = min(_BLOCK, cfg.n_paths - block * _BLOCK)
        rng = _block_rng(cfg.seed, block)
        u = rng.random((5, n))
        u_learn_r, u_learn_x, u_x, u_r, u_event = u
        # quantile transforms; floor the uniforms to keep quantile finite
        x = params.x_dist.quantile(np.maximum(u_x, 2.0**-53))
        r_outside = r_dist.quantile(np.maximum(u_r, 2.0**-53))

        informed_r = u_learn_r < params.alpha
        informed_x = informed_r & (u_learn_x < params.beta)
        partial = informed_r & ~informed_x
        elaborate = informed_x & ((x < x_low) | (x > x_high))
        simple = partial | (informed_x & ~elaborate)
        none_msg = ~informed_r

        position = np.zeros(n)
        position[simple] = case_pos
        position[elaborate] = np.where(x[elaborate] < x_low, -1.0, 1.0)

        p2 = np.empty(n)
        if cfg.model == BASELINE:
            reveal = u_event < params.q
            p2[elaborate] = r_obs * x[elaborate]
            p2[simple] = np.where(
                reveal[simple], r_obs * x[simple], r_obs * mu_nd
            )
            p2[none_msg] = np.where(
                reveal[none_msg], r_outside[none_msg] * x[none_msg], prior
            )
            silent_simple = simple & ~reveal
        else:
            firm_informed = u_event < params.p_firm
            responds = simple & firm_informed & (x > mu_nd)
            p2[elaborate] = r_obs * x[elaborate]
            p2[simple] = np.where(responds[simple], r_obs * x[simple], r_obs * mu_nd)
            p2[none_msg] = prior
            silent_simple = simple & ~responds
            counts["firm_responses"] += int(np.count_nonzero(responds))

        profit = position * (p2 - prior)

        profit_acc[UNINFORMED].add(profit[none_msg])
        profit_acc[PARTIAL].add(profit[partial])
        profit_acc[INFORMED].add(profit[informed_x])
        price_acc[Message.ELABORATE.value].add(p2[elaborate])
        price_acc[Message.SIMPLE.value].add(p2[simple])
        price_acc[Message.NONE.value].add(p2[none_msg])
        mu_nd_acc.add(x[silent_simple])

        withheld = informed_x & ~elaborate
        if short_side:
            misleading = withheld & (x > neutral)
        else:
            misleading = withheld & (x < neutral)
        misleading_count += int(np.count_nonzero(misleading))

        counts["paths"] += n
        counts["r_informed"] += int(np.count_nonzero(informed_r))
        counts["x_informed"] += int(np.count_nonzero(informed_x))
        counts["elaborate"] += int(np.count_nonzero(elaborate))
        counts["simple"] += int(np.count_nonzero(simple))
        counts["none"] += int(np.count_nonzero(none_msg))
        counts["mu_nd_obs"] += int(np.count_nonzero(silent_simple))

    freqs = {
        "elaborate": _freq_estimate(counts["elaborate"], counts["r_informed"]),
        "simple": _freq_estimate(counts["simple"], counts["r_informed"]),
        "misleading": _freq_estimate(misleading_count, counts["r_informed"]),
    }
    if cfg.model == EXTENSION:
        freqs["firm_response"] = _freq_estimate(counts["firm_responses"], counts["simple"])

    return SimReport(
        model=cfg.model,
        n_paths=cfg.n_paths,
        seed=cfg.seed,
        empirical_mu_nd=mu_nd_acc.estimate(),
        mean_profit_by_type={k: acc.estimate() for k, acc in profit_acc.items()},
        empirical_freqs=freqs,
        price_mean_by_message={k: acc.estimate() for k, acc in price_acc.items()},
        counts=counts,
    )


# ---------------------------------------------------------------------------
# Deviation checking under equilibrium beliefs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeviationEntry:
    state: str            # "informed x=..." or "partial"
    message: Message
    position: int         # -1, 0, +1
    expected_profit: float
    is_equilibrium: bool


@dataclass(frozen=True)
class DeviationTable:
    entries: list = field(default_factory=list)
    max_gap: float = -math.inf  # best deviation profit minus equilibrium profit
    worst_state: str = ""
    tol: float = DEVIATION_TOL


def default_deviation_grid(params, x_low: float, x_high: float, n: int = 201) -> np.ndarray:
    """Grid spanning both disclosure tails and the withholding interval."""
    pad = params.x_dist.spread()
    return np.linspace(x_low - pad, x_high + pad, n)


def _collect(states, tol):
    """Assemble the table from (state, [(message, pos, profit, is_eq), ...])."""
    entries = []
    max_gap = -math.inf
    worst = ""
    for state, actions in states:
        eq_profit = None
        best_alt = -math.inf
        for message, pos, profit, is_eq in actions:
            entries.append(DeviationEntry(state, message, pos, profit, is_eq))
            if is_eq:
                eq_profit = profit
            else:
                best_alt = max(best_alt, profit)
        gap = best_alt - eq_profit
        if gap > max_gap:
            max_gap, worst = gap, state
    table = DeviationTable(entries=entries, max_gap=max_gap, worst_state=worst, tol=tol)
    if max_gap > tol:
        err = EquilibriumViolationError(
            f"deviation improves on the equilibrium action by {max_gap:.3e} "
            f"(tolerance {tol:.1e}) in state {worst!r}"
        )
        err.table = table
        raise err
    return table


def _state_actions(drifts, eq_message, eq_position):
    """Expand per-message price drifts into all (message, position) actions."""
    actions = []
    for message, drift in drifts.items():
        for pos in (-1, 0, 1):
            profit = pos * drift
            is_eq = message is eq_message and pos == int(eq_position)
            actions.append((message, pos, profit, is_eq))
    return actions


def deviation_check(
    params: ModelParams,
    eq: Equilibrium,
    x_grid: np.ndarray | None = None,
    tol: float = DEVIATION_TOL,
) -> DeviationTable:
    """Certify that no feasible action beats the equilibrium one, baseline game.

    Expected date-3 prices under equilibrium beliefs: an elaborate report is
    priced at r*x, a simple report at the q-mixture of r*x and r*mu_nd, and
    silence at the q-mixture of r*x and the prior.  Raises
    :class:`EquilibriumViolationError` when any (message, position) pair
    strictly beats the flagged equilibrium action by more than ``tol``.
    """
    if not eq.x_low <= eq.neutral_point <= eq.x_high:
        raise EquilibriumViolationError(
            "value-neutral point escaped the withholding interval"
        )
    if x_grid is None:
        x_grid = default_deviation_grid(params, eq.x_low, eq.x_high)
    x_grid = np.asarray(x_grid, dtype=float)
    if x_grid.min() >= eq.x_low or x_grid.max() <= eq.x_high:
        raise ParameterError("x_grid must cover both tails and the withholding interval")

    r, q, prior, mu_nd = params.r_obs, params.q, params.prior_price, eq.mu_nd
    states = []
    for x in x_grid:
        msg, pos = strategy(params, eq, float(x))
        drifts = {
            Message.ELABORATE: r * x - prior,
            Message.SIMPLE: q * r * x + (1.0 - q) * r * mu_nd - prior,
            Message.NONE: q * (r * x - prior),
        }
        states.append((f"informed x={x:.6g}", _state_actions(drifts, msg, pos)))

    msg, pos = strategy(params, eq, None)
    mu0 = params.mu0
    drifts = {
        Message.SIMPLE: (1.0 - q) * r * mu_nd + q * r * mu0 - prior,
        Message.NONE: q * (r * mu0 - prior),
    }
    states.append(("partial", _state_actions(drifts, msg, pos)))
    return _collect(states, tol)


def _ext_strategy(eq: ExtEquilibrium, x: float | None):
    case_pos = Position.SHORT if eq.case is ExtCase.BELOW_CUTOFF else Position.LONG
    if x is None:
        return Message.SIMPLE, case_pos
    if x < eq.x_low_p:
        return Message.ELABORATE, Position.SHORT
    if x > eq.x_high_p:
        return Message.ELABORATE, Position.LONG
    return Message.SIMPLE, case_pos


def deviation_check_extension(
    params: ExtParams,
    eq: ExtEquilibrium,
    x_grid: np.ndarray | None = None,
    tol: float = DEVIATION_TOL,
) -> DeviationTable:
    """Deviation certificate for the firm-response game.

    A simple report is priced accounting for the firm's best response: an
    informed firm (probability p_firm) discloses x exactly when x exceeds
    its threshold mu_nd.  Total silence leaves the price at the prior, so
    its profit is identically zero.
    """
    if not eq.x_low_p <= params.neutral_point <= eq.x_high_p:
        raise EquilibriumViolationError(
            "value-neutral point escaped the withholding interval"
        )
    if x_grid is None:
        x_grid = default_deviation_grid(params, eq.x_low_p, eq.x_high_p)
    x_grid = np.asarray(x_grid, dtype=float)
    if x_grid.min() >= eq.x_low_p or x_grid.max() <= eq.x_high_p:
        raise ParameterError("x_grid must cover both tails and the withholding interval")

    d = params.x_dist
    r, p, prior, mu_nd = params.r_obs, params.p_firm, params.prior_price, eq.mu_nd
    states = []
    for x in x_grid:
        msg, pos = _ext_strategy(eq, float(x))
        respond = 1.0 if x > mu_nd else 0.0
        simple_price = p * respond * r * x + (1.0 - p * respond) * r * mu_nd
        drifts = {
            Message.ELABORATE: r * x - prior,
            Message.SIMPLE: simple_price - prior,
            Message.NONE: 0.0,
        }
        states.append((f"informed x={x:.6g}", _state_actions(drifts, msg, pos)))

    # partially informed: expectation over x of the firm-response pricing;
    # E[X 1{X > t}] = mu0 - (t G(t) - L(t))
    msg, pos = _ext_strategy(eq, None)
    t = mu_nd
    mean_above = params.mu0 - (t * d.cdf(t) - d.lower_partial_integral(t))
    simple_price = p * r * mean_above + (1.0 - p * (1.0 - d.cdf(t))) * r * mu_nd
    drifts = {
        Message.SIMPLE: simple_price - prior,
        Message.NONE: 0.0,
    }
    states.append(("partial", _state_actions(drifts, msg, pos)))
    return _collect(states, tol)
