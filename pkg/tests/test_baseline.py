import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from disclosure_eq import (
    Case,
    DegenerateCaseError,
    Message,
    ModelParams,
    ParameterError,
    Position,
    WrongCaseError,
    long_case_root,
    make_normal,
    report_stats,
    short_case_root,
    solve_baseline,
    strategy,
    verify_bayes,
    vol_elaborate,
    vol_simple,
)

# frozen independent-oracle values (bisection + quadrature, tests/oracles.py)
SHORT_FIXTURE = (1.1264199215604376, 2.0970644531599514)  # beta=.5 q=.8 r=.5
LONG_FIXTURE = (0.4519326609548527, 0.9326060514063257)   # beta=.5 q=.8 r=2


@pytest.mark.parametrize(
    "field,value",
    [
        ("alpha", 0.0),
        ("alpha", 1.5),
        ("beta", 0.0),
        ("beta", 1.0),
        ("q", -0.1),
        ("q", 1.1),
        ("r_obs", 0.0),
        ("r0", -1.0),
    ],
)
def test_params_validation(nx, field, value):
    kwargs = dict(alpha=0.5, beta=0.5, q=0.8, r_obs=0.5, r0=1.0, x_dist=nx)
    kwargs[field] = value
    with pytest.raises(ParameterError):
        ModelParams(**kwargs)


def test_params_reject_nonpositive_signal_mean():
    with pytest.raises(ParameterError):
        ModelParams(
            alpha=0.5, beta=0.5, q=0.8, r_obs=0.5, r0=1.0, x_dist=make_normal(0.0, 1.0)
        )


def test_vol_simple_collapses_when_q_zero(nx):
    p = ModelParams(alpha=0.5, beta=0.5, q=0.0, r_obs=0.5, r0=1.0, x_dist=nx)
    expected = abs(p.r_obs * 1.3 - p.prior_price)
    assert vol_simple(p, 1.3, -5.0) == expected
    assert vol_simple(p, 1.3, 7.0) == expected


def test_vol_simple_zero_at_neutral_when_q_one(nx):
    p = ModelParams(alpha=0.5, beta=0.5, q=1.0, r_obs=0.5, r0=1.0, x_dist=nx)
    assert vol_simple(p, 0.7, p.neutral_point) == pytest.approx(0.0, abs=1e-15)


def test_vol_elaborate_direct_values(short_params):
    p = short_params
    assert vol_elaborate(p, p.neutral_point) == pytest.approx(0.0, abs=1e-15)
    assert vol_elaborate(p, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert vol_elaborate(p, 2.0 * p.neutral_point) == pytest.approx(
        p.prior_price, abs=1e-15
    )


def test_volatilities_cross_at_lower_threshold(short_params):
    eq = solve_baseline(short_params)
    assert vol_simple(short_params, eq.mu_nd, eq.x_low) == pytest.approx(
        vol_elaborate(short_params, eq.x_low), abs=1e-10
    )


def test_short_root_bracket_signs(short_params):
    p = short_params
    c = p.neutral_point
    assert short_case_root(p, p.mu0) < 0.0
    assert short_case_root(p, c) == pytest.approx(
        (1.0 - p.beta) * (c - p.mu0), abs=1e-12
    )
    assert short_case_root(p, c) > 0.0


def test_long_root_bracket_signs(long_params):
    p = long_params
    assert long_case_root(p, p.neutral_point) < 0.0
    assert long_case_root(p, p.mu0) > 0.0


def test_root_functions_vanishing_competence(nx):
    # as beta -> 0 only the uninformed term survives
    p = ModelParams(alpha=0.5, beta=1e-9, q=0.8, r_obs=0.5, r0=1.0, x_dist=nx)
    assert short_case_root(p, 1.3) == pytest.approx(1.3 - p.mu0, abs=1e-6)
    pl = ModelParams(alpha=0.5, beta=1e-9, q=0.8, r_obs=2.0, r0=1.0, x_dist=nx)
    assert long_case_root(pl, 0.9) == pytest.approx(0.9 - pl.mu0, abs=1e-6)


def test_root_functions_reject_wrong_case(short_params, long_params):
    with pytest.raises(WrongCaseError):
        short_case_root(long_params, 0.7)
    with pytest.raises(WrongCaseError):
        long_case_root(short_params, 1.5)


@pytest.mark.parametrize("params_name", ["short_params", "long_params"])
def test_root_function_monotone_on_bracket(params_name, request):
    p = request.getfixturevalue(params_name)
    c = p.neutral_point
    if p.case is Case.SHORT:
        grid = np.linspace(p.mu0, c, 100)
        vals = [short_case_root(p, x) for x in grid]
    else:
        grid = np.linspace(c, p.mu0, 100)
        vals = [long_case_root(p, x) for x in grid]
    assert np.all(np.diff(vals) > 0.0)
    assert vals[0] < 0.0 < vals[-1]


def test_solve_short_matches_oracle_fixture(short_params):
    eq = solve_baseline(short_params)
    assert eq.case is Case.SHORT
    assert eq.x_low == pytest.approx(SHORT_FIXTURE[0], abs=1e-9)
    assert eq.x_high == pytest.approx(SHORT_FIXTURE[1], abs=1e-9)
    assert eq.mu_nd == eq.x_low
    assert abs(eq.residual) < 1e-10
    assert short_params.mu0 < eq.x_low < eq.neutral_point < eq.x_high


def test_solve_long_matches_oracle_fixture(long_params):
    eq = solve_baseline(long_params)
    assert eq.case is Case.LONG
    assert eq.x_low == pytest.approx(LONG_FIXTURE[0], abs=1e-9)
    assert eq.x_high == pytest.approx(LONG_FIXTURE[1], abs=1e-9)
    assert eq.mu_nd == eq.x_high
    assert eq.x_low < eq.neutral_point < eq.x_high < long_params.mu0


def test_solve_agrees_with_live_oracle(nx):
    beta, q, r = 0.35, 0.45, 0.7
    p = ModelParams(alpha=0.5, beta=beta, q=q, r_obs=r, r0=1.0, x_dist=nx)
    eq = solve_baseline(p)
    x_low, x_high, _ = oracles.solve_short(beta, q, r, 1.0, 1.0, 0.5)
    assert eq.x_low == pytest.approx(x_low, abs=1e-9)
    assert eq.x_high == pytest.approx(x_high, abs=1e-9)


def test_q_one_pins_upper_threshold_exactly(nx):
    p = ModelParams(alpha=0.5, beta=0.5, q=1.0, r_obs=0.5, r0=1.0, x_dist=nx)
    eq = solve_baseline(p)
    assert abs(eq.x_high - p.neutral_point) <= 1e-12


def test_full_competence_limit_collapses_interval(nx):
    p = ModelParams(alpha=0.5, beta=1.0 - 1e-6, q=0.8, r_obs=0.9, r0=1.0, x_dist=nx)
    eq = solve_baseline(p)
    assert abs(eq.x_high - eq.x_low) < 1e-3
    # the collapsed interval sits at the value-neutral point
    assert abs(eq.x_low - p.neutral_point) < 2e-3


def test_interval_shrinks_toward_full_competence(nx):
    widths = []
    for beta in (1.0 - 1e-2, 1.0 - 1e-4, 1.0 - 1e-6):
        p = ModelParams(alpha=0.5, beta=beta, q=0.8, r_obs=0.5, r0=1.0, x_dist=nx)
        eq = solve_baseline(p)
        widths.append(eq.x_high - eq.x_low)
    assert widths[0] > widths[1] > widths[2] > 0.0


def test_no_competence_limit_pins_lower_threshold(nx):
    p = ModelParams(alpha=0.5, beta=1e-6, q=0.8, r_obs=0.5, r0=1.0, x_dist=nx)
    eq = solve_baseline(p)
    assert abs(eq.x_low - p.mu0) < 1e-3
    assert verify_bayes(p, eq) < 1e-8
    # with (almost) nobody informed the non-disclosure mean is the prior mean
    assert abs(eq.mu_nd - p.mu0) < 1e-3


def test_alpha_never_moves_thresholds(nx):
    eqs = [
        solve_baseline(
            ModelParams(alpha=a, beta=0.5, q=0.8, r_obs=0.5, r0=1.0, x_dist=nx)
        )
        for a in (0.1, 0.9)
    ]
    assert abs(eqs[0].x_low - eqs[1].x_low) < 1e-12
    assert abs(eqs[0].x_high - eqs[1].x_high) < 1e-12


def test_degenerate_signal_rejected(nx):
    p = ModelParams(alpha=0.5, beta=0.5, q=0.8, r_obs=1.0, r0=1.0, x_dist=nx)
    with pytest.raises(DegenerateCaseError):
        solve_baseline(p)
    with pytest.raises(DegenerateCaseError):
        p.case


def test_bayes_consistency_both_cases(short_params, long_params):
    for p in (short_params, long_params):
        eq = solve_baseline(p)
        assert verify_bayes(p, eq) < 1e-8


def test_strategy_regions_short(short_params):
    eq = solve_baseline(short_params)
    assert strategy(short_params, eq, eq.x_low - 1e-6) == (
        Message.ELABORATE,
        Position.SHORT,
    )
    assert strategy(short_params, eq, eq.x_high + 1e-6) == (
        Message.ELABORATE,
        Position.LONG,
    )
    mid = 0.5 * (eq.x_low + eq.x_high)
    assert strategy(short_params, eq, mid) == (Message.SIMPLE, Position.SHORT)
    # ties are withheld
    assert strategy(short_params, eq, eq.x_low)[0] is Message.SIMPLE
    assert strategy(short_params, eq, eq.x_high)[0] is Message.SIMPLE
    assert strategy(short_params, eq, None) == (Message.SIMPLE, Position.SHORT)


def test_strategy_regions_long(long_params):
    eq = solve_baseline(long_params)
    mid = 0.5 * (eq.x_low + eq.x_high)
    assert strategy(long_params, eq, mid) == (Message.SIMPLE, Position.LONG)
    assert strategy(long_params, eq, None) == (Message.SIMPLE, Position.LONG)


def test_report_stats_identities(short_params):
    eq = solve_baseline(short_params)
    st_ = report_stats(short_params, eq)
    d = short_params.x_dist
    assert st_.freq_neg == pytest.approx(d.cdf(eq.x_low), abs=1e-15)
    assert st_.freq_pos == pytest.approx(1.0 - d.cdf(eq.x_high), abs=1e-15)
    assert st_.elaborateness == pytest.approx(st_.freq_neg + st_.freq_pos, abs=1e-15)
    assert st_.extremity == pytest.approx(
        d.cdf(eq.x_high) - d.cdf(eq.x_low), abs=1e-12
    )
    assert st_.price_reaction == pytest.approx(
        short_params.prior_price - short_params.r_obs * eq.mu_nd, abs=1e-15
    )
    assert st_.misleading_prob == pytest.approx(st_.extremity_pos, abs=1e-15)


def test_report_stats_q_one_kills_misleading(nx):
    p = ModelParams(alpha=0.5, beta=0.5, q=1.0, r_obs=0.5, r0=1.0, x_dist=nx)
    eq = solve_baseline(p)
    assert report_stats(p, eq).misleading_prob == 0.0


def test_report_stats_full_competence_forces_elaborate(nx):
    p = ModelParams(alpha=0.5, beta=1.0 - 1e-6, q=0.8, r_obs=0.9, r0=1.0, x_dist=nx)
    eq = solve_baseline(p)
    assert report_stats(p, eq).elaborateness > 0.999


def test_elaborateness_nondecreasing_in_q_low_competence(nx):
    values = []
    for q in np.linspace(0.0, 1.0, 11):
        p = ModelParams(alpha=0.5, beta=0.5, q=float(q), r_obs=0.5, r0=1.0, x_dist=nx)
        values.append(report_stats(p, solve_baseline(p)).elaborateness)
    assert np.all(np.diff(values) >= -1e-12)


@pytest.mark.parametrize("params_name", ["short_params", "long_params"])
def test_withholding_is_optimal_on_the_interval(params_name, request):
    p = request.getfixturevalue(params_name)
    eq = solve_baseline(p)
    inside = np.linspace(eq.x_low, eq.x_high, 1000)
    pq = vol_simple(p, eq.mu_nd, inside)
    pe = vol_elaborate(p, inside)
    assert np.all(pq >= pe - 1e-10)
    pad = p.x_dist.spread()
    below = np.linspace(eq.x_low - pad, eq.x_low - 1e-6, 300)
    above = np.linspace(eq.x_high + 1e-6, eq.x_high + pad, 300)
    for outside in (below, above):
        assert np.all(
            vol_simple(p, eq.mu_nd, outside) < vol_elaborate(p, outside)
        )


def test_simple_report_price_stays_on_case_side(short_params, long_params):
    for p in (short_params, long_params):
        eq = solve_baseline(p)
        xs = np.linspace(eq.x_low, eq.x_high, 500)
        expected_price = (
            p.q * p.r_obs * xs + (1.0 - p.q) * p.r_obs * eq.mu_nd
        )
        if eq.case is Case.SHORT:
            assert np.all(expected_price < p.prior_price)
        else:
            assert np.all(expected_price > p.prior_price)


@pytest.mark.parametrize("sigma", [0.05, 0.5, 5.0, 20.0])
@pytest.mark.parametrize("beta", [1e-4, 0.5, 1 - 1e-4])
@pytest.mark.parametrize("r", [0.01, 0.99, 1.01, 100.0])
def test_solver_survives_extreme_parameters(sigma, beta, r):
    # wide dispersion, near-degenerate competence, and signals orders of
    # magnitude from the prior must all keep the bracket sign pattern
    p = ModelParams(
        alpha=0.5, beta=beta, q=0.7, r_obs=r, r0=1.0, x_dist=make_normal(1.0, sigma)
    )
    eq = solve_baseline(p)
    assert abs(eq.residual) <= 1e-9
    if eq.case is Case.SHORT:
        assert p.mu0 < eq.x_low < p.neutral_point <= eq.x_high
    else:
        assert eq.x_low <= p.neutral_point < eq.x_high < p.mu0
    assert verify_bayes(p, eq) < 1e-7


def test_solver_accepts_fallback_distribution():
    # a non-normal signal distribution using the base-class quadrature
    # fallback must flow through the entire solve/verify path
    from test_distributions import LogisticX

    p = ModelParams(
        alpha=0.5, beta=0.5, q=0.8, r_obs=0.5, r0=1.0, x_dist=LogisticX(1.0, 0.3)
    )
    eq = solve_baseline(p)
    assert p.mu0 < eq.x_low < p.neutral_point < eq.x_high
    assert abs(eq.residual) <= 1e-10
    assert verify_bayes(p, eq) < 1e-8
    assert abs(
        vol_simple(p, eq.mu_nd, eq.x_high) - vol_elaborate(p, eq.x_high)
    ) < 1e-8


@settings(max_examples=25, deadline=None)
@given(
    beta=st.floats(min_value=0.02, max_value=0.98),
    q=st.floats(min_value=0.0, max_value=1.0),
    r=st.one_of(
        st.floats(min_value=0.15, max_value=0.95),
        st.floats(min_value=1.05, max_value=5.0),
    ),
)
def test_solved_thresholds_satisfy_indifference(nx, beta, q, r):
    p = ModelParams(alpha=0.5, beta=beta, q=q, r_obs=r, r0=1.0, x_dist=nx)
    eq = solve_baseline(p)
    assert eq.x_low <= eq.neutral_point <= eq.x_high
    assert abs(
        vol_simple(p, eq.mu_nd, eq.x_low) - vol_elaborate(p, eq.x_low)
    ) < 1e-8
    assert abs(
        vol_simple(p, eq.mu_nd, eq.x_high) - vol_elaborate(p, eq.x_high)
    ) < 1e-8
    assert eq.mu_nd == (eq.x_low if eq.case is Case.SHORT else eq.x_high)
    assert abs(eq.residual) <= 1e-10
