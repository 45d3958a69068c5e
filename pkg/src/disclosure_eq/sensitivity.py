"""Threshold sensitivities to competence (beta) and outside revelation (q).

The thresholds solve a two-equation system: the indifference condition
F(x_low, x_high, beta) = 0 and the linear constraint tying the thresholds
to the neutral point.  Differentiating both and solving the resulting 2x2
linear system gives exact derivatives; the partials of F are

    short case (anchor x_high):
        F_xlow  = beta*(G(x_high) - G(x_low)) + (1 - beta)
        F_xhigh = -beta * g(x_high) * (x_high - x_low)
        F_beta  = integral of (G - G(x_high)) + (mu0 - x_low)
    long case (anchor x_low): the mirror image.

Solving the linear system directly (rather than the eliminated ratio form)
keeps q = 1 regular: the constraint row simply degenerates to d x_high = 0.

``sensitivity_fd`` recomputes the same four derivatives by central (or
second-order one-sided, at the q boundaries) finite differences of the full
solver; it exists as an independent drift guard and never runs in the hot
path.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .baseline import Case, Equilibrium, ModelParams, solve_baseline
from .errors import ParameterError

ANALYTIC = "analytic"
FINITE_DIFFERENCE = "finite-difference"

FD_TOL = 1e-14  # solver argument tolerance for difference quotients


@dataclass(frozen=True)
class ThresholdSensitivity:
    d_xlow_d_beta: float
    d_xhigh_d_beta: float
    d_xlow_d_q: float
    d_xhigh_d_q: float
    method: str  # ANALYTIC or FINITE_DIFFERENCE


def sensitivity_analytic(params: ModelParams, eq: Equilibrium | None = None) -> ThresholdSensitivity:
    """Exact threshold derivatives with respect to beta and q."""
    if eq is None:
        eq = solve_baseline(params)
    d = params.x_dist
    beta, q = params.beta, params.q
    xl, xh = eq.x_low, eq.x_high
    width = xh - xl
    gap = d.lower_partial_integral(xh) - d.lower_partial_integral(xl)
    if eq.case is Case.SHORT:
        f_xl = beta * (d.cdf(xh) - d.cdf(xl)) + (1.0 - beta)
        f_xh = -beta * d.pdf(xh) * width
        f_beta = (gap - d.cdf(xh) * width) + (params.mu0 - xl)
        # constraint: (1-q)*x_low + (1+q)*x_high = 2*neutral
        c_xl, c_xh = 1.0 - q, 1.0 + q
        c_rhs_q = xl - xh
    else:
        f_xl = -beta * d.pdf(xl) * width
        f_xh = beta * (d.cdf(xh) - d.cdf(xl)) + (1.0 - beta)
        f_beta = (gap - d.cdf(xl) * width) + (params.mu0 - xh)
        # constraint: (1+q)*x_low + (1-q)*x_high = 2*neutral
        c_xl, c_xh = 1.0 + q, 1.0 - q
        c_rhs_q = xh - xl
    matrix = np.array([[f_xl, f_xh], [c_xl, c_xh]])
    d_beta = np.linalg.solve(matrix, np.array([-f_beta, 0.0]))
    d_q = np.linalg.solve(matrix, np.array([0.0, c_rhs_q]))
    return ThresholdSensitivity(
        d_xlow_d_beta=float(d_beta[0]),
        d_xhigh_d_beta=float(d_beta[1]),
        d_xlow_d_q=float(d_q[0]),
        d_xhigh_d_q=float(d_q[1]),
        method=ANALYTIC,
    )


def _thresholds(params: ModelParams, tol: float) -> np.ndarray:
    eq = solve_baseline(params, tol)
    return np.array([eq.x_low, eq.x_high])


def _fd_derivative(params, field, step, tol, lo_bound, hi_bound, open_lo, open_hi):
    """Central difference in one parameter, one-sided at the domain edges."""
    value = getattr(params, field)

    def at(v):
        return _thresholds(dataclasses.replace(params, **{field: v}), tol)

    room_lo = value - step > lo_bound if open_lo else value - step >= lo_bound
    room_hi = value + step < hi_bound if open_hi else value + step <= hi_bound
    if room_lo and room_hi:
        return (at(value + step) - at(value - step)) / (2.0 * step)
    if room_hi:
        # second-order forward stencil
        return (-3.0 * at(value) + 4.0 * at(value + step) - at(value + 2.0 * step)) / (
            2.0 * step
        )
    if room_lo:
        # second-order backward stencil
        return (3.0 * at(value) - 4.0 * at(value - step) + at(value - 2.0 * step)) / (
            2.0 * step
        )
    raise ParameterError(
        f"step {step} leaves no room to perturb {field}={value} inside its domain"
    )


def sensitivity_fd(
    params: ModelParams, step: float = 1e-5, tol: float = FD_TOL
) -> ThresholdSensitivity:
    """Finite-difference threshold derivatives; independent of the analytic path."""
    d_beta = _fd_derivative(params, "beta", step, tol, 0.0, 1.0, True, True)
    d_q = _fd_derivative(params, "q", step, tol, 0.0, 1.0, False, False)
    return ThresholdSensitivity(
        d_xlow_d_beta=float(d_beta[0]),
        d_xhigh_d_beta=float(d_beta[1]),
        d_xlow_d_q=float(d_q[0]),
        d_xhigh_d_q=float(d_q[1]),
        method=FINITE_DIFFERENCE,
    )
