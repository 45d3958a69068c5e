"""Equilibrium solver and simulator for the investor voluntary-disclosure game."""

from .baseline import (
    Case,
    Equilibrium,
    Message,
    ModelParams,
    Position,
    ReportStats,
    long_case_root,
    report_stats,
    short_case_root,
    solve_baseline,
    strategy,
    verify_bayes,
    vol_elaborate,
    vol_simple,
)
from .distributions import (
    LogNormalR,
    NormalX,
    RDistribution,
    XDistribution,
    interval_cdf_integral,
    make_normal,
    x_dist_from_config,
)
from .errors import (
    BracketError,
    DegenerateCaseError,
    EquilibriumViolationError,
    ParameterError,
    WrongCaseError,
)
from .extension import (
    ExtCase,
    ExtEquilibrium,
    ExtParams,
    FirmAction,
    above_cutoff_root,
    below_cutoff_root,
    cutoff_value,
    firm_strategy,
    solve_cutoff,
    solve_extension,
    verify_bayes_extension,
)
from .sensitivity import (
    ANALYTIC,
    FINITE_DIFFERENCE,
    ThresholdSensitivity,
    sensitivity_analytic,
    sensitivity_fd,
)
from .simulation import (
    BASELINE,
    EXTENSION,
    DeviationEntry,
    DeviationTable,
    Estimate,
    SimConfig,
    SimReport,
    default_deviation_grid,
    deviation_check,
    deviation_check_extension,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "ANALYTIC",
    "BASELINE",
    "BracketError",
    "Case",
    "DegenerateCaseError",
    "DeviationEntry",
    "DeviationTable",
    "EXTENSION",
    "Equilibrium",
    "EquilibriumViolationError",
    "Estimate",
    "ExtCase",
    "ExtEquilibrium",
    "ExtParams",
    "FINITE_DIFFERENCE",
    "FirmAction",
    "LogNormalR",
    "Message",
    "ModelParams",
    "NormalX",
    "ParameterError",
    "Position",
    "RDistribution",
    "ReportStats",
    "SimConfig",
    "SimReport",
    "ThresholdSensitivity",
    "WrongCaseError",
    "XDistribution",
    "above_cutoff_root",
    "below_cutoff_root",
    "cutoff_value",
    "default_deviation_grid",
    "deviation_check",
    "deviation_check_extension",
    "firm_strategy",
    "interval_cdf_integral",
    "long_case_root",
    "make_normal",
    "report_stats",
    "sensitivity_analytic",
    "sensitivity_fd",
    "short_case_root",
    "simulate",
    "solve_baseline",
    "solve_cutoff",
    "solve_extension",
    "strategy",
    "verify_bayes",
    "verify_bayes_extension",
    "vol_elaborate",
    "vol_simple",
    "x_dist_from_config",
]
