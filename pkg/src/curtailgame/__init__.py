"""Wind curtailment rules and a two-player transmission investment game."""
from .curtailment import GeneratorSpec, Rule, TimelineResult, make_fleet, simulate
from .stackelberg import (
    BinnedData,
    CostParams,
    DemandProfile,
    EquilibriumResult,
    ReplayData,
    StrategyGrid,
    expected_curtailment,
    expected_generation,
    scenario_sweep,
    solve_equilibrium,
)
from .windmodel import (
    BetaParams,
    HourSeasonKey,
    JointPowerDistribution,
    PowerCurve,
    WeibullParams,
    WindSeries,
    fit_beta,
    fit_weibull,
    fleet_wind,
)

__version__ = "0.1.0"

__all__ = [
    "BetaParams",
    "BinnedData",
    "CostParams",
    "DemandProfile",
    "EquilibriumResult",
    "GeneratorSpec",
    "HourSeasonKey",
    "JointPowerDistribution",
    "PowerCurve",
    "ReplayData",
    "Rule",
    "StrategyGrid",
    "TimelineResult",
    "WeibullParams",
    "WindSeries",
    "expected_curtailment",
    "expected_generation",
    "fit_beta",
    "fit_weibull",
    "fleet_wind",
    "make_fleet",
    "scenario_sweep",
    "simulate",
    "solve_equilibrium",
]
