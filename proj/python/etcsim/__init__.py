"""Monte Carlo simulation of triggered impulsive consensus control."""

from ._etcsim import (
    AverageRule,
    CostReport,
    FixedRule,
    InfoScenario,
    LeaderRule,
    LevelBroadcast,
    LevelGlobal,
    PeriodicAsync,
    PeriodicSync,
    ScenarioConfig,
    __version__,
    calibrate_delta_bl,
    consensus_cost,
    expected_occupation_integral,
    j_et_b,
    j_tt_b,
    j_tt_bl,
    mean_first_passage,
    run_batch,
    trajectory,
    tt_information_gap,
)

__all__ = [
    "AverageRule",
    "CostReport",
    "FixedRule",
    "InfoScenario",
    "LeaderRule",
    "LevelBroadcast",
    "LevelGlobal",
    "PeriodicAsync",
    "PeriodicSync",
    "ScenarioConfig",
    "calibrate_delta_bl",
    "consensus_cost",
    "expected_occupation_integral",
    "j_et_b",
    "j_tt_b",
    "j_tt_bl",
    "mean_first_passage",
    "run_batch",
    "trajectory",
    "tt_information_gap",
]
