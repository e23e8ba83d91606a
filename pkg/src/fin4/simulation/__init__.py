"""Seeded agent-based simulation on top of the engine."""

from .config import (POLICIES, Approver, Creator, Curator, FreeRider, HonestClaimant, Oracle,
                     ScenarioConfig, builtin_scenario, load_scenario, scenario_from_data)
from .metrics import MetricsFrame, frames_csv, live_frame, replay
from .rng import SplitMix64
from .runner import (RunResult, Simulation, agent_account, derived_seed, grid_points, run,
                     sweep, sweep_csv, team_account, write_run, write_sweep)

__all__ = [
    "POLICIES", "Approver", "Creator", "Curator", "FreeRider", "HonestClaimant", "Oracle",
    "ScenarioConfig", "builtin_scenario", "load_scenario", "scenario_from_data",
    "MetricsFrame", "frames_csv", "live_frame", "replay", "SplitMix64",
    "RunResult", "Simulation", "agent_account", "derived_seed", "grid_points", "run",
    "sweep", "sweep_csv", "team_account", "write_run", "write_sweep",
]
