"""Opportunistic clustering for wireless sensor networks under diurnal heating.

Nodes choose Cluster Head, Cluster Member or Relay each round through a
hesitant fuzzy linguistic decision engine fed by six local criteria.
"""
from .config import ConfigError, Scenario, load_scenario
from .hflts import decide_role, possibility_rank, reference_matrix
from .simulation import RoundMetrics, run

__all__ = [
    "ConfigError",
    "RoundMetrics",
    "Scenario",
    "decide_role",
    "load_scenario",
    "possibility_rank",
    "reference_matrix",
    "run",
]
