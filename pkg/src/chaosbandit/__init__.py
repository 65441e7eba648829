"""Parallel chaotic-map decision making for multi-armed bandits."""

__version__ = "0.1.0"

from .bandit_env import BanditEnv, standard_probabilities  # noqa: E402
from .baselines import ThompsonSampling, UCB1Tuned  # noqa: E402
from .chaos_field import (ChaosField, GridGeometry, IkedaMap, MapParams,  # noqa: E402
                          init_field, step_field, step_map)
from .config import ExperimentConfig  # noqa: E402
from .metrics import PowerLawRegressor, RunTrace, fit_power_law  # noqa: E402
from .runner import run_benchmark, run_episode  # noqa: E402
from .tow import TugOfWar, tow_biases  # noqa: E402

__all__ = [
    "BanditEnv", "ChaosField", "ExperimentConfig", "GridGeometry", "IkedaMap", "MapParams",
    "PowerLawRegressor", "RunTrace", "ThompsonSampling", "TugOfWar", "UCB1Tuned",
    "fit_power_law", "init_field", "run_benchmark", "run_episode", "standard_probabilities",
    "step_field", "step_map", "tow_biases",
]
