"""Adaptive mutation-rate control for evolutionary algorithms.

The core idea: treat candidate mutation rates as arms of a bandit over a
tile-coded log-rate axis, score each observed rate by the best recent
improvement it produced (a windowed max, not a mean), and sample rates
epsilon-greedily while evolution runs. Fixed, self-adaptive, group-elite,
and look-ahead controllers are included for comparison, along with two
problem families (function minimization over real vectors, symbolic
regression over token genomes), a reward-landscape probe, and a seeded
CSV-writing experiment runner.
"""
from .analysis import (LandscapeProbe, ProbeConfig, StatReport, bootstrap_ci,
                       ewma, max_pool_1d, two_proportion_z,
                       two_proportion_z_test, welch_t_statistic, welch_t_test)
from .bandit import Bandit, BanditEnsemble, EnsembleSample, EpsilonSchedule
from .config import ConfigError, ExperimentSpec, load_spec
from .controllers import (BanditController, FixedRate, GroupEliteRates,
                          LookaheadRates, RateController, SelfAdaptiveRates,
                          gesmr_generation)
from .evolution import (EvolutionRun, GenerationRow, Individual, LoopConfig,
                        RunResult, epsilon_lexicase_select, lexicase_select,
                        truncation_select)
from .funcmin import FUNCMIN_NAMES, FuncMinProblem
from .reward import (RewardHistory, TransformConfig, immediate_reward,
                     transform_error, transform_errors, windowed_max)
from .srproblems import (INSTRUCTION_NAMES, INSTRUCTION_SET, SR_NAMES,
                         SrProblem, execute, nguyen_target)
from .tilecoding import TileCoding
from .umad import deletion_rate, random_genome, umad_mutate

__version__ = "0.1.0"

__all__ = [
    "Bandit", "BanditController", "BanditEnsemble", "ConfigError",
    "EnsembleSample", "EpsilonSchedule", "EvolutionRun", "ExperimentSpec",
    "FUNCMIN_NAMES", "FixedRate", "FuncMinProblem", "GenerationRow",
    "GroupEliteRates", "INSTRUCTION_NAMES", "INSTRUCTION_SET", "Individual",
    "LandscapeProbe", "LookaheadRates", "LoopConfig", "ProbeConfig",
    "RateController", "RewardHistory", "RunResult", "SR_NAMES",
    "SelfAdaptiveRates", "SrProblem", "StatReport", "TileCoding",
    "TransformConfig", "bootstrap_ci", "deletion_rate",
    "epsilon_lexicase_select", "ewma", "execute", "gesmr_generation",
    "immediate_reward", "lexicase_select", "load_spec", "max_pool_1d",
    "nguyen_target", "random_genome", "transform_error", "transform_errors",
    "truncation_select", "two_proportion_z", "two_proportion_z_test",
    "umad_mutate", "welch_t_statistic", "welch_t_test", "windowed_max",
]
