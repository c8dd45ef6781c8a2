"""Inequity-aversion partner selection and the evolution of cooperation.

A deterministic, seed-reproducible agent-based simulator of a one-round
prisoner's dilemma where agents pick partners by payoff similarity and
interact with a probability that decays with payoff inequality, for both
complete-mixing and square-lattice populations, plus a sweep runner that
writes the experiment data as CSV artifacts.
"""

__version__ = "0.1.0"

from .config import ConfigError, SimConfig, SweepSpec, parse_config
from .core import (
    AgentState,
    FehrSchmidtParams,
    PayoffParams,
    Reward,
    Strategy,
    accept_probability,
    fehr_schmidt_utility,
    interaction_probability,
    normalized_payoffs,
    payoff,
)
from .evolution import MutationParams, binary_tournament_mixed, mutate, reproduce_mixed
from .experiment import ExpandedRun, SweepRow, aggregate, expand_sweep, run_experiment
from .lattice import (
    LatticeGrid,
    LatticeRunResult,
    LatticeSnapshot,
    local_binary_tournament,
    neighbors,
    parse_snapshot,
    run_generation_lattice,
    run_simulation_lattice,
    snapshot,
    step_lattice_evolution,
)
from .metrics import (
    GenerationRecord,
    InteractionTally,
    coop_components,
    fraction_cooperators,
    largest_coop_cluster,
    mean_lambda_cooperators,
    payoff_classes,
    within_cluster_fraction,
)
from .rng import derive_run_seed, make_rng
from .wellmixed import (
    Population,
    attempt_interaction,
    init_population,
    run_generation_mixed,
    run_simulation_mixed,
    sample_candidates,
    select_partner,
)

__all__ = [
    "AgentState",
    "ConfigError",
    "ExpandedRun",
    "FehrSchmidtParams",
    "GenerationRecord",
    "InteractionTally",
    "LatticeGrid",
    "LatticeRunResult",
    "LatticeSnapshot",
    "MutationParams",
    "PayoffParams",
    "Population",
    "Reward",
    "SimConfig",
    "Strategy",
    "SweepRow",
    "SweepSpec",
    "accept_probability",
    "aggregate",
    "attempt_interaction",
    "binary_tournament_mixed",
    "coop_components",
    "derive_run_seed",
    "expand_sweep",
    "fehr_schmidt_utility",
    "fraction_cooperators",
    "init_population",
    "interaction_probability",
    "largest_coop_cluster",
    "local_binary_tournament",
    "make_rng",
    "mean_lambda_cooperators",
    "mutate",
    "neighbors",
    "normalized_payoffs",
    "parse_config",
    "parse_snapshot",
    "payoff",
    "payoff_classes",
    "reproduce_mixed",
    "run_experiment",
    "run_generation_lattice",
    "run_generation_mixed",
    "run_simulation_lattice",
    "run_simulation_mixed",
    "sample_candidates",
    "select_partner",
    "snapshot",
    "step_lattice_evolution",
    "within_cluster_fraction",
]
