"""Tabular Thompson sampling with an adaptive exploration bonus."""

from ._core import (
    ContractViolation,
    InvalidInputError,
    MetricsTrace,
    NumericalError,
    PlanResult,
    StructuralError,
    TabularMdp,
    bellman_backup,
    chain_world_mdp,
    episode_regret,
    f_global,
    f_state,
    finite_horizon_values,
    k_r,
    pac_sample_bound,
    policy_value,
    queuing_world_mdp,
    run_experiment,
    tau_bound,
    value_iteration,
)

__all__ = [
    "ContractViolation",
    "InvalidInputError",
    "MetricsTrace",
    "NumericalError",
    "PlanResult",
    "StructuralError",
    "TabularMdp",
    "bellman_backup",
    "chain_world_mdp",
    "episode_regret",
    "f_global",
    "f_state",
    "finite_horizon_values",
    "k_r",
    "pac_sample_bound",
    "policy_value",
    "queuing_world_mdp",
    "run_experiment",
    "tau_bound",
    "value_iteration",
]
