"""Agent policies: the Bayesian bargainer plus scripted baselines."""

from .base import Agent, AgentObservation, max_opponent_holdings, myopic_accept, observation_for
from .baselines import GreedyConcessionaryAgent, RandomRationalAgent
from .bayesian import (
    BayesianAgent,
    BeliefState,
    ConvergenceError,
    ConvergenceResult,
    accept_probability,
    bayesian_propose,
    bayesian_respond,
    prune_on_proposal,
    prune_on_response,
    run_to_convergence,
    uniform_belief,
)

__all__ = [
    "Agent",
    "AgentObservation",
    "observation_for",
    "myopic_accept",
    "max_opponent_holdings",
    "GreedyConcessionaryAgent",
    "RandomRationalAgent",
    "BayesianAgent",
    "BeliefState",
    "ConvergenceError",
    "ConvergenceResult",
    "accept_probability",
    "bayesian_propose",
    "bayesian_respond",
    "prune_on_proposal",
    "prune_on_response",
    "run_to_convergence",
    "uniform_belief",
]
