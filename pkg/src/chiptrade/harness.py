"""Batch experiment harness: seeding, seating, running, replicating.

Per-game seeds derive from a master seed by a documented stable hash: the
first 8 bytes, little-endian, of SHA-256("<master_seed>:<game_index>"). Seat
seeds (for stochastic policies) use SHA-256("<game_seed>:seat:<seat>"). The
derivation is platform-independent, so a master seed pins an entire batch.

A population is one kind string per seat: "bayesian", "greedy", "random", or
"llm:<profile.json>". The rational-proposer belief filter is enabled only
when every seat is a scripted rational policy; language-model seats disable
it (their proposals may lose themselves money). Humans play through the
service, not this harness.
"""

from __future__ import annotations

import hashlib
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from .agents.base import Agent, observation_for
from .agents.baselines import GreedyConcessionaryAgent, RandomRationalAgent
from .agents.bayesian import BayesianAgent
from .game import GameConfig, apply_turn, new_game, validate_offer
from .gamelog import GameLog, log_from_state

SCRIPTED_RATIONAL_KINDS = {"bayesian", "greedy", "random"}


def _hash_to_seed(text: str) -> int:
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def game_seed(master_seed: int, game_index: int) -> int:
    """Stable per-game seed: SHA-256 of "<master_seed>:<game_index>"."""
    return _hash_to_seed(f"{master_seed}:{game_index}")


def seat_seed(game_seed_value: int, seat: int) -> int:
    return _hash_to_seed(f"{game_seed_value}:seat:{seat}")


def proposal_pruning_allowed(population: Sequence[str]) -> bool:
    """Rational-proposer pruning is sound only among scripted policies."""
    return all(kind in SCRIPTED_RATIONAL_KINDS for kind in population)


def make_agent(
    kind: str,
    seat: int,
    config: GameConfig,
    valuations_cents: np.ndarray,
    seed: int,
    prune_opponent_proposals: bool,
) -> Agent:
    if kind == "bayesian":
        return BayesianAgent(
            seat,
            config,
            valuations_cents,
            prune_opponent_proposals=prune_opponent_proposals,
        )
    if kind == "greedy":
        return GreedyConcessionaryAgent(seat, config, valuations_cents)
    if kind == "random":
        return RandomRationalAgent(seat, config, valuations_cents, seed=seed)
    if kind.startswith("llm:"):
        from .llm.bridge import agent_from_profile

        return agent_from_profile(kind[4:], seat, config, valuations_cents)
    if kind == "human":
        raise ValueError("human seats play through the service, not the harness")
    raise ValueError(f"unknown agent kind: {kind!r}")


def seat_agents(
    population: Sequence[str],
    config: GameConfig,
    valuations_cents: np.ndarray,
    seed_for_game: int,
) -> list[Agent]:
    prune = proposal_pruning_allowed(population)
    return [
        make_agent(
            kind,
            seat,
            config,
            valuations_cents[seat],
            seat_seed(seed_for_game, seat),
            prune,
        )
        for seat, kind in enumerate(population)
    ]


def run_game(
    config: GameConfig,
    population: Sequence[str],
    game_id: str = "",
    meta: Optional[dict] = None,
    agents: Optional[Sequence[Agent]] = None,
) -> GameLog:
    """Play one full game and return its log.

    Invalid proposals (malformed or uncovered) are converted to a pass and the
    turn is flagged; infeasible accepts are coerced to declines by the engine.
    After every turn all seats observe the public record.
    """
    population = tuple(population)
    if len(population) != config.n_players:
        raise ValueError("population size must match player count")
    state = new_game(config)
    if agents is None:
        agents = seat_agents(population, config, state.valuations_cents, config.seed)
    _play_out(state, agents)
    return log_from_state(state, population, game_id=game_id, meta=dict(meta or {}))


def _play_out(state, agents: Sequence[Agent]) -> None:
    while not state.is_over():
        proposer = state.current_proposer()
        offer = agents[proposer].propose(observation_for(state, proposer))
        ok, _ = validate_offer(state, proposer, offer)
        invalid = not ok
        if invalid:
            offer = None
        if offer is None:
            record = apply_turn(state, None, {}, invalid_proposal=invalid)
        else:
            responses = {
                r: agents[r].respond(observation_for(state, r), proposer, offer)
                for r in state.responders(proposer)
            }
            record = apply_turn(state, offer, responses)
        for agent in agents:
            agent.observe(record)


def run_batch(
    base_config: GameConfig,
    population: Sequence[str],
    n_games: int,
    master_seed: int,
) -> list[GameLog]:
    """Run n games, one derived seed each; game ids encode the master seed."""
    logs = []
    for index in range(n_games):
        seed = game_seed(master_seed, index)
        config = replace(base_config, seed=seed)
        logs.append(
            run_game(
                config,
                population,
                game_id=f"m{master_seed}-g{index}",
                meta={"master_seed": master_seed, "game_index": index},
            )
        )
    return logs


def replicate_game(
    source: GameLog,
    population: Sequence[str],
    game_id: str = "",
) -> GameLog:
    """Re-play a logged game's table with a fresh population.

    Keeps the source's valuations, endowments, and turn order, then lets the
    new population act from scratch. The engine burns its setup draws before
    the overrides so the in-game selection stream matches the source game;
    replicating a deterministic population onto its own log reproduces it.
    """
    population = tuple(population)
    config = source.config
    if len(population) != config.n_players:
        raise ValueError("population size must match player count")
    state = new_game(config)
    state.valuations_cents = source.valuations_cents.copy()
    state.turn_order = source.turn_order
    agents = seat_agents(population, config, state.valuations_cents, config.seed)
    _play_out(state, agents)
    return log_from_state(
        state,
        population,
        game_id=game_id or f"{source.game_id}-replica",
        meta={"replicate_of": source.game_id},
    )
