"""Agent contract and the public observation agents act on.

Agents only ever see public information plus their own valuation row. The
observation deliberately has no accessor for other players' valuations; the
history it carries is the engine's public record, where simultaneous
responses appear only for completed turns.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..game import (
    Action,
    GameConfig,
    GameState,
    TradeOffer,
    TurnRecord,
    responder_delta_cents,
)


@dataclass(frozen=True)
class AgentObservation:
    seat: int
    config: GameConfig
    valuations_cents: np.ndarray  # own row only
    holdings: np.ndarray          # (n_players, n_colors), public
    history: tuple[TurnRecord, ...]
    turn_index: int
    round_index: int


def observation_for(state: GameState, seat: int) -> AgentObservation:
    return AgentObservation(
        seat=seat,
        config=state.config,
        valuations_cents=state.valuations_cents[seat].copy(),
        holdings=state.holdings.copy(),
        history=tuple(state.history),
        turn_index=state.turn_index,
        round_index=state.round_index,
    )


class Agent(ABC):
    """One seat at the table. Implementations must be deterministic given
    their constructor arguments (seeded RNGs included)."""

    seat: int

    @abstractmethod
    def propose(self, obs: AgentObservation) -> Action:
        """Return a trade offer, or None to pass."""

    @abstractmethod
    def respond(self, obs: AgentObservation, proposer: int, offer: TradeOffer) -> bool:
        """Accept (True) or decline (False) another player's offer."""

    def observe(self, record: TurnRecord) -> None:
        """Called after every completed turn with the public record."""


def myopic_accept(
    config: GameConfig,
    valuations_cents: np.ndarray,
    holdings_row: np.ndarray,
    offer: TradeOffer,
) -> bool:
    """Accept exactly when affordable and strictly wealth-improving.

    Ties (zero wealth change) decline.
    """
    ri = config.color_index(offer.get_color)
    if holdings_row[ri] < offer.get_qty:
        return False
    return responder_delta_cents(config, valuations_cents, offer) > 0


def max_opponent_holdings(holdings: np.ndarray, seat: int) -> np.ndarray:
    """Per-color cap on what any single opponent could pay."""
    mask = np.ones(len(holdings), dtype=bool)
    mask[seat] = False
    return holdings[mask].max(axis=0)
