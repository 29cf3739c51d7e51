"""Scripted baseline policies used as experimental controls.

Both respond myopically (accept any affordable, strictly profitable offer).
They differ only in what they propose:

* greedy-concessionary: the positive-surplus one-for-one offer with the
  smallest own gain, a deliberately generous posture.
* random-rational: uniform over every positive-surplus offer it could make.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..game import Action, GameConfig, TradeOffer, proposer_delta_cents
from .base import Agent, AgentObservation, max_opponent_holdings, myopic_accept


class GreedyConcessionaryAgent(Agent):
    def __init__(self, seat: int, config: GameConfig, valuations_cents: np.ndarray):
        self.seat = seat
        self.config = config
        self.valuations_cents = np.asarray(valuations_cents, dtype=np.int64)

    def propose(self, obs: AgentObservation) -> Action:
        own = obs.holdings[self.seat]
        caps = max_opponent_holdings(obs.holdings, self.seat)
        best: Optional[TradeOffer] = None
        best_delta = None
        for gi, give in enumerate(self.config.colors):
            for ri, get in enumerate(self.config.colors):
                if gi == ri:
                    continue
                top = int(min(own[gi], caps[ri]))
                for qty in range(1, top + 1):
                    offer = TradeOffer(give, qty, get, qty)
                    delta = proposer_delta_cents(self.config, self.valuations_cents, offer)
                    if delta > 0 and (best_delta is None or delta < best_delta):
                        best, best_delta = offer, delta
        return best

    def respond(self, obs: AgentObservation, proposer: int, offer: TradeOffer) -> bool:
        return myopic_accept(
            self.config, self.valuations_cents, obs.holdings[self.seat], offer
        )


class RandomRationalAgent(Agent):
    def __init__(
        self,
        seat: int,
        config: GameConfig,
        valuations_cents: np.ndarray,
        seed: int = 0,
    ):
        self.seat = seat
        self.config = config
        self.valuations_cents = np.asarray(valuations_cents, dtype=np.int64)
        self.rng = np.random.default_rng(seed)

    def rational_offers(self, obs: AgentObservation) -> list[TradeOffer]:
        own = obs.holdings[self.seat]
        caps = max_opponent_holdings(obs.holdings, self.seat)
        offers = []
        for gi, give in enumerate(self.config.colors):
            if own[gi] < 1:
                continue
            for ri, get in enumerate(self.config.colors):
                if gi == ri or caps[ri] < 1:
                    continue
                for x in range(1, int(own[gi]) + 1):
                    for y in range(1, int(caps[ri]) + 1):
                        offer = TradeOffer(give, x, get, y)
                        if proposer_delta_cents(self.config, self.valuations_cents, offer) > 0:
                            offers.append(offer)
        return offers

    def propose(self, obs: AgentObservation) -> Action:
        offers = self.rational_offers(obs)
        if not offers:
            return None
        return offers[int(self.rng.integers(len(offers)))]

    def respond(self, obs: AgentObservation, proposer: int, offer: TradeOffer) -> bool:
        return myopic_accept(
            self.config, self.valuations_cents, obs.holdings[self.seat], offer
        )
