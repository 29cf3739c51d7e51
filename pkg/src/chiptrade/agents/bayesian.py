"""Bayesian bargaining agent: discrete beliefs, expected-gain proposals.

Each agent keeps, per opponent, a joint discrete belief over that opponent's
private per-chip values (one axis per private color, each on the engine's
value grid). The prior is uniform; observations prune states that contradict
observed behavior, so weights stay integers and every probability is an exact
count ratio. An emptied support resets to the uniform prior and flags a
misspecification event.

Proposals maximize expected own gain: wealth change times the probability at
least one opponent accepts, assuming opponents accept exactly when they
strictly gain. Responses are myopic. Tie-breaking is canonical: first by give
color, then get color, then give quantity, then get quantity.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Mapping, Optional

import numpy as np

from ..game import (
    Action,
    GameConfig,
    TradeOffer,
    TurnRecord,
    proposer_delta_cents,
)
from .base import Agent, AgentObservation, myopic_accept


# ===== Belief representation =====


@lru_cache(maxsize=None)
def _support_tables(grid_key: tuple[int, ...], n_private: int):
    """Shared (indices, values) tables for a joint grid support.

    States enumerate the cartesian product of the grid across private colors,
    last color fastest. Cached per (grid, color count); treat as read-only.
    """
    grid = np.asarray(grid_key, dtype=np.int64)
    m = len(grid)
    n_states = m**n_private
    idx = np.empty((n_states, n_private), dtype=np.int16)
    for col in range(n_private):
        reps = m ** (n_private - col - 1)
        idx[:, col] = np.tile(np.repeat(np.arange(m), reps), m**col)
    vectors = grid[idx.astype(np.int64)]
    idx.setflags(write=False)
    vectors.setflags(write=False)
    return idx, vectors


@dataclass(frozen=True)
class BeliefState:
    """Belief about one opponent's private per-chip values.

    ``weights`` are non-negative integers over the joint grid states; the
    uniform prior is all ones. Probabilities are weights over total weight.
    """

    private_colors: tuple[str, ...]
    grid: np.ndarray
    state_grid_idx: np.ndarray   # (n_states, n_private) int16, shared
    state_values: np.ndarray     # (n_states, n_private) int64 cents, shared
    weights: np.ndarray          # (n_states,) int64

    @property
    def n_states(self) -> int:
        return len(self.weights)

    @property
    def total_weight(self) -> int:
        return int(self.weights.sum())

    @property
    def support_size(self) -> int:
        return int((self.weights > 0).sum())

    def probabilities(self) -> np.ndarray:
        return self.weights / self.total_weight

    def column(self, color: str) -> int:
        try:
            return self.private_colors.index(color)
        except ValueError:
            raise KeyError(f"not a private color: {color!r}") from None

    def state_weight(self, private_values_cents) -> int:
        """Weight currently on one exact private-value vector."""
        target = np.asarray(private_values_cents, dtype=np.int64)
        hit = (self.state_values == target).all(axis=1)
        return int(self.weights[hit].sum())


def uniform_belief(config: GameConfig) -> BeliefState:
    private = config.colors[1:]
    grid = config.value_grid()
    idx, vectors = _support_tables(tuple(int(v) for v in grid), len(private))
    return BeliefState(
        private_colors=private,
        grid=grid,
        state_grid_idx=idx,
        state_values=vectors,
        weights=np.ones(len(vectors), dtype=np.int64),
    )


def _color_state_values(
    belief: BeliefState, config: GameConfig, color: str
) -> np.ndarray:
    """Per-state value of a color: a shared column, or the flat numeraire."""
    if color == config.numeraire:
        return np.full(belief.n_states, config.numeraire_cents, dtype=np.int64)
    return belief.state_values[:, belief.column(color)]


def _acceptance_mask(
    belief: BeliefState, config: GameConfig, offer: TradeOffer
) -> np.ndarray:
    """States in which a responder strictly gains by accepting."""
    v_in = _color_state_values(belief, config, offer.give_color)
    v_out = _color_state_values(belief, config, offer.get_color)
    return v_in * offer.give_qty - v_out * offer.get_qty > 0


def _proposer_gain_mask(
    belief: BeliefState, config: GameConfig, offer: TradeOffer
) -> np.ndarray:
    """States in which the offer's proposer strictly gains on execution."""
    v_give = _color_state_values(belief, config, offer.give_color)
    v_get = _color_state_values(belief, config, offer.get_color)
    return v_get * offer.get_qty - v_give * offer.give_qty > 0


def _prune(belief: BeliefState, keep: np.ndarray) -> tuple[BeliefState, bool]:
    """Zero out discarded states; reset to uniform if nothing survives."""
    new_weights = np.where(keep, belief.weights, 0)
    if new_weights.sum() == 0:
        return replace(belief, weights=np.ones(belief.n_states, dtype=np.int64)), True
    return replace(belief, weights=new_weights), False


def prune_on_response(
    belief: BeliefState, config: GameConfig, offer: TradeOffer, accepted: bool
) -> tuple[BeliefState, bool]:
    """Condition a responder's belief on an observed accept or decline.

    Callers must gate declines on affordability: a decline forced by missing
    inventory carries no information and must not reach this function.
    """
    mask = _acceptance_mask(belief, config, offer)
    return _prune(belief, mask if accepted else ~mask)


def prune_on_proposal(
    belief: BeliefState, config: GameConfig, offer: TradeOffer
) -> tuple[BeliefState, bool]:
    """Condition a proposer's belief on them being a rational proposer."""
    return _prune(belief, _proposer_gain_mask(belief, config, offer))


def accept_probability(
    belief: BeliefState,
    config: GameConfig,
    offer: TradeOffer,
    responder_holdings_row: np.ndarray,
) -> float:
    """Probability the modeled opponent accepts: exact support-count ratio."""
    ri = config.color_index(offer.get_color)
    if responder_holdings_row[ri] < offer.get_qty:
        return 0.0
    mask = _acceptance_mask(belief, config, offer)
    return int(belief.weights[mask].sum()) / float(belief.total_weight)


# ===== Proposal search =====


def _pair_weight_table(
    belief: BeliefState, config: GameConfig, give_color: str, get_color: str
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Belief weights marginalized onto the (give value, get value) pair.

    Returns (values_give, values_get, W) where W[a, b] is the total weight on
    states valuing the give color at values_give[a] and the get color at
    values_get[b]. Numeraire axes collapse to a single fixed value.
    """
    m = len(belief.grid)

    def axis(color: str) -> tuple[np.ndarray, Optional[np.ndarray]]:
        if color == config.numeraire:
            return np.array([config.numeraire_cents], dtype=np.int64), None
        col = belief.column(color)
        return belief.grid, belief.state_grid_idx[:, col].astype(np.int64)

    va, ia = axis(give_color)
    vb, ib = axis(get_color)
    na, nb = len(va), len(vb)
    if ia is None and ib is None:
        w = np.array([[belief.total_weight]], dtype=np.int64)
    elif ia is None:
        w = np.bincount(ib, weights=belief.weights, minlength=nb)
        w = w.astype(np.int64).reshape(1, nb)
    elif ib is None:
        w = np.bincount(ia, weights=belief.weights, minlength=na)
        w = w.astype(np.int64).reshape(na, 1)
    else:
        flat = ia * m + ib
        w = np.bincount(flat, weights=belief.weights, minlength=m * m)
        w = w.astype(np.int64).reshape(m, m)
    return va, vb, w


def _acceptance_counts(
    belief: BeliefState,
    config: GameConfig,
    give_color: str,
    get_color: str,
    xs: np.ndarray,
    ys: np.ndarray,
) -> np.ndarray:
    """Support weight accepting (give x, get y), for every (x, y) at once."""
    va, vb, w = _pair_weight_table(belief, config, give_color, get_color)
    gains = (
        va[:, None, None, None] * xs[None, None, :, None]
        - vb[None, :, None, None] * ys[None, None, None, :]
    )
    return np.einsum("ab,abxy->xy", w, (gains > 0).astype(np.int64))


def bayesian_propose(
    config: GameConfig,
    seat: int,
    valuations_cents: np.ndarray,
    holdings: np.ndarray,
    beliefs: Mapping[int, BeliefState],
) -> Action:
    """Best offer by expected own gain, or None when nothing scores positive.

    Scans every strictly profitable offer the proposer can cover, with asks
    bounded by the most any modeled opponent holds of the asked color. Score
    is own wealth change times the probability at least one opponent accepts
    (independent across opponents, zero where an opponent cannot pay). The
    first candidate in canonical order wins ties.
    """
    opponents = sorted(beliefs)
    if not opponents:
        raise ValueError("need at least one opponent belief")
    own = holdings[seat]
    best_offer: Action = None
    best_score = 0.0
    for gi, give in enumerate(config.colors):
        max_x = int(own[gi])
        if max_x < 1:
            continue
        for ri, get in enumerate(config.colors):
            if ri == gi:
                continue
            max_y = int(max(holdings[j, ri] for j in opponents))
            if max_y < 1:
                continue
            xs = np.arange(1, max_x + 1, dtype=np.int64)
            ys = np.arange(1, max_y + 1, dtype=np.int64)
            delta = (
                valuations_cents[ri] * ys[None, :]
                - valuations_cents[gi] * xs[:, None]
            )
            if (delta <= 0).all():
                continue
            miss = np.ones((max_x, max_y), dtype=np.float64)
            for j in opponents:
                counts = _acceptance_counts(beliefs[j], config, give, get, xs, ys)
                p = counts / float(beliefs[j].total_weight)
                affordable = ys <= holdings[j, ri]
                p = p * affordable[None, :]
                miss *= 1.0 - p
            score = delta.astype(np.float64) * (1.0 - miss)
            score[delta <= 0] = -np.inf
            flat = int(np.argmax(score))  # first maximum in canonical order
            top = float(score.flat[flat])
            if top > best_score:
                best_score = top
                best_offer = TradeOffer(
                    give, int(xs[flat // max_y]), get, int(ys[flat % max_y])
                )
    return best_offer


def bayesian_respond(
    config: GameConfig,
    valuations_cents: np.ndarray,
    holdings_row: np.ndarray,
    offer: TradeOffer,
) -> bool:
    """Myopic: accept exactly the affordable, strictly profitable offers."""
    return myopic_accept(config, valuations_cents, holdings_row, offer)


# ===== The agent =====


class BayesianAgent(Agent):
    """Seated Bayesian policy: proposes by expected gain, responds myopically,
    and prunes opponent beliefs from every completed turn.

    ``prune_opponent_proposals`` applies the rational-proposer filter to
    observed offers; leave it off against humans or language-model players,
    whose proposals may lose themselves money.
    """

    def __init__(
        self,
        seat: int,
        config: GameConfig,
        valuations_cents: np.ndarray,
        prune_opponent_proposals: bool = True,
    ):
        self.seat = seat
        self.config = config
        self.valuations_cents = np.asarray(valuations_cents, dtype=np.int64)
        self.prune_opponent_proposals = prune_opponent_proposals
        self.beliefs: dict[int, BeliefState] = {
            j: uniform_belief(config) for j in range(config.n_players) if j != seat
        }
        self.misspecification_events = 0
        self._prev_holdings = np.full(
            (config.n_players, config.n_colors), config.endowment, dtype=np.int64
        )

    def propose(self, obs: AgentObservation) -> Action:
        return bayesian_propose(
            self.config, self.seat, self.valuations_cents, obs.holdings, self.beliefs
        )

    def respond(self, obs: AgentObservation, proposer: int, offer: TradeOffer) -> bool:
        return bayesian_respond(
            self.config, self.valuations_cents, obs.holdings[self.seat], offer
        )

    def observe(self, record: TurnRecord) -> None:
        offer = record.offer
        if offer is not None:
            get_idx = self.config.color_index(offer.get_color)
            for j, response in record.responses.items():
                if j == self.seat:
                    continue
                if response.coerced:
                    continue  # inventory-forced, carries no information
                if not response.accepted:
                    if self._prev_holdings[j, get_idx] < offer.get_qty:
                        continue  # could not have paid anyway
                self._update(j, prune_on_response, offer, response.accepted)
            if record.proposer != self.seat and self.prune_opponent_proposals:
                self._update(record.proposer, prune_on_proposal, offer)
        self._prev_holdings = record.post_holdings.copy()

    def _update(self, opponent: int, fn, offer: TradeOffer, *args) -> None:
        self.beliefs[opponent], reset = fn(
            self.beliefs[opponent], self.config, offer, *args
        )
        if reset:
            self.misspecification_events += 1


# ===== Unbounded-horizon pairwise mode =====


class ConvergenceError(RuntimeError):
    """Raised when pairwise trading fails to settle within the pass cap."""


@dataclass
class ConvergenceResult:
    holdings: np.ndarray
    passes: int
    trades: int
    beliefs: dict[int, dict[int, BeliefState]]
    misspecification_events: int


def run_to_convergence(
    config: GameConfig,
    valuations_cents: np.ndarray,
    rng: np.random.Generator,
    initial_holdings: Optional[np.ndarray] = None,
    max_passes: int = 1000,
    prune_opponent_proposals: bool = True,
) -> ConvergenceResult:
    """Trade pairwise until a full pass executes nothing.

    Each pass shuffles the players, then visits every ordered pair (i, j):
    i makes its best offer aimed at j alone, j responds myopically, chips move
    on acceptance, and everyone's beliefs absorb the outcome. Declines prune
    only when j could have paid; pass-ups (no positive-scoring offer) carry no
    update. Raises ConvergenceError after ``max_passes`` restless passes.
    """
    n = config.n_players
    vals = np.asarray(valuations_cents, dtype=np.int64)
    holdings = (
        np.full((n, config.n_colors), config.endowment, dtype=np.int64)
        if initial_holdings is None
        else np.asarray(initial_holdings, dtype=np.int64).copy()
    )
    beliefs = {
        i: {j: uniform_belief(config) for j in range(n) if j != i} for i in range(n)
    }
    resets = 0
    trades = 0

    def update_all(offer: TradeOffer, proposer: int, responder: int, accepted: bool,
                   responder_could_pay: bool) -> None:
        nonlocal resets
        for k in range(n):
            if k != responder:
                if accepted or responder_could_pay:
                    beliefs[k][responder], was_reset = prune_on_response(
                        beliefs[k][responder], config, offer, accepted
                    )
                    resets += was_reset
            if k != proposer and prune_opponent_proposals:
                beliefs[k][proposer], was_reset = prune_on_proposal(
                    beliefs[k][proposer], config, offer
                )
                resets += was_reset

    for n_pass in range(1, max_passes + 1):
        settled = True
        order = [int(p) for p in rng.permutation(n)]
        for i in order:
            for j in order:
                if i == j:
                    continue
                offer = bayesian_propose(
                    config, i, vals[i], holdings, {j: beliefs[i][j]}
                )
                if offer is None:
                    continue
                could_pay = bool(
                    holdings[j, config.color_index(offer.get_color)] >= offer.get_qty
                )
                accepted = bayesian_respond(config, vals[j], holdings[j], offer)
                if accepted:
                    gi = config.color_index(offer.give_color)
                    ri = config.color_index(offer.get_color)
                    holdings[i, gi] -= offer.give_qty
                    holdings[i, ri] += offer.get_qty
                    holdings[j, gi] += offer.give_qty
                    holdings[j, ri] -= offer.get_qty
                    trades += 1
                    settled = False
                update_all(offer, i, j, accepted, could_pay)
        if settled:
            return ConvergenceResult(holdings, n_pass, trades, beliefs, resets)
    raise ConvergenceError(f"no settlement within {max_passes} passes")
