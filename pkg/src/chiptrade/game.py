"""Turn-based chip-trading game engine.

Three (by default) players each hold an endowment of colored chips. One color
is a numeraire worth the same to everyone; every other color is worth a
private per-chip amount drawn from a discrete grid. Play proceeds in rounds;
within a round each player takes one turn proposing a single give/get trade
(or passing), the other players respond simultaneously, and if anyone accepts
the engine picks one accepter uniformly at random and moves the chips.

All money is integer cents. The engine owns a single RNG stream per game,
advanced in a fixed documented order: valuation draws (player-major,
color-minor), then the turn-order permutation, then one draw per turn that
ends with two or more accepters. Replays with the same config and action
stream are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

DEFAULT_COLORS = ("green", "red", "blue", "purple")


# ===== Configuration =====


@dataclass(frozen=True)
class GameConfig:
    """Immutable game parameters.

    The first color in ``colors`` is the numeraire: every player values it at
    ``numeraire_cents``. Each other color is valued privately, per player, on
    the grid ``value_min_cents .. value_max_cents`` step ``value_step_cents``.
    """

    colors: tuple[str, ...] = ("green", "red", "blue")
    endowment: int = 10
    numeraire_cents: int = 50
    value_min_cents: int = 10
    value_max_cents: int = 100
    value_step_cents: int = 5
    n_players: int = 3
    rounds: int = 3
    seed: int = 0

    def __post_init__(self) -> None:
        if len(self.colors) < 2:
            raise ValueError("need a numeraire plus at least one private color")
        if len(set(self.colors)) != len(self.colors):
            raise ValueError("duplicate color names")
        if self.endowment < 1:
            raise ValueError("endowment must be at least 1 chip")
        if self.n_players < 2:
            raise ValueError("need at least 2 players")
        if self.rounds < 1:
            raise ValueError("need at least 1 round")
        if self.value_step_cents <= 0:
            raise ValueError("value grid step must be positive")
        if (self.value_max_cents - self.value_min_cents) % self.value_step_cents:
            raise ValueError("value grid bounds must be step-aligned")
        if self.value_min_cents <= 0:
            raise ValueError("grid values must be positive")

    @property
    def numeraire(self) -> str:
        return self.colors[0]

    @property
    def n_colors(self) -> int:
        return len(self.colors)

    @property
    def n_turns(self) -> int:
        return self.rounds * self.n_players

    def color_index(self, color: str) -> int:
        try:
            return self.colors.index(color)
        except ValueError:
            raise KeyError(f"unknown color: {color!r}") from None

    def value_grid(self) -> np.ndarray:
        """Grid of admissible private per-chip values, in cents."""
        return np.arange(
            self.value_min_cents,
            self.value_max_cents + 1,
            self.value_step_cents,
            dtype=np.int64,
        )


def config_for_variant(n_colors: int, seed: int = 0, **overrides) -> GameConfig:
    """Standard 2-, 3-, or 4-color setup (numeraire plus 1..3 private colors)."""
    if not 2 <= n_colors <= len(DEFAULT_COLORS):
        raise ValueError(f"variant must use 2..{len(DEFAULT_COLORS)} colors")
    return GameConfig(colors=DEFAULT_COLORS[:n_colors], seed=seed, **overrides)


# ===== Actions and records =====


@dataclass(frozen=True)
class TradeOffer:
    """Proposer surrenders give_qty of give_color for get_qty of get_color."""

    give_color: str
    give_qty: int
    get_color: str
    get_qty: int

    def reversed(self) -> "TradeOffer":
        """The same exchange seen from the accepting side."""
        return TradeOffer(self.get_color, self.get_qty, self.give_color, self.give_qty)


# A proposer may pass instead of offering; a pass is represented as None.
Action = Optional[TradeOffer]


@dataclass(frozen=True)
class ResponseRecord:
    """A responder's intent, plus whether the engine had to override it.

    ``accepted`` is the submitted intent. ``coerced`` marks an accept that was
    downgraded to a decline because the responder could not cover the get
    side; the trade never executes through a coerced response.
    """

    accepted: bool
    coerced: bool = False

    @property
    def effective_accept(self) -> bool:
        return self.accepted and not self.coerced


@dataclass(frozen=True)
class TurnRecord:
    """Everything that happened on one turn, revealed after the turn ends."""

    round_index: int
    turn_index: int
    proposer: int
    offer: Action
    invalid_proposal: bool
    responses: dict[int, ResponseRecord]
    selected_acceptor: Optional[int]
    executed: bool
    post_holdings: np.ndarray

    def __post_init__(self) -> None:
        self.post_holdings.setflags(write=False)


# ===== Game state =====


@dataclass
class GameState:
    config: GameConfig
    valuations_cents: np.ndarray  # (n_players, n_colors) int64
    initial_holdings: np.ndarray  # (n_players, n_colors) int64
    holdings: np.ndarray          # (n_players, n_colors) int64, mutated by turns
    turn_order: tuple[int, ...]
    rng: np.random.Generator
    history: list[TurnRecord] = field(default_factory=list)

    @property
    def turn_index(self) -> int:
        return len(self.history)

    @property
    def round_index(self) -> int:
        return self.turn_index // self.config.n_players

    def is_over(self) -> bool:
        return self.turn_index >= self.config.n_turns

    def current_proposer(self) -> int:
        if self.is_over():
            raise RuntimeError("game is over")
        return self.turn_order[self.turn_index % self.config.n_players]

    def responders(self, proposer: int) -> tuple[int, ...]:
        return tuple(p for p in range(self.config.n_players) if p != proposer)


def new_game(config: GameConfig) -> GameState:
    """Start a game: draw valuations, then the turn order, from the seed.

    Draw order is fixed so identical configs replay identically: one grid draw
    per (player, private color) pair in player-major color-minor order, then
    one permutation for the per-round proposing order.
    """
    rng = np.random.default_rng(config.seed)
    grid = config.value_grid()
    vals = np.empty((config.n_players, config.n_colors), dtype=np.int64)
    vals[:, 0] = config.numeraire_cents
    for player in range(config.n_players):
        for color in range(1, config.n_colors):
            vals[player, color] = grid[rng.integers(len(grid))]
    turn_order = tuple(int(p) for p in rng.permutation(config.n_players))
    holdings = np.full(
        (config.n_players, config.n_colors), config.endowment, dtype=np.int64
    )
    return GameState(
        config=config,
        valuations_cents=vals,
        initial_holdings=holdings.copy(),
        holdings=holdings,
        turn_order=turn_order,
        rng=rng,
    )


# ===== Offer validation =====

# Reason codes returned by validate_offer.
REASON_GAME_OVER = "game-over"
REASON_OUT_OF_TURN = "out-of-turn"
REASON_UNKNOWN_COLOR = "unknown-color"
REASON_SAME_COLOR = "same-color"
REASON_NON_POSITIVE_QTY = "non-positive-qty"
REASON_INSUFFICIENT_INVENTORY = "insufficient-inventory"


def validate_offer(
    state: GameState, proposer: int, offer: Action
) -> tuple[bool, Optional[str]]:
    """Check an action against the rules; returns (ok, reason_code).

    A pass is always legal on your own turn. A trade must name two distinct
    known colors, positive quantities on both sides, and a give side the
    proposer can actually cover. Asking for more than opponents can pay is
    legal (such offers simply cannot be accepted).
    """
    if state.is_over():
        return False, REASON_GAME_OVER
    if proposer != state.current_proposer():
        return False, REASON_OUT_OF_TURN
    if offer is None:
        return True, None
    if offer.give_color not in state.config.colors:
        return False, REASON_UNKNOWN_COLOR
    if offer.get_color not in state.config.colors:
        return False, REASON_UNKNOWN_COLOR
    if offer.give_color == offer.get_color:
        return False, REASON_SAME_COLOR
    if offer.give_qty < 1 or offer.get_qty < 1:
        return False, REASON_NON_POSITIVE_QTY
    gi = state.config.color_index(offer.give_color)
    if state.holdings[proposer, gi] < offer.give_qty:
        return False, REASON_INSUFFICIENT_INVENTORY
    return True, None


def responder_can_accept(state: GameState, responder: int, offer: Action) -> bool:
    """True when the responder holds enough of the get color to pay."""
    if offer is None:
        return False
    ri = state.config.color_index(offer.get_color)
    return bool(state.holdings[responder, ri] >= offer.get_qty)


# ===== Money helpers =====


def proposer_delta_cents(
    config: GameConfig, valuation_cents: np.ndarray, offer: TradeOffer
) -> int:
    """Wealth change for the proposer if the offer executes."""
    gi = config.color_index(offer.give_color)
    ri = config.color_index(offer.get_color)
    return int(
        valuation_cents[ri] * offer.get_qty - valuation_cents[gi] * offer.give_qty
    )


def responder_delta_cents(
    config: GameConfig, valuation_cents: np.ndarray, offer: TradeOffer
) -> int:
    """Wealth change for a responder who accepts the offer."""
    gi = config.color_index(offer.give_color)
    ri = config.color_index(offer.get_color)
    return int(
        valuation_cents[gi] * offer.give_qty - valuation_cents[ri] * offer.get_qty
    )


def welfare_cents(valuation_cents: np.ndarray, holdings_cents: np.ndarray) -> int:
    """Total chip wealth of one player: valuation row dot holdings row."""
    return int(np.dot(valuation_cents, holdings_cents))


def surplus_gain_cents(state: GameState) -> np.ndarray:
    """Per-player wealth change since the start of the game, in cents."""
    diff = state.holdings - state.initial_holdings
    return np.einsum("pc,pc->p", state.valuations_cents, diff)


# ===== Turn execution =====


def apply_turn(
    state: GameState,
    offer: Action,
    responses: Mapping[int, bool],
    *,
    invalid_proposal: bool = False,
) -> TurnRecord:
    """Execute one turn: record responses, pick an accepter, move chips.

    ``responses`` maps every non-proposer to an accept/decline intent and must
    be empty for a pass. Accept intents the responder cannot pay for are
    coerced to declines and flagged. When two or more effective accepts
    remain, one RNG draw selects the acceptor uniformly; a single accepter is
    selected without consuming randomness.

    The offer must already satisfy validate_offer; pass invalid proposals as
    ``offer=None, invalid_proposal=True`` (the caller converts them).
    """
    if state.is_over():
        raise ValueError("game is over")
    proposer = state.current_proposer()
    ok, reason = validate_offer(state, proposer, offer)
    if not ok:
        raise ValueError(f"illegal offer for player {proposer}: {reason}")

    responders = state.responders(proposer)
    if offer is None:
        if responses:
            raise ValueError("a pass takes no responses")
        record_responses: dict[int, ResponseRecord] = {}
        selected: Optional[int] = None
        executed = False
    else:
        if set(responses) != set(responders):
            raise ValueError(
                f"responses must cover exactly players {sorted(responders)}"
            )
        record_responses = {}
        for r in responders:
            intent = bool(responses[r])
            coerced = intent and not responder_can_accept(state, r, offer)
            record_responses[r] = ResponseRecord(accepted=intent, coerced=coerced)
        accepters = [r for r in responders if record_responses[r].effective_accept]
        if not accepters:
            selected = None
            executed = False
        else:
            if len(accepters) >= 2:
                selected = accepters[int(state.rng.integers(len(accepters)))]
            else:
                selected = accepters[0]
            gi = state.config.color_index(offer.give_color)
            ri = state.config.color_index(offer.get_color)
            state.holdings[proposer, gi] -= offer.give_qty
            state.holdings[proposer, ri] += offer.get_qty
            state.holdings[selected, gi] += offer.give_qty
            state.holdings[selected, ri] -= offer.get_qty
            executed = True
            if (state.holdings < 0).any():
                raise AssertionError("negative holdings after executed trade")

    record = TurnRecord(
        round_index=state.round_index,
        turn_index=state.turn_index,
        proposer=proposer,
        offer=offer,
        invalid_proposal=invalid_proposal,
        responses=record_responses,
        selected_acceptor=selected,
        executed=executed,
        post_holdings=state.holdings.copy(),
    )
    state.history.append(record)
    return record


def enumerate_trade_offers(
    config: GameConfig,
    own_holdings: np.ndarray,
    max_get: Iterable[int],
) -> Iterable[TradeOffer]:
    """All well-formed trade offers, in the canonical deterministic order.

    Ordered by (give color index, get color index, give qty, get qty). The get
    side is capped per color by ``max_get`` (typically the most any opponent
    holds); colors with a zero cap or an empty give inventory are skipped.
    """
    caps = list(max_get)
    for gi, give in enumerate(config.colors):
        give_cap = int(own_holdings[gi])
        if give_cap < 1:
            continue
        for ri, get in enumerate(config.colors):
            if ri == gi or caps[ri] < 1:
                continue
            for x in range(1, give_cap + 1):
                for y in range(1, caps[ri] + 1):
                    yield TradeOffer(give, x, get, y)
