"""Chip-trading bargaining: engine, agents, welfare bounds, and analytics."""

from .game import (
    GameConfig,
    GameState,
    TradeOffer,
    TurnRecord,
    ResponseRecord,
    config_for_variant,
    new_game,
    apply_turn,
    validate_offer,
    responder_can_accept,
    proposer_delta_cents,
    responder_delta_cents,
    welfare_cents,
    surplus_gain_cents,
    enumerate_trade_offers,
)
from .gamelog import (
    SCHEMA_VERSION,
    GameLog,
    dump_log_lines,
    log_from_state,
    parse_log_lines,
    read_game_log,
    read_log_batch,
    write_game_log,
)
from .pareto import (
    ParetoResult,
    ScaledSurplus,
    initial_welfare_floors,
    integer_welfare_oracle,
    pareto_optimum,
    scaled_surplus,
)
from .harness import (
    game_seed,
    seat_seed,
    run_game,
    run_batch,
    replicate_game,
)

__all__ = [
    "GameConfig",
    "GameState",
    "TradeOffer",
    "TurnRecord",
    "ResponseRecord",
    "config_for_variant",
    "new_game",
    "apply_turn",
    "validate_offer",
    "responder_can_accept",
    "proposer_delta_cents",
    "responder_delta_cents",
    "welfare_cents",
    "surplus_gain_cents",
    "enumerate_trade_offers",
    "SCHEMA_VERSION",
    "GameLog",
    "dump_log_lines",
    "log_from_state",
    "parse_log_lines",
    "read_game_log",
    "read_log_batch",
    "write_game_log",
    "ParetoResult",
    "ScaledSurplus",
    "initial_welfare_floors",
    "integer_welfare_oracle",
    "pareto_optimum",
    "scaled_surplus",
    "game_seed",
    "seat_seed",
    "run_game",
    "run_batch",
    "replicate_game",
]

__version__ = "0.1.0"
