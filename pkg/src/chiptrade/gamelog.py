"""Game logs: one JSON header line plus one JSON line per turn.

The header carries everything needed to reconstruct or replicate a game:
schema version, config (including the seed), drawn valuations, turn order,
the population of agent kinds seated, and free-form metadata. Money is integer
cents throughout; field names carry a ``_cents`` suffix wherever a number is
money.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Optional, Union

import numpy as np

from .game import (
    GameConfig,
    GameState,
    ResponseRecord,
    TradeOffer,
    TurnRecord,
)

SCHEMA_VERSION = 1


@dataclass
class GameLog:
    """A finished (or in-progress) game in replayable form."""

    config: GameConfig
    valuations_cents: np.ndarray
    turn_order: tuple[int, ...]
    population: tuple[str, ...]
    records: list[TurnRecord] = field(default_factory=list)
    game_id: str = ""
    meta: dict = field(default_factory=dict)
    schema: int = SCHEMA_VERSION

    @property
    def initial_holdings(self) -> np.ndarray:
        return np.full(
            (self.config.n_players, self.config.n_colors),
            self.config.endowment,
            dtype=np.int64,
        )

    def final_holdings(self) -> np.ndarray:
        if self.records:
            return self.records[-1].post_holdings.copy()
        return self.initial_holdings

    def holdings_before_turn(self, turn_index: int) -> np.ndarray:
        """Holdings snapshot entering the given turn."""
        if turn_index == 0:
            return self.initial_holdings
        return self.records[turn_index - 1].post_holdings.copy()


def log_from_state(
    state: GameState,
    population: Iterable[str],
    game_id: str = "",
    meta: Optional[dict] = None,
) -> GameLog:
    return GameLog(
        config=state.config,
        valuations_cents=state.valuations_cents.copy(),
        turn_order=state.turn_order,
        population=tuple(population),
        records=list(state.history),
        game_id=game_id,
        meta=dict(meta or {}),
    )


# ===== JSON encoding =====


def _offer_to_json(offer: Optional[TradeOffer]) -> Optional[dict]:
    if offer is None:
        return None
    return dataclasses.asdict(offer)


def _offer_from_json(data: Optional[dict]) -> Optional[TradeOffer]:
    if data is None:
        return None
    return TradeOffer(
        give_color=data["give_color"],
        give_qty=int(data["give_qty"]),
        get_color=data["get_color"],
        get_qty=int(data["get_qty"]),
    )


def _record_to_json(record: TurnRecord) -> dict:
    return {
        "kind": "turn",
        "round": record.round_index,
        "turn": record.turn_index,
        "proposer": record.proposer,
        "offer": _offer_to_json(record.offer),
        "invalid_proposal": record.invalid_proposal,
        "responses": {
            str(player): {"accepted": r.accepted, "coerced": r.coerced}
            for player, r in sorted(record.responses.items())
        },
        "selected_acceptor": record.selected_acceptor,
        "executed": record.executed,
        "post_holdings": record.post_holdings.tolist(),
    }


def _record_from_json(data: dict) -> TurnRecord:
    return TurnRecord(
        round_index=int(data["round"]),
        turn_index=int(data["turn"]),
        proposer=int(data["proposer"]),
        offer=_offer_from_json(data["offer"]),
        invalid_proposal=bool(data["invalid_proposal"]),
        responses={
            int(player): ResponseRecord(
                accepted=bool(r["accepted"]), coerced=bool(r["coerced"])
            )
            for player, r in data["responses"].items()
        },
        selected_acceptor=(
            None
            if data["selected_acceptor"] is None
            else int(data["selected_acceptor"])
        ),
        executed=bool(data["executed"]),
        post_holdings=np.asarray(data["post_holdings"], dtype=np.int64),
    )


def _header_to_json(log: GameLog) -> dict:
    return {
        "kind": "header",
        "schema": log.schema,
        "game_id": log.game_id,
        "config": dataclasses.asdict(log.config) | {"colors": list(log.config.colors)},
        "seed": log.config.seed,
        "valuations_cents": log.valuations_cents.tolist(),
        "turn_order": list(log.turn_order),
        "population": list(log.population),
        "meta": log.meta,
    }


def _header_from_json(data: dict) -> GameLog:
    if data.get("kind") != "header":
        raise ValueError("log must start with a header line")
    schema = int(data["schema"])
    if schema != SCHEMA_VERSION:
        raise ValueError(f"unsupported log schema {schema}")
    cfg = dict(data["config"])
    cfg["colors"] = tuple(cfg["colors"])
    config = GameConfig(**cfg)
    return GameLog(
        config=config,
        valuations_cents=np.asarray(data["valuations_cents"], dtype=np.int64),
        turn_order=tuple(int(p) for p in data["turn_order"]),
        population=tuple(data["population"]),
        game_id=data.get("game_id", ""),
        meta=dict(data.get("meta", {})),
        schema=schema,
    )


def dump_log_lines(log: GameLog) -> list[str]:
    lines = [json.dumps(_header_to_json(log), separators=(",", ":"))]
    lines.extend(
        json.dumps(_record_to_json(r), separators=(",", ":")) for r in log.records
    )
    return lines


def parse_log_lines(lines: Iterable[str]) -> GameLog:
    it = iter(line for line in lines if line.strip())
    try:
        header = json.loads(next(it))
    except StopIteration:
        raise ValueError("empty log") from None
    log = _header_from_json(header)
    for line in it:
        data = json.loads(line)
        if data.get("kind") != "turn":
            raise ValueError(f"unexpected log line kind: {data.get('kind')!r}")
        log.records.append(_record_from_json(data))
    return log


PathOrIO = Union[str, Path, IO[str]]


def write_game_log(log: GameLog, dest: PathOrIO) -> None:
    text = "\n".join(dump_log_lines(log)) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)  # type: ignore[union-attr]
    else:
        Path(dest).write_text(text)


def read_game_log(src: PathOrIO) -> GameLog:
    if hasattr(src, "read"):
        text = src.read()  # type: ignore[union-attr]
    else:
        text = Path(src).read_text()
    return parse_log_lines(text.splitlines())


def read_log_batch(src: PathOrIO) -> list[GameLog]:
    """Read a file holding several logs back to back (header starts a game)."""
    if hasattr(src, "read"):
        text = src.read()  # type: ignore[union-attr]
    else:
        text = Path(src).read_text()
    groups: list[list[str]] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if json.loads(line).get("kind") == "header":
            groups.append([])
        if not groups:
            raise ValueError("log batch must start with a header line")
        groups[-1].append(line)
    return [parse_log_lines(g) for g in groups]
