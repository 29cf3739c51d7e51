"""HTTP play service: one human seat per session against configured agents.

Sessions are in-memory and single-game. The human acts over JSON endpoints;
agent decisions auto-play synchronously, with an optional pacing delay so a
watching client sees the ledger fill in. Every session keeps an append-only
event list with strictly increasing sequence numbers; clients reconcile by
polling `/events?since=`.

Privacy: payloads never carry agent valuations, and simultaneous responses
surface only through a single ResponsesRevealed event after the turn closes.
The game-end event reveals per-seat payouts, which is the intended end-of-game
disclosure.
"""

from __future__ import annotations

import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .game import (
    REASON_INSUFFICIENT_INVENTORY,
    Action,
    GameConfig,
    GameState,
    TradeOffer,
    apply_turn,
    config_for_variant,
    new_game,
    responder_can_accept,
    responder_delta_cents,
    surplus_gain_cents,
    validate_offer,
    welfare_cents,
)
from .gamelog import write_game_log, log_from_state
from .harness import (
    SCRIPTED_RATIONAL_KINDS,
    make_agent,
    proposal_pruning_allowed,
    seat_seed,
)

SCHEMA_VERSION = 1

STATUS_ACTIVE = "active"
STATUS_COMPLETED = "completed"
STATUS_ABANDONED = "abandoned"

# Error codes surfaced in HTTP error payloads.
CODE_UNKNOWN_SESSION = "UnknownSession"
CODE_SESSION_ENDED = "SessionEnded"
CODE_OUT_OF_TURN = "OutOfTurn"
CODE_INVALID_OFFER = "InvalidOffer"
CODE_INSUFFICIENT_INVENTORY = "InsufficientInventory"
CODE_BAD_SPEC = "BadSessionSpec"


def _fail(status: int, code: str, message: str):
    raise HTTPException(status_code=status, detail={"code": code, "message": message})


def _offer_json(offer: Action) -> Optional[dict]:
    if offer is None:
        return None
    return {
        "give_color": offer.give_color,
        "give_qty": offer.give_qty,
        "get_color": offer.get_color,
        "get_qty": offer.get_qty,
    }


def _dollars(cents: int) -> str:
    return f"{cents / 100:+.2f}"


@dataclass
class Settings:
    agent_delay_s: float = 0.8
    ttl_s: float = 3600.0
    log_dir: Optional[str] = None
    default_agents: tuple[str, ...] = ("bayesian", "bayesian")


@dataclass
class Session:
    session_id: str
    config: GameConfig
    state: GameState
    human_seat: int
    agents: dict  # seat -> Agent, human seat absent
    population: tuple[str, ...]
    lock: threading.RLock = field(default_factory=threading.RLock)
    events: list = field(default_factory=list)
    seq: int = 0
    status: str = STATUS_ACTIVE
    pending: dict = field(default_factory=dict)
    pending_offer: Optional[TradeOffer] = None
    pending_proposer: Optional[int] = None
    last_touch: float = field(default_factory=time.monotonic)

    def emit(self, event_type: str, **payload) -> dict:
        self.seq += 1
        event = {"seq": self.seq, "type": event_type, **payload}
        self.events.append(event)
        return event


class SessionStore:
    def __init__(self, settings: Settings):
        self.settings = settings
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()

    def add(self, session: Session) -> None:
        with self.lock:
            self.sessions[session.session_id] = session

    def get(self, session_id: str) -> Session:
        with self.lock:
            session = self.sessions.get(session_id)
        if session is None:
            _fail(404, CODE_UNKNOWN_SESSION, f"no session {session_id!r}")
        return session

    def sweep(self) -> None:
        with self.lock:
            sessions = list(self.sessions.values())
        for session in sessions:
            _expire_if_idle(session, self.settings)


# ----- request bodies -----


class OfferBody(BaseModel):
    give_color: str
    give_qty: int
    get_color: str
    get_qty: int

    def to_offer(self) -> TradeOffer:
        return TradeOffer(self.give_color, self.give_qty,
                          self.get_color, self.get_qty)


class CreateSessionBody(BaseModel):
    variant: int = 3
    seed: Optional[int] = None
    human_seat: int = 0
    agents: Optional[list[str]] = None


class ProposalBody(BaseModel):
    offer: Optional[OfferBody] = None  # null or omitted means pass


class ResponseBody(BaseModel):
    accept: bool


# ----- game driving -----


def _finish(session: Session, status: str, settings: Settings) -> None:
    """Close the game, emit the final event, and flush the log if configured."""
    state = session.state
    payout = [int(x) for x in surplus_gain_cents(state)]
    finals = [
        welfare_cents(state.valuations_cents[p], state.holdings[p])
        for p in range(state.config.n_players)
    ]
    session.status = status
    session.pending = {"kind": "over", "status": status}
    session.pending_offer = None
    session.pending_proposer = None
    session.emit(
        "GameEnded",
        status=status,
        payout_cents=payout,
        final_value_cents=finals,
        final_holdings=state.holdings.tolist(),
    )
    if settings.log_dir:
        log = log_from_state(
            state,
            session.population,
            game_id=session.session_id,
            meta={"session_id": session.session_id, "status": status},
        )
        path = Path(settings.log_dir)
        path.mkdir(parents=True, exist_ok=True)
        with open(path / f"{session.session_id}.jsonl", "w") as fh:
            write_game_log(log, fh)


def _begin_turn(session: Session, settings: Settings) -> None:
    state = session.state
    if state.is_over():
        _finish(session, STATUS_COMPLETED, settings)
        return
    proposer = state.current_proposer()
    session.emit(
        "TurnOpened",
        round=state.round_index,
        turn_in_round=state.turn_index % state.config.n_players,
        turn_index=state.turn_index,
        proposer=proposer,
    )
    session.pending = {"kind": "proposal", "seat": proposer}
    session.pending_offer = None
    session.pending_proposer = None


def _close_turn(session: Session, record, settings: Settings) -> None:
    """Emit reveal/trade events for a finished turn and open the next one."""
    if record.offer is not None:
        session.emit(
            "ResponsesRevealed",
            turn_index=record.turn_index,
            responses={
                str(seat): {
                    "accepted": resp.accepted,
                    "coerced": resp.coerced,
                    "effective": resp.effective_accept,
                }
                for seat, resp in sorted(record.responses.items())
            },
        )
        if record.executed:
            session.emit(
                "TradeExecuted",
                turn_index=record.turn_index,
                proposer=record.proposer,
                acceptor=record.selected_acceptor,
                offer=_offer_json(record.offer),
            )
        else:
            session.emit(
                "TradeFailed", turn_index=record.turn_index, reason="declined"
            )
    for seat in sorted(session.agents):
        session.agents[seat].observe(record)
    _begin_turn(session, settings)


def _apply_with_responses(
    session: Session, proposer: int, offer: TradeOffer,
    human_response: Optional[bool], settings: Settings,
) -> None:
    """Collect agent intents, merge the human's, and run the turn."""
    from .agents.base import observation_for

    state = session.state
    responses = {}
    for seat in state.responders(proposer):
        if seat == session.human_seat:
            responses[seat] = bool(human_response)
        else:
            responses[seat] = session.agents[seat].respond(
                observation_for(state, seat), proposer, offer
            )
    record = apply_turn(state, offer, responses)
    _close_turn(session, record, settings)


def _step_agent(session: Session, settings: Settings) -> bool:
    """Play one pending agent proposal. Returns False when nothing to do."""
    from .agents.base import observation_for

    state = session.state
    if session.status != STATUS_ACTIVE:
        return False
    pending = session.pending
    if pending.get("kind") != "proposal" or pending["seat"] == session.human_seat:
        return False
    proposer = pending["seat"]
    offer = session.agents[proposer].propose(observation_for(state, proposer))
    ok, _ = validate_offer(state, proposer, offer)
    invalid = not ok
    if invalid:
        offer = None
    session.emit(
        "ProposalMade",
        turn_index=state.turn_index,
        proposer=proposer,
        offer=_offer_json(offer),
        invalid=invalid,
    )
    if offer is None:
        record = apply_turn(state, None, {}, invalid_proposal=invalid)
        _close_turn(session, record, settings)
        return True
    if session.human_seat in state.responders(proposer):
        session.pending = {
            "kind": "response",
            "seat": session.human_seat,
            "turn_index": state.turn_index,
        }
        session.pending_offer = offer
        session.pending_proposer = proposer
        return True
    _apply_with_responses(session, proposer, offer, None, settings)
    return True


def _advance(session: Session, settings: Settings) -> None:
    """Auto-play agent turns until the human is needed or the game ends.

    The pacing sleep happens outside the lock so reads stay responsive while
    the ledger fills in.
    """
    while True:
        with session.lock:
            pending = session.pending
            needs_agent = (
                session.status == STATUS_ACTIVE
                and pending.get("kind") == "proposal"
                and pending["seat"] != session.human_seat
            )
        if not needs_agent:
            return
        if settings.agent_delay_s > 0:
            time.sleep(settings.agent_delay_s)
        with session.lock:
            _step_agent(session, settings)


def _expire_if_idle(session: Session, settings: Settings) -> None:
    with session.lock:
        if session.status != STATUS_ACTIVE:
            return
        if time.monotonic() - session.last_touch >= settings.ttl_s:
            _finish(session, STATUS_ABANDONED, settings)


def _touch_active(session: Session) -> None:
    session.last_touch = time.monotonic()


# ----- views -----


def _human_view(session: Session) -> dict:
    state = session.state
    config = state.config
    human = session.human_seat
    valuations = {
        color: int(state.valuations_cents[human, i])
        for i, color in enumerate(config.colors)
    }
    initial_value = welfare_cents(
        state.valuations_cents[human], state.initial_holdings[human]
    )
    current_value = welfare_cents(state.valuations_cents[human], state.holdings[human])
    pending = dict(session.pending)
    if pending.get("kind") == "response":
        offer = session.pending_offer
        delta = responder_delta_cents(config, state.valuations_cents[human], offer)
        pending.update(
            proposer=session.pending_proposer,
            offer=_offer_json(offer),
            can_accept=responder_can_accept(state, human, offer),
            accept_delta_cents=delta,
            accept_delta_dollars=_dollars(delta),
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "session_id": session.session_id,
        "status": session.status,
        "human_seat": human,
        "seats": [
            "human" if seat == human else "agent"
            for seat in range(config.n_players)
        ],
        "colors": list(config.colors),
        "numeraire": config.numeraire,
        "endowment": config.endowment,
        "rounds": config.rounds,
        "turn_order": list(state.turn_order),
        "round_index": state.round_index,
        "turn_index": state.turn_index,
        "n_turns": config.n_turns,
        "holdings": state.holdings.tolist(),
        "your_valuations": valuations,
        "your_value_cents": current_value,
        "your_surplus_cents": current_value - initial_value,
        "pending": pending,
        "last_seq": session.seq,
    }


def _parse_preview_offer(raw: str, config: GameConfig) -> TradeOffer:
    parts = raw.split(":")
    if len(parts) != 4:
        _fail(400, CODE_INVALID_OFFER,
              "offer must look like '<give_qty>:<give_color>:<get_qty>:<get_color>'")
    try:
        give_qty, get_qty = int(parts[0]), int(parts[2])
    except ValueError:
        _fail(400, CODE_INVALID_OFFER, "offer quantities must be integers")
    give_color, get_color = parts[1], parts[3]
    for color in (give_color, get_color):
        if color not in config.colors:
            _fail(400, CODE_INVALID_OFFER, f"unknown color {color!r}")
    if give_color == get_color:
        _fail(400, CODE_INVALID_OFFER, "give and get colors must differ")
    if give_qty < 1 or get_qty < 1:
        _fail(400, CODE_INVALID_OFFER, "quantities must be positive")
    return TradeOffer(give_color, give_qty, get_color, get_qty)


# ----- app factory -----


def _env_float(name: str, fallback: float) -> float:
    raw = os.environ.get(name)
    return float(raw) if raw else fallback


def create_app(
    agent_delay_ms: Optional[float] = None,
    session_ttl_minutes: Optional[float] = None,
    log_dir: Optional[str] = None,
    default_agents: Optional[list[str]] = None,
) -> FastAPI:
    """Build the service app. Arguments fall back to env vars, then defaults.

    Env vars: CHIPTRADE_AGENT_DELAY_MS, CHIPTRADE_TTL_MINUTES,
    CHIPTRADE_LOG_DIR, CHIPTRADE_AGENTS (comma-separated kinds).
    """
    if agent_delay_ms is None:
        agent_delay_ms = _env_float("CHIPTRADE_AGENT_DELAY_MS", 800.0)
    if session_ttl_minutes is None:
        session_ttl_minutes = _env_float("CHIPTRADE_TTL_MINUTES", 60.0)
    if log_dir is None:
        log_dir = os.environ.get("CHIPTRADE_LOG_DIR") or None
    if default_agents is None:
        raw = os.environ.get("CHIPTRADE_AGENTS", "bayesian,bayesian")
        default_agents = [kind.strip() for kind in raw.split(",")]

    settings = Settings(
        agent_delay_s=agent_delay_ms / 1000.0,
        ttl_s=session_ttl_minutes * 60.0,
        log_dir=log_dir,
        default_agents=tuple(default_agents),
    )
    store = SessionStore(settings)
    app = FastAPI(title="chiptrade play service")
    # the browser client may be served from any static host
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    def fetch(session_id: str) -> Session:
        session = store.get(session_id)
        _expire_if_idle(session, settings)
        return session

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        store.sweep()
        if not 2 <= body.variant <= 4:
            _fail(400, CODE_BAD_SPEC, "variant must be 2, 3, or 4")
        seed = body.seed
        if seed is None:
            seed = int.from_bytes(os.urandom(8), "little")
        config = config_for_variant(body.variant, seed=seed)
        if not 0 <= body.human_seat < config.n_players:
            _fail(400, CODE_BAD_SPEC,
                  f"human_seat must be in 0..{config.n_players - 1}")
        agent_kinds = body.agents
        if agent_kinds is None:
            agent_kinds = list(settings.default_agents)
        if len(agent_kinds) != config.n_players - 1:
            _fail(400, CODE_BAD_SPEC,
                  f"need {config.n_players - 1} agent kinds")
        for kind in agent_kinds:
            if kind in SCRIPTED_RATIONAL_KINDS or kind.startswith("llm:"):
                continue
            _fail(400, CODE_BAD_SPEC, f"unknown agent kind {kind!r}")

        population = list(agent_kinds)
        population.insert(body.human_seat, "human")
        population = tuple(population)
        state = new_game(config)
        prune = proposal_pruning_allowed(population)
        agents = {
            seat: make_agent(
                kind, seat, config, state.valuations_cents[seat],
                seat_seed(config.seed, seat), prune,
            )
            for seat, kind in enumerate(population)
            if seat != body.human_seat
        }
        session = Session(
            session_id=uuid.uuid4().hex,
            config=config,
            state=state,
            human_seat=body.human_seat,
            agents=agents,
            population=population,
        )
        with session.lock:
            _begin_turn(session, settings)
        store.add(session)
        _advance(session, settings)
        with session.lock:
            _touch_active(session)
            return {
                "schema_version": SCHEMA_VERSION,
                "session_id": session.session_id,
                "view": _human_view(session),
            }

    @app.get("/sessions/{session_id}/view")
    def get_view(session_id: str):
        session = fetch(session_id)
        with session.lock:
            _touch_active(session)
            return _human_view(session)

    @app.get("/sessions/{session_id}/events")
    def get_events(session_id: str, since: int = 0):
        session = fetch(session_id)
        with session.lock:
            _touch_active(session)
            events = [e for e in session.events if e["seq"] > since]
            return {
                "schema_version": SCHEMA_VERSION,
                "session_id": session.session_id,
                "status": session.status,
                "last_seq": session.seq,
                "events": events,
            }

    @app.get("/sessions/{session_id}/preview")
    def preview(session_id: str, offer: str):
        """Projected value change for the human giving/getting as stated."""
        session = fetch(session_id)
        with session.lock:
            _touch_active(session)
            state = session.state
            human = session.human_seat
            parsed = _parse_preview_offer(offer, state.config)
            gi = state.config.color_index(parsed.give_color)
            ri = state.config.color_index(parsed.get_color)
            vals = state.valuations_cents[human]
            change = int(vals[ri] * parsed.get_qty - vals[gi] * parsed.give_qty)
            current = welfare_cents(vals, state.holdings[human])
            feasible = bool(state.holdings[human, gi] >= parsed.give_qty)
            return {
                "schema_version": SCHEMA_VERSION,
                "give": {"color": parsed.give_color, "qty": parsed.give_qty},
                "get": {"color": parsed.get_color, "qty": parsed.get_qty},
                "feasible": feasible,
                "reason": None if feasible else REASON_INSUFFICIENT_INVENTORY,
                "value_change_cents": change,
                "value_change_dollars": _dollars(change),
                "projected_value_cents": current + change,
            }

    def _require_active_turn(session: Session, kind: str):
        if session.status != STATUS_ACTIVE:
            _fail(409, CODE_SESSION_ENDED,
                  f"session is {session.status}")
        pending = session.pending
        if pending.get("kind") != kind or pending.get("seat") != session.human_seat:
            _fail(409, CODE_OUT_OF_TURN,
                  f"waiting on {pending.get('kind', 'nothing')}, not your {kind}")

    @app.post("/sessions/{session_id}/proposal")
    def submit_proposal(session_id: str, body: ProposalBody):
        session = fetch(session_id)
        with session.lock:
            _touch_active(session)
            _require_active_turn(session, "proposal")
            state = session.state
            human = session.human_seat
            offer = body.offer.to_offer() if body.offer is not None else None
            ok, reason = validate_offer(state, human, offer)
            if not ok:
                code = (
                    CODE_INSUFFICIENT_INVENTORY
                    if reason == REASON_INSUFFICIENT_INVENTORY
                    else CODE_INVALID_OFFER
                )
                _fail(400, code, f"offer rejected: {reason}")
            start_seq = session.seq
            session.emit(
                "ProposalMade",
                turn_index=state.turn_index,
                proposer=human,
                offer=_offer_json(offer),
                invalid=False,
            )
            if offer is None:
                record = apply_turn(state, None, {}, invalid_proposal=False)
                _close_turn(session, record, settings)
            else:
                _apply_with_responses(session, human, offer, None, settings)
        _advance(session, settings)
        with session.lock:
            _touch_active(session)
            return _action_result(session, start_seq)

    @app.post("/sessions/{session_id}/response")
    def submit_response(session_id: str, body: ResponseBody):
        session = fetch(session_id)
        with session.lock:
            _touch_active(session)
            _require_active_turn(session, "response")
            state = session.state
            human = session.human_seat
            offer = session.pending_offer
            if body.accept and not responder_can_accept(state, human, offer):
                _fail(400, CODE_INSUFFICIENT_INVENTORY,
                      "you cannot cover the requested chips")
            start_seq = session.seq
            _apply_with_responses(
                session, session.pending_proposer, offer, body.accept, settings
            )
        _advance(session, settings)
        with session.lock:
            _touch_active(session)
            return _action_result(session, start_seq)

    def _action_result(session: Session, start_seq: int) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "session_id": session.session_id,
            "status": session.status,
            "events": [e for e in session.events if e["seq"] > start_seq],
            "pending": _human_view(session)["pending"],
            "last_seq": session.seq,
        }

    return app
