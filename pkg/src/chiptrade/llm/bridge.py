"""Model-seated agents: profiles, transports, retries, degradation.

A transport is anything with a chat-completion call (model id, messages,
temperature in; text out). Tests inject scripted fakes, so no network is
ever touched unless an HTTP transport is explicitly configured. Replies
that stay unparseable after the retry budget degrade to a pass (proposals)
or a decline (responses) rather than aborting the game, and every
degradation is recorded on the agent.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Protocol, Sequence, TypeVar, Union

from ..agents.base import Agent, AgentObservation
from ..game import Action, TradeOffer
from .parsing import ParseError, parse_choice, parse_proposal, parse_proposals
from .prompts import (
    DEFAULT_TEMPERATURE,
    ROLE_PROPOSER,
    ROLE_REFINED_GENERATE,
    ROLE_REFINED_SELECT,
    ROLE_RESPONDER,
    PromptBundle,
    build_prompt,
    candidate_block,
)

MODE_OUT_OF_BOX = "out-of-box"
MODE_REFINED = "refined"

T = TypeVar("T")


class TransportError(RuntimeError):
    """The completion endpoint failed or returned an unusable payload."""


class Transport(Protocol):
    def complete(
        self, model: str, messages: list[dict], temperature: float
    ) -> str: ...


@dataclass
class LlmProfile:
    model: str
    mode: str = MODE_OUT_OF_BOX
    endpoint: str = ""
    api_key_env: str = ""
    temperature: float = DEFAULT_TEMPERATURE
    retry_budget: int = 2
    transcript_path: Optional[str] = None

    def __post_init__(self):
        if self.mode not in (MODE_OUT_OF_BOX, MODE_REFINED):
            raise ValueError(f"unknown profile mode: {self.mode!r}")
        if self.retry_budget < 0:
            raise ValueError("retry_budget must be >= 0")


def load_profile(path: Union[str, Path]) -> LlmProfile:
    with open(path) as fh:
        data = json.load(fh)
    known = {f for f in LlmProfile.__dataclass_fields__}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown profile fields: {sorted(unknown)}")
    return LlmProfile(**data)


class ScriptedTransport:
    """Canned replies in order; records every request it sees."""

    def __init__(self, replies: Sequence[str]):
        self._replies = list(replies)
        self.calls: list[dict] = []
        self._lock = threading.Lock()

    def complete(self, model, messages, temperature):
        with self._lock:
            self.calls.append(
                {"model": model, "messages": messages, "temperature": temperature}
            )
            if not self._replies:
                raise TransportError("scripted transport ran out of replies")
            return self._replies.pop(0)


class HttpChatTransport:
    """Minimal chat-completions client for OpenAI-style endpoints."""

    def __init__(self, endpoint: str, api_key_env: str = "", timeout: float = 60.0):
        if not endpoint:
            raise ValueError("endpoint URL is required")
        self.endpoint = endpoint
        self.api_key_env = api_key_env
        self.timeout = timeout

    def complete(self, model, messages, temperature):
        import os

        import httpx

        headers = {}
        if self.api_key_env:
            key = os.environ.get(self.api_key_env, "")
            if not key:
                raise TransportError(
                    f"environment variable {self.api_key_env} is not set"
                )
            headers["Authorization"] = f"Bearer {key}"
        payload = {
            "model": model,
            "messages": messages,
            "temperature": temperature,
        }
        try:
            response = httpx.post(
                self.endpoint, json=payload, headers=headers, timeout=self.timeout
            )
            response.raise_for_status()
            body = response.json()
            return body["choices"][0]["message"]["content"]
        except TransportError:
            raise
        except Exception as exc:
            raise TransportError(str(exc)) from exc


class _Transcript:
    """Append-only JSONL audit log of every prompt/response exchange."""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self._lock = threading.Lock()

    def write(self, entry: dict) -> None:
        line = json.dumps(entry, sort_keys=True)
        with self._lock:
            with open(self.path, "a") as fh:
                fh.write(line + "\n")


@dataclass
class Degradation:
    turn_index: int
    phase: str
    reason: str


class LlmAgent(Agent):
    """A seat played by a language model through an injected transport."""

    def __init__(
        self,
        transport: Transport,
        profile: LlmProfile,
        seat: Optional[int] = None,
    ):
        self.transport = transport
        self.profile = profile
        self.seat = seat if seat is not None else -1
        self.degradations: list[Degradation] = []
        self._transcript = (
            _Transcript(profile.transcript_path) if profile.transcript_path else None
        )

    # ----- transport plumbing -----

    def _log(self, bundle: PromptBundle, attempt: int, response, outcome: str):
        if self._transcript is None:
            return
        self._transcript.write(
            {
                "seat": self.seat,
                "model": self.profile.model,
                "role": bundle.role,
                "temperature": bundle.temperature,
                "attempt": attempt,
                "prompt": bundle.text,
                "response": response,
                "outcome": outcome,
            }
        )

    def _ask(
        self, bundle: PromptBundle, parse: Callable[[str], T]
    ) -> Optional[T]:
        """Call the transport, parse, retry on any failure; None if spent."""
        messages = [{"role": "user", "content": bundle.text}]
        for attempt in range(self.profile.retry_budget + 1):
            try:
                reply = self.transport.complete(
                    self.profile.model, messages, bundle.temperature
                )
            except TransportError as exc:
                self._log(bundle, attempt, None, f"transport_error: {exc}")
                continue
            try:
                parsed = parse(reply)
            except ParseError as exc:
                self._log(bundle, attempt, reply, f"parse_error: {exc}")
                continue
            self._log(bundle, attempt, reply, "ok")
            return parsed
        return None

    def _degrade(self, observation: AgentObservation, phase: str, reason: str):
        self.degradations.append(
            Degradation(observation.turn_index, phase, reason)
        )

    # ----- agent contract -----

    def propose(self, observation: AgentObservation) -> Action:
        temperature = self.profile.temperature
        if self.profile.mode == MODE_REFINED:
            generate = build_prompt(
                ROLE_REFINED_GENERATE, observation, temperature=temperature
            )
            candidates = self._ask(
                generate,
                lambda text: parse_proposals(text, observation.config),
            )
            if not candidates:
                self._degrade(observation, "propose", "unparseable candidates")
                return None
            blocks = [
                candidate_block(c.reasoning, c.check, c.offer) for c in candidates
            ]
            select = build_prompt(
                ROLE_REFINED_SELECT,
                observation,
                candidates=blocks,
                temperature=temperature,
            )
            chosen = self._ask(
                select, lambda text: parse_proposal(text, observation.config)
            )
        else:
            bundle = build_prompt(
                ROLE_PROPOSER, observation, temperature=temperature
            )
            chosen = self._ask(
                bundle, lambda text: parse_proposal(text, observation.config)
            )
        if chosen is None:
            self._degrade(observation, "propose", "unparseable proposal")
            return None
        offer = chosen.offer
        give_idx = observation.config.color_index(offer.give_color)
        if observation.holdings[observation.seat, give_idx] < offer.give_qty:
            self._degrade(observation, "propose", "offer exceeds holdings")
            return None
        return offer

    def respond(
        self, observation: AgentObservation, proposer: int, offer: TradeOffer
    ) -> bool:
        bundle = build_prompt(
            ROLE_RESPONDER,
            observation,
            offer=offer,
            proposer=proposer,
            temperature=self.profile.temperature,
        )
        choice = self._ask(bundle, parse_choice)
        if choice is None:
            self._degrade(observation, "respond", "unparseable choice")
            return False
        return choice.accept


def llm_agent(
    transport: Transport, profile: LlmProfile, seat: Optional[int] = None
) -> LlmAgent:
    return LlmAgent(transport, profile, seat=seat)


def agent_from_profile(
    profile_path: str, seat: int, config, valuations_cents
) -> LlmAgent:
    """Build a live agent from a profile file; the harness seat hook."""
    profile = load_profile(profile_path)
    transport = HttpChatTransport(profile.endpoint, profile.api_key_env)
    return LlmAgent(transport, profile, seat=seat)
