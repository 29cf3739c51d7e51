"""Counterfactual replays: rewind a log, change one decision, re-run forward.

All later recorded actions are kept as intents and re-checked against the
counterfactual inventory: a proposal the proposer can no longer cover is
dropped, an accept the responder can no longer pay for becomes a decline.
Acceptor selection stays deterministic: the actually-selected acceptor keeps
the trade when still willing and able, otherwise the lowest-seat remaining
accepter takes it; a substituted accept by the focal player always wins its
turn's selection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..game import welfare_cents
from ..gamelog import GameLog

PASS_INSTEAD = "pass-instead"
ACCEPT_INSTEAD = "accept-instead"
DECLINE_INSTEAD = "decline-instead"
_RESPONDER_SUBS = {ACCEPT_INSTEAD, DECLINE_INSTEAD}


@dataclass(frozen=True)
class ReplayResult:
    focal: int
    value_path_cents: np.ndarray   # focal wealth entering each turn, plus final
    holdings_path: np.ndarray      # (turns+1, players, colors), same indexing
    executed: tuple[bool, ...]     # per turn, whether a trade happened

    @property
    def final_value_cents(self) -> int:
        return int(self.value_path_cents[-1])


def replay_with_substitutions(
    log: GameLog,
    focal: int,
    substitutions: Mapping[int, str],
    strict: bool = True,
) -> ReplayResult:
    """Re-run a log with the focal player's decisions swapped at given turns.

    ``strict`` governs a substituted accept the focal player cannot pay for
    at its own turn: an error when strict, silently a decline otherwise.
    An empty substitution map reproduces the recorded game exactly.
    """
    config = log.config
    vals = log.valuations_cents[focal]
    holdings = log.initial_holdings
    value_path = [welfare_cents(vals, holdings[focal])]
    holdings_path = [holdings.copy()]
    executed: list[bool] = []

    for record in log.records:
        t = record.turn_index
        sub = substitutions.get(t)
        offer = None if sub == PASS_INSTEAD else record.offer
        traded = False
        if offer is not None:
            gi = config.color_index(offer.give_color)
            ri = config.color_index(offer.get_color)
            if holdings[record.proposer, gi] >= offer.give_qty:
                accepters = []
                for r in sorted(record.responses):
                    intent = record.responses[r].accepted
                    if r == focal and sub in _RESPONDER_SUBS:
                        intent = sub == ACCEPT_INSTEAD
                    if not intent:
                        continue
                    if holdings[r, ri] >= offer.get_qty:
                        accepters.append(r)
                    elif r == focal and sub == ACCEPT_INSTEAD and strict:
                        raise ValueError(
                            f"substituted accept at turn {t} is not payable"
                        )
                if accepters:
                    if focal in accepters and sub == ACCEPT_INSTEAD:
                        selected = focal
                    elif record.selected_acceptor in accepters:
                        selected = record.selected_acceptor
                    else:
                        selected = min(accepters)
                    holdings[record.proposer, gi] -= offer.give_qty
                    holdings[record.proposer, ri] += offer.get_qty
                    holdings[selected, gi] += offer.give_qty
                    holdings[selected, ri] -= offer.get_qty
                    traded = True
        executed.append(traded)
        value_path.append(welfare_cents(vals, holdings[focal]))
        holdings_path.append(holdings.copy())

    return ReplayResult(
        focal=focal,
        value_path_cents=np.array(value_path, dtype=np.int64),
        holdings_path=np.stack(holdings_path),
        executed=tuple(executed),
    )


def counterfactual_replay(
    log: GameLog, focal: int, turn_index: int, alternative: str
) -> ReplayResult:
    """Replay with a single substituted decision at one turn.

    The alternative must fit the focal player's role on that turn:
    ``pass-instead`` for their own proposal, ``accept-instead`` or
    ``decline-instead`` for a response. Substituting an accept the focal
    player could not pay for at that turn raises ValueError.
    """
    if not 0 <= turn_index < len(log.records):
        raise ValueError(f"no recorded turn {turn_index}")
    record = log.records[turn_index]
    if record.offer is None:
        raise ValueError(f"turn {turn_index} had no offer to act on")
    if alternative == PASS_INSTEAD:
        if record.proposer != focal:
            raise ValueError("pass-instead applies to the focal player's proposal")
    elif alternative in _RESPONDER_SUBS:
        if focal not in record.responses:
            raise ValueError("focal player did not respond on that turn")
    else:
        raise ValueError(f"unknown alternative: {alternative!r}")
    return replay_with_substitutions(log, focal, {turn_index: alternative})
