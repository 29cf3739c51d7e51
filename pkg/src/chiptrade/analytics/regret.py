"""Decision quality labels for logged actions via counterfactual replay.

Each scored action gets one of three labels:

* UnforcedRegret: a decline of an offer that, accepted instead, would have
  left the player at least one cent richer at game end.
* ForcedRegret: a committed trade (proposal or accept) that locked up chips
  the player later needed for a strictly better per-unit deal in the same
  acquired color, confirmed by a two-point replay (undo the commitment, take
  the later deal) ending at least one cent ahead.
* NoRegret: everything else that was scored.

Actions outside the scoring scope are labeled Unscored with a reason:
proposals nobody accepted, committed trades with non-positive surplus for
the actor, and accepts (or declines) of offers the responder could not pay.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Optional, Union

from ..game import (
    proposer_delta_cents,
    responder_delta_cents,
    welfare_cents,
)
from ..gamelog import GameLog
from .replay import (
    ACCEPT_INSTEAD,
    DECLINE_INSTEAD,
    PASS_INSTEAD,
    counterfactual_replay,
    replay_with_substitutions,
)


class RegretLabel(str, Enum):
    NO_REGRET = "NoRegret"
    FORCED_REGRET = "ForcedRegret"
    UNFORCED_REGRET = "UnforcedRegret"
    UNSCORED = "Unscored"


ROLE_PROPOSER = "proposer"
ROLE_ACCEPTOR = "acceptor"
ROLE_DECLINER = "decliner"

UNSCORED_REJECTED = "rejected-proposal"
UNSCORED_NEGATIVE = "negative-surplus"
UNSCORED_INFEASIBLE = "infeasible-accept"


@dataclass(frozen=True)
class ActionScore:
    game_id: str
    turn_index: int
    player: int
    player_kind: str
    role: str
    label: RegretLabel
    reason: Optional[str] = None
    evidence: dict = field(default_factory=dict)


def _per_unit_better(delta_alt: int, qty_alt: int, delta_base: int, qty_base: int) -> bool:
    # delta_alt / qty_alt > delta_base / qty_base, kept exact in integers
    return delta_alt * qty_base > delta_base * qty_alt


def _commitment_label(
    log: GameLog,
    focal: int,
    turn_index: int,
    role: str,
    delta_cents: int,
    actual_final: int,
) -> tuple[RegretLabel, dict]:
    """Forced-regret check for a committed trade at turn_index.

    The commitment acquired some color at delta_cents surplus per trade. Scan
    later turns where the focal player responded to an offer delivering that
    same color at strictly better per-unit surplus, unaffordable as played
    but affordable once the commitment is undone; confirm with a replay that
    both undoes the commitment and takes the alternative.
    """
    config = log.config
    offer = log.records[turn_index].offer
    assert offer is not None
    acquired = offer.get_color if role == ROLE_PROPOSER else offer.give_color
    acquired_qty = offer.get_qty if role == ROLE_PROPOSER else offer.give_qty
    undo = PASS_INSTEAD if role == ROLE_PROPOSER else DECLINE_INSTEAD
    vals = log.valuations_cents[focal]

    undone = None
    alternatives: list[int] = []
    for later in log.records[turn_index + 1:]:
        alt = later.offer
        if alt is None or later.proposer == focal or alt.give_color != acquired:
            continue
        alt_delta = responder_delta_cents(config, vals, alt)
        if not _per_unit_better(alt_delta, alt.give_qty, delta_cents, acquired_qty):
            continue
        alternatives.append(later.turn_index)
        pay_idx = config.color_index(alt.get_color)
        if log.holdings_before_turn(later.turn_index)[focal, pay_idx] >= alt.get_qty:
            continue  # was affordable as played; nothing was forced
        if undone is None:
            undone = replay_with_substitutions(log, focal, {turn_index: undo})
        if undone.holdings_path[later.turn_index][focal, pay_idx] < alt.get_qty:
            continue  # still unaffordable with the commitment undone
        combined = replay_with_substitutions(
            log,
            focal,
            {turn_index: undo, later.turn_index: ACCEPT_INSTEAD},
            strict=False,
        )
        gain = combined.final_value_cents - actual_final
        if gain >= 1:
            evidence = {
                "alternative_turns": alternatives,
                "confirmed_turn": later.turn_index,
                "committed_per_unit": [delta_cents, acquired_qty],
                "alternative_per_unit": [alt_delta, alt.give_qty],
                "counterfactual_gain_cents": int(gain),
            }
            return RegretLabel.FORCED_REGRET, evidence
    return RegretLabel.NO_REGRET, {"alternative_turns": alternatives}


def classify_actions(log: GameLog) -> list[ActionScore]:
    """Label every proposal and response in a game log."""
    config = log.config
    final_holdings = log.final_holdings()
    finals = [
        welfare_cents(log.valuations_cents[p], final_holdings[p])
        for p in range(config.n_players)
    ]
    scores: list[ActionScore] = []

    def kind(player: int) -> str:
        return log.population[player] if player < len(log.population) else ""

    for record in log.records:
        offer = record.offer
        t = record.turn_index
        proposer = record.proposer
        if offer is None:
            continue

        if not record.executed:
            scores.append(ActionScore(
                log.game_id, t, proposer, kind(proposer), ROLE_PROPOSER,
                RegretLabel.UNSCORED, UNSCORED_REJECTED,
            ))
        else:
            delta = proposer_delta_cents(
                config, log.valuations_cents[proposer], offer
            )
            if delta <= 0:
                scores.append(ActionScore(
                    log.game_id, t, proposer, kind(proposer), ROLE_PROPOSER,
                    RegretLabel.UNSCORED, UNSCORED_NEGATIVE,
                    {"surplus_cents": int(delta)},
                ))
            else:
                label, evidence = _commitment_label(
                    log, proposer, t, ROLE_PROPOSER, delta, finals[proposer]
                )
                scores.append(ActionScore(
                    log.game_id, t, proposer, kind(proposer), ROLE_PROPOSER,
                    label, evidence=evidence,
                ))

        pay_idx = config.color_index(offer.get_color)
        for responder in sorted(record.responses):
            resp = record.responses[responder]
            vals = log.valuations_cents[responder]
            delta = responder_delta_cents(config, vals, offer)
            payable = (
                log.holdings_before_turn(t)[responder, pay_idx] >= offer.get_qty
            )
            if resp.accepted:
                if resp.coerced or not payable:
                    scores.append(ActionScore(
                        log.game_id, t, responder, kind(responder), ROLE_ACCEPTOR,
                        RegretLabel.UNSCORED, UNSCORED_INFEASIBLE,
                    ))
                elif delta <= 0:
                    scores.append(ActionScore(
                        log.game_id, t, responder, kind(responder), ROLE_ACCEPTOR,
                        RegretLabel.UNSCORED, UNSCORED_NEGATIVE,
                        {"surplus_cents": int(delta)},
                    ))
                elif record.selected_acceptor != responder:
                    # willing but not selected: committed nothing
                    scores.append(ActionScore(
                        log.game_id, t, responder, kind(responder), ROLE_ACCEPTOR,
                        RegretLabel.NO_REGRET,
                        evidence={"selected": False},
                    ))
                else:
                    label, evidence = _commitment_label(
                        log, responder, t, ROLE_ACCEPTOR, delta, finals[responder]
                    )
                    scores.append(ActionScore(
                        log.game_id, t, responder, kind(responder), ROLE_ACCEPTOR,
                        label, evidence=evidence,
                    ))
            else:
                if not payable:
                    scores.append(ActionScore(
                        log.game_id, t, responder, kind(responder), ROLE_DECLINER,
                        RegretLabel.UNSCORED, UNSCORED_INFEASIBLE,
                    ))
                else:
                    cf = counterfactual_replay(log, responder, t, ACCEPT_INSTEAD)
                    gain = cf.final_value_cents - finals[responder]
                    evidence = {
                        "declined_surplus_cents": int(delta),
                        "counterfactual_gain_cents": int(gain),
                    }
                    label = (
                        RegretLabel.UNFORCED_REGRET if gain >= 1
                        else RegretLabel.NO_REGRET
                    )
                    scores.append(ActionScore(
                        log.game_id, t, responder, kind(responder), ROLE_DECLINER,
                        label, evidence=evidence,
                    ))
    return scores


def regret_summary(logs: Iterable[GameLog]) -> dict[str, dict[str, int]]:
    """Label counts per population kind, plus a scored-action total each."""
    summary: dict[str, dict[str, int]] = {}
    for log in logs:
        for score in classify_actions(log):
            per_kind = summary.setdefault(
                score.player_kind,
                {label.value: 0 for label in RegretLabel} | {"scored": 0},
            )
            per_kind[score.label.value] += 1
            if score.label is not RegretLabel.UNSCORED:
                per_kind["scored"] += 1
    return summary


def write_regret_csv(
    logs: Iterable[GameLog], destination: Union[str, IO[str]]
) -> int:
    """One row per labeled action. Returns the row count."""
    header = [
        "game_id", "turn_index", "player", "player_kind",
        "role", "label", "reason", "evidence",
    ]

    def emit(out: IO[str]) -> int:
        writer = csv.writer(out)
        writer.writerow(header)
        n = 0
        for log in logs:
            for s in classify_actions(log):
                writer.writerow([
                    s.game_id, s.turn_index, s.player, s.player_kind,
                    s.role, s.label.value, s.reason or "",
                    json.dumps(s.evidence, sort_keys=True) if s.evidence else "",
                ])
                n += 1
        return n

    if isinstance(destination, str):
        with open(destination, "w", newline="") as out:
            return emit(out)
    return emit(destination)
