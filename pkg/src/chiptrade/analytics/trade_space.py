"""Proposal-level dataset: surplus and exchange-rate geometry of offers."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from ..game import proposer_delta_cents
from ..gamelog import GameLog


@dataclass(frozen=True)
class TradePoint:
    """One non-pass proposal, from the proposer's side of the table."""

    game_id: str
    turn_index: int
    proposer: int
    proposer_kind: str
    give_color: str
    give_qty: int
    get_color: str
    get_qty: int
    net_surplus_cents: int   # proposer's wealth change if executed
    trade_ratio: float       # chips offered per chip asked
    accepted: bool           # True when the trade executed


def trade_points(log: GameLog) -> list[TradePoint]:
    points = []
    for record in log.records:
        offer = record.offer
        if offer is None:
            continue
        proposer = record.proposer
        points.append(
            TradePoint(
                game_id=log.game_id,
                turn_index=record.turn_index,
                proposer=proposer,
                proposer_kind=log.population[proposer],
                give_color=offer.give_color,
                give_qty=offer.give_qty,
                get_color=offer.get_color,
                get_qty=offer.get_qty,
                net_surplus_cents=proposer_delta_cents(
                    log.config, log.valuations_cents[proposer], offer
                ),
                trade_ratio=offer.give_qty / offer.get_qty,
                accepted=record.executed,
            )
        )
    return points


def _stats(points: Sequence[TradePoint]) -> dict:
    if not points:
        return {
            "count": 0,
            "surplus_mean_dollars": None,
            "surplus_sd_dollars": None,
            "surplus_median_dollars": None,
            "ratio_mean": None,
            "ratio_sd": None,
            "ratio_median": None,
        }
    surplus = np.array([p.net_surplus_cents for p in points], dtype=np.float64) / 100.0
    ratio = np.array([p.trade_ratio for p in points], dtype=np.float64)
    sd = lambda a: float(np.std(a, ddof=1)) if len(a) > 1 else 0.0
    return {
        "count": len(points),
        "surplus_mean_dollars": float(surplus.mean()),
        "surplus_sd_dollars": sd(surplus),
        "surplus_median_dollars": float(np.median(surplus)),
        "ratio_mean": float(ratio.mean()),
        "ratio_sd": sd(ratio),
        "ratio_median": float(np.median(ratio)),
    }


def trade_space_summary(logs: Iterable[GameLog]) -> dict:
    """Accepted/rejected offer statistics grouped by proposer kind."""
    by_kind: dict[str, list[TradePoint]] = {}
    for log in logs:
        for point in trade_points(log):
            by_kind.setdefault(point.proposer_kind, []).append(point)
    summary = {}
    for kind, points in sorted(by_kind.items()):
        accepted = [p for p in points if p.accepted]
        rejected = [p for p in points if not p.accepted]
        summary[kind] = {
            "accepted": _stats(accepted),
            "rejected": _stats(rejected),
            "rejection_rate": len(rejected) / len(points) if points else None,
        }
    return summary


def write_trade_space_csv(logs: Iterable[GameLog], dest: Union[str, Path]) -> int:
    """One row per proposal; returns the number of rows written."""
    rows = [p for log in logs for p in trade_points(log)]
    fields = [
        "game_id", "turn_index", "proposer", "proposer_kind",
        "give_color", "give_qty", "get_color", "get_qty",
        "net_surplus_cents", "trade_ratio", "accepted",
    ]
    with open(dest, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for p in rows:
            writer.writerow([getattr(p, f) for f in fields])
    return len(rows)
