"""Scaled-surplus trajectories: where each turn left the table's welfare."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from ..gamelog import GameLog
from ..pareto import ParetoResult, pareto_optimum, scaled_surplus


def pareto_for_log(log: GameLog) -> ParetoResult:
    return pareto_optimum(log.valuations_cents, log.initial_holdings)


def total_welfare_cents(log: GameLog, holdings: np.ndarray) -> int:
    return int(np.einsum("pc,pc->", log.valuations_cents, holdings))


def surplus_trajectory(
    log: GameLog, pareto: Optional[ParetoResult] = None
) -> np.ndarray:
    """Scaled total surplus after each turn; length is turns plus one.

    Entry 0 is the starting position (0.0 in non-degenerate games); the last
    entry equals the game's final scaled surplus. The series only moves on
    turns whose trade executed, each step worth the trade's welfare change
    over the attainable gain.
    """
    if pareto is None:
        pareto = pareto_for_log(log)
    values = [scaled_surplus(total_welfare_cents(log, log.initial_holdings), pareto).value]
    for record in log.records:
        values.append(
            scaled_surplus(total_welfare_cents(log, record.post_holdings), pareto).value
        )
    return np.array(values, dtype=np.float64)


def final_scaled_surplus(log: GameLog, pareto: Optional[ParetoResult] = None) -> float:
    if pareto is None:
        pareto = pareto_for_log(log)
    return scaled_surplus(total_welfare_cents(log, log.final_holdings()), pareto).value


def write_trajectories_csv(logs: Iterable[GameLog], dest: Union[str, Path]) -> int:
    """One row per game turn (plus the start row); returns rows written."""
    n = 0
    with open(dest, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["game_id", "turn", "scaled_surplus", "degenerate"])
        for log in logs:
            pareto = pareto_for_log(log)
            series = surplus_trajectory(log, pareto)
            for turn, value in enumerate(series):
                writer.writerow([log.game_id, turn, value, pareto.is_degenerate])
                n += 1
    return n
