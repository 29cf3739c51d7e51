"""Shared helpers for building hand-scripted game logs in tests."""

from __future__ import annotations

import numpy as np

from chiptrade import GameConfig, apply_turn, log_from_state, new_game


def scripted_log(
    valuations,
    turns,
    population=("a", "b", "c"),
    config=None,
    turn_order=(0, 1, 2),
    pad=True,
    game_id="fixture",
):
    """Drive the real engine through a scripted turn list and log it.

    ``turns`` is a list of (offer, responses) pairs fed to apply_turn in
    order; a pass is (None, {}). With ``pad`` the remaining turns are filled
    with passes so the log covers a complete game.
    """
    config = config or GameConfig(seed=123)
    state = new_game(config)
    state.valuations_cents = np.array(valuations, dtype=np.int64)
    state.turn_order = tuple(turn_order)
    for offer, responses in turns:
        apply_turn(state, offer, responses)
    if pad:
        while not state.is_over():
            apply_turn(state, None, {})
    return log_from_state(state, population, game_id=game_id)
