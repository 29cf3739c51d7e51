"""Counterfactual replay: identity fidelity, substitutions, selection rules."""

import numpy as np
import pytest

from chiptrade import GameConfig, TradeOffer, welfare_cents
from chiptrade.analytics import (
    ACCEPT_INSTEAD,
    DECLINE_INSTEAD,
    PASS_INSTEAD,
    counterfactual_replay,
    replay_with_substitutions,
)
from chiptrade.harness import run_game

from fixtures import scripted_log


def _locked_out_log():
    """P2 spends all green on turn 0, then cannot pay for turn 1's offer."""
    vals = [[50, 10, 10], [50, 10, 10], [50, 100, 10]]
    turns = [
        (TradeOffer("red", 6, "green", 10), {1: False, 2: True}),
        (TradeOffer("red", 8, "green", 9), {0: False, 2: True}),
    ]
    return scripted_log(vals, turns)


class TestIdentityReplay:
    def test_matches_recorded_holdings_exactly(self):
        log = run_game(GameConfig(seed=41), ("bayesian",) * 3, game_id="g")
        for focal in range(3):
            result = replay_with_substitutions(log, focal, {})
            assert np.array_equal(result.holdings_path[-1], log.final_holdings())
            for i, record in enumerate(log.records):
                assert np.array_equal(
                    result.holdings_path[i + 1], record.post_holdings
                )
                assert result.executed[i] == record.executed

    def test_value_path_tracks_focal_wealth(self):
        log = _locked_out_log()
        result = replay_with_substitutions(log, 2, {})
        assert len(result.value_path_cents) == len(log.records) + 1
        assert result.value_path_cents[0] == welfare_cents(
            log.valuations_cents[2], log.initial_holdings[2]
        )
        # turn 0 trade: +6 red (100c), -10 green (50c) for seat 2
        assert result.value_path_cents[1] - result.value_path_cents[0] == 100
        assert result.final_value_cents == result.value_path_cents[-1]


class TestSubstitutions:
    def test_decline_instead_removes_the_trade(self):
        log = _locked_out_log()
        result = replay_with_substitutions(log, 2, {0: DECLINE_INSTEAD})
        assert result.executed[0] is False
        assert np.array_equal(result.holdings_path[1], log.initial_holdings)

    def test_pass_instead_drops_the_proposal(self):
        log = _locked_out_log()
        result = replay_with_substitutions(log, 0, {0: PASS_INSTEAD})
        assert result.executed[0] is False
        # with turn 0 gone, seat 2 can pay on turn 1, and its recorded
        # accept intent (coerced in actual play) goes live
        assert result.executed[1] is True

    def test_accept_instead_forces_focal_selection(self):
        log = _locked_out_log()
        # seat 1 declined on turn 0 while seat 2 accepted and was selected
        result = replay_with_substitutions(log, 1, {0: ACCEPT_INSTEAD})
        assert result.executed[0] is True
        # seat 1 got the chips, not seat 2
        assert result.holdings_path[1][1, 1] == 16  # red
        assert result.holdings_path[1][2, 1] == 10

    def test_combined_undo_and_take_later(self):
        log = _locked_out_log()
        actual = replay_with_substitutions(log, 2, {})
        combined = replay_with_substitutions(
            log, 2, {0: DECLINE_INSTEAD, 1: ACCEPT_INSTEAD}
        )
        assert combined.executed == (False, True) + (False,) * 7
        assert combined.final_value_cents - actual.final_value_cents == 250

    def test_infeasible_substituted_accept_strict_raises(self):
        log = _locked_out_log()
        with pytest.raises(ValueError, match="not payable"):
            replay_with_substitutions(log, 2, {1: ACCEPT_INSTEAD})

    def test_infeasible_substituted_accept_lenient_declines(self):
        log = _locked_out_log()
        result = replay_with_substitutions(
            log, 2, {1: ACCEPT_INSTEAD}, strict=False
        )
        assert result.executed[1] is False


class TestSelectionFallback:
    def test_recorded_acceptor_keeps_trade_when_still_payable(self):
        # seed chosen so the turn-1 draw picks seat 2 out of {0, 2}
        vals = [[50, 10, 90], [50, 10, 10], [50, 10, 90]]
        turns = [
            (TradeOffer("blue", 1, "green", 8), {1: True, 2: False}),
            (TradeOffer("blue", 1, "green", 3), {0: True, 2: True}),
        ]
        for seed in range(100):
            log = scripted_log(vals, turns, config=GameConfig(seed=seed))
            if log.records[1].selected_acceptor == 2:
                break
        else:
            pytest.fail("no seed selected seat 2")
        # substituting seat 1's turn-0 response leaves turn 1 payable for
        # both accepters; the recorded winner must keep the trade
        result = replay_with_substitutions(log, 1, {0: DECLINE_INSTEAD})
        assert result.executed[1] is True
        assert result.holdings_path[2][2, 2] == 11  # blue went to seat 2

    def test_unpayable_recorded_acceptor_falls_to_remaining(self):
        vals = [[50, 10, 90], [50, 10, 10], [50, 10, 90]]
        turns = [
            (TradeOffer("blue", 1, "green", 8), {1: True, 2: False}),
            (TradeOffer("blue", 1, "green", 3), {0: True, 2: True}),
        ]
        for seed in range(100):
            log = scripted_log(vals, turns, config=GameConfig(seed=seed))
            if log.records[1].selected_acceptor == 2:
                break
        else:
            pytest.fail("no seed selected seat 2")
        # accept-instead on turn 0 drains seat 2's green to 2 < 3, so the
        # recorded turn-1 winner can no longer pay and seat 0 takes it
        result = replay_with_substitutions(log, 2, {0: ACCEPT_INSTEAD})
        assert result.executed[1] is True
        assert result.holdings_path[2][0, 2] - result.holdings_path[1][0, 2] == 1
        assert result.holdings_path[2][0, 0] - result.holdings_path[1][0, 0] == -3
        assert result.holdings_path[2][2, 2] == 11  # from the forced turn 0

    def test_lowest_seat_wins_among_several_survivors(self):
        config = GameConfig(n_players=4, seed=0)
        vals = [[50, 10, 10]] * 4
        turns = [(TradeOffer("blue", 1, "green", 8), {1: True, 2: True, 3: True})]
        for seed in range(200):
            log = scripted_log(
                vals,
                turns,
                population=("a",) * 4,
                config=GameConfig(n_players=4, seed=seed),
                turn_order=(0, 1, 2, 3),
            )
            if log.records[0].selected_acceptor == 3:
                break
        else:
            pytest.fail("no seed selected seat 3")
        result = replay_with_substitutions(log, 3, {0: DECLINE_INSTEAD})
        assert result.executed[0] is True
        # seats 1 and 2 still accept; the lowest seat gets the trade
        assert result.holdings_path[1][1, 2] == 11


class TestPublicApi:
    def test_identity_via_no_substitutions_is_default_behavior(self):
        log = _locked_out_log()
        single = counterfactual_replay(log, 2, 0, DECLINE_INSTEAD)
        assert single.executed[0] is False

    def test_rejects_bad_turn_index(self):
        log = _locked_out_log()
        with pytest.raises(ValueError, match="no recorded turn"):
            counterfactual_replay(log, 0, 99, PASS_INSTEAD)

    def test_rejects_pass_instead_for_non_proposer(self):
        log = _locked_out_log()
        with pytest.raises(ValueError, match="proposal"):
            counterfactual_replay(log, 1, 0, PASS_INSTEAD)

    def test_rejects_response_substitution_for_proposer(self):
        log = _locked_out_log()
        with pytest.raises(ValueError, match="respond"):
            counterfactual_replay(log, 0, 0, ACCEPT_INSTEAD)

    def test_rejects_unknown_alternative(self):
        log = _locked_out_log()
        with pytest.raises(ValueError, match="unknown alternative"):
            counterfactual_replay(log, 1, 0, "shrug")

    def test_rejects_substitution_on_a_pass(self):
        log = _locked_out_log()
        with pytest.raises(ValueError, match="no offer"):
            counterfactual_replay(log, 0, 2, PASS_INSTEAD)

    def test_unpayable_accept_instead_raises(self):
        log = _locked_out_log()
        with pytest.raises(ValueError, match="not payable"):
            counterfactual_replay(log, 2, 1, ACCEPT_INSTEAD)
