"""Prompt rendering, tag parsing, and the model-seat agent's guard rails."""

import json

import numpy as np
import pytest

from chiptrade import GameConfig, TradeOffer, apply_turn, new_game, validate_offer
from chiptrade.agents.base import AgentObservation, observation_for
from chiptrade.llm import (
    LlmAgent,
    LlmProfile,
    ParseError,
    RULES_TEXT,
    ROLE_PROPOSER,
    ROLE_REFINED_GENERATE,
    ROLE_REFINED_SELECT,
    ROLE_RESPONDER,
    ScriptedTransport,
    TemplateError,
    build_prompt,
    load_profile,
    parse_choice,
    parse_proposal,
    parse_proposals,
)

CONFIG = GameConfig(seed=0)

GOOD_PROPOSAL = """<REASONING>
I want red chips.
</REASONING>
<CHECK>
I hold 10 green chips, giving 2 is fine.
</CHECK>
<GET_COLOR>red</GET_COLOR>
<GET_QUANTITY>3</GET_QUANTITY>
<GIVE_COLOR>green</GIVE_COLOR>
<GIVE_QUANTITY>2</GIVE_QUANTITY>"""


def _obs(seat=0, vals=(50, 80, 30), holdings=None, history=(), turn_index=0):
    holdings = holdings if holdings is not None else np.full((3, 3), 10)
    return AgentObservation(
        seat=seat,
        config=CONFIG,
        valuations_cents=np.array(vals, dtype=np.int64),
        holdings=np.array(holdings, dtype=np.int64),
        history=tuple(history),
        turn_index=turn_index,
        round_index=0,
    )


class TestTagParsing:
    def test_well_formed_proposal(self):
        parsed = parse_proposal(GOOD_PROPOSAL, CONFIG)
        assert parsed.offer == TradeOffer("green", 2, "red", 3)
        assert parsed.reasoning == "I want red chips."
        assert "10 green chips" in parsed.check

    def test_tags_are_case_insensitive(self):
        text = GOOD_PROPOSAL.lower()
        assert parse_proposal(text, CONFIG).offer == TradeOffer("green", 2, "red", 3)

    def test_backslash_closer_accepted(self):
        text = GOOD_PROPOSAL.replace("</GET_COLOR>", "<\\GET_COLOR>")
        assert parse_proposal(text, CONFIG).offer.get_color == "red"

    def test_whitespace_inside_tags_tolerated(self):
        text = "< GET_COLOR > red < / GET_COLOR >" + GOOD_PROPOSAL.replace(
            "<GET_COLOR>red</GET_COLOR>", ""
        )
        assert parse_proposal(text, CONFIG).offer.get_color == "red"

    def test_quantity_with_surrounding_words(self):
        text = GOOD_PROPOSAL.replace(
            "<GET_QUANTITY>3</GET_QUANTITY>",
            "<GET_QUANTITY> 3 chips please </GET_QUANTITY>",
        )
        assert parse_proposal(text, CONFIG).offer.get_qty == 3

    def test_missing_closer_is_a_parse_error(self):
        text = GOOD_PROPOSAL.replace("</GET_QUANTITY>", "")
        with pytest.raises(ParseError):
            parse_proposal(text, CONFIG)

    def test_missing_tag_names_the_gap(self):
        text = GOOD_PROPOSAL.replace("<GIVE_COLOR>green</GIVE_COLOR>", "")
        with pytest.raises(ParseError, match="GIVE_COLOR"):
            parse_proposal(text, CONFIG)

    def test_unknown_color_rejected(self):
        text = GOOD_PROPOSAL.replace(">red<", ">mauve<")
        with pytest.raises(ParseError, match="one known color"):
            parse_proposal(text, CONFIG)

    def test_two_colors_in_one_tag_rejected(self):
        text = GOOD_PROPOSAL.replace(">red<", ">red or blue<")
        with pytest.raises(ParseError, match="one known color"):
            parse_proposal(text, CONFIG)

    def test_zero_quantity_rejected(self):
        text = GOOD_PROPOSAL.replace(
            "<GET_QUANTITY>3</GET_QUANTITY>", "<GET_QUANTITY>0</GET_QUANTITY>"
        )
        with pytest.raises(ParseError, match="positive"):
            parse_proposal(text, CONFIG)

    def test_negative_quantity_rejected(self):
        text = GOOD_PROPOSAL.replace(
            "<GET_QUANTITY>3</GET_QUANTITY>", "<GET_QUANTITY>-2</GET_QUANTITY>"
        )
        with pytest.raises(ParseError, match="positive"):
            parse_proposal(text, CONFIG)

    def test_non_numeric_quantity_rejected(self):
        text = GOOD_PROPOSAL.replace(
            "<GET_QUANTITY>3</GET_QUANTITY>", "<GET_QUANTITY>many</GET_QUANTITY>"
        )
        with pytest.raises(ParseError, match="integer"):
            parse_proposal(text, CONFIG)

    def test_same_color_both_sides_rejected(self):
        text = GOOD_PROPOSAL.replace(
            "<GIVE_COLOR>green</GIVE_COLOR>", "<GIVE_COLOR>red</GIVE_COLOR>"
        )
        with pytest.raises(ParseError, match="same color"):
            parse_proposal(text, CONFIG)

    def test_parse_error_carries_offending_span(self):
        text = GOOD_PROPOSAL.replace(">red<", ">mauve<")
        with pytest.raises(ParseError) as exc_info:
            parse_proposal(text, CONFIG)
        assert "mauve" in exc_info.value.offending


class TestMultipleProposals:
    def _blocks(self, n):
        block = GOOD_PROPOSAL.replace(
            "<GET_QUANTITY>3</GET_QUANTITY>", "<GET_QUANTITY>{i}</GET_QUANTITY>"
        )
        return "\n\n".join(block.replace("{i}", str(i + 1)) for i in range(n))

    def test_three_groups_in_order(self):
        parsed = parse_proposals(self._blocks(3), CONFIG)
        assert [p.offer.get_qty for p in parsed] == [1, 2, 3]

    def test_extra_groups_beyond_limit_dropped(self):
        parsed = parse_proposals(self._blocks(5), CONFIG)
        assert len(parsed) == 3

    def test_partial_final_group_ignored(self):
        text = self._blocks(2) + "\n<GET_COLOR>blue</GET_COLOR>"
        parsed = parse_proposals(text, CONFIG)
        assert len(parsed) == 2

    def test_reasoning_aligned_per_group(self):
        text = self._blocks(2).replace(
            "I want red chips.", "First idea.", 1
        )
        parsed = parse_proposals(text, CONFIG)
        assert parsed[0].reasoning == "First idea."
        assert parsed[1].reasoning == "I want red chips."


class TestChoiceParsing:
    def test_yes_accepts(self):
        text = "<REASONING>Profit.</REASONING>\n<CHOICE>Yes</CHOICE>"
        parsed = parse_choice(text)
        assert parsed.accept is True
        assert parsed.reasoning == "Profit."

    def test_no_declines(self):
        assert parse_choice("<CHOICE> no. </CHOICE>").accept is False

    def test_case_and_padding_tolerated(self):
        assert parse_choice("<choice>  YES indeed </choice>").accept is True

    def test_missing_choice_tag(self):
        with pytest.raises(ParseError, match="CHOICE"):
            parse_choice("<REASONING>hm</REASONING>")

    def test_ambiguous_choice(self):
        with pytest.raises(ParseError, match="Yes nor No"):
            parse_choice("<CHOICE>maybe</CHOICE>")

    def test_reasoning_optional(self):
        assert parse_choice("<CHOICE>No</CHOICE>").reasoning == ""


class TestPromptRendering:
    def test_rules_text_embedded_verbatim(self):
        bundle = build_prompt(ROLE_PROPOSER, _obs())
        assert bundle.text.startswith(RULES_TEXT)

    def test_rendering_is_deterministic(self):
        a = build_prompt(ROLE_PROPOSER, _obs())
        b = build_prompt(ROLE_PROPOSER, _obs())
        assert a.text == b.text

    def test_proposer_prompt_lists_own_holdings(self):
        holdings = np.array([[4, 7, 2], [10, 10, 10], [10, 10, 10]])
        bundle = build_prompt(ROLE_PROPOSER, _obs(holdings=holdings))
        assert "4 green chips, 7 red chips, 2 blue chips" in bundle.text

    def test_proposer_prompt_lists_valuations(self):
        bundle = build_prompt(ROLE_PROPOSER, _obs(vals=(50, 80, 30)))
        assert "each red chip is worth $0.80" in bundle.text

    def test_responder_prompt_embeds_wealth_change(self):
        # responder would receive 2 red at $0.80 and give 1 green at $0.50
        offer = TradeOffer("red", 2, "green", 1)
        bundle = build_prompt(ROLE_RESPONDER, _obs(), offer=offer, proposer=1)
        assert "+1.10" in bundle.text
        assert "Player 2 is offering to give 2 red chips" in bundle.text
        assert "get 1 green chips" in bundle.text

    def test_responder_prompt_negative_change(self):
        offer = TradeOffer("green", 1, "red", 2)
        bundle = build_prompt(ROLE_RESPONDER, _obs(), offer=offer, proposer=2)
        assert "-1.10" in bundle.text

    def test_history_lines(self):
        state = new_game(GameConfig(seed=5))
        state.turn_order = (0, 1, 2)
        apply_turn(state, TradeOffer("green", 1, "red", 1), {1: True, 2: False})
        apply_turn(state, None, {})
        apply_turn(state, TradeOffer("blue", 2, "red", 1), {0: False, 1: False})
        obs = observation_for(state, 0)
        history = build_prompt(ROLE_PROPOSER, obs).text
        assert (
            "Round 1, Turn 1: Player 1 offered to give 1 green chips for "
            "1 red chips; accepted by Player 2." in history
        )
        assert "Round 1, Turn 2: Player 2 passed." in history
        assert (
            "Round 1, Turn 3: Player 3 offered to give 2 blue chips for "
            "1 red chips; no one accepted." in history
        )

    def test_empty_history_placeholder(self):
        bundle = build_prompt(ROLE_PROPOSER, _obs())
        assert "(no proposals yet)" in bundle.text

    def test_refined_select_embeds_all_candidates(self):
        blocks = [f"<REASONING>idea {i}</REASONING>" for i in range(3)]
        bundle = build_prompt(ROLE_REFINED_SELECT, _obs(), candidates=blocks)
        for block in blocks:
            assert block in bundle.text

    def test_responder_without_offer_is_an_error(self):
        with pytest.raises(TemplateError, match="offer"):
            build_prompt(ROLE_RESPONDER, _obs())

    def test_select_without_candidates_is_an_error(self):
        with pytest.raises(TemplateError, match="candidate"):
            build_prompt(ROLE_REFINED_SELECT, _obs())

    def test_offer_on_proposer_prompt_is_an_error(self):
        with pytest.raises(TemplateError, match="no offer"):
            build_prompt(
                ROLE_PROPOSER, _obs(), offer=TradeOffer("red", 1, "green", 1)
            )

    def test_unknown_role_rejected(self):
        with pytest.raises(ValueError, match="unknown prompt role"):
            build_prompt("oracle", _obs())

    def test_temperature_default(self):
        assert build_prompt(ROLE_PROPOSER, _obs()).temperature == 0.5


class TestOutOfBoxAgent:
    def _profile(self, **kw):
        return LlmProfile(model="fake-1", **kw)

    def test_valid_proposal_reaches_engine_verbatim(self):
        transport = ScriptedTransport([GOOD_PROPOSAL])
        agent = LlmAgent(transport, self._profile(), seat=0)
        state = new_game(GameConfig(seed=2))
        state.turn_order = (0, 1, 2)
        offer = agent.propose(observation_for(state, 0))
        assert offer == TradeOffer("green", 2, "red", 3)
        ok, reason = validate_offer(state, 0, offer)
        assert ok, reason
        assert len(transport.calls) == 1
        assert transport.calls[0]["model"] == "fake-1"
        assert transport.calls[0]["temperature"] == 0.5
        assert transport.calls[0]["messages"][0]["role"] == "user"

    def test_garbage_thrice_degrades_to_pass(self):
        transport = ScriptedTransport(["nope", "still no", "hmm"])
        agent = LlmAgent(transport, self._profile(), seat=0)
        offer = agent.propose(_obs())
        assert offer is None
        assert len(transport.calls) == 3  # first try plus two retries
        assert agent.degradations[0].phase == "propose"

    def test_retry_recovers_after_one_bad_reply(self):
        transport = ScriptedTransport(["garbled", GOOD_PROPOSAL])
        agent = LlmAgent(transport, self._profile(), seat=0)
        offer = agent.propose(_obs())
        assert offer == TradeOffer("green", 2, "red", 3)
        assert agent.degradations == []

    def test_transport_failure_consumes_retries_then_degrades(self):
        transport = ScriptedTransport([])  # raises on every call
        agent = LlmAgent(transport, self._profile(), seat=0)
        assert agent.propose(_obs()) is None
        assert len(transport.calls) == 3
        assert agent.degradations[0].reason == "unparseable proposal"

    def test_uncovered_give_degrades_to_pass(self):
        text = GOOD_PROPOSAL.replace(
            "<GIVE_QUANTITY>2</GIVE_QUANTITY>", "<GIVE_QUANTITY>99</GIVE_QUANTITY>"
        )
        transport = ScriptedTransport([text])
        agent = LlmAgent(transport, self._profile(), seat=0)
        assert agent.propose(_obs()) is None
        assert agent.degradations[0].reason == "offer exceeds holdings"

    def test_unaffordable_ask_is_not_degraded(self):
        # asking beyond anyone's holdings is legal and acts as a refusal
        text = GOOD_PROPOSAL.replace(
            "<GET_QUANTITY>3</GET_QUANTITY>", "<GET_QUANTITY>9999</GET_QUANTITY>"
        )
        transport = ScriptedTransport([text])
        agent = LlmAgent(transport, self._profile(), seat=0)
        offer = agent.propose(_obs())
        assert offer is not None and offer.get_qty == 9999

    def test_respond_yes(self):
        transport = ScriptedTransport(["<CHOICE>Yes</CHOICE>"])
        agent = LlmAgent(transport, self._profile(), seat=1)
        obs = _obs(seat=1)
        assert agent.respond(obs, 0, TradeOffer("red", 2, "green", 1)) is True

    def test_respond_garbage_degrades_to_decline(self):
        transport = ScriptedTransport(["?", "??", "???"])
        agent = LlmAgent(transport, self._profile(), seat=1)
        obs = _obs(seat=1)
        assert agent.respond(obs, 0, TradeOffer("red", 2, "green", 1)) is False
        assert agent.degradations[0].phase == "respond"

    def test_custom_retry_budget(self):
        transport = ScriptedTransport(["a", "b", "c", "d", "e"])
        agent = LlmAgent(transport, self._profile(retry_budget=4), seat=0)
        assert agent.propose(_obs()) is None
        assert len(transport.calls) == 5


class TestRefinedAgent:
    def _agent(self, replies):
        transport = ScriptedTransport(replies)
        profile = LlmProfile(model="fake-2", mode="refined")
        return LlmAgent(transport, profile, seat=0), transport

    def _generate_reply(self):
        blocks = []
        for qty in (1, 2, 3):
            blocks.append(
                GOOD_PROPOSAL.replace(
                    "<GET_QUANTITY>3</GET_QUANTITY>",
                    f"<GET_QUANTITY>{qty}</GET_QUANTITY>",
                )
            )
        return "\n\n".join(blocks)

    def test_exactly_two_calls_per_proposal(self):
        select_reply = GOOD_PROPOSAL.replace(
            "<GET_QUANTITY>3</GET_QUANTITY>", "<GET_QUANTITY>2</GET_QUANTITY>"
        )
        agent, transport = self._agent([self._generate_reply(), select_reply])
        offer = agent.propose(_obs())
        assert offer == TradeOffer("green", 2, "red", 2)
        assert len(transport.calls) == 2

    def test_select_prompt_carries_all_three_candidates(self):
        select_reply = GOOD_PROPOSAL
        agent, transport = self._agent([self._generate_reply(), select_reply])
        agent.propose(_obs())
        select_prompt = transport.calls[1]["messages"][0]["content"]
        for qty in (1, 2, 3):
            assert f"<GET_QUANTITY>{qty}</GET_QUANTITY>" in select_prompt

    def test_unparseable_generation_degrades_without_select_call(self):
        agent, transport = self._agent(["junk", "junk", "junk"])
        assert agent.propose(_obs()) is None
        assert len(transport.calls) == 3
        assert agent.degradations[0].reason == "unparseable candidates"

    def test_unparseable_selection_degrades(self):
        agent, transport = self._agent(
            [self._generate_reply(), "junk", "junk", "junk"]
        )
        assert agent.propose(_obs()) is None
        assert len(transport.calls) == 4
        assert agent.degradations[0].reason == "unparseable proposal"


class TestProfiles:
    def test_load_profile_round_trip(self, tmp_path):
        path = tmp_path / "profile.json"
        path.write_text(
            json.dumps(
                {
                    "model": "gpt-something",
                    "mode": "refined",
                    "endpoint": "https://example.test/v1/chat",
                    "api_key_env": "FAKE_KEY",
                    "temperature": 0.7,
                    "retry_budget": 1,
                }
            )
        )
        profile = load_profile(path)
        assert profile.model == "gpt-something"
        assert profile.mode == "refined"
        assert profile.temperature == 0.7
        assert profile.retry_budget == 1

    def test_defaults(self):
        profile = LlmProfile(model="m")
        assert profile.temperature == 0.5
        assert profile.retry_budget == 2
        assert profile.mode == "out-of-box"

    def test_unknown_field_rejected(self, tmp_path):
        path = tmp_path / "profile.json"
        path.write_text(json.dumps({"model": "m", "favorite_color": "red"}))
        with pytest.raises(ValueError, match="unknown profile fields"):
            load_profile(path)

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError, match="mode"):
            LlmProfile(model="m", mode="extreme")

    def test_negative_retry_budget_rejected(self):
        with pytest.raises(ValueError, match="retry_budget"):
            LlmProfile(model="m", retry_budget=-1)


class TestTranscript:
    def test_every_exchange_is_logged(self, tmp_path):
        path = tmp_path / "transcript.jsonl"
        profile = LlmProfile(model="fake", transcript_path=str(path))
        transport = ScriptedTransport(["junk", GOOD_PROPOSAL])
        agent = LlmAgent(transport, profile, seat=0)
        agent.propose(_obs())
        entries = [json.loads(line) for line in path.read_text().splitlines()]
        assert len(entries) == 2
        assert entries[0]["outcome"].startswith("parse_error")
        assert entries[1]["outcome"] == "ok"
        assert entries[0]["prompt"] == entries[1]["prompt"]
        assert entries[1]["response"] == GOOD_PROPOSAL
        assert entries[1]["seat"] == 0
