"""Prompt construction for language-model seats.

Every prompt is the fixed rules text followed by a role template whose
{{slots}} are filled from the public observation. Rendering is pure string
work: same observation, byte-identical prompt.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..agents.base import AgentObservation
from ..game import GameConfig, TradeOffer, responder_delta_cents

ROLE_PROPOSER = "proposer"
ROLE_RESPONDER = "responder"
ROLE_REFINED_GENERATE = "refined-generate"
ROLE_REFINED_SELECT = "refined-select"

DEFAULT_TEMPERATURE = 0.5

RULES_TEXT = """How the game works:
The game consists of 3 rounds of trading. During each round, each player will have a turn to propose 1 trade. These turns are pre-determined in a random order and the order stays the same in each round.

Trade proposals:
To propose a trade, a player must:
1. Request a certain quantity of chips of a single color from any other player to get.
2. Specify a certain quantity of chips of a different color to give in return.

Trade rules:
Players cannot offer more chips than they currently hold. For example, if you only have 5 red chips, you cannot offer 6 red chips.
Players cannot trade chips of the same color. For example, you cannot trade red chips for red chips.

Trade completion:
When an offer is presented, all other active participants get a chance to accept or decline. Note: Active participants are those not currently making the offer.

Participants make their decisions simultaneously and privately. The participant who receives the offer is not dependent on who accepts the trade first. Some possible outcomes:
If no one accepts, the trade does not happen, and the turn ends.
If multiple participants accept, one accepting participant is chosen at random to complete the trade with the offering participant. This means that participants cannot choose who they trade with.
If only one participant accepts, the trade will happen.

Key points to remember:
In each round, each player gets to propose one trade and respond to other player's trades
You can only propose trades between different colored chips, and cannot offer to give a chip amount that you do not have
When multiple players accept a trade, the trading partner is randomly selected"""

_TAG_BLOCK = """<REASONING>
[Provide your concise reasoning in a few sentences, e.g. To gain more surplus, I want more xxx chips]
</REASONING>

<CHECK>
[check if you have sufficient chips to trade. If you have n green chips, you can at most give n green chips. If you don't want to trade, you can ask for a large amount of chips that no one can afford]
<\\CHECK>

<GET_COLOR> Color, e.g. red</GET_COLOR>
<GET_QUANTITY> quantity, e.g. n </GET_QUANTITY>
<GIVE_COLOR> Color, e.g. red</GIVE_COLOR>
<GIVE_QUANTITY> quantity, e.g. n </GIVE_QUANTITY>"""

PROPOSER_TEMPLATE = """You are {{name}}.
Your valuations of the different types of chips are: {{preference_description}}.
You now have the following amounts of each chip: {{item}}.
The conversation history so far is {{history}}.

REMEMBER, to propose a trade, you must:
Request a certain quantity of chips of a single color from any other player to get
Specify a certain quantity of chips of a different color to give in return

REMEMBER you have the following amounts of each chip: {{item}}.
Your goal is to make as much money as possible. The trades, you choose to make to accomplish this, are up to you.
As a part of making money you must be rational - do not propose a trade in which you lose money. The value of a trade to you is the difference between the total value of chips you receive (quantity x your valuation) minus the total value of chips you give up (quantity x your valuation). Only propose trades that give you positive value.
In short, your trades should be both incentive compatible and incentive rational.
Your response must use these EXACT tags below. The response should include nothing else besides the tags, your trade offer, and your reasoning. The text between tags should be concise.
```
""" + _TAG_BLOCK + """
```"""

RESPONDER_TEMPLATE = """You are {{name}}.
Your valuations of the different types of chips are: {{preference_description}}.
You now have the following amounts of each chip: {{item}}.
The conversation history so far is {{history}}.

You have an offer. {{proposer}} is offering to give {{give}} and get {{get}} in return.
If you make this trade, your total wealth will change by: {{delta_surplus}}

Now, you need to decide whether to accept or decline.
Your response must use these EXACT tags below. The response should include nothing else besides the tags, your choice to accept or decline, and your reasoning. The text between tags should be concise.
```
<REASONING>
[Provide your concise reasoning in a few sentences.]
</REASONING>

<CHOICE>Yes or No </CHOICE>
```"""

REFINED_GENERATE_TEMPLATE = """You are {{name}}.
Your valuations of the different types of chips are: {{preference_description}}.
You now have the following amounts of each chip: {{item}}.
The conversation history so far is {{history}}.

REMEMBER, to propose a trade, you must:
Request a certain quantity of chips of a single color from any other player to get
Specify a certain quantity of chips of a different color to give in return

REMEMBER you have the following amounts of each chip: {{item}}.
Your goal is to make as much money as possible. The trades, you choose to make to accomplish this, are up to you.
As a part of making money you must be rational - do not propose a trade in which you lose money. The value of a trade to you is the difference between the total value of chips you receive (quantity x your valuation) minus the total value of chips you give up (quantity x your valuation). Only propose trades that give you positive value.
In short, your trades should be both incentive compatible and incentive rational.
You can trade as many chips as you want in a single turn, assuming you have that many. Do not feel constrained to only trade a single chip at a time.
Propose 3 different good trade ideas, so a next step can decide on the best trade of the ones you propose here.
Your response must use these EXACT tags below. The response should include nothing else besides the tags, your trade offer, and your reasoning. The text between tags should be concise.
Repeat the below tags once for each of the trade ideas you propose.
```
""" + _TAG_BLOCK + """
```"""

REFINED_SELECT_TEMPLATE = """You are {{name}}.
Your valuations of the different types of chips are: {{preference_description}}.
You now have the following amounts of each chip: {{item}}.
The conversation history so far is {{history}}.

REMEMBER, to propose a trade, you must:
Request a certain quantity of chips of a single color from any other player to get
Specify a certain quantity of chips of a different color to give in return

REMEMBER you have the following amounts of each chip: {{item}}.
Your goal is to make as much money as possible. The trades, you choose to make to accomplish this, are up to you.
As a part of making money you must be rational - do not propose a trade in which you lose money. The value of a trade to you is the difference between the total value of chips you receive (quantity x your valuation) minus the total value of chips you give up (quantity x your valuation). Only propose trades that give you positive value.
In short, your trades should be both incentive compatible and incentive rational.
You can trade as many chips as you want in a single turn, assuming you have that many. Do not feel constrained to only trade a single chip at a time.

Below are three trade ideas you have proposed. Please pick the best trade proposal from the ones below that you will propose to the group.
Do not change anything about the trade you have selected from the ideas below.
Your response must use these EXACT tags below. The response should include nothing else besides the tags and content of your selected trade offer including its reasoning.
```
""" + _TAG_BLOCK + """
```

Proposed trade ideas to choose from:
{{proposed}}"""

_TEMPLATES = {
    ROLE_PROPOSER: PROPOSER_TEMPLATE,
    ROLE_RESPONDER: RESPONDER_TEMPLATE,
    ROLE_REFINED_GENERATE: REFINED_GENERATE_TEMPLATE,
    ROLE_REFINED_SELECT: REFINED_SELECT_TEMPLATE,
}


class TemplateError(ValueError):
    """A slot required by the template had no value."""


@dataclass(frozen=True)
class PromptBundle:
    role: str
    text: str
    temperature: float = DEFAULT_TEMPERATURE


def player_name(seat: int) -> str:
    return f"Player {seat + 1}"


def dollars(cents: int) -> str:
    return f"${cents / 100:.2f}"


def signed_dollars(cents: int) -> str:
    return f"${cents / 100:+.2f}"


def preference_description(config: GameConfig, valuations_cents) -> str:
    return ", ".join(
        f"each {color} chip is worth {dollars(int(v))}"
        for color, v in zip(config.colors, valuations_cents)
    )


def holdings_description(config: GameConfig, holdings_row) -> str:
    return ", ".join(
        f"{int(q)} {color} chips" for color, q in zip(config.colors, holdings_row)
    )


def offer_side(qty: int, color: str) -> str:
    return f"{qty} {color} chips"


def history_description(observation: AgentObservation) -> str:
    """The public ledger as one compact line per completed turn."""
    lines = []
    for record in observation.history:
        who = player_name(record.proposer)
        prefix = f"Round {record.round_index + 1}, Turn {record.turn_index + 1}: "
        if record.offer is None:
            lines.append(prefix + f"{who} passed.")
            continue
        offer = record.offer
        body = (
            f"{who} offered to give "
            f"{offer_side(offer.give_qty, offer.give_color)} for "
            f"{offer_side(offer.get_qty, offer.get_color)}"
        )
        if record.executed:
            body += f"; accepted by {player_name(record.selected_acceptor)}."
        else:
            body += "; no one accepted."
        lines.append(prefix + body)
    if not lines:
        return "(no proposals yet)"
    return "\n".join(lines)


def render_template(template: str, slots: dict[str, str]) -> str:
    text = template
    for key, value in slots.items():
        text = text.replace("{{" + key + "}}", value)
    if "{{" in text and "}}" in text:
        start = text.index("{{")
        end = text.index("}}", start)
        raise TemplateError(f"unfilled slot {text[start:end + 2]!r}")
    return text


def candidate_block(reasoning: str, check: str, offer: TradeOffer) -> str:
    """Render one generated trade idea back into its tag form."""
    return (
        f"<REASONING>\n{reasoning}\n</REASONING>\n\n"
        f"<CHECK>\n{check}\n</CHECK>\n\n"
        f"<GET_COLOR>{offer.get_color}</GET_COLOR>\n"
        f"<GET_QUANTITY>{offer.get_qty}</GET_QUANTITY>\n"
        f"<GIVE_COLOR>{offer.give_color}</GIVE_COLOR>\n"
        f"<GIVE_QUANTITY>{offer.give_qty}</GIVE_QUANTITY>"
    )


def build_prompt(
    role: str,
    observation: AgentObservation,
    offer: Optional[TradeOffer] = None,
    proposer: Optional[int] = None,
    candidates: Optional[Sequence[str]] = None,
    temperature: float = DEFAULT_TEMPERATURE,
) -> PromptBundle:
    """Fill the role template from the observation and prepend the rules.

    Responder prompts need the pending offer and its proposer; the
    refined-select prompt needs the rendered candidate blocks.
    """
    if role not in _TEMPLATES:
        raise ValueError(f"unknown prompt role: {role!r}")
    config = observation.config
    slots = {
        "name": player_name(observation.seat),
        "preference_description": preference_description(
            config, observation.valuations_cents
        ),
        "item": holdings_description(
            config, observation.holdings[observation.seat]
        ),
        "history": history_description(observation),
    }
    if role == ROLE_RESPONDER:
        if offer is None or proposer is None:
            raise TemplateError("responder prompt needs the offer and proposer")
        delta = responder_delta_cents(config, observation.valuations_cents, offer)
        slots.update(
            proposer=player_name(proposer),
            give=offer_side(offer.give_qty, offer.give_color),
            get=offer_side(offer.get_qty, offer.get_color),
            delta_surplus=signed_dollars(delta),
        )
    elif offer is not None:
        raise TemplateError(f"{role} prompt takes no offer")
    if role == ROLE_REFINED_SELECT:
        if not candidates:
            raise TemplateError("refined-select prompt needs candidate blocks")
        slots["proposed"] = "\n\n".join(candidates)
    elif candidates:
        raise TemplateError(f"{role} prompt takes no candidates")
    text = RULES_TEXT + "\n\n" + render_template(_TEMPLATES[role], slots)
    return PromptBundle(role=role, text=text, temperature=temperature)
