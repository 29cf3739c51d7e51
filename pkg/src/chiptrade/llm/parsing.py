"""Tag-grammar parsing for model replies.

Replies must carry their payload in explicit tags. Matching is
case-insensitive and whitespace-tolerant, and closers may be written
</TAG> or <\\TAG>. Anything that cannot be pulled out cleanly raises
ParseError carrying the offending span of text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..game import GameConfig, TradeOffer

ACCEPT_WORDS = {"yes": True, "no": False}

_TRADE_TAGS = ("GET_COLOR", "GET_QUANTITY", "GIVE_COLOR", "GIVE_QUANTITY")


class ParseError(ValueError):
    """A reply did not fit the tag grammar."""

    def __init__(self, message: str, offending: str = ""):
        super().__init__(message)
        self.offending = offending


def _tag_pattern(tag: str) -> re.Pattern:
    # closer accepts </TAG> and <\TAG>
    return re.compile(
        rf"<\s*{tag}\s*>(.*?)<\s*[/\\]\s*{tag}\s*>",
        re.IGNORECASE | re.DOTALL,
    )


def find_tag_values(raw_text: str, tag: str) -> list[str]:
    return [m.group(1).strip() for m in _tag_pattern(tag).finditer(raw_text)]


def _parse_color(value: str, config: GameConfig, tag: str) -> str:
    found = {
        color
        for color in config.colors
        if re.search(rf"\b{re.escape(color)}\b", value, re.IGNORECASE)
    }
    if len(found) != 1:
        raise ParseError(f"<{tag}> does not name one known color", value)
    return found.pop()


def _parse_quantity(value: str, tag: str) -> int:
    match = re.search(r"[+-]?\d+", value)
    if match is None:
        raise ParseError(f"<{tag}> has no integer quantity", value)
    quantity = int(match.group())
    if quantity <= 0:
        raise ParseError(f"<{tag}> must be a positive quantity", value)
    return quantity


@dataclass(frozen=True)
class ParsedProposal:
    reasoning: str
    check: str
    offer: TradeOffer


@dataclass(frozen=True)
class ParsedChoice:
    reasoning: str
    accept: bool


def parse_choice(raw_text: str) -> ParsedChoice:
    """Extract the Yes/No decision (and reasoning) from a responder reply."""
    choices = find_tag_values(raw_text, "CHOICE")
    if not choices:
        raise ParseError("no <CHOICE> tag found", raw_text[-200:])
    match = re.search(r"\b(yes|no)\b", choices[0], re.IGNORECASE)
    if match is None:
        raise ParseError("<CHOICE> is neither Yes nor No", choices[0])
    reasonings = find_tag_values(raw_text, "REASONING")
    return ParsedChoice(
        reasoning=reasonings[0] if reasonings else "",
        accept=ACCEPT_WORDS[match.group(1).lower()],
    )


def parse_proposal(raw_text: str, config: GameConfig) -> ParsedProposal:
    """Extract exactly one trade offer from a proposer reply."""
    proposals = parse_proposals(raw_text, config, limit=1)
    return proposals[0]


def parse_proposals(
    raw_text: str, config: GameConfig, limit: int = 3
) -> list[ParsedProposal]:
    """Extract up to ``limit`` repeated trade-tag groups, in reply order.

    The i-th group pairs the i-th occurrence of each trade tag; a reply
    missing any trade tag entirely parses to nothing and raises.
    """
    columns = {tag: find_tag_values(raw_text, tag) for tag in _TRADE_TAGS}
    n_groups = min(len(values) for values in columns.values())
    if n_groups == 0:
        missing = [tag for tag, values in columns.items() if not values]
        raise ParseError(
            f"no complete trade block; missing {missing}", raw_text[-200:]
        )
    reasonings = find_tag_values(raw_text, "REASONING")
    checks = find_tag_values(raw_text, "CHECK")
    proposals = []
    for i in range(min(n_groups, limit)):
        offer = TradeOffer(
            give_color=_parse_color(columns["GIVE_COLOR"][i], config, "GIVE_COLOR"),
            give_qty=_parse_quantity(columns["GIVE_QUANTITY"][i], "GIVE_QUANTITY"),
            get_color=_parse_color(columns["GET_COLOR"][i], config, "GET_COLOR"),
            get_qty=_parse_quantity(columns["GET_QUANTITY"][i], "GET_QUANTITY"),
        )
        if offer.give_color == offer.get_color:
            raise ParseError(
                "trade block names the same color on both sides",
                columns["GIVE_COLOR"][i],
            )
        proposals.append(
            ParsedProposal(
                reasoning=reasonings[i] if i < len(reasonings) else "",
                check=checks[i] if i < len(checks) else "",
                offer=offer,
            )
        )
    return proposals
