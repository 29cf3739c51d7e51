"""Language-model seats: prompt building, tag parsing, transports."""

from .bridge import (
    Degradation,
    HttpChatTransport,
    LlmAgent,
    LlmProfile,
    MODE_OUT_OF_BOX,
    MODE_REFINED,
    ScriptedTransport,
    Transport,
    TransportError,
    agent_from_profile,
    llm_agent,
    load_profile,
)
from .parsing import (
    ParseError,
    ParsedChoice,
    ParsedProposal,
    parse_choice,
    parse_proposal,
    parse_proposals,
)
from .prompts import (
    DEFAULT_TEMPERATURE,
    PromptBundle,
    ROLE_PROPOSER,
    ROLE_REFINED_GENERATE,
    ROLE_REFINED_SELECT,
    ROLE_RESPONDER,
    RULES_TEXT,
    TemplateError,
    build_prompt,
    candidate_block,
)

__all__ = [
    "DEFAULT_TEMPERATURE",
    "Degradation",
    "HttpChatTransport",
    "LlmAgent",
    "LlmProfile",
    "MODE_OUT_OF_BOX",
    "MODE_REFINED",
    "ParseError",
    "ParsedChoice",
    "ParsedProposal",
    "PromptBundle",
    "ROLE_PROPOSER",
    "ROLE_REFINED_GENERATE",
    "ROLE_REFINED_SELECT",
    "ROLE_RESPONDER",
    "RULES_TEXT",
    "ScriptedTransport",
    "TemplateError",
    "Transport",
    "TransportError",
    "agent_from_profile",
    "build_prompt",
    "candidate_block",
    "llm_agent",
    "load_profile",
    "parse_choice",
    "parse_proposal",
    "parse_proposals",
]
