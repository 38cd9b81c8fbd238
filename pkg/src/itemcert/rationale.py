"""Completeness scoring and contradiction detection for self-rationalizations.

Completeness is a weighted rubric over four criteria: naming the declared
level, using at least one of its lexicon verbs, minimum length, and
referencing an option / the answer / a distractor. Contradictions are either
a level named in the rationale at least two ranks away from the declared
level, or an option letter/index asserted as correct that differs from the
answer key.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from itemcert.levels import (
    BLOOM_LEVEL_NAMES,
    SOLO_LEVEL_NAMES,
    TaxonomyLevel,
    framework_of_level_name,
)
from itemcert.model import AssessmentItem, CompletenessReport, CriterionResult
from itemcert.taxonomy.lexicon import Lexicon

# Canonical names plus a small synonym table; matching is case-insensitive
# whole-word (or whole-phrase). No stemming: "analytical" does not count.
_LEVEL_SYNONYMS = {
    "analyse": "Analyze",
    "extended abstract": "ExtendedAbstract",
    "extended-abstract": "ExtendedAbstract",
}

CRITERION_NAMES_LEVEL = "names_declared_level"
CRITERION_LEVEL_VERB = "uses_level_verb"
CRITERION_MIN_LENGTH = "min_length"
CRITERION_OPTION_REFERENCE = "references_options"


@dataclass(frozen=True)
class CompletenessConfig:
    weight_names_level: float = 0.4
    weight_level_verb: float = 0.3
    weight_min_length: float = 0.2
    weight_option_reference: float = 0.1
    min_word_count: int = 20
    completeness_threshold: float = 0.7

    def __post_init__(self):
        total = (
            self.weight_names_level
            + self.weight_level_verb
            + self.weight_min_length
            + self.weight_option_reference
        )
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"criterion weights must sum to 1, got {total}")

    def weights(self) -> dict:
        return {
            CRITERION_NAMES_LEVEL: self.weight_names_level,
            CRITERION_LEVEL_VERB: self.weight_level_verb,
            CRITERION_MIN_LENGTH: self.weight_min_length,
            CRITERION_OPTION_REFERENCE: self.weight_option_reference,
        }


class ContradictionReason(str, Enum):
    LEVEL_MISMATCH_IN_RATIONALE = "level_mismatch_in_rationale"
    ANSWER_KEY_MISMATCH = "answer_key_mismatch"


@dataclass(frozen=True)
class ContradictionReport:
    contradiction: bool
    reasons: tuple = ()
    details: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "reasons", tuple(self.reasons))
        object.__setattr__(self, "contradiction", bool(self.reasons))

    def to_dict(self) -> dict:
        out = {
            "contradiction": self.contradiction,
            "reasons": [r.value for r in self.reasons],
            "details": self.details,
        }
        out.update(self.extra)
        return out


_ALL_LEVEL_PATTERNS = [
    (re.compile(rf"\b{re.escape(name.lower())}\b"), name)
    for name in (*BLOOM_LEVEL_NAMES, *SOLO_LEVEL_NAMES)
] + [
    (re.compile(rf"\b{re.escape(synonym)}\b"), canonical)
    for synonym, canonical in _LEVEL_SYNONYMS.items()
]

_OPTION_REFERENCE_RE = re.compile(
    r"\b(option|options|answer|answers|distractor|distractors)\b", re.IGNORECASE
)

# Assertion patterns for "option X is correct" style statements. Captured
# letters map a->0, b->1, ...; captured digits are 1-based indexes.
_ANSWER_ASSERTION_RES = (
    re.compile(r"\boption\s+([a-z])\s+is\s+(?:the\s+)?correct\b", re.IGNORECASE),
    re.compile(
        r"\b(?:the\s+)?correct\s+(?:answer|option|choice)\s+is\s+(?:option\s+)?([a-z]|\d{1,2})\b",
        re.IGNORECASE,
    ),
    re.compile(r"\b(?:answer|option)\s*(?:is|:)\s*(?:option\s+)?([a-z]|\d{1,2})\b", re.IGNORECASE),
)


def detect_level_mentions(text: str) -> tuple:
    """Level names found in text, deduplicated in order of first appearance."""
    lowered = text.lower()
    found = []
    for pattern, canonical in _ALL_LEVEL_PATTERNS:
        match = pattern.search(lowered)
        if match and canonical not in (name for name, _ in found):
            found.append((canonical, match.start()))
    found.sort(key=lambda pair: pair[1])
    return tuple(name for name, _ in found)


def completeness(
    rationale: str,
    declared_level: TaxonomyLevel,
    lexicon: Lexicon,
    config: CompletenessConfig | None = None,
) -> CompletenessReport:
    """Score a rationale against the completeness rubric; empty text is valid."""
    config = config or CompletenessConfig()
    mentions = detect_level_mentions(rationale)

    names_level = declared_level.name in mentions
    level_verbs = {
        token for token, entry in lexicon.entries.items() if entry.level == declared_level
    }
    from itemcert.taxonomy.engine import tokenize

    rationale_tokens = tokenize(rationale)
    uses_verb = any(token in level_verbs for token in rationale_tokens)
    long_enough = len(rationale.split()) >= config.min_word_count
    references_options = bool(_OPTION_REFERENCE_RE.search(rationale))

    satisfied = {
        CRITERION_NAMES_LEVEL: names_level,
        CRITERION_LEVEL_VERB: uses_verb,
        CRITERION_MIN_LENGTH: long_enough,
        CRITERION_OPTION_REFERENCE: references_options,
    }
    weights = config.weights()
    # Rounded so weight sums compare cleanly against the threshold
    # (0.3 + 0.2 + 0.1 must not exceed 0.6 by float dust).
    score = round(sum(weights[c] for c, ok in satisfied.items() if ok), 9)
    components = {c: CriterionResult(ok, weights[c]) for c, ok in satisfied.items()}
    return CompletenessReport(
        score=score,
        complete=score >= config.completeness_threshold,
        components=components,
        detected_level_mentions=mentions,
    )


def _asserted_answer_indexes(rationale: str) -> list:
    """0-based option indexes the rationale asserts as correct."""
    indexes = []
    for pattern in _ANSWER_ASSERTION_RES:
        for match in pattern.finditer(rationale):
            captured = match.group(1)
            if captured.isdigit():
                indexes.append(int(captured) - 1)
                continue
            # A lowercase bare "a" followed by more prose is almost always the
            # article, not option A; an uppercase "A" or terminal "a" counts.
            if captured == "a":
                rest = rationale[match.end(1):]
                if re.match(r"\s+\w", rest):
                    continue
            indexes.append(ord(captured.lower()) - ord("a"))
    return indexes


def detect_contradiction(
    rationale: str, item: AssessmentItem, rank_gap_threshold: int = 2
) -> ContradictionReport:
    """Flag rationales that contradict the declared level or the answer key."""
    reasons = []
    details = []

    declared = item.declared_level
    for name in detect_level_mentions(rationale):
        framework = framework_of_level_name(name)
        if framework is not declared.framework:
            continue
        mentioned = TaxonomyLevel(framework, name)
        gap = abs(mentioned.rank - declared.rank)
        if gap >= rank_gap_threshold:
            reasons.append(ContradictionReason.LEVEL_MISMATCH_IN_RATIONALE)
            details.append(
                f"rationale names {name} (rank {mentioned.rank}) but the declared level is "
                f"{declared.name} (rank {declared.rank}), gap {gap}"
            )
            break

    for index in _asserted_answer_indexes(rationale):
        if index != item.correct_index:
            reasons.append(ContradictionReason.ANSWER_KEY_MISMATCH)
            details.append(
                f"rationale asserts option index {index} as correct, "
                f"but the key is index {item.correct_index}"
            )
            break

    return ContradictionReport(
        contradiction=bool(reasons), reasons=tuple(reasons), details="; ".join(details)
    )
