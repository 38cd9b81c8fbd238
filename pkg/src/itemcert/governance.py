"""Sensitive-term screening over stems, options, and rationales.

Screening is intentionally a transparent term policy rather than a learned
model: every flag points at an exact span an auditor can read. Flags are
advisory inputs to triage; minor severity routes to review and major severity
to rejection.

Policy file format: UTF-8 tabular text, one line per term::

    term <TAB> category <TAB> severity

``#`` starts a comment; ``#: version=...`` carries the policy version.
Multi-word terms match across any run of whitespace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from itemcert.errors import DuplicateToken, ParseError
from itemcert.model import (
    AssessmentItem,
    BiasCategory,
    BiasFlag,
    FlagLocation,
    FlagSeverity,
    GovernanceRecord,
)
from itemcert.taxonomy.lexicon import _parse_tabular


@dataclass(frozen=True)
class PolicyEntry:
    term: str
    category: BiasCategory
    severity: FlagSeverity


@dataclass(frozen=True)
class BiasPolicy:
    entries: tuple = ()
    version: str = "unversioned"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def categories(self) -> frozenset:
        return frozenset(entry.category for entry in self.entries)


def load_policy(source) -> BiasPolicy:
    """Parse a policy document; duplicate terms are an error regardless of severity."""
    meta, rows = _parse_tabular(source, 3, "policy")
    seen: set[str] = set()
    entries = []
    for line_no, (term, category_text, severity_text) in rows:
        term = " ".join(term.lower().split())
        if not term:
            raise ParseError("policy term is empty", line_no)
        if term in seen:
            raise DuplicateToken(f"duplicate policy term {term!r}", line_no)
        seen.add(term)
        try:
            category = BiasCategory(category_text.lower())
        except ValueError:
            raise ParseError(f"unknown category {category_text!r}", line_no) from None
        try:
            severity = FlagSeverity(severity_text.lower())
        except ValueError:
            raise ParseError(f"unknown severity {severity_text!r}", line_no) from None
        entries.append(PolicyEntry(term, category, severity))
    return BiasPolicy(entries=tuple(entries), version=meta.get("version", "unversioned"))


def default_policy() -> BiasPolicy:
    data = resources.files("itemcert.data").joinpath("default_policy.tsv").read_text("utf-8")
    return load_policy(data.splitlines())


def _term_pattern(term: str) -> re.Pattern:
    parts = [re.escape(part) for part in term.split()]
    return re.compile(r"\b" + r"\s+".join(parts) + r"\b", re.IGNORECASE)


def screen(item: AssessmentItem, rationale: str, policy: BiasPolicy) -> list:
    """One flag per case-insensitive whole-word policy match.

    ``matched_term`` is the exact text at the span, so the span always
    reproduces it; flags come back sorted by location then span start.
    """
    texts = [(FlagLocation.stem(), item.stem)]
    texts += [(FlagLocation.option(i), option) for i, option in enumerate(item.options)]
    texts.append((FlagLocation.rationale(), rationale))

    flags = []
    for entry in policy.entries:
        pattern = _term_pattern(entry.term)
        for location, text in texts:
            for match in pattern.finditer(text):
                flags.append(
                    BiasFlag(
                        matched_term=match.group(0),
                        category=entry.category,
                        severity=entry.severity,
                        span=(match.start(), match.end()),
                        location=location,
                    )
                )
    flags.sort(key=lambda f: (f.location.sort_key(), f.span[0], f.matched_term.lower()))
    return flags


def governance_record(flags, privacy_notes: str = "") -> GovernanceRecord:
    """Assemble the governance component; risk level derives from flag severities."""
    return GovernanceRecord(flags=tuple(flags), privacy_notes=privacy_notes)
