"""Domain records for item certification.

All types are immutable values; a record is never mutated in place, only
replaced by a new version with an incremented version counter. Serialization
is UTF-8 JSON with fixed field names; strict deserialization rejects unknown
fields, lenient deserialization preserves them in the record's ``extra`` map
and re-emits them on serialization.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from typing import Any, Mapping

from itemcert import canonical
from itemcert.clock import from_rfc3339, to_rfc3339
from itemcert.errors import ParseError
from itemcert.levels import TaxonomyLevel

SCHEMA_VERSION = "1.0"


class Label(str, Enum):
    GREEN = "green"
    YELLOW = "yellow"
    RED = "red"


class Status(str, Enum):
    AUTO_CERTIFIED = "auto_certified"
    PENDING_REVIEW = "pending_review"
    CERTIFIED_HUMAN = "certified_human"
    REJECTED = "rejected"


class ReviewAction(str, Enum):
    APPROVE_UNCHANGED = "approve_unchanged"
    APPROVE_WITH_EDITS = "approve_with_edits"
    REJECT = "reject"


class BiasCategory(str, Enum):
    GENDER = "gender"
    CULTURE_REGION = "culture_region"
    RELIGION = "religion"
    DISABILITY = "disability"
    AGE = "age"
    OTHER = "other"


class FlagSeverity(str, Enum):
    MINOR = "minor"
    MAJOR = "major"


class RiskLevel(str, Enum):
    NONE = "none"
    MINOR = "minor"
    MAJOR = "major"


_RISK_ORDER = {RiskLevel.NONE: 0, RiskLevel.MINOR: 1, RiskLevel.MAJOR: 2}


def risk_rank(level: RiskLevel) -> int:
    return _RISK_ORDER[level]


class Verdict(str, Enum):
    """Pedagogical-consistency verdict over a token attribution map."""

    CONSISTENT = "consistent"
    SUSPICIOUS = "suspicious"
    IRRELEVANT = "irrelevant"


# Legal status transitions under review; anything else requires the explicit
# override path, which is audit-logged by the certifier.
_LEGAL_TRANSITIONS = {
    (Status.PENDING_REVIEW, Status.CERTIFIED_HUMAN),
    (Status.PENDING_REVIEW, Status.REJECTED),
}


def is_legal_transition(old: Status, new: Status) -> bool:
    return (old, new) in _LEGAL_TRANSITIONS


def _split_known(data: Mapping[str, Any], known: tuple[str, ...], strict: bool, where: str) -> dict:
    if not isinstance(data, Mapping):
        raise ParseError(f"{where}: expected an object, got {type(data).__name__}")
    unknown = [k for k in data if k not in known]
    if unknown and strict:
        raise ParseError(f"{where}: unknown fields {sorted(unknown)}")
    return {k: data[k] for k in unknown}


def _require(data: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in data:
        raise ParseError(f"{where}: missing field {key!r}")
    return data[key]


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[Violation, ...] = ()

    def codes(self) -> tuple[str, ...]:
        return tuple(v.code for v in self.violations)


@dataclass(frozen=True)
class AssessmentItem:
    """A multiple-choice item with its declared level and self-rationalization.

    Construction does not validate: invalid states must be representable so
    ``validate_item`` can report them as data rather than raise.
    """

    id: str
    stem: str
    options: tuple[str, ...]
    correct_index: int
    declared_level: TaxonomyLevel
    rationale: str = ""
    topic: str = ""
    course_context: str = ""
    language_code: str = "en"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "options", tuple(self.options))

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "stem": self.stem,
            "options": list(self.options),
            "correct_index": self.correct_index,
            "declared_level": self.declared_level.to_dict(),
            "rationale": self.rationale,
            "topic": self.topic,
            "course_context": self.course_context,
            "language_code": self.language_code,
        }
        out.update(self.extra)
        return out

    _FIELDS = (
        "id",
        "stem",
        "options",
        "correct_index",
        "declared_level",
        "rationale",
        "topic",
        "course_context",
        "language_code",
    )

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], strict: bool = True) -> "AssessmentItem":
        extra = _split_known(data, cls._FIELDS, strict, "AssessmentItem")
        return cls(
            id=str(_require(data, "id", "AssessmentItem")),
            stem=str(_require(data, "stem", "AssessmentItem")),
            options=tuple(str(o) for o in _require(data, "options", "AssessmentItem")),
            correct_index=int(_require(data, "correct_index", "AssessmentItem")),
            declared_level=TaxonomyLevel.from_dict(_require(data, "declared_level", "AssessmentItem")),
            rationale=str(data.get("rationale", "")),
            topic=str(data.get("topic", "")),
            course_context=str(data.get("course_context", "")),
            language_code=str(data.get("language_code", "en")),
            extra=extra,
        )


def validate_item(item: AssessmentItem) -> ValidationResult:
    """Check item invariants; violations are data, not errors."""
    violations: list[Violation] = []
    if not item.id.strip():
        violations.append(Violation("empty_id", "item id is empty"))
    if not item.stem.strip():
        violations.append(Violation("empty_stem", "stem is empty after trimming"))
    if len(item.options) < 2:
        violations.append(
            Violation("too_few_options", f"need at least 2 options, got {len(item.options)}")
        )
    if not 0 <= item.correct_index < len(item.options):
        violations.append(
            Violation(
                "correct_index_out_of_range",
                f"correct_index {item.correct_index} outside 0..{len(item.options) - 1}",
            )
        )
    return ValidationResult(ok=not violations, violations=tuple(violations))


def option_letter(index: int) -> str:
    """Render a 0-based option index as the letter used in exports (A-Z)."""
    if not 0 <= index < 26:
        raise ValueError(f"option index {index} cannot be rendered as a letter")
    return chr(ord("A") + index)


@dataclass(frozen=True)
class ProvenanceRecord:
    """Who generated an item, from what prompt, and when."""

    model_id: str
    model_version: str
    prompt_hash: str
    system_instructions_hash: str
    generated_at: datetime
    prompt_text: str | None = None
    generation_params: dict = field(default_factory=dict)
    course_context: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.model_id:
            raise ValueError("provenance model_id must not be empty")
        if not self.model_version:
            raise ValueError("provenance model_version must not be empty")
        for name in ("prompt_hash", "system_instructions_hash"):
            if not canonical.is_hex_digest(getattr(self, name)):
                raise ValueError(f"provenance {name} must be 64 lowercase hex characters")

    def to_dict(self) -> dict:
        out = {
            "model_id": self.model_id,
            "model_version": self.model_version,
            "prompt_hash": self.prompt_hash,
            "prompt_text": self.prompt_text,
            "system_instructions_hash": self.system_instructions_hash,
            "generated_at": to_rfc3339(self.generated_at),
            "generation_params": dict(self.generation_params),
            "course_context": self.course_context,
        }
        out.update(self.extra)
        return out

    _FIELDS = (
        "model_id",
        "model_version",
        "prompt_hash",
        "prompt_text",
        "system_instructions_hash",
        "generated_at",
        "generation_params",
        "course_context",
    )

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], strict: bool = True) -> "ProvenanceRecord":
        extra = _split_known(data, cls._FIELDS, strict, "ProvenanceRecord")
        prompt_text = data.get("prompt_text")
        return cls(
            model_id=str(_require(data, "model_id", "ProvenanceRecord")),
            model_version=str(_require(data, "model_version", "ProvenanceRecord")),
            prompt_hash=str(_require(data, "prompt_hash", "ProvenanceRecord")),
            prompt_text=None if prompt_text is None else str(prompt_text),
            system_instructions_hash=str(
                _require(data, "system_instructions_hash", "ProvenanceRecord")
            ),
            generated_at=from_rfc3339(str(_require(data, "generated_at", "ProvenanceRecord"))),
            generation_params=dict(data.get("generation_params", {})),
            course_context=str(data.get("course_context", "")),
            extra=extra,
        )


@dataclass(frozen=True)
class AttributionMap:
    """Per-token influence weights for the predicted level.

    ``tokens`` preserves stem tokenization order; ``lexicon_mass_ratio`` is
    the share of positive attribution mass carried by tokens in the predicted
    level's lexicon (0 when there is no positive mass at all).
    """

    tokens: tuple[tuple[str, float], ...]
    predicted_level: TaxonomyLevel
    lexicon_mass_ratio: float
    verdict: Verdict
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "tokens", tuple((str(t), float(w)) for t, w in self.tokens)
        )

    def top_token(self) -> tuple[str, float] | None:
        """Highest-weight token, earliest occurrence on ties; None when empty."""
        best: tuple[str, float] | None = None
        for tok, weight in self.tokens:
            if best is None or weight > best[1]:
                best = (tok, weight)
        return best

    def to_dict(self) -> dict:
        out = {
            "tokens": [[t, w] for t, w in self.tokens],
            "predicted_level": self.predicted_level.to_dict(),
            "lexicon_mass_ratio": self.lexicon_mass_ratio,
            "verdict": self.verdict.value,
        }
        out.update(self.extra)
        return out

    _FIELDS = ("tokens", "predicted_level", "lexicon_mass_ratio", "verdict")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], strict: bool = True) -> "AttributionMap":
        extra = _split_known(data, cls._FIELDS, strict, "AttributionMap")
        return cls(
            tokens=tuple((str(t), float(w)) for t, w in _require(data, "tokens", "AttributionMap")),
            predicted_level=TaxonomyLevel.from_dict(
                _require(data, "predicted_level", "AttributionMap")
            ),
            lexicon_mass_ratio=float(_require(data, "lexicon_mass_ratio", "AttributionMap")),
            verdict=Verdict(str(_require(data, "verdict", "AttributionMap"))),
            extra=extra,
        )


@dataclass(frozen=True)
class CriterionResult:
    satisfied: bool
    weight: float

    def to_dict(self) -> dict:
        return {"satisfied": self.satisfied, "weight": self.weight}


@dataclass(frozen=True)
class CompletenessReport:
    """Rubric outcome for a generator's self-rationalization."""

    score: float
    complete: bool
    components: dict  # criterion id -> CriterionResult
    detected_level_mentions: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "score": self.score,
            "complete": self.complete,
            "components": {k: v.to_dict() for k, v in self.components.items()},
            "detected_level_mentions": list(self.detected_level_mentions),
        }
        out.update(self.extra)
        return out

    _FIELDS = ("score", "complete", "components", "detected_level_mentions")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], strict: bool = True) -> "CompletenessReport":
        extra = _split_known(data, cls._FIELDS, strict, "CompletenessReport")
        components = {
            str(k): CriterionResult(bool(v["satisfied"]), float(v["weight"]))
            for k, v in _require(data, "components", "CompletenessReport").items()
        }
        return cls(
            score=float(_require(data, "score", "CompletenessReport")),
            complete=bool(_require(data, "complete", "CompletenessReport")),
            components=components,
            detected_level_mentions=tuple(
                str(m) for m in data.get("detected_level_mentions", ())
            ),
            extra=extra,
        )


@dataclass(frozen=True)
class AlignmentRecord:
    """The independent verifier's view of an item.

    ``level_scores`` holds the normalized (softmax) score per level name, so
    ``confidence`` equals its maximum; ``agreement`` is true iff the declared
    and predicted levels match in both framework and name.
    """

    predicted_level: TaxonomyLevel
    confidence: float
    level_scores: dict
    attribution: AttributionMap
    rationale_report: CompletenessReport
    agreement: bool
    verifier_id: str
    verifier_version: str
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "predicted_level": self.predicted_level.to_dict(),
            "confidence": self.confidence,
            "level_scores": dict(self.level_scores),
            "attribution": self.attribution.to_dict(),
            "rationale_report": self.rationale_report.to_dict(),
            "agreement": self.agreement,
            "verifier_id": self.verifier_id,
            "verifier_version": self.verifier_version,
        }
        out.update(self.extra)
        return out

    _FIELDS = (
        "predicted_level",
        "confidence",
        "level_scores",
        "attribution",
        "rationale_report",
        "agreement",
        "verifier_id",
        "verifier_version",
    )

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], strict: bool = True) -> "AlignmentRecord":
        extra = _split_known(data, cls._FIELDS, strict, "AlignmentRecord")
        return cls(
            predicted_level=TaxonomyLevel.from_dict(
                _require(data, "predicted_level", "AlignmentRecord")
            ),
            confidence=float(_require(data, "confidence", "AlignmentRecord")),
            level_scores={
                str(k): float(v)
                for k, v in _require(data, "level_scores", "AlignmentRecord").items()
            },
            attribution=AttributionMap.from_dict(
                _require(data, "attribution", "AlignmentRecord"), strict
            ),
            rationale_report=CompletenessReport.from_dict(
                _require(data, "rationale_report", "AlignmentRecord"), strict
            ),
            agreement=bool(_require(data, "agreement", "AlignmentRecord")),
            verifier_id=str(_require(data, "verifier_id", "AlignmentRecord")),
            verifier_version=str(_require(data, "verifier_version", "AlignmentRecord")),
            extra=extra,
        )


@dataclass(frozen=True)
class FlagLocation:
    """Where a bias term matched: the stem, one option, or the rationale."""

    kind: str  # "stem" | "option" | "rationale"
    option_index: int | None = None

    _KINDS = ("stem", "option", "rationale")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown flag location {self.kind!r}")
        if (self.kind == "option") != (self.option_index is not None):
            raise ValueError("option_index is required exactly for option locations")

    @classmethod
    def stem(cls) -> "FlagLocation":
        return cls("stem")

    @classmethod
    def option(cls, index: int) -> "FlagLocation":
        return cls("option", index)

    @classmethod
    def rationale(cls) -> "FlagLocation":
        return cls("rationale")

    def sort_key(self) -> tuple[int, int]:
        if self.kind == "stem":
            return (0, 0)
        if self.kind == "option":
            return (1, self.option_index or 0)
        return (2, 0)

    def to_text(self) -> str:
        if self.kind == "option":
            return f"option:{self.option_index}"
        return self.kind

    @classmethod
    def from_text(cls, text: str) -> "FlagLocation":
        if text == "stem":
            return cls.stem()
        if text == "rationale":
            return cls.rationale()
        if text.startswith("option:"):
            return cls.option(int(text.split(":", 1)[1]))
        raise ParseError(f"unknown flag location {text!r}")


@dataclass(frozen=True)
class BiasFlag:
    """One case-insensitive whole-word policy-term match."""

    matched_term: str
    category: BiasCategory
    severity: FlagSeverity
    span: tuple[int, int]
    location: FlagLocation
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "span", (int(self.span[0]), int(self.span[1])))

    def to_dict(self) -> dict:
        out = {
            "matched_term": self.matched_term,
            "category": self.category.value,
            "severity": self.severity.value,
            "span": list(self.span),
            "location": self.location.to_text(),
        }
        out.update(self.extra)
        return out

    _FIELDS = ("matched_term", "category", "severity", "span", "location")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], strict: bool = True) -> "BiasFlag":
        extra = _split_known(data, cls._FIELDS, strict, "BiasFlag")
        span = _require(data, "span", "BiasFlag")
        return cls(
            matched_term=str(_require(data, "matched_term", "BiasFlag")),
            category=BiasCategory(str(_require(data, "category", "BiasFlag"))),
            severity=FlagSeverity(str(_require(data, "severity", "BiasFlag"))),
            span=(int(span[0]), int(span[1])),
            location=FlagLocation.from_text(str(_require(data, "location", "BiasFlag"))),
            extra=extra,
        )


@dataclass(frozen=True)
class GovernanceRecord:
    """Bias flags plus the derived overall risk level."""

    flags: tuple[BiasFlag, ...]
    privacy_notes: str = ""
    risk_level: RiskLevel = RiskLevel.NONE
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "flags", tuple(self.flags))
        derived = max(
            (RiskLevel(f.severity.value) for f in self.flags),
            key=risk_rank,
            default=RiskLevel.NONE,
        )
        object.__setattr__(self, "risk_level", derived)

    def to_dict(self) -> dict:
        out = {
            "flags": [f.to_dict() for f in self.flags],
            "privacy_notes": self.privacy_notes,
            "risk_level": self.risk_level.value,
        }
        out.update(self.extra)
        return out

    _FIELDS = ("flags", "privacy_notes", "risk_level")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], strict: bool = True) -> "GovernanceRecord":
        extra = _split_known(data, cls._FIELDS, strict, "GovernanceRecord")
        return cls(
            flags=tuple(
                BiasFlag.from_dict(f, strict) for f in _require(data, "flags", "GovernanceRecord")
            ),
            privacy_notes=str(data.get("privacy_notes", "")),
            extra=extra,
        )


@dataclass(frozen=True)
class ReviewRecord:
    """A human reviewer's decision; identity is pseudonymous by design."""

    reviewer_pseudonym: str
    action: ReviewAction
    started_at: datetime
    decided_at: datetime
    notes: str = ""
    edits: dict | None = None
    duration_seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        duration = (self.decided_at - self.started_at).total_seconds()
        if duration < 0:
            raise ValueError("review decided_at precedes started_at")
        object.__setattr__(self, "duration_seconds", duration)
        has_edits = self.edits is not None
        if has_edits != (self.action is ReviewAction.APPROVE_WITH_EDITS):
            raise ValueError("edits must be present exactly when action is approve_with_edits")

    def to_dict(self) -> dict:
        out = {
            "reviewer_pseudonym": self.reviewer_pseudonym,
            "action": self.action.value,
            "edits": None if self.edits is None else dict(self.edits),
            "notes": self.notes,
            "started_at": to_rfc3339(self.started_at),
            "decided_at": to_rfc3339(self.decided_at),
            "duration_seconds": self.duration_seconds,
        }
        out.update(self.extra)
        return out

    _FIELDS = (
        "reviewer_pseudonym",
        "action",
        "edits",
        "notes",
        "started_at",
        "decided_at",
        "duration_seconds",
    )

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], strict: bool = True) -> "ReviewRecord":
        extra = _split_known(data, cls._FIELDS, strict, "ReviewRecord")
        edits = data.get("edits")
        return cls(
            reviewer_pseudonym=str(_require(data, "reviewer_pseudonym", "ReviewRecord")),
            action=ReviewAction(str(_require(data, "action", "ReviewRecord"))),
            edits=None if edits is None else dict(edits),
            notes=str(data.get("notes", "")),
            started_at=from_rfc3339(str(_require(data, "started_at", "ReviewRecord"))),
            decided_at=from_rfc3339(str(_require(data, "decided_at", "ReviewRecord"))),
            extra=extra,
        )


@dataclass(frozen=True)
class CertificationRecord:
    """The four-part certificate: provenance, alignment, governance, review."""

    item: AssessmentItem
    provenance: ProvenanceRecord
    alignment: AlignmentRecord
    governance: GovernanceRecord
    label: Label
    status: Status
    decision_trace: tuple[str, ...]
    review: ReviewRecord | None = None
    version: int = 1
    schema_version: str = SCHEMA_VERSION
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "decision_trace", tuple(self.decision_trace))
        if not self.decision_trace:
            raise ValueError("decision_trace must not be empty")

    def with_review(self, review: ReviewRecord, status: Status,
                    item: AssessmentItem | None = None,
                    trace_additions: tuple[str, ...] = ()) -> "CertificationRecord":
        return replace(
            self,
            item=item if item is not None else self.item,
            review=review,
            status=status,
            decision_trace=self.decision_trace + tuple(trace_additions),
            version=self.version + 1,
        )

    def to_dict(self) -> dict:
        out = {
            "schema_version": self.schema_version,
            "item": self.item.to_dict(),
            "provenance": self.provenance.to_dict(),
            "alignment": self.alignment.to_dict(),
            "governance": self.governance.to_dict(),
            "review": None if self.review is None else self.review.to_dict(),
            "label": self.label.value,
            "status": self.status.value,
            "decision_trace": list(self.decision_trace),
            "version": self.version,
        }
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return canonical.canonical_json(self.to_dict())

    _FIELDS = (
        "schema_version",
        "item",
        "provenance",
        "alignment",
        "governance",
        "review",
        "label",
        "status",
        "decision_trace",
        "version",
    )

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], strict: bool = True) -> "CertificationRecord":
        extra = _split_known(data, cls._FIELDS, strict, "CertificationRecord")
        review = data.get("review")
        return cls(
            schema_version=str(data.get("schema_version", SCHEMA_VERSION)),
            item=AssessmentItem.from_dict(_require(data, "item", "CertificationRecord"), strict),
            provenance=ProvenanceRecord.from_dict(
                _require(data, "provenance", "CertificationRecord"), strict
            ),
            alignment=AlignmentRecord.from_dict(
                _require(data, "alignment", "CertificationRecord"), strict
            ),
            governance=GovernanceRecord.from_dict(
                _require(data, "governance", "CertificationRecord"), strict
            ),
            review=None if review is None else ReviewRecord.from_dict(review, strict),
            label=Label(str(_require(data, "label", "CertificationRecord"))),
            status=Status(str(_require(data, "status", "CertificationRecord"))),
            decision_trace=tuple(
                str(r) for r in _require(data, "decision_trace", "CertificationRecord")
            ),
            version=int(_require(data, "version", "CertificationRecord")),
            extra=extra,
        )

    @classmethod
    def from_json(cls, raw: str, strict: bool = True) -> "CertificationRecord":
        import json

        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"certification record is not valid JSON: {exc}") from exc
        return cls.from_dict(data, strict)
