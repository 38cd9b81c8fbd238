"""Traffic-light decision engine and certification record lifecycle.

``decide`` evaluates a fixed, published rule catalogue in strict order:
all rejection rules first, then all review rules, then auto-certification.
The decision trace lists every rule that fired in evaluation order, so a
label can always be reproduced from its trace. Red dominance is structural:
review rules are never consulted once a rejection rule fires.

``apply_review`` is compare-and-set friendly: it never mutates its input,
returns a new record with the version incremented, and raises
VersionConflict when the caller's expected version is stale.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Mapping

from itemcert.errors import (
    ComponentMismatch,
    InvalidThresholds,
    NotReviewable,
    ReVerificationFailed,
    VersionConflict,
)
from itemcert.ledger import EventType, Ledger
from itemcert.model import (
    AssessmentItem,
    CertificationRecord,
    Label,
    ReviewAction,
    ReviewRecord,
    RiskLevel,
    Status,
    Verdict,
)

# rule id -> human-readable description; exported with accreditation reports.
RULE_CATALOGUE: dict = {
    "confidence_below_red": "verifier confidence is below the rejection threshold",
    "rationale_contradiction": "the rationale contradicts the declared level or the answer key",
    "attribution_irrelevant": "attribution finds no lexicon support for the predicted level",
    "major_bias_flag": "a major-severity bias flag is present",
    "moderate_confidence": "verifier confidence is below the auto-certification threshold",
    "rationale_incomplete": "the self-rationalization fails the completeness rubric",
    "verifier_disagreement": "the declared level disagrees with the verifier prediction",
    "attribution_suspicious": "attribution relies on superficial cues",
    "minor_bias_flag": "a minor-severity bias flag is present",
    "auto_certify": "all auto-certification conditions hold",
    "edit_reverification": "the item passed re-verification after reviewer edits",
    "override_reopen": "a finalized record was reopened by explicit override",
}


@dataclass(frozen=True)
class Thresholds:
    green_min: float = 0.90
    red_below: float = 0.60

    def __post_init__(self):
        if not (0 <= self.red_below < self.green_min <= 1):
            raise InvalidThresholds(
                f"need 0 <= red_below < green_min <= 1, got "
                f"red_below={self.red_below}, green_min={self.green_min}"
            )


@dataclass(frozen=True)
class DecisionInput:
    confidence: float
    rationale_complete: bool
    contradiction: bool
    agreement: bool
    attribution_verdict: Verdict
    max_flag_severity: RiskLevel


def decide(decision_input: DecisionInput, thresholds: Thresholds | None = None):
    """Map a decision input to (label, decision_trace).

    Boundary semantics: green_min is inclusive (0.90 is green-eligible) and
    red_below is exclusive at the bottom of the review band (exactly 0.60 is
    yellow, 0.5999 is red).
    """
    thresholds = thresholds or Thresholds()
    d = decision_input

    red = []
    if d.confidence < thresholds.red_below:
        red.append("confidence_below_red")
    if d.contradiction:
        red.append("rationale_contradiction")
    if d.attribution_verdict is Verdict.IRRELEVANT:
        red.append("attribution_irrelevant")
    if d.max_flag_severity is RiskLevel.MAJOR:
        red.append("major_bias_flag")
    if red:
        return Label.RED, tuple(red)

    yellow = []
    if d.confidence < thresholds.green_min:
        yellow.append("moderate_confidence")
    if not d.rationale_complete:
        yellow.append("rationale_incomplete")
    if not d.agreement:
        yellow.append("verifier_disagreement")
    if d.attribution_verdict is Verdict.SUSPICIOUS:
        yellow.append("attribution_suspicious")
    if d.max_flag_severity is RiskLevel.MINOR:
        yellow.append("minor_bias_flag")
    if yellow:
        return Label.YELLOW, tuple(yellow)

    return Label.GREEN, ("auto_certify",)


_STATUS_FOR_LABEL = {
    Label.GREEN: Status.AUTO_CERTIFIED,
    Label.YELLOW: Status.PENDING_REVIEW,
    Label.RED: Status.REJECTED,
}


def status_for_label(label: Label) -> Status:
    return _STATUS_FOR_LABEL[label]


def decision_input_from(verification) -> DecisionInput:
    """Build the decision input from a pipeline verification bundle."""
    return DecisionInput(
        confidence=verification.alignment.confidence,
        rationale_complete=verification.alignment.rationale_report.complete,
        contradiction=verification.contradiction.contradiction,
        agreement=verification.alignment.agreement,
        attribution_verdict=verification.alignment.attribution.verdict,
        max_flag_severity=verification.governance.risk_level,
    )


def certify(
    item: AssessmentItem,
    provenance,
    verification,
    *,
    thresholds: Thresholds | None = None,
    ledger: Ledger | None = None,
) -> CertificationRecord:
    """Assemble the four-part certificate and triage it.

    Raises ComponentMismatch when the verification bundle was produced for a
    different item id. Appends a certification event (and, for red items, a
    regeneration request) to the ledger when one is supplied.
    """
    if verification.item_id != item.id:
        raise ComponentMismatch(
            f"verification bundle is for item {verification.item_id!r}, not {item.id!r}"
        )
    label, trace = decide(decision_input_from(verification), thresholds)
    record = CertificationRecord(
        item=item,
        provenance=provenance,
        alignment=verification.alignment,
        governance=verification.governance,
        label=label,
        status=status_for_label(label),
        decision_trace=trace,
        review=None,
        version=1,
    )
    if ledger is not None:
        ledger.append(
            EventType.CERTIFIED,
            {
                "item_id": item.id,
                "label": label.value,
                "status": record.status.value,
                "decision_trace": list(trace),
                "confidence": verification.alignment.confidence,
            },
        )
        if label is Label.RED:
            ledger.append(
                EventType.REGENERATION_REQUESTED,
                {"item_id": item.id, "reasons": list(trace)},
            )
    return record


_EDITABLE_FIELDS = ("stem", "options", "correct_index", "rationale", "topic", "course_context")


def apply_edits(item: AssessmentItem, edits: Mapping) -> AssessmentItem:
    """Apply a field-level diff to an item; unknown fields are rejected."""
    unknown = [k for k in edits if k not in _EDITABLE_FIELDS]
    if unknown:
        raise ValueError(f"edits touch non-editable fields {sorted(unknown)}")
    changes: dict = dict(edits)
    if "options" in changes:
        changes["options"] = tuple(str(o) for o in changes["options"])
    if "correct_index" in changes:
        changes["correct_index"] = int(changes["correct_index"])
    return replace(item, **changes)


def apply_review(
    record: CertificationRecord,
    review: ReviewRecord,
    expected_version: int,
    *,
    thresholds: Thresholds | None = None,
    reverify: Callable[[AssessmentItem], DecisionInput] | None = None,
    ledger: Ledger | None = None,
    override: bool = False,
) -> CertificationRecord:
    """Apply a reviewer decision, returning the next record version.

    ApproveWithEdits re-verifies the edited item (classification, attribution,
    rationale and governance are recomputed through ``reverify``); if the
    edited item would now be red the review fails with ReVerificationFailed
    and the record is left unchanged. Provenance and alignment components are
    never mutated; only the item (via edits), review, status, trace and
    version change.
    """
    if expected_version != record.version:
        raise VersionConflict(
            f"record {record.item.id} is at version {record.version}, "
            f"caller expected {expected_version}"
        )
    reopened = record.status is not Status.PENDING_REVIEW
    if reopened and not override:
        raise NotReviewable(
            f"record {record.item.id} is {record.status.value}; reviews need the override flag"
        )

    trace_additions: list = []
    if reopened:
        trace_additions.append("override_reopen")
        if ledger is not None:
            ledger.append(
                EventType.OVERRIDDEN,
                {
                    "item_id": record.item.id,
                    "previous_status": record.status.value,
                    "reviewer_pseudonym": review.reviewer_pseudonym,
                },
            )

    new_item = record.item
    if review.action is ReviewAction.APPROVE_UNCHANGED:
        new_status = Status.CERTIFIED_HUMAN
    elif review.action is ReviewAction.APPROVE_WITH_EDITS:
        new_item = apply_edits(record.item, review.edits or {})
        if reverify is not None:
            relabel, retrace = decide(reverify(new_item), thresholds)
            if relabel is Label.RED:
                raise ReVerificationFailed(
                    f"edited item {record.item.id} would be rejected: {', '.join(retrace)}",
                    trace=retrace,
                )
        trace_additions.append("edit_reverification")
        new_status = Status.CERTIFIED_HUMAN
    else:
        new_status = Status.REJECTED

    updated = record.with_review(
        review, new_status, item=new_item, trace_additions=tuple(trace_additions)
    )
    if ledger is not None:
        ledger.append(
            EventType.REVIEW_SUBMITTED,
            {
                "item_id": record.item.id,
                "action": review.action.value,
                "reviewer_pseudonym": review.reviewer_pseudonym,
                "new_status": new_status.value,
                "version": updated.version,
            },
        )
    return updated
