"""Accreditation reporting over certification records.

Reports are exported in two forms: canonical structured JSON for machine
consumption, and a human-readable document whose sections follow the four
evidence categories auditors ask for (provenance, validation and review,
curricular alignment, governance).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable, Mapping, Sequence

from itemcert.canonical import canonical_json
from itemcert.certifier import RULE_CATALOGUE
from itemcert.clock import from_rfc3339, to_rfc3339
from itemcert.errors import EmptySample, NotNormalized, SupportMismatch
from itemcert.model import CertificationRecord, Label, ReviewAction

_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ReportPeriod:
    start: datetime | None = None
    end: datetime | None = None

    def contains(self, moment: datetime) -> bool:
        if self.start is not None and moment < self.start:
            return False
        if self.end is not None and moment > self.end:
            return False
        return True

    def to_dict(self) -> dict:
        return {
            "from": None if self.start is None else to_rfc3339(self.start),
            "to": None if self.end is None else to_rfc3339(self.end),
        }

    @classmethod
    def parse(cls, start: str | None, end: str | None) -> "ReportPeriod":
        return cls(
            start=None if not start else from_rfc3339(start),
            end=None if not end else from_rfc3339(end),
        )


@dataclass(frozen=True)
class AccreditationReport:
    triage_counts: dict
    level_distribution: dict
    rejection_reasons: dict
    review_summary: dict
    period: ReportPeriod
    rule_catalogue: dict = field(default_factory=lambda: dict(RULE_CATALOGUE))
    total_records: int = 0

    def to_dict(self) -> dict:
        return {
            "triage_counts": dict(self.triage_counts),
            "level_distribution": dict(self.level_distribution),
            "rejection_reasons": dict(self.rejection_reasons),
            "review_summary": dict(self.review_summary),
            "period": self.period.to_dict(),
            "rule_catalogue": dict(self.rule_catalogue),
            "total_records": self.total_records,
        }


def summary_report(
    records: Iterable[CertificationRecord], period: ReportPeriod | None = None
) -> AccreditationReport:
    """Exact triage, level, rejection and review counts over a record set.

    The period filter applies to the provenance generation timestamp. Triage
    counts sum to the number of records in the period; the level distribution
    uses the verifier's predicted level, keyed framework:Name.
    """
    period = period or ReportPeriod()
    triage = {label.value: 0 for label in Label}
    levels: dict = {}
    rejection: dict = {}
    reviews = {action.value: 0 for action in ReviewAction}
    total = 0
    for record in records:
        if not period.contains(record.provenance.generated_at):
            continue
        total += 1
        triage[record.label.value] += 1
        level_key = str(record.alignment.predicted_level)
        levels[level_key] = levels.get(level_key, 0) + 1
        if record.label is Label.RED:
            for rule_id in record.decision_trace:
                rejection[rule_id] = rejection.get(rule_id, 0) + 1
        if record.review is not None:
            reviews[record.review.action.value] += 1
    return AccreditationReport(
        triage_counts=triage,
        level_distribution=dict(sorted(levels.items())),
        rejection_reasons=dict(sorted(rejection.items())),
        review_summary=reviews,
        period=period,
        total_records=total,
    )


def render_structured(report: AccreditationReport) -> str:
    return canonical_json(report.to_dict())


def render_document(report: AccreditationReport) -> str:
    """Human-readable report with one section per evidence category."""
    lines = ["# Accreditation Report", ""]

    lines += ["## Provenance Documentation", ""]
    period = report.period.to_dict()
    lines.append(f"- Period: {period['from'] or 'start of records'} to {period['to'] or 'now'}")
    lines.append(f"- Certified records covered: {report.total_records}")
    lines.append("")

    lines += ["## Validation and Review Records", ""]
    for label in ("green", "yellow", "red"):
        lines.append(f"- {label.capitalize()}: {report.triage_counts.get(label, 0)}")
    reviewed = sum(report.review_summary.values())
    lines.append(f"- Human reviews recorded: {reviewed}")
    for action, count in report.review_summary.items():
        lines.append(f"  - {action}: {count}")
    lines.append("")

    lines += ["## Curricular Alignment", ""]
    if report.level_distribution:
        for level_name, count in report.level_distribution.items():
            lines.append(f"- {level_name}: {count}")
    else:
        lines.append("- No records in period.")
    lines.append("")

    lines += ["## Ethical and Governance Assurance", ""]
    if report.rejection_reasons:
        lines.append("- Rejection reasons (rule id: count):")
        for rule_id, count in report.rejection_reasons.items():
            lines.append(f"  - {rule_id}: {count}")
    else:
        lines.append("- No rejections in period.")
    lines.append("")
    lines.append("### Rule catalogue")
    for rule_id, description in report.rule_catalogue.items():
        lines.append(f"- {rule_id}: {description}")
    lines.append("")
    return "\n".join(lines)


@dataclass(frozen=True)
class WorkloadReport:
    mean_without: float
    mean_with: float
    reduction_fraction: float

    def percent_label(self) -> str:
        """Reduction rendered as an integer percentage, e.g. '31%'."""
        return f"{round(self.reduction_fraction * 100):d}%"

    def to_dict(self) -> dict:
        return {
            "mean_without": self.mean_without,
            "mean_with": self.mean_with,
            "reduction_fraction": self.reduction_fraction,
        }


def workload_report(
    durations_without: Sequence[float], durations_with: Sequence[float]
) -> WorkloadReport:
    """Mean review durations with/without metadata and the relative reduction.

    A negative reduction (metadata made reviews slower) is reported, not an
    error.
    """
    if not durations_without or not durations_with:
        raise EmptySample("both duration samples must be non-empty")
    mean_without = sum(durations_without) / len(durations_without)
    mean_with = sum(durations_with) / len(durations_with)
    reduction = (mean_without - mean_with) / mean_without
    return WorkloadReport(mean_without, mean_with, reduction)


def _as_vector(dist) -> tuple[tuple, tuple]:
    """Normalize dict/sequence input to (support, values) with a stable order."""
    if isinstance(dist, Mapping):
        keys = tuple(sorted(dist))
        return keys, tuple(float(dist[k]) for k in keys)
    values = tuple(float(v) for v in dist)
    return tuple(range(len(values))), values


def drift(dist_a, dist_b) -> float:
    """Total variation distance between two distributions on the same support.

    Bounded in [0, 1], symmetric, zero exactly for identical distributions.
    Accepts mappings (matched by key) or plain sequences (matched by index).
    """
    support_a, values_a = _as_vector(dist_a)
    support_b, values_b = _as_vector(dist_b)
    if support_a != support_b:
        raise SupportMismatch(f"supports differ: {support_a} vs {support_b}")
    for name, values in (("first", values_a), ("second", values_b)):
        if any(v < 0 for v in values):
            raise NotNormalized(f"{name} distribution has negative mass")
        if abs(sum(values) - 1.0) > _SUM_TOLERANCE:
            raise NotNormalized(f"{name} distribution sums to {sum(values)}, not 1")
    return 0.5 * sum(abs(a - b) for a, b in zip(values_a, values_b))
