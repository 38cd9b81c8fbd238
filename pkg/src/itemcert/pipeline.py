"""End-to-end verification and certification of assessment items.

The Verifier runs the independent checks for one item (classification,
attribution, rationale rubric, contradiction scan, bias screen) and bundles
them with the item id so the certifier can detect component mixups. The
CertificationPipeline drives items through verification, triage and the audit
ledger in input order, which keeps runs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from itemcert import certifier
from itemcert.config import PipelineConfig
from itemcert.governance import governance_record, screen
from itemcert.ledger import EventType, Ledger
from itemcert.levels import Framework
from itemcert.model import (
    AlignmentRecord,
    AssessmentItem,
    CertificationRecord,
    GovernanceRecord,
    ProvenanceRecord,
)
from itemcert.rationale import ContradictionReport, completeness, detect_contradiction
from itemcert.taxonomy.engine import attribute, classify


@dataclass(frozen=True)
class ItemVerification:
    """Everything the decision engine needs, tagged with the item it belongs to."""

    item_id: str
    alignment: AlignmentRecord
    contradiction: ContradictionReport
    governance: GovernanceRecord
    extra: dict = field(default_factory=dict)


class Verifier:
    """Stateless per-item verification against loaded lexicons and policy."""

    def __init__(self, config: PipelineConfig | None = None):
        self.config = config or PipelineConfig()
        self._lexicons = {
            Framework.BLOOM: self.config.lexicon_for(Framework.BLOOM),
            Framework.SOLO: self.config.lexicon_for(Framework.SOLO),
        }
        self._policy = self.config.policy()

    def lexicon_for(self, framework: Framework):
        return self._lexicons[framework]

    @property
    def policy(self):
        return self._policy

    def verify(self, item: AssessmentItem) -> ItemVerification:
        lexicon = self._lexicons[item.declared_level.framework]
        prediction = classify(item.stem, lexicon, self.config.classifier)
        attribution = attribute(item.stem, prediction, lexicon, self.config.classifier)
        rationale_report = completeness(
            item.rationale, item.declared_level, lexicon, self.config.completeness
        )
        contradiction = detect_contradiction(
            item.rationale, item, self.config.contradiction_rank_gap
        )
        flags = screen(item, item.rationale, self._policy)
        alignment = AlignmentRecord(
            predicted_level=prediction.predicted_level,
            confidence=prediction.confidence,
            level_scores=dict(prediction.probabilities),
            attribution=attribution,
            rationale_report=rationale_report,
            agreement=prediction.predicted_level == item.declared_level,
            verifier_id=self.config.verifier_id,
            verifier_version=lexicon.version,
        )
        return ItemVerification(
            item_id=item.id,
            alignment=alignment,
            contradiction=contradiction,
            governance=governance_record(flags),
        )

    def decision_input(self, item: AssessmentItem) -> certifier.DecisionInput:
        """Fresh decision input for an item; used to re-verify reviewer edits."""
        return certifier.decision_input_from(self.verify(item))


class CertificationPipeline:
    """Verify, triage and record a batch of items."""

    def __init__(
        self,
        config: PipelineConfig | None = None,
        ledger: Ledger | None = None,
        verifier: Verifier | None = None,
    ):
        self.config = config or PipelineConfig()
        self.verifier = verifier or Verifier(self.config)
        self.ledger = ledger

    def certify_item(
        self, item: AssessmentItem, provenance: ProvenanceRecord
    ) -> CertificationRecord:
        verification = self.verifier.verify(item)
        return certifier.certify(
            item,
            provenance,
            verification,
            thresholds=self.config.thresholds,
            ledger=self.ledger,
        )

    def run(
        self, pairs: Iterable[tuple[AssessmentItem, ProvenanceRecord]]
    ) -> list[CertificationRecord]:
        records = []
        for item, provenance in pairs:
            if self.ledger is not None:
                self.ledger.append(
                    EventType.ITEM_INGESTED,
                    {"item_id": item.id, "topic": item.topic},
                )
            records.append(self.certify_item(item, provenance))
        return records

    def apply_review(
        self,
        record: CertificationRecord,
        review,
        expected_version: int,
        override: bool = False,
    ) -> CertificationRecord:
        return certifier.apply_review(
            record,
            review,
            expected_version,
            thresholds=self.config.thresholds,
            reverify=self.verifier.decision_input,
            ledger=self.ledger,
            override=override,
        )
