from __future__ import annotations

from datetime import timedelta

import pytest
from hypothesis import given
from hypothesis import strategies as st

from itemcert.canonical import sha256_hex
from itemcert.clock import FIXED_INSTANT
from itemcert.errors import ParseError, UnknownLevel
from itemcert.levels import (
    BLOOM_LEVEL_NAMES,
    SOLO_LEVEL_NAMES,
    Framework,
    TaxonomyLevel,
    level,
    levels_of,
    taxonomy_rank,
)
from itemcert.model import (
    AlignmentRecord,
    AttributionMap,
    BiasCategory,
    BiasFlag,
    CertificationRecord,
    CompletenessReport,
    CriterionResult,
    FlagLocation,
    FlagSeverity,
    GovernanceRecord,
    Label,
    ProvenanceRecord,
    ReviewAction,
    ReviewRecord,
    RiskLevel,
    Status,
    Verdict,
    is_legal_transition,
    option_letter,
    validate_item,
)
from tests.conftest import make_item


class TestTaxonomyLevels:
    def test_bloom_names_and_ranks(self):
        assert BLOOM_LEVEL_NAMES == (
            "Remember", "Understand", "Apply", "Analyze", "Evaluate", "Create",
        )
        assert [taxonomy_rank(lvl) for lvl in levels_of(Framework.BLOOM)] == [1, 2, 3, 4, 5, 6]

    def test_solo_names_and_ranks(self):
        assert SOLO_LEVEL_NAMES == (
            "Prestructural", "Unistructural", "Multistructural", "Relational", "ExtendedAbstract",
        )
        assert [taxonomy_rank(lvl) for lvl in levels_of(Framework.SOLO)] == [1, 2, 3, 4, 5]

    def test_rank_examples(self):
        assert taxonomy_rank(level("bloom", "Remember")) == 1
        assert taxonomy_rank(level("bloom", "Create")) == 6
        assert taxonomy_rank(level("solo", "ExtendedAbstract")) == 5

    def test_rank_total_and_distinct_per_framework(self):
        for framework in Framework:
            ranks = [taxonomy_rank(lvl) for lvl in levels_of(framework)]
            assert len(set(ranks)) == len(ranks)
            assert ranks == sorted(ranks)

    def test_unknown_level_rejected(self):
        with pytest.raises(UnknownLevel):
            level("bloom", "Reminisce")
        with pytest.raises(UnknownLevel):
            TaxonomyLevel(Framework.SOLO, "Analyze")

    def test_wrong_rank_rejected(self):
        with pytest.raises(UnknownLevel):
            TaxonomyLevel(Framework.BLOOM, "Apply", rank=5)


class TestValidateItem:
    def test_valid_item(self, item):
        assert validate_item(item).ok

    def test_correct_index_out_of_range(self):
        bad = make_item(correct_index=5)
        result = validate_item(bad)
        assert not result.ok
        assert "correct_index_out_of_range" in result.codes()

    def test_empty_stem(self):
        result = validate_item(make_item(stem="   "))
        assert "empty_stem" in result.codes()

    def test_too_few_options(self):
        result = validate_item(make_item(options=("only one",)))
        assert "too_few_options" in result.codes()

    def test_option_letters(self):
        assert option_letter(0) == "A"
        assert option_letter(3) == "D"
        with pytest.raises(ValueError):
            option_letter(-1)


class TestStatusMachine:
    def test_legal_transitions(self):
        assert is_legal_transition(Status.PENDING_REVIEW, Status.CERTIFIED_HUMAN)
        assert is_legal_transition(Status.PENDING_REVIEW, Status.REJECTED)

    @pytest.mark.parametrize("old", list(Status))
    @pytest.mark.parametrize("new", list(Status))
    def test_everything_else_rejected(self, old, new):
        if (old, new) in {
            (Status.PENDING_REVIEW, Status.CERTIFIED_HUMAN),
            (Status.PENDING_REVIEW, Status.REJECTED),
        }:
            return
        assert not is_legal_transition(old, new)


def _hex(seed: str) -> str:
    return sha256_hex(seed)


def make_record(item=None, label=Label.YELLOW, status=Status.PENDING_REVIEW, review=None):
    item = item or make_item(rationale="This targets the Analyze level; compare options. distractor")
    attribution = AttributionMap(
        tokens=(("compare", 0.31), ("the", 0.0), ("steps", -0.01)),
        predicted_level=level("bloom", "Analyze"),
        lexicon_mass_ratio=1.0,
        verdict=Verdict.CONSISTENT,
    )
    completeness = CompletenessReport(
        score=0.7,
        complete=True,
        components={"names_declared_level": CriterionResult(True, 0.4)},
        detected_level_mentions=("Analyze",),
    )
    alignment = AlignmentRecord(
        predicted_level=level("bloom", "Analyze"),
        confidence=0.87,
        level_scores={"Analyze": 0.87, "Apply": 0.13},
        attribution=attribution,
        rationale_report=completeness,
        agreement=True,
        verifier_id="itemcert-lexicon-verifier",
        verifier_version="bloom-default-1.0",
    )
    provenance = ProvenanceRecord(
        model_id="stub-generator",
        model_version="1.0",
        prompt_hash=_hex("prompt"),
        prompt_text=None,
        system_instructions_hash=_hex("system"),
        generated_at=FIXED_INSTANT,
        generation_params={"seed": 1},
        course_context="cs-101",
    )
    governance = GovernanceRecord(
        flags=(
            BiasFlag(
                matched_term="elderly",
                category=BiasCategory.AGE,
                severity=FlagSeverity.MINOR,
                span=(10, 17),
                location=FlagLocation.option(1),
            ),
        ),
    )
    return CertificationRecord(
        item=item,
        provenance=provenance,
        alignment=alignment,
        governance=governance,
        label=label,
        status=status,
        decision_trace=("moderate_confidence", "minor_bias_flag"),
        review=review,
        version=1,
    )


class TestSerialization:
    def test_round_trip_record(self):
        record = make_record()
        assert CertificationRecord.from_json(record.to_json()) == record

    def test_round_trip_with_review(self):
        review = ReviewRecord(
            reviewer_pseudonym="sme-03",
            action=ReviewAction.APPROVE_WITH_EDITS,
            edits={"stem": "Edited stem that stays put."},
            notes="tightened wording",
            started_at=FIXED_INSTANT,
            decided_at=FIXED_INSTANT + timedelta(seconds=44),
        )
        record = make_record(status=Status.CERTIFIED_HUMAN, review=review)
        restored = CertificationRecord.from_json(record.to_json())
        assert restored == record
        assert restored.review.duration_seconds == 44.0

    def test_strict_rejects_unknown_fields(self):
        data = make_record().to_dict()
        data["surprise"] = 1
        with pytest.raises(ParseError):
            CertificationRecord.from_dict(data, strict=True)

    def test_lenient_preserves_unknown_fields(self):
        data = make_record().to_dict()
        data["surprise"] = {"nested": True}
        record = CertificationRecord.from_dict(data, strict=False)
        assert record.extra == {"surprise": {"nested": True}}
        assert record.to_dict()["surprise"] == {"nested": True}

    def test_empty_trace_rejected(self):
        record = make_record()
        with pytest.raises(ValueError):
            CertificationRecord(
                item=record.item,
                provenance=record.provenance,
                alignment=record.alignment,
                governance=record.governance,
                label=record.label,
                status=record.status,
                decision_trace=(),
            )

    @given(
        st.sampled_from([(f, n) for f in Framework for n in
                         ("Remember", "Understand", "Apply", "Analyze", "Evaluate", "Create",
                          "Prestructural", "Unistructural", "Multistructural", "Relational",
                          "ExtendedAbstract")]),
    )
    def test_level_round_trip(self, pair):
        framework, name = pair
        try:
            lvl = TaxonomyLevel(framework, name)
        except UnknownLevel:
            return
        assert TaxonomyLevel.from_dict(lvl.to_dict()) == lvl


class TestProvenanceInvariants:
    def test_requires_model_identity(self):
        with pytest.raises(ValueError):
            ProvenanceRecord(
                model_id="",
                model_version="1",
                prompt_hash=_hex("p"),
                system_instructions_hash=_hex("s"),
                generated_at=FIXED_INSTANT,
            )

    def test_requires_hex_hashes(self):
        with pytest.raises(ValueError):
            ProvenanceRecord(
                model_id="m",
                model_version="1",
                prompt_hash="XYZ",
                system_instructions_hash=_hex("s"),
                generated_at=FIXED_INSTANT,
            )


class TestReviewRecord:
    def test_duration_derived(self):
        review = ReviewRecord(
            reviewer_pseudonym="sme-00",
            action=ReviewAction.REJECT,
            started_at=FIXED_INSTANT,
            decided_at=FIXED_INSTANT + timedelta(seconds=64),
        )
        assert review.duration_seconds == 64.0

    def test_negative_duration_rejected(self):
        with pytest.raises(ValueError):
            ReviewRecord(
                reviewer_pseudonym="sme-00",
                action=ReviewAction.REJECT,
                started_at=FIXED_INSTANT,
                decided_at=FIXED_INSTANT - timedelta(seconds=1),
            )

    def test_edits_only_with_edit_action(self):
        with pytest.raises(ValueError):
            ReviewRecord(
                reviewer_pseudonym="sme-00",
                action=ReviewAction.APPROVE_UNCHANGED,
                edits={"stem": "x"},
                started_at=FIXED_INSTANT,
                decided_at=FIXED_INSTANT,
            )
        with pytest.raises(ValueError):
            ReviewRecord(
                reviewer_pseudonym="sme-00",
                action=ReviewAction.APPROVE_WITH_EDITS,
                edits=None,
                started_at=FIXED_INSTANT,
                decided_at=FIXED_INSTANT,
            )


class TestGovernanceRecord:
    def test_risk_level_none_iff_no_flags(self):
        assert GovernanceRecord(flags=()).risk_level is RiskLevel.NONE

    def test_risk_level_is_max_severity(self):
        minor = BiasFlag("elderly", BiasCategory.AGE, FlagSeverity.MINOR, (0, 7),
                         FlagLocation.stem())
        major = BiasFlag("crippled", BiasCategory.DISABILITY, FlagSeverity.MAJOR, (8, 16),
                         FlagLocation.stem())
        assert GovernanceRecord(flags=(minor,)).risk_level is RiskLevel.MINOR
        assert GovernanceRecord(flags=(minor, major)).risk_level is RiskLevel.MAJOR
