from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itemcert.levels import Framework, level, levels_of
from itemcert.rationale import (
    CompletenessConfig,
    ContradictionReason,
    completeness,
    detect_contradiction,
    detect_level_mentions,
)
from tests.conftest import make_item

FULL_RATIONALE = (
    "This item targets the Analyze level because students must compare two algorithms "
    "and weigh their trade-offs; distractor B reflects a common confusion."
)


class TestCompleteness:
    def test_empty_rationale_scores_zero(self, bloom_lexicon):
        report = completeness("", level("bloom", "Analyze"), bloom_lexicon)
        assert report.score == 0.0
        assert not report.complete

    def test_full_rationale_scores_one(self, bloom_lexicon):
        report = completeness(FULL_RATIONALE, level("bloom", "Analyze"), bloom_lexicon)
        assert report.score == 1.0
        assert report.complete
        assert all(c.satisfied for c in report.components.values())

    def test_wrong_level_name_caps_score(self, bloom_lexicon):
        text = (
            "This item sits at the Apply level because students compute the result and "
            "work through the options step by step; distractor A is the classic slip."
        )
        report = completeness(text, level("bloom", "Analyze"), bloom_lexicon)
        assert not report.components["names_declared_level"].satisfied
        assert report.score <= 0.6
        assert not report.complete

    def test_synonym_spelling_counts(self, bloom_lexicon):
        text = "Learners must analyse the data here. " + "pad " * 20 + "the answer column."
        report = completeness(text, level("bloom", "Analyze"), bloom_lexicon)
        assert report.components["names_declared_level"].satisfied
        assert "Analyze" in report.detected_level_mentions

    def test_word_count_uses_raw_whitespace_tokens(self, bloom_lexicon):
        nineteen = " ".join(["word"] * 19)
        twenty = " ".join(["word"] * 20)
        analyze = level("bloom", "Analyze")
        assert not completeness(nineteen, analyze, bloom_lexicon).components["min_length"].satisfied
        assert completeness(twenty, analyze, bloom_lexicon).components["min_length"].satisfied

    def test_threshold_boundary_is_inclusive(self, bloom_lexicon):
        # Level name + verb alone: 0.4 + 0.3 = 0.7 exactly -> complete.
        text = "Analyze level: students compare."
        report = completeness(text, level("bloom", "Analyze"), bloom_lexicon)
        assert report.score == pytest.approx(0.7)
        assert report.complete

    def test_custom_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            CompletenessConfig(weight_names_level=0.9)

    @given(st.text(max_size=200))
    @settings(max_examples=60)
    def test_score_bounds_and_idempotence(self, text):
        from itemcert.taxonomy.lexicon import default_bloom_lexicon

        lexicon = default_bloom_lexicon()
        first = completeness(text, level("bloom", "Evaluate"), lexicon)
        second = completeness(text, level("bloom", "Evaluate"), lexicon)
        assert first == second
        assert 0.0 <= first.score <= 1.0


class TestLevelMentions:
    def test_whole_word_only(self):
        assert detect_level_mentions("analyzer analyses analytical") == ()

    def test_first_appearance_order(self):
        mentions = detect_level_mentions("First Evaluate, then Remember, then evaluate again.")
        assert mentions == ("Evaluate", "Remember")

    def test_extended_abstract_phrase(self):
        assert detect_level_mentions("reaching the extended abstract stage") == (
            "ExtendedAbstract",
        )


class TestContradiction:
    def test_large_rank_gap_fires(self):
        item = make_item(level_name="Evaluate", rationale="This is a Remember task at heart.")
        report = detect_contradiction(item.rationale, item)
        assert report.contradiction
        assert ContradictionReason.LEVEL_MISMATCH_IN_RATIONALE in report.reasons

    def test_adjacent_level_is_benign(self):
        item = make_item(level_name="Analyze", rationale="Arguably an Evaluate task.")
        report = detect_contradiction(item.rationale, item)
        assert not report.contradiction

    def test_cross_framework_mentions_ignored(self):
        item = make_item(level_name="Create", rationale="Close to Unistructural recall.")
        report = detect_contradiction(item.rationale, item)
        assert not report.contradiction

    def test_answer_key_mismatch_letter(self):
        item = make_item(correct_index=0, rationale="Note that option C is correct here.")
        report = detect_contradiction(item.rationale, item)
        assert ContradictionReason.ANSWER_KEY_MISMATCH in report.reasons

    def test_answer_key_match_is_quiet(self):
        item = make_item(correct_index=2, rationale="Note that option C is correct here.")
        assert not detect_contradiction(item.rationale, item).contradiction

    def test_correct_answer_is_phrase(self):
        item = make_item(correct_index=1, rationale="The correct answer is D because of tiling.")
        report = detect_contradiction(item.rationale, item)
        assert ContradictionReason.ANSWER_KEY_MISMATCH in report.reasons

    def test_article_a_not_taken_as_option(self):
        item = make_item(correct_index=1, rationale="The correct answer is a stack, clearly.")
        assert not detect_contradiction(item.rationale, item).contradiction

    def test_digit_index_is_one_based(self):
        item = make_item(correct_index=2, rationale="The correct answer is 3.")
        assert not detect_contradiction(item.rationale, item).contradiction
        item2 = make_item(correct_index=0, rationale="The correct answer is 3.")
        assert detect_contradiction(item2.rationale, item2).contradiction

    @pytest.mark.parametrize("framework", list(Framework))
    def test_gap_monotonicity(self, framework):
        # If a mention fires at gap g, any declaration making the gap larger fires too.
        names = [lvl.name for lvl in levels_of(framework)]
        mention = names[0]
        rationale = f"Really a {mention} item."
        fired_at = []
        for declared_name in names:
            item = make_item(framework=framework.value, level_name=declared_name,
                             rationale=rationale)
            report = detect_contradiction(rationale, item)
            fired_at.append(report.contradiction)
        # Gap grows with declared rank here, so firing must be monotone.
        assert fired_at == sorted(fired_at)
