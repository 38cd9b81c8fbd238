from __future__ import annotations

import pytest

from itemcert.config import PipelineConfig
from itemcert.errors import CalibrationFailure, ConfigError
from itemcert.governance import default_policy
from itemcert.ledger import Ledger
from itemcert.levels import Framework, levels_of
from itemcert.model import Label
from itemcert.pipeline import CertificationPipeline
from itemcert.simulator import (
    FILLERS,
    OPTION_BANK,
    TOPICS,
    SimulationProfile,
    band_of,
    simulate_corpus,
)
from itemcert.taxonomy.engine import INTERROGATIVE_TOKENS, JOINER_TOKENS, tokenize
from itemcert.taxonomy.lexicon import default_bloom_lexicon, default_solo_lexicon


def small_profile(**overrides):
    base = dict(
        name="test",
        total=12,
        high=4,
        medium=4,
        low=4,
        planted_incomplete_rationales_in_high=1,
        planted_major_flags_in_medium=1,
        seed=9,
    )
    base.update(overrides)
    return SimulationProfile(**base)


class TestProfile:
    def test_band_counts_must_sum(self):
        with pytest.raises(ConfigError):
            small_profile(total=13)

    def test_plants_bounded_by_band(self):
        with pytest.raises(ConfigError):
            small_profile(planted_incomplete_rationales_in_high=5)


class TestTemplateBanks:
    """The banks must stay disjoint from every scoring and screening cue."""

    def test_no_collisions_with_lexicons_or_policy(self):
        reserved = set()
        for lexicon in (default_bloom_lexicon(), default_solo_lexicon()):
            reserved |= set(lexicon.entries)
        reserved |= set(JOINER_TOKENS) | set(INTERROGATIVE_TOKENS)
        policy_tokens = {
            token for entry in default_policy().entries for token in entry.term.split()
        }
        for text in (*TOPICS, *FILLERS, *OPTION_BANK):
            for token in tokenize(text):
                assert token not in reserved, f"{token!r} from {text!r} hits a lexicon cue"
                assert token not in policy_tokens, f"{token!r} from {text!r} hits the policy"


class TestSimulateCorpus:
    def test_all_high_profile_goes_green(self, clock):
        profile = small_profile(
            total=10, high=10, medium=0, low=0,
            planted_incomplete_rationales_in_high=0, planted_major_flags_in_medium=0,
        )
        simulated = simulate_corpus(profile, clock=clock)
        pipeline = CertificationPipeline(ledger=Ledger(clock=clock))
        records = pipeline.run((s.item, s.provenance) for s in simulated)
        assert all(r.label is Label.GREEN for r in records)

    def test_all_low_profile_goes_red(self, clock):
        profile = small_profile(
            total=5, high=0, medium=0, low=5,
            planted_incomplete_rationales_in_high=0, planted_major_flags_in_medium=0,
        )
        simulated = simulate_corpus(profile, clock=clock)
        pipeline = CertificationPipeline(ledger=Ledger(clock=clock))
        records = pipeline.run((s.item, s.provenance) for s in simulated)
        assert all(r.label is Label.RED for r in records)
        assert all("confidence_below_red" in r.decision_trace for r in records)

    def test_determinism_same_seed(self, clock):
        first = simulate_corpus(small_profile(), clock=clock)
        second = simulate_corpus(small_profile(), clock=clock)
        assert [s.item for s in first] == [s.item for s in second]
        assert [s.provenance for s in first] == [s.provenance for s in second]

    def test_different_seed_differs(self, clock):
        first = simulate_corpus(small_profile(), clock=clock)
        second = simulate_corpus(small_profile(seed=10), clock=clock)
        assert [s.item for s in first] != [s.item for s in second]

    def test_fidelity_bands_from_real_classifier(self, clock):
        config = PipelineConfig()
        for sim in simulate_corpus(small_profile(), config=config, clock=clock):
            lexicon = config.lexicon_for(sim.item.declared_level.framework)
            from itemcert.taxonomy.engine import classify

            prediction = classify(sim.item.stem, lexicon, config.classifier)
            assert band_of(prediction.confidence) == sim.band
            assert prediction.confidence == sim.confidence

    def test_planted_defects_recorded(self, clock):
        simulated = simulate_corpus(small_profile(), clock=clock)
        incomplete = [s for s in simulated if "incomplete_rationale" in s.defects]
        flagged = [s for s in simulated if "major_flag_term" in s.defects]
        assert len(incomplete) == 1
        assert len(flagged) == 1
        assert incomplete[0].band == "high"
        assert flagged[0].band == "medium"

    def test_calibration_failure_reports_achieved_confidence(self, clock):
        # A cranked-up temperature flattens the softmax, so high-band stems
        # cannot reach 0.90 and the simulator must refuse loudly.
        from itemcert.taxonomy.engine import ClassifierConfig

        config = PipelineConfig(classifier=ClassifierConfig(temperature=10.0))
        profile = small_profile(
            total=2, high=2, medium=0, low=0,
            planted_incomplete_rationales_in_high=0, planted_major_flags_in_medium=0,
        )
        with pytest.raises(CalibrationFailure) as excinfo:
            simulate_corpus(profile, config=config, clock=clock)
        assert excinfo.value.achieved is not None

    def test_calibration_table_matches_classifier(self):
        import json
        from importlib import resources

        from itemcert.taxonomy.engine import classify
        from itemcert.taxonomy.lexicon import default_lexicon

        table = json.loads(
            resources.files("itemcert.data").joinpath("calibration.json").read_text("utf-8")
        )
        for framework in Framework:
            lexicon = default_lexicon(framework)
            for count_text, expected in table["confidence_by_verb_count"][framework.value].items():
                count = int(count_text)
                verb_levels = [
                    lvl for lvl in levels_of(framework) if len(lexicon.verbs_for(lvl)) >= count
                ]
                lvl = verb_levels[-1] if count else verb_levels[0]
                verbs = lexicon.verbs_for(lvl)[:count]
                stem = (
                    " ".join(verbs) + " the cache." if verbs else "the cache waits."
                )
                achieved = classify(stem, lexicon).confidence
                assert achieved == pytest.approx(expected, abs=1e-9), (
                    f"{framework.value} verb count {count}"
                )
