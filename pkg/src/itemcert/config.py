"""Pipeline configuration.

One YAML (or JSON) file covers decision thresholds, classifier features,
rubric weights, lexicon/policy paths and adapter settings. Every CLI run
records the resolved configuration's hash in the audit ledger so a report can
always be traced back to the exact rules that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from itemcert.canonical import digest_value
from itemcert.certifier import Thresholds
from itemcert.errors import ConfigError, InvalidThresholds
from itemcert.governance import BiasPolicy, default_policy, load_policy
from itemcert.levels import Framework
from itemcert.rationale import CompletenessConfig
from itemcert.taxonomy.engine import ClassifierConfig
from itemcert.taxonomy.lexicon import Lexicon, default_lexicon, load_lexicon

VERIFIER_ID = "itemcert-lexicon-verifier"


@dataclass(frozen=True)
class PipelineConfig:
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    thresholds: Thresholds = field(default_factory=Thresholds)
    completeness: CompletenessConfig = field(default_factory=CompletenessConfig)
    contradiction_rank_gap: int = 2
    bloom_lexicon_path: str | None = None  # None selects the bundled default
    solo_lexicon_path: str | None = None
    policy_path: str | None = None
    verifier_id: str = VERIFIER_ID

    def to_dict(self) -> dict:
        return {
            "classifier": {
                "temperature": self.classifier.temperature,
                "leading_verb_boost": self.classifier.leading_verb_boost,
                "interrogative_bonus": self.classifier.interrogative_bonus,
                "noun_pair_bonus": self.classifier.noun_pair_bonus,
                "consistent_threshold": self.classifier.consistent_threshold,
                "similarity_signal": self.classifier.similarity_signal,
            },
            "thresholds": {
                "green_min": self.thresholds.green_min,
                "red_below": self.thresholds.red_below,
            },
            "completeness": {
                "weight_names_level": self.completeness.weight_names_level,
                "weight_level_verb": self.completeness.weight_level_verb,
                "weight_min_length": self.completeness.weight_min_length,
                "weight_option_reference": self.completeness.weight_option_reference,
                "min_word_count": self.completeness.min_word_count,
                "completeness_threshold": self.completeness.completeness_threshold,
            },
            "contradiction_rank_gap": self.contradiction_rank_gap,
            "bloom_lexicon_path": self.bloom_lexicon_path,
            "solo_lexicon_path": self.solo_lexicon_path,
            "policy_path": self.policy_path,
            "verifier_id": self.verifier_id,
        }

    def hash(self) -> str:
        return digest_value(self.to_dict())

    def lexicon_for(self, framework: Framework) -> Lexicon:
        path = (
            self.bloom_lexicon_path if framework is Framework.BLOOM else self.solo_lexicon_path
        )
        if path is None:
            return default_lexicon(framework)
        return load_lexicon(path)

    def policy(self) -> BiasPolicy:
        if self.policy_path is None:
            return default_policy()
        return load_policy(self.policy_path)


def _section(data: dict, name: str) -> dict:
    section = data.get(name, {})
    if section is None:
        return {}
    if not isinstance(section, dict):
        raise ConfigError(f"config section {name!r} must be a mapping")
    return section


def load_config(path: str | Path | None = None) -> PipelineConfig:
    """Load configuration from a YAML/JSON file; None gives all defaults."""
    if path is None:
        return PipelineConfig()
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(raw) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a mapping at the top level")

    known = {
        "classifier",
        "thresholds",
        "completeness",
        "contradiction_rank_gap",
        "bloom_lexicon_path",
        "solo_lexicon_path",
        "policy_path",
        "verifier_id",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"config {path} has unknown keys {sorted(unknown)}")

    try:
        classifier = ClassifierConfig(**_section(data, "classifier"))
        thresholds = Thresholds(**_section(data, "thresholds"))
        completeness = CompletenessConfig(**_section(data, "completeness"))
    except (TypeError, ValueError, InvalidThresholds) as exc:
        raise ConfigError(f"config {path} is invalid: {exc}") from exc

    return PipelineConfig(
        classifier=classifier,
        thresholds=thresholds,
        completeness=completeness,
        contradiction_rank_gap=int(data.get("contradiction_rank_gap", 2)),
        bloom_lexicon_path=data.get("bloom_lexicon_path"),
        solo_lexicon_path=data.get("solo_lexicon_path"),
        policy_path=data.get("policy_path"),
        verifier_id=str(data.get("verifier_id", VERIFIER_ID)),
    )
