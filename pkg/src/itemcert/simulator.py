"""Deterministic corpus simulator and scripted review replay.

The simulator constructs item *inputs*, never classifier outputs: stems are
built with a controlled number of lexicon verbs, calibrated once against the
bundled lexicons (see data/calibration.json), and every generated stem is run
through the real classifier to confirm its confidence landed in the requested
band. Defects are planted the same way: an incomplete rationale is a real
rationale that fails the rubric, a bias flag is a real policy term in the
stem. Identical profile and seed yield a byte-identical corpus.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import timedelta
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import yaml

from itemcert.canonical import canonical_json, sha256_hex
from itemcert.clock import Clock, system_clock
from itemcert.config import PipelineConfig
from itemcert.errors import CalibrationFailure, ConfigError
from itemcert.governance import BiasPolicy
from itemcert.levels import Framework, TaxonomyLevel, level_names, levels_of
from itemcert.model import (
    AssessmentItem,
    BiasCategory,
    CertificationRecord,
    FlagSeverity,
    ProvenanceRecord,
    ReviewAction,
    ReviewRecord,
    Status,
)
from itemcert.taxonomy.engine import classify
from itemcert.taxonomy.lexicon import Lexicon, default_lexicon

BAND_HIGH = "high"
BAND_MEDIUM = "medium"
BAND_LOW = "low"

DEFECT_INCOMPLETE_RATIONALE = "incomplete_rationale"
DEFECT_MAJOR_FLAG_TERM = "major_flag_term"

# Topic and filler banks are chosen so their tokens never collide with
# lexicon verbs, stopword cues ("and"/"versus"/"why"/"how") or policy terms;
# a unit test enforces this against the bundled resources.
TOPICS = (
    "process scheduling",
    "virtual memory paging",
    "deadlock prevention",
    "context switching",
    "file descriptors",
    "hash collisions",
    "binary search trees",
    "linked lists",
    "heap insertion",
    "graph traversal",
    "transaction isolation",
    "index lookups",
    "query planning",
    "write ahead logging",
    "packet routing",
    "congestion control",
    "subnet masking",
    "socket timeouts",
    "loop termination",
    "recursion depth",
    "variable scoping",
    "exception handling",
)

FILLERS = (
    "key steps",
    "core outcome",
    "main tradeoff",
    "boundary conditions",
    "failure modes",
    "typical workload",
    "memory footprint",
    "common pitfalls",
)

OPTION_BANK = (
    "It reduces the total number of cache misses.",
    "It doubles the observed latency under load.",
    "It keeps the invariant intact across calls.",
    "It defers cleanup until the next cycle.",
    "It prevents starvation when queues saturate.",
    "It trades memory for faster lookups.",
    "It serializes writers during contention.",
    "It batches updates before the flush.",
)

_ZERO_VERB_STEM = (
    "Regarding {topic}, certain details remain unclear until the final lecture, "
    "so the best statement below is left open."
)


def _calibration() -> dict:
    raw = resources.files("itemcert.data").joinpath("calibration.json").read_text("utf-8")
    return json.loads(raw)


_CALIBRATION = _calibration()
VERB_COUNTS_BY_BAND = {
    band: tuple(counts) for band, counts in _CALIBRATION["verb_counts_by_band"].items()
}
BANDS = {band: tuple(bounds) for band, bounds in _CALIBRATION["bands"].items()}


def band_of(confidence: float) -> str:
    """Band membership: high is inclusive at 0.90, low exclusive below 0.60."""
    if confidence >= BANDS[BAND_HIGH][0]:
        return BAND_HIGH
    if confidence >= BANDS[BAND_MEDIUM][0]:
        return BAND_MEDIUM
    return BAND_LOW


@dataclass(frozen=True)
class SimulationProfile:
    name: str
    total: int
    high: int
    medium: int
    low: int
    planted_incomplete_rationales_in_high: int
    planted_major_flags_in_medium: int
    seed: int

    def __post_init__(self):
        if self.high + self.medium + self.low != self.total:
            raise ConfigError(
                f"profile {self.name!r}: band counts {self.high}+{self.medium}+{self.low} "
                f"do not sum to total {self.total}"
            )
        if self.planted_incomplete_rationales_in_high > self.high:
            raise ConfigError(
                f"profile {self.name!r}: planted incomplete rationales exceed the high band"
            )
        if self.planted_major_flags_in_medium > self.medium:
            raise ConfigError(f"profile {self.name!r}: planted major flags exceed the medium band")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "total": self.total,
            "confidence_band_counts": {"high": self.high, "medium": self.medium, "low": self.low},
            "planted_incomplete_rationales_in_high": self.planted_incomplete_rationales_in_high,
            "planted_major_flags_in_medium": self.planted_major_flags_in_medium,
            "seed": self.seed,
        }


POC_2025 = SimulationProfile(
    name="poc-2025",
    total=500,
    high=214,
    medium=203,
    low=83,
    planted_incomplete_rationales_in_high=16,
    planted_major_flags_in_medium=4,
    seed=42,
)

BUILTIN_PROFILES = {POC_2025.name: POC_2025}


def load_profile(name_or_path: str) -> SimulationProfile:
    """Resolve a builtin profile name or parse a profile file."""
    if name_or_path in BUILTIN_PROFILES:
        return BUILTIN_PROFILES[name_or_path]
    path = Path(name_or_path)
    if not path.exists():
        raise ConfigError(
            f"unknown profile {name_or_path!r}; builtins: {sorted(BUILTIN_PROFILES)}"
        )
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"profile {path} is not valid YAML: {exc}") from exc
    bands = data.get("confidence_band_counts", {})
    try:
        return SimulationProfile(
            name=str(data.get("name", path.stem)),
            total=int(data["total"]),
            high=int(bands["high"]),
            medium=int(bands["medium"]),
            low=int(bands["low"]),
            planted_incomplete_rationales_in_high=int(
                data.get("planted_incomplete_rationales_in_high", 0)
            ),
            planted_major_flags_in_medium=int(data.get("planted_major_flags_in_medium", 0)),
            seed=int(data.get("seed", 0)),
        )
    except KeyError as exc:
        raise ConfigError(f"profile {path} is missing field {exc}") from exc


@dataclass(frozen=True)
class SimulatedItem:
    """One generated item plus the planting record the manifest keeps."""

    item: AssessmentItem
    provenance: ProvenanceRecord
    band: str
    verb_count: int
    confidence: float
    defects: tuple = ()
    extra: dict = field(default_factory=dict)

    def manifest_entry(self) -> dict:
        return {
            "id": self.item.id,
            "band": self.band,
            "verb_count": self.verb_count,
            "confidence": self.confidence,
            "defects": list(self.defects),
            "framework": self.item.declared_level.framework.value,
            "declared_level": self.item.declared_level.name,
        }


def _verb_bearing_levels(framework: Framework, lexicon: Lexicon) -> tuple:
    return tuple(
        lvl for lvl in levels_of(framework) if lexicon.verbs_for(lvl)
    )


def _floor_level(framework: Framework) -> TaxonomyLevel:
    return TaxonomyLevel(framework, level_names(framework)[0])


def build_stem(verbs: Sequence[str], topic: str, rng: random.Random) -> str:
    if not verbs:
        return _ZERO_VERB_STEM.format(topic=topic)
    fillers = rng.sample(FILLERS, len(verbs))
    parts = [f"{verbs[0].capitalize()} the {fillers[0]} of {topic}"]
    for verb, filler in zip(verbs[1:], fillers[1:]):
        parts.append(f", then {verb} the {filler}")
    return "".join(parts) + "."


def build_complete_rationale(level: TaxonomyLevel, verb: str | None, topic: str) -> str:
    if verb is None:
        return (
            f"This item sits at the {level.name} level because no structured reasoning over "
            f"{topic} is required yet; distractor options stay close to stray lecture phrases "
            f"so guessing strategies surface clearly during moderation."
        )
    return (
        f"This item targets the {level.name} level because students must {verb} the material "
        f"on {topic} rather than lean on surface familiarity; distractor options mirror "
        f"frequent misconceptions collected from earlier cohorts."
    )


INCOMPLETE_RATIONALE = "Correct by construction."


def _pick_major_term(policy: BiasPolicy) -> str:
    for entry in policy.entries:
        if entry.severity is FlagSeverity.MAJOR and entry.category is BiasCategory.CULTURE_REGION:
            return entry.term
    for entry in policy.entries:
        if entry.severity is FlagSeverity.MAJOR:
            return entry.term
    raise CalibrationFailure("policy has no major-severity term to plant")


def build_stub_generation(request, rng: random.Random) -> dict:
    """Raw generation material for the stub adapter: a well-formed, high-band item."""
    lexicon = default_lexicon(request.target_level.framework)
    verbs_avail = lexicon.verbs_for(request.target_level)
    verbs = list(rng.sample(verbs_avail, min(4, len(verbs_avail)))) if verbs_avail else []
    topic = request.topic or rng.choice(TOPICS)
    stem = build_stem(verbs, topic, rng)
    options = list(rng.sample(OPTION_BANK, request.option_count))
    return {
        "stem": stem,
        "options": options,
        "correct_index": rng.randrange(request.option_count),
        "declared_framework": request.target_level.framework.value,
        "declared_level": request.target_level.name,
        "rationale": build_complete_rationale(
            request.target_level, verbs[0] if verbs else None, topic
        ),
    }


def simulate_corpus(
    profile: SimulationProfile,
    config: PipelineConfig | None = None,
    clock: Clock = system_clock,
    solo_share: float = 0.2,
) -> list:
    """Generate ``profile.total`` items whose verifier confidence lands in the
    requested bands, with defects planted per the profile.

    The verifier is never bypassed: after construction every stem is classified
    and a stem outside its band (or disagreeing with its declared level) is a
    CalibrationFailure reporting the achieved confidence.
    """
    config = config or PipelineConfig()
    policy = config.policy()
    rng = random.Random(profile.seed)

    bands = (
        [BAND_HIGH] * profile.high + [BAND_MEDIUM] * profile.medium + [BAND_LOW] * profile.low
    )
    rng.shuffle(bands)
    high_indexes = [i for i, band in enumerate(bands) if band == BAND_HIGH]
    medium_indexes = [i for i, band in enumerate(bands) if band == BAND_MEDIUM]
    incomplete_at = set(
        rng.sample(high_indexes, profile.planted_incomplete_rationales_in_high)
    )
    major_at = set(rng.sample(medium_indexes, profile.planted_major_flags_in_medium))
    major_term = _pick_major_term(policy) if major_at else ""

    lexicons = {fw: config.lexicon_for(fw) for fw in Framework}
    verb_bearing = {fw: _verb_bearing_levels(fw, lexicons[fw]) for fw in Framework}

    simulated: list[SimulatedItem] = []
    for i, band in enumerate(bands):
        framework = Framework.SOLO if rng.random() < solo_share else Framework.BLOOM
        lexicon = lexicons[framework]
        verb_count = rng.choice(VERB_COUNTS_BY_BAND[band])
        if verb_count == 0:
            declared = _floor_level(framework)
            verbs: list = []
        else:
            declared = rng.choice(verb_bearing[framework])
            verbs = list(rng.sample(lexicon.verbs_for(declared), verb_count))
        topic = rng.choice(TOPICS)
        stem = build_stem(verbs, topic, rng)

        defects = []
        if i in major_at:
            stem += f" Set during the {major_term} rush, the same workload appears again."
            defects.append(DEFECT_MAJOR_FLAG_TERM)
        if i in incomplete_at:
            rationale = INCOMPLETE_RATIONALE
            defects.append(DEFECT_INCOMPLETE_RATIONALE)
        else:
            rationale = build_complete_rationale(declared, verbs[0] if verbs else None, topic)

        options = tuple(rng.sample(OPTION_BANK, 4))
        item = AssessmentItem(
            id=f"q-{i + 1:04d}",
            stem=stem,
            options=options,
            correct_index=rng.randrange(4),
            declared_level=declared,
            rationale=rationale,
            topic=topic,
            course_context=profile.name,
        )

        prediction = classify(stem, lexicon, config.classifier)
        achieved = band_of(prediction.confidence)
        if achieved != band:
            low, high = BANDS[band]
            raise CalibrationFailure(
                f"item {item.id}: confidence {prediction.confidence:.6f} fell in band "
                f"{achieved!r}, wanted {band!r} [{low}, {high})",
                achieved=prediction.confidence,
            )
        if verbs and prediction.predicted_level != declared:
            raise CalibrationFailure(
                f"item {item.id}: predicted {prediction.predicted_level}, declared {declared}",
                achieved=prediction.confidence,
            )

        provenance = ProvenanceRecord(
            model_id="corpus-simulator",
            model_version="1.0",
            prompt_hash=sha256_hex(
                canonical_json(
                    {
                        "profile": profile.name,
                        "seed": profile.seed,
                        "index": i,
                        "band": band,
                        "topic": topic,
                    }
                )
            ),
            prompt_text=None,
            system_instructions_hash=sha256_hex("simulated corpus"),
            generated_at=clock(),
            generation_params={"seed": profile.seed, "band": band},
            course_context=profile.name,
        )
        simulated.append(
            SimulatedItem(
                item=item,
                provenance=provenance,
                band=band,
                verb_count=verb_count,
                confidence=prediction.confidence,
                defects=tuple(defects),
            )
        )
    return simulated


# ---------------------------------------------------------------------------
# Scripted review replay


DEFAULT_REVIEW_SCHEDULE = (
    (ReviewAction.APPROVE_UNCHANGED, 38),
    (ReviewAction.APPROVE_WITH_EDITS, 41),
    (ReviewAction.REJECT, 21),
)

_EDIT_SUFFIX = " Assume standard lab conditions throughout."

_REVIEW_NOTES = {
    ReviewAction.APPROVE_UNCHANGED: "Level claim and key check out against the blueprint.",
    ReviewAction.APPROVE_WITH_EDITS: "Stem needed one clarifying constraint; key unchanged.",
    ReviewAction.REJECT: "Distractors are too close to the key to stand.",
}


def review_script(
    records: Iterable[CertificationRecord],
    schedule=DEFAULT_REVIEW_SCHEDULE,
) -> list:
    """Deterministic (item_id, action) plan over the pending-review queue.

    Records are taken in item-id order; the schedule assigns actions in
    blocks, mirroring planted defect labels.
    """
    pending = sorted(
        (r for r in records if r.status is Status.PENDING_REVIEW), key=lambda r: r.item.id
    )
    total = sum(count for _, count in schedule)
    if len(pending) < total:
        raise CalibrationFailure(
            f"review script needs {total} pending records, only {len(pending)} available"
        )
    plan = []
    cursor = 0
    for action, count in schedule:
        for record in pending[cursor : cursor + count]:
            plan.append((record.item.id, action))
        cursor += count
    return plan


def run_scripted_review(
    records: Iterable[CertificationRecord],
    pipeline,
    schedule=DEFAULT_REVIEW_SCHEDULE,
    clock: Clock = system_clock,
    seed: int = 7,
) -> tuple[dict, dict]:
    """Apply the scripted review plan; returns (updated records by id, action counts)."""
    records_by_id = {r.item.id: r for r in records}
    rng = random.Random(seed)
    counts = {action.value: 0 for action, _ in DEFAULT_REVIEW_SCHEDULE}
    for position, (item_id, action) in enumerate(review_script(records_by_id.values(), schedule)):
        record = records_by_id[item_id]
        started = clock()
        decided = started + timedelta(seconds=rng.randint(25, 95))
        edits = None
        if action is ReviewAction.APPROVE_WITH_EDITS:
            edits = {"stem": record.item.stem + _EDIT_SUFFIX}
        review = ReviewRecord(
            reviewer_pseudonym=f"sme-{position % 7:02d}",
            action=action,
            started_at=started,
            decided_at=decided,
            notes=_REVIEW_NOTES[action],
            edits=edits,
        )
        updated = pipeline.apply_review(record, review, expected_version=record.version)
        records_by_id[item_id] = updated
        counts[action.value] += 1
    return records_by_id, counts
