"""Level prediction and leave-one-out token attribution.

The classifier is deliberately transparent: raw level scores are sums of
lexicon verb weights plus a small set of fixed structural-feature bonuses,
normalized by a temperature softmax. Attribution perturbs the input by
deleting one token occurrence at a time and re-scoring with the same
classifier, so every weight is an exact probability delta rather than an
approximation.

Both classify and attribute are pure functions of (stem, lexicon, config):
repeated calls are bit-identical.
"""

from __future__ import annotations

import math
import re
from array import array
from dataclasses import dataclass, field

from itemcert.errors import EmptyInput, EmptyLexicon
from itemcert.levels import Framework, TaxonomyLevel, level_names
from itemcert.model import AttributionMap, Verdict
from itemcert.taxonomy._backend import kernel
from itemcert.taxonomy.lexicon import Lexicon

_NON_WORD_RE = re.compile(r"[\W_]+", re.UNICODE)

INTERROGATIVE_TOKENS = frozenset({"why", "how"})
JOINER_TOKENS = frozenset({"and", "versus"})

# Structural bonuses target fixed levels: interrogatives cue explanation and
# analysis (second and fourth levels of the cognitive-process framework);
# a joined noun pair cues analysis / relational thinking in either framework.
_INTERROGATIVE_TARGETS = {Framework.BLOOM: (1, 3), Framework.SOLO: (-1, -1)}
_PAIR_TARGETS = {Framework.BLOOM: 3, Framework.SOLO: 3}


@dataclass(frozen=True)
class ClassifierConfig:
    temperature: float = 1.0
    leading_verb_boost: float = 1.5
    interrogative_bonus: float = 0.5
    noun_pair_bonus: float = 0.5
    consistent_threshold: float = 0.25
    # Reserved extension slot: name of a future semantic-similarity signal.
    # Unused by the current feature set.
    similarity_signal: str | None = None

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if not 0 <= self.consistent_threshold <= 1:
            raise ValueError("consistent_threshold must lie in [0, 1]")


@dataclass(frozen=True)
class LevelPrediction:
    """Raw scores, normalized probabilities and the argmax level."""

    level_scores: dict  # level name -> raw score
    probabilities: dict  # level name -> probability, sums to 1
    predicted_level: TaxonomyLevel
    confidence: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "level_scores": dict(self.level_scores),
            "probabilities": dict(self.probabilities),
            "predicted_level": self.predicted_level.to_dict(),
            "confidence": self.confidence,
        }
        out.update(self.extra)
        return out


def tokenize(text: str) -> list:
    """Lowercased, punctuation-stripped, whitespace-split tokens."""
    tokens = []
    for chunk in text.lower().split():
        token = _NON_WORD_RE.sub("", chunk)
        if token:
            tokens.append(token)
    return tokens


@dataclass(frozen=True)
class _Features:
    """Per-token arrays consumed by the scoring kernel."""

    tokens: tuple
    lex_level: array
    lex_weight: array
    is_stop: array
    is_joiner: array
    is_interrog: array
    n_levels: int
    interrog_a: int
    interrog_b: int
    pair_target: int


def _prepare(tokens, lexicon: Lexicon) -> _Features:
    names = level_names(lexicon.framework)
    index_of = {name: i for i, name in enumerate(names)}
    n = len(tokens)
    lex_level = array("i", [0] * n)
    lex_weight = array("d", [0.0] * n)
    is_stop = array("B", [0] * n)
    is_joiner = array("B", [0] * n)
    is_interrog = array("B", [0] * n)
    for i, token in enumerate(tokens):
        entry = lexicon.lookup(token)
        if entry is not None:
            lex_level[i] = index_of[entry.level.name]
            lex_weight[i] = entry.weight
        else:
            lex_level[i] = -1
        is_stop[i] = 1 if lexicon.is_stopword(token) else 0
        is_joiner[i] = 1 if token in JOINER_TOKENS else 0
        is_interrog[i] = 1 if token in INTERROGATIVE_TOKENS else 0
    interrog_a, interrog_b = _INTERROGATIVE_TARGETS[lexicon.framework]
    return _Features(
        tokens=tuple(tokens),
        lex_level=lex_level,
        lex_weight=lex_weight,
        is_stop=is_stop,
        is_joiner=is_joiner,
        is_interrog=is_interrog,
        n_levels=len(names),
        interrog_a=interrog_a,
        interrog_b=interrog_b,
        pair_target=_PAIR_TARGETS[lexicon.framework],
    )


def _kernel_args(features: _Features, config: ClassifierConfig) -> tuple:
    return (
        features.lex_level,
        features.lex_weight,
        features.is_stop,
        features.is_joiner,
        features.is_interrog,
        features.n_levels,
        config.leading_verb_boost,
        config.interrogative_bonus,
        features.interrog_a,
        features.interrog_b,
        config.noun_pair_bonus,
        features.pair_target,
    )


def softmax(raw, temperature: float) -> list:
    """Temperature softmax; all-zero scores yield the uniform distribution."""
    m = max(raw)
    exps = [math.exp((s - m) / temperature) for s in raw]
    z = sum(exps)
    return [e / z for e in exps]


def _argmax_lowest_rank(probabilities) -> int:
    """Argmax index; exact ties go to the lower index (less complex level)."""
    best = 0
    for i in range(1, len(probabilities)):
        if probabilities[i] > probabilities[best]:
            best = i
    return best


def classify(stem: str, lexicon: Lexicon, config: ClassifierConfig | None = None) -> LevelPrediction:
    config = config or ClassifierConfig()
    if not stem.strip():
        raise EmptyInput("stem is empty after trimming")
    if not lexicon.entries:
        raise EmptyLexicon(f"{lexicon.framework.value} lexicon has no entries")
    tokens = tokenize(stem)
    features = _prepare(tokens, lexicon)
    raw = kernel.score_sequence(*_kernel_args(features, config))
    probabilities = softmax(raw, config.temperature)
    names = level_names(lexicon.framework)
    best = _argmax_lowest_rank(probabilities)
    return LevelPrediction(
        level_scores={name: raw[i] for i, name in enumerate(names)},
        probabilities={name: probabilities[i] for i, name in enumerate(names)},
        predicted_level=TaxonomyLevel(lexicon.framework, names[best]),
        confidence=probabilities[best],
    )


def attribute(
    stem: str,
    prediction: LevelPrediction,
    lexicon: Lexicon,
    config: ClassifierConfig | None = None,
) -> AttributionMap:
    """Leave-one-out attribution for the predicted level.

    weight(t) = P(predicted | stem) - P(predicted | stem with t removed),
    where the reduced sequence is re-scored by the same classifier. Each
    occurrence of a repeated token gets its own weight.
    """
    config = config or ClassifierConfig()
    if not stem.strip():
        raise EmptyInput("stem is empty after trimming")
    if not lexicon.entries:
        raise EmptyLexicon(f"{lexicon.framework.value} lexicon has no entries")
    tokens = tokenize(stem)
    features = _prepare(tokens, lexicon)
    names = level_names(lexicon.framework)
    target = names.index(prediction.predicted_level.name)
    p_full = prediction.probabilities[prediction.predicted_level.name]
    loo = kernel.leave_one_out(*_kernel_args(features, config))
    weights = []
    for k in range(len(tokens)):
        p_without = softmax(loo[k], config.temperature)[target]
        weights.append((tokens[k], p_full - p_without))
    ratio = _lexicon_mass_ratio(weights, lexicon, prediction.predicted_level)
    partial = AttributionMap(
        tokens=tuple(weights),
        predicted_level=prediction.predicted_level,
        lexicon_mass_ratio=ratio,
        verdict=Verdict.IRRELEVANT,
    )
    verdict = consistency_verdict(partial, lexicon, config)
    return AttributionMap(
        tokens=tuple(weights),
        predicted_level=prediction.predicted_level,
        lexicon_mass_ratio=ratio,
        verdict=verdict,
    )


def _lexicon_mass_ratio(weights, lexicon: Lexicon, predicted: TaxonomyLevel) -> float:
    """Share of positive attribution mass on tokens in the predicted level's lexicon."""
    positive_total = 0.0
    predicted_mass = 0.0
    for token, weight in weights:
        if weight <= 0:
            continue
        positive_total += weight
        entry = lexicon.lookup(token)
        if entry is not None and entry.level == predicted:
            predicted_mass += weight
    if positive_total == 0.0:
        return 0.0
    return predicted_mass / positive_total


def consistency_verdict(
    attribution: AttributionMap, lexicon: Lexicon, config: ClassifierConfig | None = None
) -> Verdict:
    """Rule table mapping an attribution map to a consistency verdict.

    Zero lexicon-mass ratio means the prediction has no positive support from
    the predicted level's own vocabulary: Irrelevant. Otherwise the verdict is
    Consistent when the ratio clears the threshold and the strongest token is
    a content word, Suspicious when the support is thin or the strongest cue
    is a stopword.
    """
    config = config or ClassifierConfig()
    if attribution.lexicon_mass_ratio <= 0.0:
        return Verdict.IRRELEVANT
    top = attribution.top_token()
    top_is_stopword = top is not None and lexicon.is_stopword(top[0])
    if attribution.lexicon_mass_ratio >= config.consistent_threshold and not top_is_stopword:
        return Verdict.CONSISTENT
    return Verdict.SUSPICIOUS
