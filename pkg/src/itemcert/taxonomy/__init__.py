"""Independent taxonomy verifier: lexicons, level prediction, token attribution."""

from itemcert.taxonomy.engine import (  # noqa: F401
    ClassifierConfig,
    LevelPrediction,
    attribute,
    classify,
    consistency_verdict,
    tokenize,
)
from itemcert.taxonomy.lexicon import (  # noqa: F401
    Lexicon,
    LexiconEntry,
    default_bloom_lexicon,
    default_solo_lexicon,
    load_lexicon,
)
