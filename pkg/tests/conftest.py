from __future__ import annotations

import pytest

from itemcert.clock import fixed_clock
from itemcert.governance import default_policy
from itemcert.levels import level
from itemcert.model import AssessmentItem
from itemcert.taxonomy.lexicon import default_bloom_lexicon, default_solo_lexicon


@pytest.fixture(scope="session")
def bloom_lexicon():
    return default_bloom_lexicon()


@pytest.fixture(scope="session")
def solo_lexicon():
    return default_solo_lexicon()


@pytest.fixture(scope="session")
def policy():
    return default_policy()


@pytest.fixture
def clock():
    return fixed_clock()


def make_item(
    item_id: str = "q-0001",
    stem: str = "Compare the key steps of process scheduling, then examine the failure modes.",
    options=("It reduces cache misses.", "It doubles latency.", "It keeps the invariant.", "It defers cleanup."),
    correct_index: int = 0,
    framework: str = "bloom",
    level_name: str = "Analyze",
    rationale: str = "",
    topic: str = "process scheduling",
) -> AssessmentItem:
    return AssessmentItem(
        id=item_id,
        stem=stem,
        options=tuple(options),
        correct_index=correct_index,
        declared_level=level(framework, level_name),
        rationale=rationale,
        topic=topic,
        course_context="cs-101",
    )


@pytest.fixture
def item() -> AssessmentItem:
    return make_item()
