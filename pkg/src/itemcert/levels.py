"""Cognitive-taxonomy frameworks and their level enumerations.

Two frameworks are supported: a six-level hierarchy of cognitive processes
(Remember through Create) and a five-level hierarchy of structural response
complexity (Prestructural through ExtendedAbstract). Rank is the 1-based
ordinal within a framework and increases with cognitive complexity.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from itemcert.errors import UnknownLevel


class Framework(str, Enum):
    BLOOM = "bloom"
    SOLO = "solo"


BLOOM_LEVEL_NAMES = ("Remember", "Understand", "Apply", "Analyze", "Evaluate", "Create")
SOLO_LEVEL_NAMES = (
    "Prestructural",
    "Unistructural",
    "Multistructural",
    "Relational",
    "ExtendedAbstract",
)

_LEVELS_BY_FRAMEWORK = {
    Framework.BLOOM: BLOOM_LEVEL_NAMES,
    Framework.SOLO: SOLO_LEVEL_NAMES,
}

# Level names are unique across frameworks, which lets free text mentioning a
# level be resolved without knowing the framework in advance.
_FRAMEWORK_BY_NAME = {
    name: framework
    for framework, names in _LEVELS_BY_FRAMEWORK.items()
    for name in names
}


def parse_framework(value: str) -> Framework:
    try:
        return Framework(value.strip().lower())
    except ValueError:
        raise UnknownLevel(f"unknown framework {value!r}") from None


def level_names(framework: Framework) -> tuple[str, ...]:
    return _LEVELS_BY_FRAMEWORK[framework]


def framework_of_level_name(name: str) -> Framework | None:
    return _FRAMEWORK_BY_NAME.get(name)


@dataclass(frozen=True)
class TaxonomyLevel:
    """One level of a taxonomy framework; rank is derived from the name."""

    framework: Framework
    name: str
    rank: int = 0  # filled in from the enumeration when left at 0

    def __post_init__(self):
        names = _LEVELS_BY_FRAMEWORK.get(self.framework)
        if names is None:
            raise UnknownLevel(f"unknown framework {self.framework!r}")
        if self.name not in names:
            raise UnknownLevel(
                f"{self.name!r} is not a {self.framework.value} level; "
                f"expected one of {', '.join(names)}"
            )
        expected = names.index(self.name) + 1
        if self.rank == 0:
            object.__setattr__(self, "rank", expected)
        elif self.rank != expected:
            raise UnknownLevel(
                f"rank {self.rank} does not match {self.framework.value}:{self.name} "
                f"(expected {expected})"
            )

    def __str__(self) -> str:
        return f"{self.framework.value}:{self.name}"

    def to_dict(self) -> dict:
        return {"framework": self.framework.value, "name": self.name, "rank": self.rank}

    @classmethod
    def from_dict(cls, data: dict) -> "TaxonomyLevel":
        return cls(
            framework=parse_framework(str(data["framework"])),
            name=str(data["name"]),
            rank=int(data.get("rank", 0)),
        )


def level(framework: Framework | str, name: str) -> TaxonomyLevel:
    """Convenience constructor accepting the framework as enum or string."""
    if isinstance(framework, str):
        framework = parse_framework(framework)
    return TaxonomyLevel(framework=framework, name=name)


def levels_of(framework: Framework) -> tuple[TaxonomyLevel, ...]:
    return tuple(TaxonomyLevel(framework, name) for name in level_names(framework))


def taxonomy_rank(lvl: TaxonomyLevel) -> int:
    """Fixed ordinal of a level within its framework (1-based)."""
    names = _LEVELS_BY_FRAMEWORK[lvl.framework]
    if lvl.name not in names:
        raise UnknownLevel(f"{lvl.name!r} is not a {lvl.framework.value} level")
    return names.index(lvl.name) + 1


def resolve_level_name(framework: Framework, name: str) -> TaxonomyLevel:
    """Parse a level name within a framework, case-insensitively."""
    for candidate in level_names(framework):
        if candidate.lower() == name.strip().lower():
            return TaxonomyLevel(framework, candidate)
    raise UnknownLevel(f"{name!r} is not a {framework.value} level")
