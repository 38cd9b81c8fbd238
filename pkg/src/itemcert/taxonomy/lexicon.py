"""Verb lexicons anchoring level predictions to explicit pedagogical vocabulary.

File format: UTF-8 tabular text, one entry per line::

    token <TAB> framework <TAB> level <TAB> weight

Lines starting with ``#`` are comments; a ``#: key=value`` line carries
metadata (currently only ``version``). Lines whose level column is the
reserved word ``stopword`` add the token to the stopword set instead of the
entry map.

Weights are normalized to a unit maximum at construction, so a lexicon file
scaled by any positive constant behaves identically: predictions, argmax and
probabilities are all invariant under uniform weight scaling.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from itemcert.errors import DuplicateToken, ParseError, UnknownLevel
from itemcert.levels import Framework, TaxonomyLevel, parse_framework, resolve_level_name

_STOPWORD_LEVEL = "stopword"


@dataclass(frozen=True)
class LexiconEntry:
    level: TaxonomyLevel
    weight: float


@dataclass(frozen=True)
class Lexicon:
    framework: Framework
    entries: dict  # token -> LexiconEntry
    stopwords: frozenset
    version: str = "unversioned"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        normalized: dict[str, LexiconEntry] = {}
        max_weight = 0.0
        for token, entry in self.entries.items():
            if token != token.lower() or any(c.isspace() for c in token) or not token:
                raise ParseError(f"lexicon token {token!r} must be lowercase and whitespace-free")
            if entry.level.framework is not self.framework:
                raise UnknownLevel(
                    f"entry {token!r} has level {entry.level} outside framework "
                    f"{self.framework.value}"
                )
            if not entry.weight > 0:
                raise ParseError(f"lexicon token {token!r} has non-positive weight {entry.weight}")
            max_weight = max(max_weight, entry.weight)
            normalized[token] = entry
        if max_weight not in (0.0, 1.0):
            normalized = {
                token: LexiconEntry(entry.level, entry.weight / max_weight)
                for token, entry in normalized.items()
            }
        object.__setattr__(self, "entries", normalized)

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, token: str) -> LexiconEntry | None:
        return self.entries.get(token)

    def is_stopword(self, token: str) -> bool:
        return token in self.stopwords

    def verbs_for(self, level: TaxonomyLevel) -> tuple[str, ...]:
        return tuple(
            sorted(t for t, e in self.entries.items() if e.level == level)
        )


def _iter_lines(source) -> Iterable[str]:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
        return text.splitlines()
    if isinstance(source, io.TextIOBase):
        return source.read().splitlines()
    return list(source)


def _parse_tabular(source, n_columns: int, what: str):
    """Shared tabular parser: yields (line_no, columns) plus collected metadata."""
    meta: dict[str, str] = {}
    rows: list[tuple[int, list[str]]] = []
    for line_no, raw in enumerate(_iter_lines(source), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#:"):
            body = line[2:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                meta[key.strip()] = value.strip()
            continue
        if line.startswith("#"):
            continue
        columns = [c.strip() for c in line.split("\t")]
        if len(columns) != n_columns:
            raise ParseError(
                f"{what} line needs {n_columns} tab-separated columns, got {len(columns)}",
                line_no,
            )
        rows.append((line_no, columns))
    return meta, rows


def load_lexicon(source) -> Lexicon:
    """Parse a lexicon document from a path, open text file, or iterable of lines."""
    meta, rows = _parse_tabular(source, 4, "lexicon")
    framework: Framework | None = None
    entries: dict[str, LexiconEntry] = {}
    stopwords: set[str] = set()
    for line_no, (token, framework_text, level_name, weight_text) in rows:
        token = token.lower()
        if any(c.isspace() for c in token):
            raise ParseError(f"token {token!r} contains whitespace", line_no)
        try:
            line_framework = parse_framework(framework_text)
        except UnknownLevel as exc:
            raise ParseError(str(exc), line_no) from exc
        if framework is None:
            framework = line_framework
        elif line_framework is not framework:
            raise ParseError(
                f"framework {line_framework.value} conflicts with {framework.value}", line_no
            )
        if token in entries or token in stopwords:
            raise DuplicateToken(f"duplicate token {token!r}", line_no)
        if level_name.lower() == _STOPWORD_LEVEL:
            stopwords.add(token)
            continue
        try:
            level = resolve_level_name(line_framework, level_name)
        except UnknownLevel as exc:
            raise ParseError(str(exc), line_no) from exc
        try:
            weight = float(weight_text)
        except ValueError:
            raise ParseError(f"weight {weight_text!r} is not a number", line_no) from None
        if not weight > 0:
            raise ParseError(f"weight must be positive, got {weight}", line_no)
        entries[token] = LexiconEntry(level, weight)
    if framework is None:
        raise ParseError("lexicon document has no entries")
    return Lexicon(
        framework=framework,
        entries=entries,
        stopwords=frozenset(stopwords),
        version=meta.get("version", "unversioned"),
    )


def _load_bundled(name: str) -> Lexicon:
    data = resources.files("itemcert.data").joinpath(name).read_text(encoding="utf-8")
    return load_lexicon(data.splitlines())


_BUNDLED_CACHE: dict[str, Lexicon] = {}


def default_bloom_lexicon() -> Lexicon:
    if "bloom" not in _BUNDLED_CACHE:
        _BUNDLED_CACHE["bloom"] = _load_bundled("bloom_lexicon.tsv")
    return _BUNDLED_CACHE["bloom"]


def default_solo_lexicon() -> Lexicon:
    if "solo" not in _BUNDLED_CACHE:
        _BUNDLED_CACHE["solo"] = _load_bundled("solo_lexicon.tsv")
    return _BUNDLED_CACHE["solo"]


def default_lexicon(framework: Framework) -> Lexicon:
    return default_bloom_lexicon() if framework is Framework.BLOOM else default_solo_lexicon()
