"""Item ingestion and generator adapters.

Ingestion reads newline-delimited JSON records and never aborts the batch: a
malformed line becomes a line error, a well-formed line becomes a validated
item. The generator boundary keeps the generating model and the verifying
classifier strictly separate: an adapter only returns raw material, which is
parsed with a strict grammar; anything else is a malformed generation and is
quarantined with an audit event rather than silently dropped.

Environment variables for the HTTP adapter: GENERATOR_BASE_URL,
GENERATOR_MODEL, GENERATOR_API_KEY, GENERATOR_TIMEOUT_SECONDS.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from typing import Iterable, Protocol

import httpx

from itemcert.canonical import canonical_json, sha256_hex
from itemcert.clock import Clock, system_clock
from itemcert.errors import AdapterTimeout, MalformedGeneration, UnknownLevel
from itemcert.ledger import EventType, Ledger
from itemcert.levels import TaxonomyLevel, parse_framework, resolve_level_name
from itemcert.model import AssessmentItem, ProvenanceRecord, validate_item

_REQUIRED_LINE_FIELDS = (
    "id",
    "stem",
    "options",
    "correct_index",
    "declared_framework",
    "declared_level",
    "rationale",
    "topic",
)


@dataclass(frozen=True)
class LineError:
    line_no: int
    code: str
    message: str


@dataclass(frozen=True)
class GenerationRequest:
    topic: str
    target_level: TaxonomyLevel
    option_count: int = 4
    course_context: str = ""

    def __post_init__(self):
        if self.option_count < 2:
            raise ValueError(f"option_count must be at least 2, got {self.option_count}")

    def prompt(self) -> str:
        """Canonical prompt text sent to generators; also the hash subject."""
        return canonical_json(
            {
                "task": "generate_mcq",
                "topic": self.topic,
                "framework": self.target_level.framework.value,
                "target_level": self.target_level.name,
                "option_count": self.option_count,
                "course_context": self.course_context,
            }
        )


def _parse_line(line_no: int, raw: str):
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        return None, LineError(line_no, "invalid_json", str(exc))
    if not isinstance(data, dict):
        return None, LineError(line_no, "invalid_json", "line is not a JSON object")
    for name in _REQUIRED_LINE_FIELDS:
        if name not in data:
            return None, LineError(line_no, f"missing_field:{name}", f"field {name!r} is required")
    try:
        declared = resolve_level_name(
            parse_framework(str(data["declared_framework"])), str(data["declared_level"])
        )
    except UnknownLevel as exc:
        return None, LineError(line_no, "unknown_level", str(exc))
    try:
        item = AssessmentItem(
            id=str(data["id"]),
            stem=str(data["stem"]),
            options=tuple(str(o) for o in data["options"]),
            correct_index=int(data["correct_index"]),
            declared_level=declared,
            rationale=str(data.get("rationale", "")),
            topic=str(data.get("topic", "")),
            course_context=str(data.get("course_context", "")),
            language_code=str(data.get("language_code", "en")),
        )
    except (TypeError, ValueError) as exc:
        return None, LineError(line_no, "invalid_field", str(exc))
    result = validate_item(item)
    if not result.ok:
        first = result.violations[0]
        return None, LineError(line_no, first.code, first.message)
    return item, None


def ingest_items(lines: Iterable) -> tuple[list, list]:
    """Parse a stream of item lines into (items, line_errors).

    Never raises on malformed content; blank lines are skipped; a duplicate id
    is reported on the later line.
    """
    items: list[AssessmentItem] = []
    errors: list[LineError] = []
    seen_ids: set[str] = set()
    for line_no, raw in enumerate(lines, 1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                errors.append(LineError(line_no, "invalid_encoding", str(exc)))
                continue
        line = raw.strip()
        if not line:
            continue
        item, error = _parse_line(line_no, line)
        if error is not None:
            errors.append(error)
            continue
        if item.id in seen_ids:
            errors.append(
                LineError(line_no, "duplicate_id", f"id {item.id!r} already seen in this batch")
            )
            continue
        seen_ids.add(item.id)
        items.append(item)
    return items, errors


def item_to_line(item: AssessmentItem) -> str:
    """Inverse of ingestion: one canonical JSON line per item."""
    return canonical_json(
        {
            "id": item.id,
            "stem": item.stem,
            "options": list(item.options),
            "correct_index": item.correct_index,
            "declared_framework": item.declared_level.framework.value,
            "declared_level": item.declared_level.name,
            "rationale": item.rationale,
            "topic": item.topic,
            "course_context": item.course_context,
            "language_code": item.language_code,
        }
    )


class GeneratorAdapter(Protocol):
    """A source of raw generated material, distinct from the verifier."""

    model_id: str
    model_version: str
    system_instructions: str

    def generate_raw(self, request: GenerationRequest) -> dict: ...


_GENERATION_FIELDS = ("stem", "options", "correct_index", "declared_framework",
                      "declared_level", "rationale")


def parse_generation(raw: dict, request: GenerationRequest) -> AssessmentItem:
    """Strict grammar over a generator response; anything else is malformed."""
    if not isinstance(raw, dict):
        raise MalformedGeneration(f"generation must be an object, got {type(raw).__name__}")
    missing = [f for f in _GENERATION_FIELDS if f not in raw]
    if missing:
        raise MalformedGeneration(f"generation is missing fields {missing}")
    try:
        declared = resolve_level_name(
            parse_framework(str(raw["declared_framework"])), str(raw["declared_level"])
        )
        options = tuple(str(o) for o in raw["options"])
        item = AssessmentItem(
            id=str(raw.get("id", "")),
            stem=str(raw["stem"]),
            options=options,
            correct_index=int(raw["correct_index"]),
            declared_level=declared,
            rationale=str(raw["rationale"]),
            topic=request.topic,
            course_context=request.course_context,
        )
    except (UnknownLevel, TypeError, ValueError) as exc:
        raise MalformedGeneration(f"generation fields are invalid: {exc}") from exc
    if not item.rationale.strip():
        raise MalformedGeneration("generation has an empty rationale")
    if declared != request.target_level:
        raise MalformedGeneration(
            f"generation declares {declared}, request targeted {request.target_level}"
        )
    if len(options) != request.option_count:
        raise MalformedGeneration(
            f"generation has {len(options)} options, request asked for {request.option_count}"
        )
    return item


def generate(
    request: GenerationRequest,
    adapter: GeneratorAdapter,
    *,
    clock: Clock = system_clock,
    ledger: Ledger | None = None,
) -> tuple[AssessmentItem, ProvenanceRecord]:
    """Run one generation through an adapter and assemble its provenance.

    Malformed responses are quarantined: an audit event records the failure
    before the error propagates.
    """
    prompt = request.prompt()
    prompt_hash = sha256_hex(prompt)
    try:
        raw = adapter.generate_raw(request)
        item = parse_generation(raw, request)
    except MalformedGeneration as exc:
        if ledger is not None:
            ledger.append(
                EventType.ITEM_INGESTED,
                {
                    "disposition": "quarantined",
                    "reason": str(exc),
                    "model_id": adapter.model_id,
                    "prompt_hash": prompt_hash,
                },
            )
        raise
    if not item.id:
        # Deterministic id derived from prompt and model identity.
        item_id = "gen-" + sha256_hex(prompt + adapter.model_id + adapter.model_version)[:12]
        item = AssessmentItem(
            id=item_id,
            stem=item.stem,
            options=item.options,
            correct_index=item.correct_index,
            declared_level=item.declared_level,
            rationale=item.rationale,
            topic=item.topic,
            course_context=item.course_context,
            language_code=item.language_code,
        )
    provenance = ProvenanceRecord(
        model_id=adapter.model_id,
        model_version=adapter.model_version,
        prompt_hash=prompt_hash,
        prompt_text=prompt,
        system_instructions_hash=sha256_hex(adapter.system_instructions),
        generated_at=clock(),
        generation_params=getattr(adapter, "generation_params", {}),
        course_context=request.course_context,
    )
    return item, provenance


class StubGeneratorAdapter:
    """Deterministic template generator for tests and offline runs.

    Items are fixtures keyed by (level, topic, seed): the same request against
    the same seed yields byte-identical material.
    """

    model_id = "stub-generator"
    model_version = "1.0"
    system_instructions = "Produce one multiple-choice item with a self-rationalization."

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.generation_params = {"seed": seed, "temperature": 0.0}

    def generate_raw(self, request: GenerationRequest) -> dict:
        from itemcert.simulator import build_stub_generation

        rng = random.Random((self.seed, request.target_level.name, request.topic).__repr__())
        return build_stub_generation(request, rng)


class HttpGeneratorAdapter:
    """Chat-completion-style HTTP JSON adapter.

    The response's message content must be a single JSON object (optionally
    inside one fenced code block) holding the generated item; free text is
    rejected as malformed.
    """

    def __init__(
        self,
        base_url: str | None = None,
        model: str | None = None,
        api_key: str | None = None,
        timeout_seconds: float | None = None,
        transport: httpx.BaseTransport | None = None,
    ):
        self.base_url = base_url or os.environ.get("GENERATOR_BASE_URL", "")
        self.model_id = model or os.environ.get("GENERATOR_MODEL", "")
        self.api_key = api_key or os.environ.get("GENERATOR_API_KEY", "")
        self.timeout_seconds = (
            timeout_seconds
            if timeout_seconds is not None
            else float(os.environ.get("GENERATOR_TIMEOUT_SECONDS", "30"))
        )
        self.model_version = "remote"
        self.system_instructions = (
            "Return exactly one JSON object with fields stem, options, correct_index, "
            "declared_framework, declared_level, rationale."
        )
        self.generation_params: dict = {}
        self._transport = transport
        if not self.base_url:
            raise ValueError("GENERATOR_BASE_URL is not configured")
        if not self.model_id:
            raise ValueError("GENERATOR_MODEL is not configured")

    def _extract_content_object(self, content: str) -> dict:
        text = content.strip()
        if text.startswith("```"):
            parts = text.split("```")
            blocks = [p for p in parts[1:-1] if p.strip()]
            if len(blocks) != 1:
                raise MalformedGeneration("response must contain a single fenced block")
            text = blocks[0]
            if text.startswith("json"):
                text = text[4:]
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedGeneration(f"response content is not JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise MalformedGeneration("response content is not a JSON object")
        return data

    def generate_raw(self, request: GenerationRequest) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": self.model_id,
            "messages": [
                {"role": "system", "content": self.system_instructions},
                {"role": "user", "content": request.prompt()},
            ],
        }
        try:
            with httpx.Client(
                timeout=self.timeout_seconds, transport=self._transport
            ) as client:
                response = client.post(self.base_url, json=body, headers=headers)
        except httpx.TimeoutException as exc:
            raise AdapterTimeout(
                f"generator did not answer within {self.timeout_seconds}s"
            ) from exc
        if response.status_code != 200:
            raise MalformedGeneration(f"generator returned HTTP {response.status_code}")
        try:
            payload = response.json()
            content = payload["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedGeneration(f"response envelope is malformed: {exc}") from exc
        return self._extract_content_object(str(content))
