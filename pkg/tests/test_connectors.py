from __future__ import annotations

import json

import httpx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itemcert.connectors import (
    GenerationRequest,
    HttpGeneratorAdapter,
    StubGeneratorAdapter,
    generate,
    ingest_items,
    item_to_line,
)
from itemcert.errors import AdapterTimeout, MalformedGeneration
from itemcert.ledger import EventType, Ledger
from itemcert.levels import level
from itemcert.taxonomy.engine import tokenize
from itemcert.taxonomy.lexicon import default_bloom_lexicon
from tests.conftest import make_item


def lines_for(*items):
    return [item_to_line(i) for i in items]


class TestIngest:
    def test_three_valid_lines(self):
        items, errors = ingest_items(
            lines_for(make_item("q-1"), make_item("q-2"), make_item("q-3"))
        )
        assert len(items) == 3
        assert errors == []

    def test_out_of_range_key_reported(self):
        line = json.dumps(
            {
                "id": "q-9",
                "stem": "Define the cache.",
                "options": ["a", "b", "c", "d"],
                "correct_index": 7,
                "declared_framework": "bloom",
                "declared_level": "Remember",
                "rationale": "",
                "topic": "caching",
            }
        )
        items, errors = ingest_items([line])
        assert items == []
        assert errors[0].code == "correct_index_out_of_range"
        assert errors[0].line_no == 1

    def test_duplicate_id_reported_on_later_line(self):
        items, errors = ingest_items(lines_for(make_item("q-12"), make_item("q-12")))
        assert len(items) == 1
        assert errors[0].code == "duplicate_id"
        assert errors[0].line_no == 2

    def test_garbage_never_raises(self):
        items, errors = ingest_items(
            ["not json", "", "   ", b"\xff\xfe binary", json.dumps({"id": "x"})]
        )
        assert items == []
        codes = [e.code for e in errors]
        assert "invalid_json" in codes
        assert "invalid_encoding" in codes
        assert any(code.startswith("missing_field:") for code in codes)

    @given(
        st.lists(
            st.one_of(st.binary(max_size=80), st.text(max_size=80)), max_size=12
        )
    )
    @settings(max_examples=80)
    def test_totality_on_arbitrary_input(self, lines):
        items, errors = ingest_items(lines)
        assert len(items) + len(errors) <= len(lines)
        for err in errors:
            assert 1 <= err.line_no <= len(lines)

    def test_unknown_level_reported(self):
        line = json.dumps(
            {
                "id": "q-9",
                "stem": "Define the cache.",
                "options": ["a", "b"],
                "correct_index": 0,
                "declared_framework": "bloom",
                "declared_level": "Transcend",
                "rationale": "",
                "topic": "caching",
            }
        )
        _, errors = ingest_items([line])
        assert errors[0].code == "unknown_level"

    def test_round_trip_through_line_format(self):
        item = make_item("q-7", rationale="Check the answer twice.")
        items, errors = ingest_items(lines_for(item))
        assert errors == []
        assert items[0] == item


class TestStubAdapter:
    def test_deterministic_for_fixed_seed(self, clock):
        request = GenerationRequest(topic="networking", target_level=level("bloom", "Remember"))
        adapter = StubGeneratorAdapter(seed=5)
        item1, prov1 = generate(request, adapter, clock=clock)
        item2, prov2 = generate(request, adapter, clock=clock)
        assert item1 == item2
        assert prov1.prompt_hash == prov2.prompt_hash

    def test_begins_with_declared_level_verb(self, clock):
        request = GenerationRequest(topic="networking", target_level=level("bloom", "Remember"))
        item, provenance = generate(request, StubGeneratorAdapter(seed=5), clock=clock)
        first_token = tokenize(item.stem)[0]
        lexicon = default_bloom_lexicon()
        assert lexicon.entries[first_token].level == level("bloom", "Remember")
        assert item.declared_level == level("bloom", "Remember")
        assert item.rationale.strip()
        assert provenance.model_id == "stub-generator"

    def test_option_count_respected(self, clock):
        request = GenerationRequest(
            topic="caching", target_level=level("solo", "Relational"), option_count=5
        )
        item, _ = generate(request, StubGeneratorAdapter(seed=1), clock=clock)
        assert len(item.options) == 5

    def test_option_count_floor(self):
        with pytest.raises(ValueError):
            GenerationRequest(topic="x", target_level=level("bloom", "Apply"), option_count=1)


class _BrokenAdapter:
    model_id = "broken"
    model_version = "0"
    system_instructions = ""
    generation_params: dict = {}

    def generate_raw(self, request):
        return {"stem": "No options here.", "rationale": "none"}


class TestGenerationContract:
    def test_missing_fields_is_malformed(self, clock):
        request = GenerationRequest(topic="x", target_level=level("bloom", "Apply"))
        with pytest.raises(MalformedGeneration):
            generate(request, _BrokenAdapter(), clock=clock)

    def test_malformed_generation_quarantined_in_ledger(self, clock):
        ledger = Ledger(clock=clock)
        request = GenerationRequest(topic="x", target_level=level("bloom", "Apply"))
        with pytest.raises(MalformedGeneration):
            generate(request, _BrokenAdapter(), clock=clock, ledger=ledger)
        entries = ledger.entries()
        assert len(entries) == 1
        assert entries[0].event_type is EventType.ITEM_INGESTED
        assert entries[0].payload["disposition"] == "quarantined"


def _chat_response(content: str):
    return {"choices": [{"message": {"content": content}}]}


def _http_adapter(handler) -> HttpGeneratorAdapter:
    return HttpGeneratorAdapter(
        base_url="https://generator.test/v1/chat/completions",
        model="test-model",
        api_key="k",
        timeout_seconds=1.0,
        transport=httpx.MockTransport(handler),
    )


class TestHttpAdapter:
    def test_parses_single_json_block(self, clock):
        body = {
            "stem": "Apply the rule to the cache.",
            "options": ["a", "b", "c", "d"],
            "correct_index": 1,
            "declared_framework": "bloom",
            "declared_level": "Apply",
            "rationale": "Targets Apply; students apply the rule; answer B fits. " + "pad " * 16,
        }

        def handler(request):
            return httpx.Response(200, json=_chat_response("```json\n" + json.dumps(body) + "\n```"))

        request = GenerationRequest(topic="caching", target_level=level("bloom", "Apply"))
        item, provenance = generate(request, _http_adapter(handler), clock=clock)
        assert item.stem == body["stem"]
        assert item.id.startswith("gen-")
        assert provenance.model_id == "test-model"

    def test_free_text_is_malformed(self, clock):
        def handler(request):
            return httpx.Response(200, json=_chat_response("Sure! Here is a question: ..."))

        request = GenerationRequest(topic="caching", target_level=level("bloom", "Apply"))
        with pytest.raises(MalformedGeneration):
            generate(request, _http_adapter(handler), clock=clock)

    def test_missing_options_is_malformed(self, clock):
        def handler(request):
            return httpx.Response(
                200, json=_chat_response(json.dumps({"stem": "x", "rationale": "y"}))
            )

        request = GenerationRequest(topic="caching", target_level=level("bloom", "Apply"))
        with pytest.raises(MalformedGeneration):
            generate(request, _http_adapter(handler), clock=clock)

    def test_timeout_maps_to_adapter_timeout(self, clock):
        def handler(request):
            raise httpx.ConnectTimeout("slow")

        request = GenerationRequest(topic="caching", target_level=level("bloom", "Apply"))
        with pytest.raises(AdapterTimeout):
            generate(request, _http_adapter(handler), clock=clock)

    def test_http_error_is_malformed(self, clock):
        def handler(request):
            return httpx.Response(500, text="boom")

        request = GenerationRequest(topic="caching", target_level=level("bloom", "Apply"))
        with pytest.raises(MalformedGeneration):
            generate(request, _http_adapter(handler), clock=clock)

    def test_requires_configuration(self, monkeypatch):
        monkeypatch.delenv("GENERATOR_BASE_URL", raising=False)
        monkeypatch.delenv("GENERATOR_MODEL", raising=False)
        with pytest.raises(ValueError):
            HttpGeneratorAdapter()
