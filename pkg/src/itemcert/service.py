"""HTTP review service.

Exposes the pending-review queue, full metadata packages for the review UI,
decision submission with optimistic concurrency, and aggregate reports.
Authentication is one static bearer token (REVIEW_API_TOKEN); reviewer
identity is carried separately as a pseudonym inside each decision, so logs
never hold personal names. The UI computes nothing: every label, score and
verdict it shows comes from these payloads.

Error bodies are always ``{"code": ..., "message": ...}``.
"""

from __future__ import annotations

import math
import os

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from itemcert import certifier
from itemcert.clock import Clock, from_rfc3339, system_clock, to_rfc3339
from itemcert.errors import (
    NotReviewable,
    RecordNotFound,
    ReVerificationFailed,
    VersionConflict,
)
from itemcert.ledger import Ledger
from itemcert.model import CertificationRecord, ReviewAction, ReviewRecord, Status
from itemcert.pipeline import CertificationPipeline
from itemcert.reports import ReportPeriod, render_structured, summary_report
from itemcert.store import RecordStore


class DecisionBody(BaseModel):
    action: str
    reviewer_pseudonym: str
    expected_version: int
    notes: str = ""
    edits: dict | None = None
    started_at: str | None = None


def _error(status_code: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status_code, content={"code": code, "message": message})


def record_summary(record: CertificationRecord) -> dict:
    return {
        "id": record.item.id,
        "topic": record.item.topic,
        "label": record.label.value,
        "status": record.status.value,
        "confidence": record.alignment.confidence,
        "flag_count": len(record.governance.flags),
        "created_at": to_rfc3339(record.provenance.generated_at),
        "version": record.version,
    }


def create_app(
    store: RecordStore,
    ledger: Ledger,
    pipeline: CertificationPipeline,
    api_token: str | None = None,
    clock: Clock = system_clock,
) -> FastAPI:
    token = api_token if api_token is not None else os.environ.get("REVIEW_API_TOKEN", "")
    if not token:
        raise ValueError("REVIEW_API_TOKEN is not configured; refusing to serve without auth")

    app = FastAPI(title="itemcert review service", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return _error(422, "invalid_request", str(exc.errors()))

    def _authorized(request: Request) -> bool:
        header = request.headers.get("authorization", "")
        return header == f"Bearer {token}"

    @app.get("/api/health")
    async def health() -> dict:
        from itemcert import __version__
        from itemcert.taxonomy._backend import BACKEND

        return {"status": "ok", "version": __version__, "scoring_backend": BACKEND}

    @app.get("/api/queue")
    async def list_queue(
        request: Request, status: str = "yellow", page: int = 1, page_size: int = 50
    ):
        if not _authorized(request):
            return _error(401, "unauthorized", "missing or invalid bearer token")
        if page < 1 or page_size < 1 or page_size > 500:
            return _error(400, "invalid_page", "page and page_size must be positive")
        if status not in RecordStore.status_filters():
            return _error(
                400, "invalid_filter", f"status must be one of {RecordStore.status_filters()}"
            )
        records, total = store.page(status_filter=status, page=page, page_size=page_size)
        return {
            "items": [record_summary(r) for r in records],
            "page": page,
            "page_size": page_size,
            "total": total,
            "pages": max(1, math.ceil(total / page_size)),
        }

    @app.get("/api/items/{item_id}")
    async def get_package(request: Request, item_id: str):
        if not _authorized(request):
            return _error(401, "unauthorized", "missing or invalid bearer token")
        try:
            record = store.get(item_id)
        except RecordNotFound as exc:
            return _error(404, "not_found", str(exc))
        return {
            "record": record.to_dict(),
            "reviewable": record.status is Status.PENDING_REVIEW,
            "rule_catalogue": dict(certifier.RULE_CATALOGUE),
        }

    @app.post("/api/items/{item_id}/decision")
    async def submit_decision(request: Request, item_id: str, body: DecisionBody):
        if not _authorized(request):
            return _error(401, "unauthorized", "missing or invalid bearer token")
        try:
            record = store.get(item_id)
        except RecordNotFound as exc:
            return _error(404, "not_found", str(exc))
        try:
            action = ReviewAction(body.action)
        except ValueError:
            return _error(422, "invalid_action", f"unknown action {body.action!r}")
        decided = clock()
        started = decided if body.started_at is None else from_rfc3339(body.started_at)
        try:
            review = ReviewRecord(
                reviewer_pseudonym=body.reviewer_pseudonym,
                action=action,
                edits=body.edits,
                notes=body.notes,
                started_at=started,
                decided_at=decided,
            )
            updated = pipeline.apply_review(record, review, body.expected_version)
            store.compare_and_swap(body.expected_version, updated)
        except VersionConflict as exc:
            return _error(409, "version_conflict", str(exc))
        except NotReviewable as exc:
            return _error(422, "not_reviewable", str(exc))
        except ReVerificationFailed as exc:
            return _error(422, "reverification_failed", str(exc))
        except RecordNotFound as exc:
            return _error(404, "not_found", str(exc))
        except ValueError as exc:
            return _error(422, "invalid_request", str(exc))
        return record_summary(updated)

    @app.get("/api/reports/summary")
    async def report_summary(request: Request):
        if not _authorized(request):
            return _error(401, "unauthorized", "missing or invalid bearer token")
        params = request.query_params
        try:
            period = ReportPeriod.parse(params.get("from"), params.get("to"))
        except ValueError as exc:
            return _error(400, "invalid_period", str(exc))
        report = summary_report(store.all_records(), period)
        import json

        return JSONResponse(content=json.loads(render_structured(report)))

    return app


def serve(app: FastAPI, host: str, port: int):
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="info")
