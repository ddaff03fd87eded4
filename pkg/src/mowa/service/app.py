"""HTTP wiring: publish/list/download apps, requests, authoring sessions.

Request bodies are parsed by hand rather than through response models so
that every 4xx body has the same shape: {"error": {"key", "message"}} with
a key resolvable in all shipped locale catalogs; validation failures add
{"report": {...}} alongside.
"""

from __future__ import annotations

import hashlib
import json
import tempfile
from dataclasses import replace
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from ..appspec.model import ContextRule
from ..appspec.validate import ValidationReport, validate_spec
from ..appspec.xmlio import (
    DanglingReference,
    InvalidSpec,
    SchemaViolation,
    XmlSyntax,
    parse_spec,
    serialize_spec,
)
from ..extractor import ExtractCache
from ..htmldom import serialize_html
from ..sensors import Nav, TraceSyntax, parse_trace, step
from ..weaver import PageCorpus, handle_context, handle_nav, new_session
from .config import ServiceConfig
from .i18n import message
from .sessions import (
    Busy,
    PayloadError,
    STAGE_COUNT,
    SessionRegistry,
    StageOrder,
    draft_from_spec,
    materialize,
    submit_stage,
)
from .store import AlreadyFulfilled, DirectoryStore


def _error_body(key: str, locale: str, detail: str | None = None, **extra) -> dict:
    error = {"key": key, "message": message(key, locale)}
    if detail:
        error["detail"] = detail
    body = {"error": error}
    body.update(extra)
    return body


def _report_json(report: ValidationReport, locale: str) -> dict:
    return {
        "ok": report.ok,
        "issues": [
            {
                "severity": issue.severity,
                "path": issue.path,
                "key": issue.key,
                "message": issue.message,
                "localized": message(issue.key, locale),
            }
            for issue in report.issues
        ],
    }


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="mowa platform", version="0.1.0", docs_url=None, redoc_url=None)

    if config.store_dir is not None:
        store = DirectoryStore(config.store_dir)
    else:
        # ephemeral store, useful for demos and preview-only runs
        app.state.store_tmp = tempfile.TemporaryDirectory(prefix="mowa-store-")
        store = DirectoryStore(app.state.store_tmp.name)

    corpus: PageCorpus | None = None
    cache: ExtractCache | None = None
    if config.corpus_dir is not None and (Path(config.corpus_dir) / "manifest.json").exists():
        corpus = PageCorpus(config.corpus_dir)
        cache = ExtractCache.from_corpus(config.corpus_dir)

    registry = SessionRegistry()
    locale = config.locale
    app.state.config = config
    app.state.store = store
    app.state.corpus = corpus
    app.state.registry = registry

    def err(status: int, key: str, detail: str | None = None, **extra) -> JSONResponse:
        return JSONResponse(status_code=status, content=_error_body(key, locale, detail, **extra))

    @app.exception_handler(StarletteHTTPException)
    async def _http_exc(request: Request, exc: StarletteHTTPException) -> JSONResponse:
        key = {404: "http.not-found", 405: "http.method-not-allowed"}.get(
            exc.status_code, "payload.invalid"
        )
        return JSONResponse(status_code=exc.status_code, content=_error_body(key, locale))

    @app.exception_handler(RequestValidationError)
    async def _validation_exc(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=422, content=_error_body("payload.invalid", locale))

    async def read_json(request: Request, optional: bool = False) -> dict | JSONResponse:
        body = await request.body()
        if not body:
            if optional:
                return {}
            return err(422, "payload.invalid", "request body must be a JSON object")
        try:
            data = json.loads(body)
        except json.JSONDecodeError as exc:
            return err(422, "payload.invalid", f"bad JSON: {exc.msg}")
        if not isinstance(data, dict):
            return err(422, "payload.invalid", "request body must be a JSON object")
        return data

    def _corpus_urls() -> set[str] | None:
        return corpus.urls() if corpus is not None else None

    # -- apps -----------------------------------------------------------------

    @app.post("/apps")
    async def publish_app(request: Request):
        data = await read_json(request)
        if isinstance(data, JSONResponse):
            return data
        spec_xml = data.get("spec_xml")
        if not isinstance(spec_xml, str) or not spec_xml:
            return err(422, "payload.invalid", "field 'spec_xml' must be a non-empty string")
        author = data.get("author", "anonymous")
        visibility = data.get("visibility", "public")
        if visibility not in ("public", "unlisted"):
            return err(422, "payload.invalid", "field 'visibility' must be public or unlisted")
        try:
            spec = parse_spec(spec_xml.encode("utf-8"))
        except XmlSyntax as exc:
            return err(422, "spec.syntax", str(exc))
        except SchemaViolation as exc:
            return err(422, "spec.schema", str(exc))
        except DanglingReference as exc:
            return err(422, "spec.dangling-ref", str(exc))
        report = validate_spec(spec, known_urls=_corpus_urls())
        if report.errors():
            first = report.errors()[0]
            return err(422, first.key, first.message, report=_report_json(report, locale))
        canonical = serialize_spec(spec)
        app_id = hashlib.sha256(canonical).hexdigest()
        record, created = store.put_app(
            app_id,
            canonical,
            {
                "name": spec.name,
                "filename": spec.filename,
                "author": author,
                "visibility": visibility,
            },
        )
        body = dict(record)
        body["url"] = f"/apps/{app_id}"
        return JSONResponse(status_code=201 if created else 200, content=body)

    @app.get("/apps")
    def list_apps():
        return {"apps": store.list_apps()}

    @app.get("/apps/{app_id}")
    def get_app(app_id: str):
        data = store.get_app_bytes(app_id)
        if data is None:
            return err(404, "app.not-found")
        return Response(content=data, media_type="application/xml")

    # -- requests --------------------------------------------------------------

    @app.post("/requests")
    async def create_request(request: Request):
        data = await read_json(request)
        if isinstance(data, JSONResponse):
            return data
        title = data.get("title")
        if not isinstance(title, str) or not title.strip():
            return err(422, "payload.invalid", "field 'title' must be a non-empty string")
        description = data.get("description", "")
        requester = data.get("requester", "anonymous")
        if not isinstance(description, str) or not isinstance(requester, str):
            return err(422, "payload.invalid", "'description' and 'requester' must be strings")
        record = store.create_request(title.strip(), description, requester)
        return JSONResponse(status_code=201, content=record)

    @app.get("/requests")
    def list_requests():
        return {"requests": store.list_requests()}

    @app.post("/requests/{rid}/fulfill")
    async def fulfill_request(rid: str, request: Request):
        data = await read_json(request)
        if isinstance(data, JSONResponse):
            return data
        app_id = data.get("app_id")
        if not isinstance(app_id, str) or not app_id:
            return err(422, "payload.invalid", "field 'app_id' must be a non-empty string")
        if store.get_request(rid) is None:
            return err(404, "request.not-found")
        if store.get_app_record(app_id) is None:
            return err(404, "app.not-found")
        try:
            record = store.fulfill_request(rid, app_id)
        except AlreadyFulfilled:
            return err(409, "request.already-fulfilled")
        return record

    # -- sessions ----------------------------------------------------------------

    @app.post("/sessions")
    async def create_session(request: Request):
        data = await read_json(request, optional=True)
        if isinstance(data, JSONResponse):
            return data
        session = registry.create()
        import_id = data.get("import_app")
        if import_id is not None:
            if not isinstance(import_id, str):
                return err(422, "payload.invalid", "field 'import_app' must be a string")
            spec_bytes = store.get_app_bytes(import_id)
            if spec_bytes is None:
                return err(404, "app.not-found")
            session.draft = draft_from_spec(parse_spec(spec_bytes))
            session.complete = set(range(1, STAGE_COUNT + 1))
        return JSONResponse(status_code=201, content=session.view())

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        session = registry.get(sid)
        if session is None:
            return err(404, "session.not-found")
        return session.view()

    @app.post("/sessions/{sid}/stages/{stage}")
    async def post_stage(sid: str, stage: int, request: Request):
        session = registry.get(sid)
        if session is None:
            return err(404, "session.not-found")
        if not (1 <= stage <= STAGE_COUNT):
            return err(404, "stage.not-found")
        data = await read_json(request)
        if isinstance(data, JSONResponse):
            return data
        try:
            report, accepted = submit_stage(session, stage, data, known_urls=_corpus_urls())
        except StageOrder as exc:
            return err(409, "stage.order", missing_stages=exc.missing)
        except Busy:
            return err(409, "session.busy")
        except PayloadError as exc:
            return err(422, "payload.invalid", exc.detail)
        if not accepted:
            first = report.errors()[0]
            return err(422, first.key, first.message, report=_report_json(report, locale))
        return {"report": _report_json(report, locale), "session": session.view()}

    @app.post("/sessions/{sid}/preview")
    async def preview(sid: str, request: Request):
        session = registry.get(sid)
        if session is None:
            return err(404, "session.not-found")
        data = await read_json(request)
        if isinstance(data, JSONResponse):
            return data
        page_url = data.get("page_url")
        if not isinstance(page_url, str) or not page_url:
            return err(422, "payload.invalid", "field 'page_url' must be a non-empty string")
        spec = materialize(session.draft, for_preview=True)
        if not spec.layers:
            return err(412, "preview.not-previewable")
        if corpus is None or not corpus.has(page_url):
            return err(404, "preview.page-not-in-corpus")
        if not spec.rules:
            # draft without stage 6 yet: wire every sensor to every layer
            spec = replace(
                spec,
                rules=tuple(
                    ContextRule(sensor_id=s.id, layer_id=layer.id)
                    for s in spec.sensors
                    for layer in spec.layers
                ),
            )
        try:
            weave = new_session(spec, corpus, cache)
        except InvalidSpec as exc:
            return err(422, "payload.invalid", str(exc))
        handle_nav(weave, page_url)
        reading = data.get("reading")
        if reading is not None:
            if not isinstance(reading, dict):
                return err(422, "payload.invalid", "field 'reading' must be an object")
            try:
                event = parse_trace(json.dumps({"t": 0, **reading}))[0]
            except (TraceSyntax, TypeError) as exc:
                return err(422, "payload.invalid", f"bad reading: {exc}")
            if isinstance(event.payload, Nav):
                handle_nav(weave, event.payload.url)
            else:
                weave.sensor_state, change = step(weave.sensor_state, spec, event)
                if change is not None:
                    handle_context(weave, change)
        html = ""
        if weave.current_doc is not None:
            html = serialize_html(weave.current_doc).decode("utf-8")
        warnings = [
            {"key": entry["key"], "detail": entry["detail"]}
            for entry in weave.log.entries
            if entry["type"] == "warning"
        ]
        return {"html": html, "warnings": warnings, "log": weave.log.entries}

    @app.post("/sessions/{sid}/export")
    def export_session(sid: str):
        session = registry.get(sid)
        if session is None:
            return err(404, "session.not-found")
        missing = [n for n in range(1, STAGE_COUNT + 1) if n not in session.complete]
        if missing:
            return err(409, "export.incomplete", missing_stages=missing)
        canonical = serialize_spec(materialize(session.draft))
        return Response(content=canonical, media_type="application/xml")

    return app
