"""Local HTTP service: the wizard backend and a JSON API over the engine.

All handlers are stateless and call the same pure engine functions as the
CLI, so responses carry byte-identical canonical output.  Errors use the
body shape ``{"error": {"code", "message", "path"?}}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .. import jsoncodec, matcher
from ..diagnostics import has_errors
from ..model import UsageError
from ..vocabulary import VocabularyRegistry, default_registry

DEFAULT_FRONTEND_DIR = Path(__file__).resolve().parents[3] / "frontend" / "dist"


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, path: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.path = path

    def body(self) -> dict:
        err: dict = {"code": self.code, "message": self.message}
        if self.path is not None:
            err["path"] = self.path
        return {"error": err}


class ConvertRequest(BaseModel):
    text: str = Field(description="Document text in the source format")
    source: Literal["dsl", "json"] | None = Field(
        default=None, description="Source format; sniffed when omitted")


class MatchRequest(BaseModel):
    request: dict = Field(description="SLA request document (JSON object form)")
    offers: list[dict] = Field(description="SLA offer documents to rank")
    weights: tuple[int, int, int] | None = Field(
        default=None, description="Priority weights (high, medium, low)")


class DiagnosticModel(BaseModel):
    severity: str
    code: str
    message: str
    path: str | None = None
    line: int | None = None
    col: int | None = None


class ValidateResponse(BaseModel):
    valid: bool
    diagnostics: list[DiagnosticModel]


def _sniff_format(text: str) -> str:
    return "json" if text.lstrip()[:1] == "{" else "dsl"


def _load_document(obj: dict, registry: VocabularyRegistry, what: str):
    doc, diags = jsoncodec.from_json(json.dumps(obj), registry)
    if doc is None:
        first = next(d for d in diags if d.severity == "error")
        raise ApiError(422, first.code, f"{what}: {first.message}", first.path)
    return doc


def create_app(registry: VocabularyRegistry | None = None,
               frontend_dir: Path | None = None) -> FastAPI:
    registry = registry or default_registry()
    app = FastAPI(title="SLA-IoT service", version="0.1.0")

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.exception_handler(RequestValidationError)
    async def _bad_request(_request: Request, exc: RequestValidationError) -> JSONResponse:
        first = exc.errors()[0] if exc.errors() else {}
        path = ".".join(str(p) for p in first.get("loc", ()) if p != "body")
        body = ApiError(422, "bad-request", str(first.get("msg", "invalid request")),
                        path or None).body()
        return JSONResponse(status_code=422, content=body)

    @app.get("/api/vocabulary")
    def vocabulary() -> JSONResponse:
        payload = registry.to_file_dict()
        payload["serviceKinds"] = list(registry.service_kinds)
        payload["resourceKinds"] = list(registry.resource_kinds)
        return JSONResponse(payload)

    @app.post("/api/validate", response_model=ValidateResponse)
    def validate(document: dict) -> ValidateResponse:
        _doc, diags = jsoncodec.from_json(json.dumps(document), registry)
        return ValidateResponse(
            valid=not has_errors(diags),
            diagnostics=[DiagnosticModel(**d.to_dict()) for d in diags])

    @app.post("/api/convert")
    def convert(body: ConvertRequest, to: Literal["dsl", "json"]) -> Response:
        source = body.source or _sniff_format(body.text)
        text, diags = jsoncodec.convert(body.text, source, to, registry)
        if text is None:
            first = next(d for d in diags if d.severity == "error")
            raise ApiError(422, first.code, first.message, first.path)
        media = "application/json" if to == "json" else "text/plain"
        return Response(content=text, media_type=media)

    @app.post("/api/match")
    def run_match(body: MatchRequest) -> Response:
        request_doc = _load_document(body.request, registry, "request")
        offers = [_load_document(o, registry, f"offers[{i}]")
                  for i, o in enumerate(body.offers)]
        weights = None
        if body.weights is not None:
            weights = dict(zip(("high", "medium", "low"), body.weights))
        try:
            reports = matcher.rank_offers(offers, request_doc, registry, weights)
        except UsageError as exc:
            raise ApiError(422, "usage", str(exc)) from None
        payload = json.dumps([r.to_dict() for r in reports],
                             indent=2, ensure_ascii=False) + "\n"
        return Response(content=payload, media_type="application/json")

    static_dir = frontend_dir if frontend_dir is not None else DEFAULT_FRONTEND_DIR
    if static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="wizard")
    return app
