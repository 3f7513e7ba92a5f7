"""HTTP facade over the matching pipeline.

One service instance runs in exactly one mode, mirroring how the widget
is configured:

- ``faq-model``: load a saved model file; ready immediately.
- ``faq-web``: fetch and parse a FAQ page, embed in the background.
- ``faq-custom``: embed a supplied list of pairs in the background.
- ``engine``: forward questions to an external webhook.

While a background build is running, ``/ask`` returns 503 and
``/health`` reports ``ready: false``; the knowledge base is swapped in
atomically once ready so concurrent readers never see a partial state.
"""

from __future__ import annotations

import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from typing import Optional

import httpx
from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import engine_client, matcher, model_store
from .embedding import EmbedderSpec, embed_batch
from .errors import (
    EmptyDocument,
    EngineError,
    EngineTimeout,
    FaqwiseError,
    FetchError,
    TooManyRedirects,
)
from .faq_parser import QaPair, parse_faq

FETCH_TIMEOUT_SECONDS = 10.0
MAX_REDIRECTS = 5
DEFAULT_FALLBACK_MESSAGE = "I could not find a confident answer to that question."


@dataclass
class ServiceConfig:
    bind_address: str = "127.0.0.1:8000"
    model_path: Optional[str] = None
    faq_url: Optional[str] = None
    pairs: Optional[list[QaPair]] = None
    engine: Optional[engine_client.EngineConfig] = None
    threshold: float = matcher.DEFAULT_THRESHOLD
    allowed_origins: list[str] = field(default_factory=lambda: ["*"])
    proxy_prefix: Optional[str] = None
    embedder: EmbedderSpec = field(default_factory=EmbedderSpec)
    fallback_message: str = DEFAULT_FALLBACK_MESSAGE

    @property
    def mode(self) -> str:
        selected = {
            "faq-model": self.model_path is not None,
            "faq-web": self.faq_url is not None,
            "faq-custom": self.pairs is not None,
            "engine": self.engine is not None,
        }
        active = [name for name, on in selected.items() if on]
        if len(active) != 1:
            raise ValueError(
                f"exactly one mode must be configured, got {active or 'none'}"
            )
        return active[0]


def fetch_url(url: str, proxy_prefix: Optional[str] = None) -> bytes:
    """GET a page, following up to 5 redirects within a 10 second budget.

    With ``proxy_prefix`` set, the request goes to the prefix with the
    target URL appended verbatim (CORS-proxy style).
    """
    target = (proxy_prefix + url) if proxy_prefix else url
    try:
        with httpx.Client(
            timeout=FETCH_TIMEOUT_SECONDS,
            follow_redirects=True,
            max_redirects=MAX_REDIRECTS,
        ) as client:
            response = client.get(target)
    except httpx.TooManyRedirects as exc:
        raise TooManyRedirects(f"more than {MAX_REDIRECTS} redirects for {target}") from exc
    except httpx.HTTPError as exc:
        raise FetchError(f"fetch failed for {target}: {exc}") from exc
    if not 200 <= response.status_code < 300:
        raise FetchError(
            f"fetch of {target} returned status {response.status_code}",
            status=response.status_code,
        )
    return response.content


class AskRequest(BaseModel):
    question: str
    threshold: Optional[float] = None


class AskResponse(BaseModel):
    answer: Optional[str] = None
    matched_question: Optional[str] = None
    confidence: Optional[float] = None
    source: str = ""
    rejected: bool = False


class HealthResponse(BaseModel):
    ready: bool
    mode: str
    error: Optional[str] = None


class _State:
    """Mutable service state; ``kb`` is swapped atomically by the builder."""

    def __init__(self):
        self.kb: Optional[matcher.KnowledgeBase] = None
        self.error: Optional[str] = None
        self.ready = False


def _build_kb(config: ServiceConfig, state: _State) -> None:
    try:
        if config.mode == "faq-web":
            html = fetch_url(config.faq_url, config.proxy_prefix)
            report = parse_faq(html, source_url=config.faq_url)
            pairs = report.pairs
            source = config.faq_url
        else:
            pairs = config.pairs
            source = "custom"
        questions = [p.question for p in pairs]
        matrix = embed_batch(questions, config.embedder)
        state.kb = matcher.KnowledgeBase(
            pairs=tuple(pairs),
            matrix=matrix,
            embedder=config.embedder,
            default_threshold=config.threshold,
            source=source,
        )
        state.ready = True
    except Exception as exc:  # noqa: BLE001 - surfaced through /health
        state.error = f"{type(exc).__name__}: {exc}"


def create_app(config: ServiceConfig) -> FastAPI:
    mode = config.mode  # validates exclusivity up front
    state = _State()

    if mode == "faq-model":
        state.kb = model_store.load_model(config.model_path)
        state.ready = True
    elif mode == "engine":
        state.ready = True

    lifespan = None
    if mode in ("faq-web", "faq-custom"):
        @asynccontextmanager
        async def lifespan(app: FastAPI):
            threading.Thread(
                target=_build_kb, args=(config, state), daemon=True
            ).start()
            yield

    app = FastAPI(title="faqwise", version="0.1.0", lifespan=lifespan)
    app.state.faqwise = state
    app.add_middleware(
        CORSMiddleware,
        allow_origins=config.allowed_origins,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def require_kb() -> matcher.KnowledgeBase:
        if state.kb is None or not state.ready:
            detail = state.error or "knowledge base is still being built"
            raise HTTPException(status_code=503, detail=detail)
        return state.kb

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(ready=state.ready, mode=mode, error=state.error)

    @app.post("/ask", response_model=AskResponse, response_model_exclude_none=True)
    def ask(request: AskRequest) -> AskResponse:
        if not request.question.strip():
            raise HTTPException(status_code=400, detail="question must be non-empty")
        if mode == "engine":
            try:
                text = engine_client.query_engine(config.engine, request.question)
            except EngineTimeout as exc:
                raise HTTPException(status_code=504, detail=str(exc)) from exc
            except (EngineError, FaqwiseError) as exc:
                raise HTTPException(status_code=502, detail=str(exc)) from exc
            return AskResponse(
                answer=text,
                source=config.engine.webhook_url,
                rejected=False,
            )
        kb = require_kb()
        result = matcher.answer(kb, request.question, request.threshold)
        if result.rejected:
            return AskResponse(
                answer=config.fallback_message,
                confidence=result.confidence,
                source=result.source,
                rejected=True,
            )
        return AskResponse(
            answer=result.answer,
            matched_question=kb.pairs[result.matched_index].question,
            confidence=result.confidence,
            source=result.source,
            rejected=False,
        )

    @app.get("/questions", response_model=list[str])
    def questions() -> list[str]:
        return require_kb().questions

    @app.get("/model")
    def model() -> Response:
        body = model_store.serialize_model(require_kb())
        return Response(content=body, media_type="application/json")

    return app


def run(config: ServiceConfig) -> None:
    """Serve until interrupted; raises on bind failure."""
    import uvicorn

    host, _, port = config.bind_address.rpartition(":")
    uvicorn.run(create_app(config), host=host or "127.0.0.1", port=int(port))
