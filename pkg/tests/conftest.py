import json
import threading
from functools import partial
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

import pytest

from faqwise import matcher
from faqwise.embedding import EmbedderSpec, embed_batch
from faqwise.faq_parser import QaPair

FIXTURES = Path(__file__).parent / "fixtures"
DATA = Path(__file__).parent / "data"


def fixture_bytes(name: str) -> bytes:
    return (FIXTURES / name).read_bytes()


@pytest.fixture(scope="session")
def expected_pairs() -> dict:
    return json.loads((FIXTURES / "expected.json").read_text())


def make_kb(questions_answers, dimension=64, threshold=0.75, source="test"):
    pairs = tuple(
        QaPair(q, a, i) for i, (q, a) in enumerate(questions_answers)
    )
    spec = EmbedderSpec(dimension=dimension)
    matrix = embed_batch([p.question for p in pairs], spec)
    return matcher.KnowledgeBase(
        pairs=pairs, matrix=matrix, embedder=spec,
        default_threshold=threshold, source=source,
    )


@pytest.fixture
def small_kb():
    return make_kb([
        ("How do I reset my password?", "Use the reset link."),
        ("Can I change my username?", "Yes, once every 30 days."),
        ("Where are my invoices stored?", "Under Billing."),
        ("Do you ship internationally?", "To over 40 countries."),
        ("Is there a student discount?", "Yes, 20 percent with an id."),
    ])


class _Handler(BaseHTTPRequestHandler):
    """Scriptable handler for mock HTTP servers used across the suite."""

    routes = {}
    recorded = []

    def _serve(self):
        type(self).recorded.append(self.path)
        entry = self.routes.get(self.path)
        if entry is None:
            self.send_error(404)
            return
        entry(self)

    def do_GET(self):
        self._serve()

    def do_POST(self):
        self._serve()

    def log_message(self, *args):
        pass


@pytest.fixture
def mock_server():
    """An in-process HTTP server; yields (base_url, routes, recorded_paths)."""
    handler = type("Handler", (_Handler,), {"routes": {}, "recorded": []})
    server = HTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{server.server_port}"
    yield base, handler.routes, handler.recorded
    server.shutdown()
    thread.join(timeout=5)


def respond_bytes(handler, body: bytes, status=200, content_type="text/html"):
    try:
        handler.send_response(status)
        handler.send_header("Content-Type", content_type)
        handler.send_header("Content-Length", str(len(body)))
        handler.end_headers()
        handler.wfile.write(body)
    except BrokenPipeError:
        pass  # client gave up (e.g. timed out) before the response finished


def json_route(payload, status=200, delay=0.0):
    body = json.dumps(payload).encode()

    def handle(handler):
        if delay:
            import time
            time.sleep(delay)
        respond_bytes(handler, body, status, "application/json")

    return handle


def html_route(body: bytes, status=200):
    return partial(respond_bytes, body=body, status=status)
