"""Client for the external knowledge-engine webhook.

The engine receives the question as a single named parameter over HTTP
POST and must reply with a key-value document whose value is the answer
text. The call is bounded by a hard deadline and is never retried: a
second answer arriving after the user moved on is worse than none.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Optional

import httpx

from .errors import (
    AmbiguousResponse,
    EngineError,
    EngineTimeout,
    MalformedResponse,
)

DEFAULT_TIMEOUT_SECONDS = 2.0


@dataclass(frozen=True)
class EngineConfig:
    webhook_url: str
    question_param_key: str = "question"
    response_value_key: Optional[str] = None
    timeout_seconds: float = DEFAULT_TIMEOUT_SECONDS
    json_body: bool = False  # False sends form-encoded, True a JSON object

    def __post_init__(self):
        if self.timeout_seconds <= 0:
            raise ValueError("timeout must be positive")
        if "://" not in self.webhook_url:
            raise ValueError(f"webhook URL must be absolute: {self.webhook_url!r}")


def query_engine(cfg: EngineConfig, question: str) -> str:
    """POST the question to the webhook and return the engine's answer text."""
    if not question.strip():
        raise ValueError("question must be non-empty")
    payload = {cfg.question_param_key: question}
    deadline = time.monotonic() + cfg.timeout_seconds
    try:
        with httpx.Client(timeout=cfg.timeout_seconds) as client:
            # Client setup costs count against the budget too.
            remaining = max(deadline - time.monotonic(), 1e-3)
            if cfg.json_body:
                response = client.post(
                    cfg.webhook_url, json=payload, timeout=remaining
                )
            else:
                response = client.post(
                    cfg.webhook_url, data=payload, timeout=remaining
                )
    except httpx.TimeoutException as exc:
        raise EngineTimeout(
            f"engine did not respond within {cfg.timeout_seconds}s"
        ) from exc
    if not 200 <= response.status_code < 300:
        raise EngineError(response.status_code, response.text)
    try:
        doc = response.json()
    except (json.JSONDecodeError, ValueError) as exc:
        raise MalformedResponse("engine response is not valid JSON") from exc
    if not isinstance(doc, dict):
        raise MalformedResponse("engine response must be a key-value object")
    if cfg.response_value_key is not None:
        if cfg.response_value_key not in doc:
            raise MalformedResponse(
                f"engine response lacks key {cfg.response_value_key!r}"
            )
        value = doc[cfg.response_value_key]
    else:
        if len(doc) != 1:
            raise AmbiguousResponse(
                f"engine response has {len(doc)} keys and no response key "
                "is configured"
            )
        value = next(iter(doc.values()))
    if not isinstance(value, str):
        raise MalformedResponse("engine answer value must be text")
    return value
