"""Portable JSON serialization of a knowledge base (the "model" file).

The file carries the Q&A pairs, the embedding matrix, the embedder
identity, and the match threshold, so a consumer can answer questions
with zero parsing or embedding work. Matrix values are stored as the
shortest decimal that round-trips to the exact 32-bit float, which makes
save → load → save byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .embedding import EmbedderSpec
from .errors import FormatError
from .faq_parser import QaPair
from .matcher import KnowledgeBase

FORMAT_VERSION = 1


def serialize_model(kb: KnowledgeBase) -> bytes:
    """Canonical UTF-8 bytes of the model file for this knowledge base."""
    if len(kb) == 0:
        raise FormatError("model must contain at least one pair", field="pairs")
    doc = {
        "format_version": FORMAT_VERSION,
        "embedder": {
            "id": kb.embedder.id,
            "dimension": kb.embedder.dimension,
            "params": kb.embedder.params_dict(),
        },
        "threshold": kb.default_threshold,
        "source": kb.source,
        "pairs": [
            {"question": p.question, "answer": p.answer} for p in kb.pairs
        ],
        "embeddings": [
            [float(v) for v in row] for row in kb.matrix
        ],
    }
    text = json.dumps(doc, ensure_ascii=False, indent=2) + "\n"
    return text.encode("utf-8")


def save_model(kb: KnowledgeBase, path) -> None:
    Path(path).write_bytes(serialize_model(kb))


def _require(doc: dict, key: str, kind) -> object:
    if key not in doc:
        raise FormatError("missing required field", field=key)
    value = doc[key]
    if not isinstance(value, kind):
        raise FormatError(
            f"expected {getattr(kind, '__name__', kind)}", field=key
        )
    return value


def deserialize_model(data: bytes) -> KnowledgeBase:
    try:
        doc = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise FormatError("file is not valid UTF-8", offset=exc.start) from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", offset=exc.pos) from exc
    if not isinstance(doc, dict):
        raise FormatError("top-level value must be an object")

    version = _require(doc, "format_version", int)
    if version != FORMAT_VERSION:
        raise FormatError(
            f"unsupported version {version}", field="format_version"
        )
    emb = _require(doc, "embedder", dict)
    emb_id = _require(emb, "id", str)
    dimension = _require(emb, "dimension", int)
    params = _require(emb, "params", dict)
    for k, v in params.items():
        if not isinstance(k, str) or not isinstance(v, str):
            raise FormatError("params must map strings to strings",
                              field="embedder.params")
    if dimension <= 0:
        raise FormatError("dimension must be positive", field="embedder.dimension")
    threshold = _require(doc, "threshold", (int, float))
    if isinstance(threshold, bool) or not -1.0 <= float(threshold) <= 1.0:
        raise FormatError("threshold must be in [-1, 1]", field="threshold")
    source = _require(doc, "source", str)
    raw_pairs = _require(doc, "pairs", list)
    raw_rows = _require(doc, "embeddings", list)
    if not raw_pairs:
        raise FormatError("model must contain at least one pair", field="pairs")
    if len(raw_pairs) != len(raw_rows):
        raise FormatError(
            f"{len(raw_pairs)} pairs but {len(raw_rows)} embedding rows",
            field="embeddings",
        )

    pairs = []
    for i, item in enumerate(raw_pairs):
        if not isinstance(item, dict):
            raise FormatError("pair must be an object", field=f"pairs[{i}]")
        question = item.get("question")
        answer_text = item.get("answer")
        if not isinstance(question, str) or not question.strip():
            raise FormatError("question must be non-empty text",
                              field=f"pairs[{i}].question")
        if not isinstance(answer_text, str):
            raise FormatError("answer must be text", field=f"pairs[{i}].answer")
        pairs.append(QaPair(question, answer_text, i))

    matrix = np.empty((len(raw_rows), dimension), dtype=np.float32)
    for i, row in enumerate(raw_rows):
        if not isinstance(row, list) or len(row) != dimension:
            raise FormatError(
                f"row must have {dimension} values", field=f"embeddings[{i}]"
            )
        try:
            values = np.asarray(row, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise FormatError("row contains non-numeric values",
                              field=f"embeddings[{i}]") from exc
        if not np.all(np.isfinite(values)):
            raise FormatError("row contains non-finite values",
                              field=f"embeddings[{i}]")
        matrix[i] = values.astype(np.float32)

    spec = EmbedderSpec(
        id=emb_id,
        dimension=dimension,
        params=tuple(sorted(params.items())),
    )
    return KnowledgeBase(
        pairs=tuple(pairs),
        matrix=matrix,
        embedder=spec,
        default_threshold=float(threshold),
        source=source,
    )


def load_model(path) -> KnowledgeBase:
    return deserialize_model(Path(path).read_bytes())
