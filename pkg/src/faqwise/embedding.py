"""Sentence embedding behind a pluggable, reproducible interface.

The built-in baseline hashes character trigrams into a fixed number of
buckets and L2-normalizes the term frequencies. It is seedless and
platform-independent, so identical text always yields bit-identical
vectors. Externally produced embeddings (e.g. from a large sentence
encoder run offline) enter through :func:`load_precomputed` using the
model file format from :mod:`faqwise.model_store`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnknownEmbedder

DEFAULT_DIMENSION = 512

BASELINE_EMBEDDER_ID = "baseline-ngram-v1"

# FNV-1a, 64-bit. Fixed constants; do not change without a format revision.
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 1 << 64


def fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) % _U64
    return h


@dataclass(frozen=True)
class EmbedderSpec:
    """Identity of an embedder; id + params fully determine its output."""

    id: str = BASELINE_EMBEDDER_ID
    dimension: int = DEFAULT_DIMENSION
    params: tuple[tuple[str, str], ...] = ()

    def params_dict(self) -> dict[str, str]:
        return dict(self.params)


def _baseline_embed(text: str, spec: EmbedderSpec) -> np.ndarray:
    dim = spec.dimension
    lowered = text.lower()
    if not lowered.strip():
        return np.zeros(dim, dtype=np.float32)
    if len(lowered) < 3:
        grams = [lowered]
    else:
        grams = [lowered[i:i + 3] for i in range(len(lowered) - 2)]
    counts = np.zeros(dim, dtype=np.float64)
    for gram in grams:
        counts[fnv1a_64(gram.encode("utf-8")) % dim] += 1.0
    counts /= np.linalg.norm(counts)
    return counts.astype(np.float32)


_REGISTRY: dict[str, Callable[[str, EmbedderSpec], np.ndarray]] = {
    BASELINE_EMBEDDER_ID: _baseline_embed,
}


def register_embedder(embedder_id: str, fn: Callable[[str, EmbedderSpec], np.ndarray]) -> None:
    """Register an embedding function under an id (e.g. an external model)."""
    _REGISTRY[embedder_id] = fn


def embed(text: str, spec: EmbedderSpec) -> np.ndarray:
    """Embed one sentence; empty or whitespace-only text maps to the zero vector."""
    try:
        fn = _REGISTRY[spec.id]
    except KeyError:
        raise UnknownEmbedder(f"no embedder registered under {spec.id!r}") from None
    vec = np.asarray(fn(text, spec), dtype=np.float32)
    if vec.shape != (spec.dimension,):
        raise ValueError(
            f"embedder {spec.id!r} returned shape {vec.shape}, "
            f"expected ({spec.dimension},)"
        )
    return vec


def embed_batch(questions: list[str], spec: EmbedderSpec) -> np.ndarray:
    """Embed questions into an [n, D] float32 matrix, rows in input order."""
    if not questions:
        return np.empty((0, spec.dimension), dtype=np.float32)
    return np.stack([embed(q, spec) for q in questions])


def load_precomputed(path) -> tuple[EmbedderSpec, np.ndarray]:
    """Read (spec, matrix) from a model file without invoking any embedder."""
    from .model_store import load_model

    kb = load_model(path)
    return kb.embedder, kb.matrix
