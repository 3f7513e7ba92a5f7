"""Cosine-similarity matching of user questions against a knowledge base."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .embedding import EmbedderSpec, embed
from .errors import DimensionMismatch, EmptyKnowledgeBase
from .faq_parser import QaPair

DEFAULT_THRESHOLD = 0.75


@dataclass(frozen=True)
class KnowledgeBase:
    """Immutable bundle of pairs, their embedding matrix, and match policy."""

    pairs: tuple[QaPair, ...]
    matrix: np.ndarray  # [n, D] float32, rows in pair index order
    embedder: EmbedderSpec
    default_threshold: float = DEFAULT_THRESHOLD
    source: str = ""

    def __post_init__(self):
        if len(self.pairs) != self.matrix.shape[0]:
            raise ValueError(
                f"{len(self.pairs)} pairs but {self.matrix.shape[0]} matrix rows"
            )
        self.matrix.setflags(write=False)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def questions(self) -> list[str]:
        return [p.question for p in self.pairs]


@dataclass(frozen=True)
class MatchResult:
    matched_index: Optional[int]
    confidence: float
    answer: Optional[str]
    source: str
    ranked: Optional[tuple[tuple[int, float], ...]] = None

    @property
    def rejected(self) -> bool:
        return self.matched_index is None


def cosine_similarity(x: np.ndarray, y: np.ndarray) -> float:
    """x.y / (|x||y|); zero when either vector is the null embedding."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionMismatch(f"{x.shape} vs {y.shape}")
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        return 0.0
    return float(np.dot(x, y) / (nx * ny))


def _similarities(kb: KnowledgeBase, question: str) -> np.ndarray:
    query = embed(question, kb.embedder).astype(np.float64)
    qn = np.linalg.norm(query)
    if qn == 0.0:
        return np.zeros(len(kb))
    rows = kb.matrix.astype(np.float64)
    norms = np.linalg.norm(rows, axis=1)
    sims = np.zeros(len(kb))
    nonzero = norms > 0.0
    sims[nonzero] = rows[nonzero] @ query / (norms[nonzero] * qn)
    return sims


def rank(kb: KnowledgeBase, question: str) -> list[tuple[int, float]]:
    """All (index, similarity) pairs, best first; ties keep the smaller index."""
    if len(kb) == 0:
        raise EmptyKnowledgeBase("knowledge base has no entries")
    sims = _similarities(kb, question)
    order = np.lexsort((np.arange(len(sims)), -sims))
    return [(int(i), float(sims[i])) for i in order]


def answer(
    kb: KnowledgeBase,
    question: str,
    threshold: Optional[float] = None,
    include_ranking: bool = False,
) -> MatchResult:
    """Best match when its similarity reaches the threshold, else a rejection.

    The rejection still reports the top similarity as ``confidence`` so
    threshold sweeps can reuse a single ranking. The threshold comparison
    is inclusive.
    """
    if threshold is None:
        threshold = kb.default_threshold
    ranking = rank(kb, question)
    top_index, top_sim = ranking[0]
    ranked = tuple(ranking) if include_ranking else None
    if top_sim >= threshold:
        pair = kb.pairs[top_index]
        return MatchResult(top_index, top_sim, pair.answer, kb.source, ranked)
    return MatchResult(None, top_sim, None, kb.source, ranked)
