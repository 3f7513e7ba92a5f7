"""faqwise: heuristic FAQ extraction and semantic question answering.

Parses arbitrary FAQ pages into question/answer pairs with no knowledge
of the page structure, embeds the questions as unit vectors, and answers
free-form questions by cosine similarity under a confidence threshold.
Exposed as a library, a CLI (``faqwise``), and a FastAPI HTTP service.
"""

from .embedding import EmbedderSpec, embed, embed_batch
from .engine_client import EngineConfig, query_engine
from .evaluation import (
    REJECT,
    BenchmarkResult,
    ConfusionCounts,
    TestCase,
    evaluate,
    threshold_sweep,
)
from .faq_parser import ElementSignature, ParseReport, QaPair, parse_faq
from .matcher import KnowledgeBase, MatchResult, answer, cosine_similarity, rank
from .model_store import load_model, save_model

__version__ = "0.1.0"

__all__ = [
    "EmbedderSpec", "embed", "embed_batch",
    "EngineConfig", "query_engine",
    "REJECT", "BenchmarkResult", "ConfusionCounts", "TestCase",
    "evaluate", "threshold_sweep",
    "ElementSignature", "ParseReport", "QaPair", "parse_faq",
    "KnowledgeBase", "MatchResult", "answer", "cosine_similarity", "rank",
    "load_model", "save_model",
    "__version__",
]
