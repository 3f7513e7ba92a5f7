"""Benchmarking: paraphrase test sets, micro-averaged metrics, threshold sweeps.

Scoring convention: a case that expects a knowledge-base entry counts as a
true positive when answered correctly, a false positive when answered
wrongly, and a false negative when rejected. Off-corpus cases (expected
outcome REJECT) count as true positives when rejected and false positives
when answered. Counting correct rejections as true positives is what
makes recall equal answered-or-correctly-rejected over all cases; see the
README for the full rationale.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .dom import normalize_text
from .errors import InvalidCase
from .matcher import KnowledgeBase, rank


class _Reject:
    """Sentinel expected outcome for off-corpus test questions."""

    def __repr__(self):
        return "REJECT"


REJECT = _Reject()

ExpectedOutcome = Union[int, _Reject]


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # not a pytest class despite the name

    test_question: str
    expected_index: ExpectedOutcome


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0


@dataclass(frozen=True)
class BenchmarkResult:
    threshold: float
    precision: float
    recall: float
    f1: float
    counts: ConfusionCounts


def precision(c: ConfusionCounts) -> float:
    denom = c.tp + c.fp
    return c.tp / denom if denom else 0.0


def recall(c: ConfusionCounts) -> float:
    denom = c.tp + c.fn
    return c.tp / denom if denom else 0.0


def f1(c: ConfusionCounts) -> float:
    p = precision(c)
    r = recall(c)
    return 2 * p * r / (p + r) if p + r else 0.0


def _validate_cases(kb: KnowledgeBase, cases: list[TestCase]) -> None:
    if not cases:
        raise InvalidCase("test set is empty")
    for case in cases:
        idx = case.expected_index
        if idx is REJECT:
            continue
        if not isinstance(idx, int) or not 0 <= idx < len(kb):
            raise InvalidCase(
                f"expected index {idx!r} out of range for kb of {len(kb)}"
            )


def _top_matches(kb: KnowledgeBase, cases: list[TestCase]) -> list[tuple[int, float]]:
    return [rank(kb, case.test_question)[0] for case in cases]


def _tally(
    cases: list[TestCase],
    tops: list[tuple[int, float]],
    threshold: float,
) -> ConfusionCounts:
    tp = fp = fn = 0
    for case, (top_index, top_sim) in zip(cases, tops):
        answered = top_sim >= threshold
        if case.expected_index is REJECT:
            if answered:
                fp += 1
            else:
                tp += 1
        elif answered:
            if top_index == case.expected_index:
                tp += 1
            else:
                fp += 1
        else:
            fn += 1
    return ConfusionCounts(tp, fp, fn)


def evaluate(kb: KnowledgeBase, cases: list[TestCase], threshold: float) -> ConfusionCounts:
    """Score every case against the knowledge base at one threshold."""
    _validate_cases(kb, cases)
    return _tally(cases, _top_matches(kb, cases), threshold)


def threshold_sweep(
    kb: KnowledgeBase,
    cases: list[TestCase],
    thresholds: list[float],
) -> list[BenchmarkResult]:
    """One BenchmarkResult per threshold; similarities are computed once."""
    _validate_cases(kb, cases)
    tops = _top_matches(kb, cases)
    results = []
    for t in thresholds:
        counts = _tally(cases, tops, t)
        results.append(BenchmarkResult(
            threshold=t,
            precision=precision(counts),
            recall=recall(counts),
            f1=f1(counts),
            counts=counts,
        ))
    return results


CURVE_HEADER = ["threshold", "precision", "recall", "f1"]


def export_curve(results: list[BenchmarkResult], path) -> None:
    """Write the sweep as a CSV table: threshold,precision,recall,f1."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CURVE_HEADER)
    for r in results:
        writer.writerow([
            repr(float(r.threshold)), repr(float(r.precision)),
            repr(float(r.recall)), repr(float(r.f1)),
        ])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


TESTSET_HEADER = ["test_question", "expected_question"]


def load_testset(path, kb: KnowledgeBase) -> list[TestCase]:
    """Read a CSV test set and bind expected questions to kb indices.

    Columns: ``test_question, expected_question``. An empty
    ``expected_question`` marks an off-corpus case that must be rejected.
    Expected questions are matched to the knowledge base by normalized
    text, which is stabler than numeric indices across re-parses.
    """
    by_text = {
        normalize_text(p.question): p.index for p in kb.pairs
    }
    cases = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != TESTSET_HEADER:
            raise InvalidCase(
                f"test set must start with header {','.join(TESTSET_HEADER)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise InvalidCase(f"line {lineno}: expected 2 columns, got {len(row)}")
            test_q, expected_q = row[0], normalize_text(row[1])
            if not expected_q:
                cases.append(TestCase(test_q, REJECT))
                continue
            if expected_q not in by_text:
                raise InvalidCase(
                    f"line {lineno}: expected question not in knowledge base: "
                    f"{expected_q!r}"
                )
            cases.append(TestCase(test_q, by_text[expected_q]))
    return cases
