"""Heuristic extraction of question/answer pairs from arbitrary FAQ pages.

The pipeline needs nothing but the raw HTML. It finds the innermost
elements containing a question mark, votes on their structural signature
(tag, up to three ancestor tags, DOM depth) to identify the question
pattern, infers how far above each question the per-question container
sits, and then collects answer text from the region between consecutive
questions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .dom import DomNode, normalize_text, parse_html
from .errors import NoMatches, TooFewCandidates, TooFewQuestions

_ANCESTOR_WINDOW = 3


@dataclass(frozen=True)
class ElementSignature:
    """Structural fingerprint used for majority voting.

    ``ancestor_tags`` lists up to three ancestor element names, nearest
    first; shorter only when the element sits close to the root.
    """

    tag: str
    ancestor_tags: tuple[str, ...]
    depth: int

    @classmethod
    def of(cls, node: DomNode) -> "ElementSignature":
        ancestors = tuple(
            a.tag for a in node.ancestors() if a.is_element
        )[:_ANCESTOR_WINDOW]
        return cls(tag=node.tag, ancestor_tags=ancestors, depth=node.depth)


@dataclass(frozen=True)
class QaPair:
    question: str
    answer: str
    index: int
    source_url: Optional[str] = None


@dataclass
class ParseReport:
    """Diagnostics plus the extracted pairs for one parsed page."""

    candidate_count: int
    winning_signature: ElementSignature
    winning_votes: int
    answer_scope_distance: int
    pairs: list[QaPair]
    empty_answer_indices: list[int] = field(default_factory=list)


def find_question_candidates(tree: DomNode) -> list[DomNode]:
    """Innermost elements whose subtree text contains a question mark.

    Duplicate normalized texts are dropped, keeping the first occurrence
    in document order.
    """
    questionable: set[int] = set()  # ids of elements with '?' in subtree text
    for el in tree.iter_elements():
        if el.tag in ("html", "body", "head"):
            continue
        if "?" in el.subtree_text():
            questionable.add(id(el))

    candidates = []
    seen_texts: set[str] = set()
    for el in tree.iter_elements():
        if id(el) not in questionable:
            continue
        if any(id(c) in questionable for c in el.children if c.is_element):
            continue
        text = el.subtree_text()
        if text in seen_texts:
            continue
        seen_texts.add(text)
        candidates.append(el)
    return candidates


def infer_question_pattern(candidates: list[DomNode]) -> ElementSignature:
    """Majority-vote signature over the candidates.

    Ties are broken by the signature whose earliest member appears first
    in document order, so the result is deterministic.
    """
    if len(candidates) < 2:
        raise TooFewCandidates(
            f"{len(candidates)} question candidate(s); page is not FAQ-like"
        )
    votes = Counter(ElementSignature.of(c) for c in candidates)
    first_order = {}
    for c in candidates:
        sig = ElementSignature.of(c)
        if sig not in first_order:
            first_order[sig] = c.doc_order
    return max(votes, key=lambda s: (votes[s], -first_order[s]))


def extract_questions(tree: DomNode, signature: ElementSignature) -> list[DomNode]:
    """All elements matching the signature, in document order.

    Matching deliberately ignores whether the text contains a question
    mark: FAQ entries phrased as recommendations still share the pattern.
    """
    matches = [
        el for el in tree.iter_elements()
        if ElementSignature.of(el) == signature
    ]
    if not matches:
        raise NoMatches(f"no element matches signature {signature}")
    return matches


def _scope_ancestor(question: DomNode, hops: int) -> DomNode:
    node = question
    for _ in range(hops):
        if node.parent is None or not node.parent.is_element:
            break
        node = node.parent
    return node


def infer_answer_scope(questions: list[DomNode]) -> int:
    """Majority hop count to the uppermost ancestor excluding the next question.

    Distance 0 means the question element itself is already the whole
    per-question container (flat sibling layouts). Ties prefer the
    smaller distance to minimize cross-question bleed.
    """
    if len(questions) < 2:
        raise TooFewQuestions("answer scope needs at least two questions")
    distances = []
    for q, nxt in zip(questions, questions[1:]):
        hops = 0
        node = q
        while (
            node.parent is not None
            and node.parent.is_element
            and not node.parent.contains(nxt)
        ):
            node = node.parent
            hops += 1
        distances.append(hops)
    votes = Counter(distances)
    return max(votes, key=lambda d: (votes[d], -d))


def _text_bounds(node: DomNode) -> tuple[int, int]:
    """(first, last) doc_order of content text in the subtree, or the node's own."""
    orders = [t.doc_order for t in node.text_nodes() if t.text.strip()]
    if not orders:
        return node.doc_order, node.doc_order
    return min(orders), max(orders)


def _common_container(a: DomNode, b: DomNode) -> DomNode:
    chain = [a] + list(a.ancestors())
    ids = {id(n): n for n in chain}
    for node in [b] + list(b.ancestors()):
        if id(node) in ids:
            return node
    return chain[-1]


def _branch_of(container: DomNode, node: DomNode) -> Optional[DomNode]:
    """The child of ``container`` on the path down to ``node``."""
    prev = node
    for anc in node.ancestors():
        if anc is container:
            return prev
        prev = anc
    return None


def extract_qa_pairs(
    tree: DomNode,
    questions: list[DomNode],
    scope_distance: int,
    source_url: Optional[str] = None,
) -> tuple[list[QaPair], list[int]]:
    """Collect each answer from the text region between consecutive questions.

    The region spans text nodes strictly after the question's own text and
    strictly before the next question's text, limited to the common
    container of the two per-question scopes. Text sitting on the branch
    leading to the next question (e.g. the next topic's section header) is
    excluded. Returns the pairs plus the indices of empty answers.
    """
    texts = [t for t in tree.text_nodes() if t.text.strip()]
    pairs: list[QaPair] = []
    empty: list[int] = []
    n = len(questions)
    for i, q in enumerate(questions):
        scope = _scope_ancestor(q, scope_distance)
        _, after = _text_bounds(q)
        if i + 1 < n:
            nxt = questions[i + 1]
            next_scope = _scope_ancestor(nxt, scope_distance)
            before, _ = _text_bounds(nxt)
            container = _common_container(scope, next_scope)
            exclude = None
            if container is not scope and container is not next_scope:
                exclude = _branch_of(container, nxt)
        else:
            nxt = None
            container = scope.parent if scope.parent is not None else scope
            _, before = _text_bounds(container)
            before += 1
            exclude = None
        chunks = []
        for t in texts:
            if not (after < t.doc_order < before):
                continue
            if not container.contains(t):
                continue
            if exclude is not None and exclude.contains(t):
                continue
            chunks.append(t.text)
        answer = normalize_text(" ".join(chunks))
        question_text = q.subtree_text()
        if not answer:
            empty.append(i)
        pairs.append(QaPair(question_text, answer, i, source_url))
    return pairs, empty


def parse_faq(html: str | bytes, source_url: Optional[str] = None) -> ParseReport:
    """Full pipeline: parse, vote on the pattern, scope and extract answers.

    Deterministic: identical input bytes yield an identical report.
    """
    tree = parse_html(html)
    candidates = find_question_candidates(tree)
    signature = infer_question_pattern(candidates)
    questions = extract_questions(tree, signature)
    scope = infer_answer_scope(questions)
    pairs, empty = extract_qa_pairs(tree, questions, scope, source_url)
    return ParseReport(
        candidate_count=len(candidates),
        winning_signature=signature,
        winning_votes=sum(
            1 for c in candidates if ElementSignature.of(c) == signature
        ),
        answer_scope_distance=scope,
        pairs=pairs,
        empty_answer_indices=empty,
    )
