"""Exception hierarchy shared across the package."""


class FaqwiseError(Exception):
    """Base class for all errors raised by this package."""


class EmptyDocument(FaqwiseError):
    """The HTML input produced no content at all."""


class TooFewCandidates(FaqwiseError):
    """Fewer than two question-mark candidates; the page is not FAQ-like."""


class NoMatches(FaqwiseError):
    """A question signature matched no element in the tree."""


class TooFewQuestions(FaqwiseError):
    """Answer-scope inference needs at least two questions."""


class UnknownEmbedder(FaqwiseError):
    """Embedder id is not registered."""


class FormatError(FaqwiseError):
    """A model or embedding file violates the on-disk schema.

    ``offset`` is a byte offset into the file when the failure is a
    syntax error; ``field`` names the offending field for semantic errors.
    """

    def __init__(self, reason, offset=None, field=None):
        self.reason = reason
        self.offset = offset
        self.field = field
        parts = [reason]
        if field is not None:
            parts.append(f"field={field}")
        if offset is not None:
            parts.append(f"byte_offset={offset}")
        super().__init__("; ".join(parts))


class DimensionMismatch(FaqwiseError):
    """Vectors of different dimensions were combined."""


class EmptyKnowledgeBase(FaqwiseError):
    """Matching was attempted against a knowledge base with no entries."""


class InvalidCase(FaqwiseError):
    """A test case references a knowledge-base index that does not exist."""


class EngineTimeout(FaqwiseError):
    """The external knowledge engine did not respond within the budget."""


class EngineError(FaqwiseError):
    """The external knowledge engine returned a non-2xx status."""

    def __init__(self, status, body=""):
        self.status = status
        self.body = body
        super().__init__(f"engine returned status {status}")


class AmbiguousResponse(FaqwiseError):
    """Engine response has several keys and no response key is configured."""


class MalformedResponse(FaqwiseError):
    """Engine response body is not a usable key-value structure."""


class FetchError(FaqwiseError):
    """A page fetch failed at transport level or with an error status."""

    def __init__(self, message, status=None):
        self.status = status
        super().__init__(message)


class TooManyRedirects(FetchError):
    """Redirect chain exceeded the allowed length."""

    def __init__(self, message):
        super().__init__(message)
