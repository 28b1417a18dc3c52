"""Exception types shared across the toolkit."""


class ParasynthError(Exception):
    """Base class for all toolkit errors."""


class CorpusError(ParasynthError):
    """A corpus file or record violates the corpus contract.

    Carries the offending line number (1-based) when the failure is
    addressable to a specific record.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PromptError(ParasynthError):
    """A prompt could not be rendered from the given strategy and pair."""


class ProviderError(ParasynthError):
    """Base class for completion-provider failures."""


class PermanentProviderError(ProviderError):
    """Non-retryable HTTP failure (4xx other than 429, or a broken reply)."""

    def __init__(self, message: str, status: int | None = None, body: str = ""):
        super().__init__(message)
        self.status = status
        self.body = body


class TransientExhaustedError(ProviderError):
    """Retries ran out while the endpoint kept failing transiently."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class EmptyCompletionError(ProviderError):
    """The endpoint answered successfully but with an empty message."""


class UnparseableReplyError(ParasynthError):
    """No usable sentences could be extracted from a model reply."""

    def __init__(self, message: str, raw_text: str):
        super().__init__(message)
        self.raw_text = raw_text


class InsufficientPoolError(ParasynthError):
    """The synthetic pool is too small for the requested sampling ratio."""

    def __init__(self, available: int, required: int):
        super().__init__(
            f"synthetic pool has {available} pairs but the ratio requires {required}"
        )
        self.available = available
        self.required = required


class MissingEmbeddingError(ParasynthError):
    """A sentence has no vector in the imported embeddings file."""

    def __init__(self, sentence: str):
        super().__init__(f"no embedding stored for sentence: {sentence!r}")
        self.sentence = sentence
