"""Chat-completion dispatch with retries, rate limiting, and a disk cache.

Requests go to ``{base_url}/chat/completions`` as a single user message;
the reply is ``choices[0].message.content``. Transient failures (HTTP 429,
5xx, timeouts) are retried with exponential backoff and full jitter;
other 4xx statuses fail permanently without a retry. Every successful
reply is stored in a content-addressed disk cache keyed by the decoding
parameters and prompt text, so an immediate re-run of the same job is
answered entirely from disk.

A deterministic mock provider keeps the whole pipeline runnable offline.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import tempfile
import threading
import time
from dataclasses import dataclass

import requests

from .errors import (
    EmptyCompletionError,
    PermanentProviderError,
    TransientExhaustedError,
)
from .prompt_engine import STORYTELLING, PromptText

ENV_API_KEY = "PARASYNTH_API_KEY"
DEFAULT_CACHE_DIR = ".parasynth-cache"

_BACKOFF_BASE_SECONDS = 1.0
_BACKOFF_FACTOR = 2.0


@dataclass(frozen=True)
class ProviderConfig:
    """Endpoint address plus decoding and dispatch parameters."""

    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-3.5-turbo"
    temperature: float = 1.0
    max_output_tokens: int = 512
    request_timeout: float = 30.0
    max_retries: int = 3
    max_concurrency: int = 4
    requests_per_minute: int | None = None  # None = unlimited

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature must be in [0, 2], got {self.temperature}")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")
        if self.max_concurrency < 1:
            raise ValueError("max_concurrency must be >= 1")
        if self.requests_per_minute is not None and self.requests_per_minute < 1:
            raise ValueError("requests_per_minute must be positive or None")


@dataclass(frozen=True)
class CompletionResult:
    """One model reply plus how it was obtained."""

    prompt: PromptText
    raw_text: str
    model: str
    cached: bool = False
    attempts: int = 1

    def __post_init__(self):
        if not self.raw_text:
            raise ValueError("completion text must be non-empty")
        if self.cached and self.attempts != 0:
            raise ValueError("cached results record zero attempts")
        if not self.cached and self.attempts < 1:
            raise ValueError("fresh results record at least one attempt")


def cache_key(config: ProviderConfig, prompt: PromptText) -> str:
    """Digest over (model, temperature, max tokens, prompt text) only, so
    keys survive endpoint moves and timing/retry tweaks."""
    material = "\n".join(
        [
            config.model,
            repr(config.temperature),
            str(config.max_output_tokens),
            prompt.text,
        ]
    )
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


class ResponseCache:
    """One file per key under a directory; writes are atomic."""

    def __init__(self, directory: str | os.PathLike):
        self.directory = str(directory)
        os.makedirs(self.directory, exist_ok=True)

    def path_for(self, key: str) -> str:
        return os.path.join(self.directory, key)

    def get(self, key: str) -> str | None:
        path = self.path_for(key)
        if not os.path.exists(path):
            return None
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()

    def put(self, key: str, text: str) -> None:
        fd, tmp_path = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp_path, self.path_for(key))
        finally:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)


class TokenBucket:
    """Thread-safe limiter averaging ``per_minute`` acquisitions.

    Capacity is one second's worth of tokens, so bursts stay small and
    the long-run rate converges on the configured requests per minute.
    """

    def __init__(self, per_minute: int, time_fn=time.monotonic, sleep_fn=time.sleep):
        self.rate = per_minute / 60.0
        self.capacity = max(1.0, self.rate)
        self.tokens = self.capacity
        self._time = time_fn
        self._sleep = sleep_fn
        self._lock = threading.Lock()
        self._last = self._time()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._time()
                self.tokens = min(self.capacity, self.tokens + (now - self._last) * self.rate)
                self._last = now
                if self.tokens >= 1.0:
                    self.tokens -= 1.0
                    return
                wait = (1.0 - self.tokens) / self.rate
            self._sleep(wait)


class TransientTransportError(Exception):
    """Raised by transports for timeouts and connection drops."""


def http_transport(config: ProviderConfig, prompt: PromptText, payload: dict):
    """POST the payload to the chat-completions endpoint.

    Returns (status_code, body_text). The bearer token, when present,
    comes from the environment only.
    """
    headers = {"Content-Type": "application/json"}
    api_key = os.environ.get(ENV_API_KEY)
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    url = config.base_url.rstrip("/") + "/chat/completions"
    try:
        response = requests.post(
            url, json=payload, headers=headers, timeout=config.request_timeout
        )
    except (requests.Timeout, requests.ConnectionError) as exc:
        raise TransientTransportError(str(exc)) from exc
    return response.status_code, response.text


def _parse_completion_body(body: str) -> str:
    try:
        data = json.loads(body)
        content = data["choices"][0]["message"]["content"]
    except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
        raise PermanentProviderError(
            f"malformed completion response: {exc}", status=200, body=body
        ) from exc
    if not isinstance(content, str) or not content.strip():
        raise EmptyCompletionError("endpoint returned an empty completion")
    return content


class ChatCompletionClient:
    """Shared, thread-safe dispatcher for one provider configuration.

    ``transport`` is injectable for tests and for the offline mock; the
    semaphore and token bucket are the only mutable shared state.
    """

    def __init__(
        self,
        config: ProviderConfig,
        cache_dir: str | os.PathLike | None = None,
        transport=None,
        sleep_fn=time.sleep,
        time_fn=time.monotonic,
    ):
        self.config = config
        self.cache = ResponseCache(cache_dir) if cache_dir is not None else None
        self.transport = transport or http_transport
        self._sleep = sleep_fn
        self._slots = threading.BoundedSemaphore(config.max_concurrency)
        self._bucket = (
            TokenBucket(config.requests_per_minute, time_fn=time_fn, sleep_fn=sleep_fn)
            if config.requests_per_minute is not None
            else None
        )

    def complete(self, prompt: PromptText) -> CompletionResult:
        """Answer from cache when possible, else dispatch with retries."""
        key = cache_key(self.config, prompt)
        if self.cache is not None:
            hit = self.cache.get(key)
            if hit is not None:
                return CompletionResult(
                    prompt=prompt,
                    raw_text=hit,
                    model=self.config.model,
                    cached=True,
                    attempts=0,
                )
        text, attempts = self._request_with_retries(prompt)
        if self.cache is not None:
            self.cache.put(key, text)
        return CompletionResult(
            prompt=prompt,
            raw_text=text,
            model=self.config.model,
            cached=False,
            attempts=attempts,
        )

    def _request_with_retries(self, prompt: PromptText) -> tuple[str, int]:
        payload = {
            "model": self.config.model,
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_output_tokens,
            "messages": [{"role": "user", "content": prompt.text}],
        }
        attempts = 0
        while True:
            attempts += 1
            if self._bucket is not None:
                self._bucket.acquire()
            failure: str
            try:
                with self._slots:
                    status, body = self.transport(self.config, prompt, payload)
            except TransientTransportError as exc:
                failure = f"transport failure: {exc}"
            else:
                if status == 200:
                    return _parse_completion_body(body), attempts
                if status == 429 or 500 <= status < 600:
                    failure = f"HTTP {status}"
                else:
                    raise PermanentProviderError(
                        f"HTTP {status} from completion endpoint",
                        status=status,
                        body=body,
                    )
            if attempts > self.config.max_retries:
                raise TransientExhaustedError(
                    f"gave up after {attempts} attempts ({failure})", attempts=attempts
                )
            backoff = _BACKOFF_BASE_SECONDS * (_BACKOFF_FACTOR ** (attempts - 1))
            self._sleep(random.uniform(0.0, backoff))


def complete(
    config: ProviderConfig,
    prompt: PromptText,
    cache_dir: str | os.PathLike | None = None,
    transport=None,
) -> CompletionResult:
    """One-shot convenience wrapper around :class:`ChatCompletionClient`."""
    return ChatCompletionClient(config, cache_dir=cache_dir, transport=transport).complete(prompt)


# ---------------------------------------------------------------------------
# Deterministic mock provider
# ---------------------------------------------------------------------------

_SYNONYMS = {
    "viel": "reichlich",
    "möchten": "wollen",
    "haben": "besitzen",
    "gerne": "gern",
    "Geld": "Kapital",
    "much": "plenty",
    "want": "wish",
}
_FILLERS = ("wohl", "eben", "doch", "gleich", "etwa", "halt")
_TRANSLATION_WORDS = (
    "die", "eine", "kleine", "Geschichte", "beginnt", "hier",
    "und", "geht", "ruhig", "weiter", "bis", "zum", "Ende",
)


def _prompt_seed(prompt_text: str) -> int:
    return int.from_bytes(hashlib.sha256(prompt_text.encode("utf-8")).digest()[:8], "big")


def _vary(sentence: str, seed: int, index: int) -> str:
    """Shuffle tokens and swap synonyms; never return the input verbatim."""
    rng = random.Random(seed * 1000003 + index)
    tokens = sentence.split()
    if len(tokens) > 1:
        rotation = 1 + rng.randrange(len(tokens) - 1)
        tokens = tokens[rotation:] + tokens[:rotation]
    tokens = [_SYNONYMS.get(token, token) for token in tokens]
    variant = " ".join(tokens)
    if variant == sentence:
        variant = f"{variant} {_FILLERS[index % len(_FILLERS)]}"
    return variant


def _pseudo_translation(rng: random.Random, index: int) -> str:
    words = " ".join(rng.choice(_TRANSLATION_WORDS) for _ in range(5))
    return f"Die Zeile {index + 1} sagt {words}."


def mock_reply(prompt: PromptText) -> str:
    """A syntactically valid reply for the prompt's strategy.

    Variant strategies get exactly n numbered lines; storytelling gets a
    block of n story lines, a blank line, then n translation lines. The
    same prompt text always yields byte-identical output.
    """
    sentence = prompt.text.split("\n", 1)[0]
    seed = _prompt_seed(prompt.text)
    n = prompt.strategy.n
    if prompt.strategy.kind == STORYTELLING:
        stories = [_vary(sentence, seed, i) for i in range(n)]
        rng = random.Random(seed ^ 0x5DEECE66D)
        translations = [_pseudo_translation(rng, i) for i in range(n)]
        return "\n".join(stories) + "\n\n" + "\n".join(translations)
    lines = [f"{i + 1}. {_vary(sentence, seed, i)}" for i in range(n)]
    return "\n".join(lines)


def mock_complete(prompt: PromptText) -> CompletionResult:
    """Offline completion; no network, no cache, fully deterministic."""
    return CompletionResult(
        prompt=prompt,
        raw_text=mock_reply(prompt),
        model="mock",
        cached=False,
        attempts=1,
    )


def mock_transport(config: ProviderConfig, prompt: PromptText, payload: dict):
    """Transport stand-in that answers every request with the mock reply,
    so the client's caching and accounting run unchanged offline."""
    body = json.dumps(
        {"model": config.model, "choices": [{"message": {"content": mock_reply(prompt)}}]},
        ensure_ascii=False,
    )
    return 200, body
