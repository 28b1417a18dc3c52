"""Diversity metrics: BLEU between original and synthetic target sentences,
and cosine similarity between their sentence embeddings.

BLEU here is a self-contained diagnostic, not a claim of parity with any
external scorer: tokenization splits on Unicode punctuation without
lowercasing, sentence-level scores apply add-one smoothing to zero-count
higher-order precisions, and corpus-level scores pool statistics with no
smoothing. Scores are scaled to [0, 100].

The embedding side is a seam: vectors come either from an imported
``sentence<TAB>v1,v2,...,vd`` file or from a deterministic mock that
L2-normalizes hashed character-trigram counts into 256 dimensions.
"""

from __future__ import annotations

import math
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .corpus_io import Corpus, SentencePair
from .errors import CorpusError, MissingEmbeddingError

MOCK_EMBEDDING_DIM = 256

_BLEU_ORDER = 4
_WEIGHT = 1.0 / _BLEU_ORDER


def tokenize(sentence: str) -> list[str]:
    """Split on whitespace after isolating every Unicode punctuation
    character as its own token. No lowercasing."""
    parts = []
    for ch in sentence:
        if unicodedata.category(ch).startswith("P"):
            parts.append(f" {ch} ")
        else:
            parts.append(ch)
    return "".join(parts).split()


def _ngram_counts(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _clipped_matches(hyp: Counter, ref: Counter) -> int:
    return sum(min(count, ref[gram]) for gram, count in hyp.items())


def sentence_bleu(hypothesis: str, reference: str) -> float:
    """Smoothed sentence-level BLEU-4 in [0, 100].

    Geometric mean of modified 1..4-gram precisions with uniform weights,
    times the brevity penalty exp(1 - r/c) for c <= r. A zero-count
    precision of order >= 2 gets 1 added to numerator and denominator;
    a zero unigram precision makes the whole score 0.
    """
    hyp = tokenize(hypothesis)
    ref = tokenize(reference)
    if not hyp or not ref:
        return 0.0
    log_sum = 0.0
    for n in range(1, _BLEU_ORDER + 1):
        hyp_counts = _ngram_counts(hyp, n)
        numerator = _clipped_matches(hyp_counts, _ngram_counts(ref, n))
        denominator = sum(hyp_counts.values())
        if n == 1:
            if numerator == 0:
                return 0.0
        elif numerator == 0:
            numerator += 1
            denominator += 1
        log_sum += _WEIGHT * math.log(numerator / denominator)
    c, r = len(hyp), len(ref)
    brevity = 1.0 if c > r else math.exp(1.0 - r / c)
    return 100.0 * brevity * math.exp(log_sum)


def corpus_bleu(pairs: list[tuple[str, str]]) -> float:
    """Corpus-level BLEU-4 in [0, 100]: n-gram statistics and lengths are
    pooled over all pairs before the geometric mean; no smoothing."""
    if not pairs:
        raise ValueError("corpus_bleu requires at least one (hypothesis, reference) pair")
    tokenized = [(tokenize(h), tokenize(r)) for h, r in pairs]
    log_sum = 0.0
    for n in range(1, _BLEU_ORDER + 1):
        numerator = 0
        denominator = 0
        for hyp, ref in tokenized:
            hyp_counts = _ngram_counts(hyp, n)
            numerator += _clipped_matches(hyp_counts, _ngram_counts(ref, n))
            denominator += sum(hyp_counts.values())
        if numerator == 0 or denominator == 0:
            return 0.0
        log_sum += _WEIGHT * math.log(numerator / denominator)
    c = sum(len(hyp) for hyp, _ in tokenized)
    r = sum(len(ref) for _, ref in tokenized)
    if c == 0:
        return 0.0
    brevity = 1.0 if c > r else math.exp(1.0 - r / c)
    return 100.0 * brevity * math.exp(log_sum)


@dataclass(frozen=True)
class Embedding:
    """A fixed-length sentence vector plus where it came from."""

    vector: tuple[float, ...]
    dim: int
    source: str  # "file_import" or "mock"

    def __post_init__(self):
        if len(self.vector) != self.dim:
            raise ValueError(
                f"vector length {len(self.vector)} does not match dim {self.dim}"
            )
        if not all(math.isfinite(v) for v in self.vector):
            raise ValueError("embedding components must be finite")


def cosine(a: Embedding, b: Embedding) -> float:
    """dot(a, b) / (|a| * |b|); dimensions must match, zero vectors rejected."""
    if a.dim != b.dim:
        raise ValueError(f"embedding dimension mismatch: {a.dim} vs {b.dim}")
    norm_a = math.sqrt(math.fsum(v * v for v in a.vector))
    norm_b = math.sqrt(math.fsum(v * v for v in b.vector))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("cosine is undefined for a zero vector")
    dot = math.fsum(x * y for x, y in zip(a.vector, b.vector))
    return dot / (norm_a * norm_b)


def _fnv1a_32(text: str) -> int:
    h = 0x811C9DC5
    for ch in text:
        h = ((h ^ ord(ch)) * 0x01000193) & 0xFFFFFFFF
    return h


def _char_trigrams(sentence: str) -> list[str]:
    if len(sentence) < 3:
        return [sentence]
    return [sentence[i : i + 3] for i in range(len(sentence) - 2)]


def mock_embedding(sentence: str) -> Embedding:
    """L2-normalized 256-dim vector of hashed character-trigram counts."""
    if not sentence:
        raise ValueError("cannot embed an empty sentence")
    counts = [0.0] * MOCK_EMBEDDING_DIM
    for gram in _char_trigrams(sentence):
        counts[_fnv1a_32(gram) % MOCK_EMBEDDING_DIM] += 1.0
    norm = math.sqrt(math.fsum(v * v for v in counts))
    return Embedding(
        vector=tuple(v / norm for v in counts),
        dim=MOCK_EMBEDDING_DIM,
        source="mock",
    )


class MockEmbeddingProvider:
    """Deterministic offline stand-in for a real sentence encoder."""

    name = "mock"

    def embed(self, sentence: str) -> Embedding:
        return mock_embedding(sentence)


class FileEmbeddingProvider:
    """Exact-match lookup into a precomputed-vector import file."""

    name = "file_import"

    def __init__(self, table: dict[str, tuple[float, ...]], dim: int):
        self.table = table
        self.dim = dim

    @classmethod
    def from_path(cls, path: str | Path) -> "FileEmbeddingProvider":
        """Parse ``sentence<TAB>v1,v2,...,vd`` lines; d must be constant."""
        table: dict[str, tuple[float, ...]] = {}
        dim: int | None = None
        for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").split("\n"), start=1
        ):
            if not line.strip():
                continue
            if "\t" not in line:
                raise CorpusError("embedding record needs sentence<TAB>values", lineno)
            sentence, values = line.split("\t", 1)
            try:
                vector = tuple(float(v) for v in values.split(","))
            except ValueError as exc:
                raise CorpusError(f"bad embedding component: {exc}", lineno) from exc
            if dim is None:
                dim = len(vector)
            elif len(vector) != dim:
                raise CorpusError(
                    f"expected {dim} components, found {len(vector)}", lineno
                )
            table[sentence] = vector
        return cls(table=table, dim=dim or 0)

    def embed(self, sentence: str) -> Embedding:
        if sentence not in self.table:
            raise MissingEmbeddingError(sentence)
        return Embedding(
            vector=self.table[sentence], dim=self.dim, source="file_import"
        )


def embed(sentence: str, provider) -> Embedding:
    """Embed through whichever provider the caller selected."""
    return provider.embed(sentence)


@dataclass
class DiversityReport:
    """Per-pair and aggregate similarity between synthetics and originals."""

    strategy: str
    pair_count: int
    mean_cosine: float
    mean_sentence_bleu: float
    corpus_level_bleu: float
    per_pair: list[tuple[str, float, float]]  # (synthetic_id, cosine, bleu)
    config_echo: dict = field(default_factory=dict)


def diversity_report(
    originals: Corpus,
    synthetics: list[SentencePair],
    provider,
    config_echo: dict | None = None,
) -> DiversityReport:
    """Compare each synthetic target sentence against its parent's target.

    Cosine runs over embeddings from ``provider``; BLEU takes the
    synthetic as hypothesis and the original as reference. Per-pair rows
    are sorted by synthetic id so aggregates are order-independent.
    """
    if not synthetics:
        raise ValueError("diversity report requires at least one synthetic pair")
    parents = {p.id: p for p in originals.pairs if p.is_original}
    rows = []
    bleu_pairs = []
    for pair in sorted(synthetics, key=lambda p: p.id):
        parent = parents.get(pair.parent_id)
        if parent is None:
            raise CorpusError(
                f"synthetic pair {pair.id!r} references missing original "
                f"{pair.parent_id!r}"
            )
        cos = cosine(provider.embed(pair.target), provider.embed(parent.target))
        bleu = sentence_bleu(pair.target, parent.target)
        rows.append((pair.id, cos, bleu))
        bleu_pairs.append((pair.target, parent.target))
    origins = sorted({p.origin for p in synthetics})
    return DiversityReport(
        strategy="+".join(origins),
        pair_count=len(rows),
        mean_cosine=math.fsum(r[1] for r in rows) / len(rows),
        mean_sentence_bleu=math.fsum(r[2] for r in rows) / len(rows),
        corpus_level_bleu=corpus_bleu(bleu_pairs),
        per_pair=rows,
        config_echo=dict(config_echo or {}),
    )
