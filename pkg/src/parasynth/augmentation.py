"""Pair-construction algebra and ratio-controlled sampling.

Three combiners turn parsed variants into synthetic pairs:

* paraphrase: the Cartesian product of original-plus-source-variants with
  original-plus-target-variants, minus the (original, original) cell, so
  (n_s+1)(n_t+1) - 1 pairs;
* multi-target: one pair per alternative translation, n pairs;
* storytelling: one pair per aligned story sentence, k pairs.

Sampling to a ratio is stratified round-robin over parents in id order,
so per-parent counts never differ by more than one, and is fully
deterministic: the seed only picks the starting parent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .corpus_io import (
    ORIGIN_MULTI_TARGET,
    ORIGIN_PARAPHRASE,
    ORIGIN_STORYTELLING,
    SentencePair,
)
from .errors import InsufficientPoolError
from .prompt_engine import Strategy


@dataclass
class SyntheticPool:
    """All synthetic pairs generated for a corpus, grouped by parent."""

    by_parent: dict[str, list[SentencePair]] = field(default_factory=dict)
    strategy: Strategy | None = None
    seed: int = 0

    def add(self, pairs: list[SentencePair]) -> None:
        for pair in pairs:
            self.by_parent.setdefault(pair.parent_id, []).append(pair)

    def size(self) -> int:
        return sum(len(v) for v in self.by_parent.values())


def combine_paraphrase(
    original: SentencePair,
    src_variants: list[str],
    tgt_variants: list[str],
) -> list[SentencePair]:
    """All cross-combinations of paraphrased sides, original cell excluded.

    Index 0 on either side means the original sentence was kept; the
    derivation records the (i, j) cell. Variant lists are assumed not to
    contain the original sentence verbatim (the pipeline drops those).
    """
    sources = [original.source] + list(src_variants)
    targets = [original.target] + list(tgt_variants)
    out = []
    for i, src in enumerate(sources):
        for j, tgt in enumerate(targets):
            if i == 0 and j == 0:
                continue
            out.append(
                SentencePair(
                    id=f"{original.id}.p{i}.{j}",
                    source=src,
                    target=tgt,
                    src_lang=original.src_lang,
                    tgt_lang=original.tgt_lang,
                    origin=ORIGIN_PARAPHRASE,
                    parent_id=original.id,
                    derivation={"i": i, "j": j},
                )
            )
    return out


def combine_multi_target(
    original: SentencePair, translations: list[str]
) -> list[SentencePair]:
    """One pair per alternative translation of the original source.

    A translation identical to the original target is kept but flagged
    ``duplicate_of_original`` in its derivation so downstream filters can
    see it without the count changing.
    """
    out = []
    for k, translation in enumerate(translations):
        derivation: dict = {"k": k}
        if translation == original.target:
            derivation["duplicate_of_original"] = True
        out.append(
            SentencePair(
                id=f"{original.id}.m{k}",
                source=original.source,
                target=translation,
                src_lang=original.src_lang,
                tgt_lang=original.tgt_lang,
                origin=ORIGIN_MULTI_TARGET,
                parent_id=original.id,
                derivation=derivation,
            )
        )
    return out


def combine_storytelling(
    original: SentencePair, story_pairs: list[tuple[str, str]]
) -> list[SentencePair]:
    """One pair per aligned (story sentence, translation); the original
    sentence itself is never among the outputs."""
    out = []
    for k, (src, tgt) in enumerate(story_pairs):
        out.append(
            SentencePair(
                id=f"{original.id}.s{k}",
                source=src,
                target=tgt,
                src_lang=original.src_lang,
                tgt_lang=original.tgt_lang,
                origin=ORIGIN_STORYTELLING,
                parent_id=original.id,
                derivation={"k": k},
            )
        )
    return out


def ratio_target(original_count: int, ratio: float) -> int:
    """Synthetic-pair target for a ratio, rounded half-up."""
    return math.floor(ratio * original_count + 0.5)


def sample_to_ratio(
    pool: SyntheticPool, original_count: int, ratio: float, seed: int = 0
) -> list[SentencePair]:
    """Select round(ratio * original_count) pairs by stratified round-robin.

    Parents are visited in id order starting at ``seed mod parent-count``,
    each visit taking the parent's next unused pair in derivation order and
    cycling until the target is reached. Exhausted parents are skipped, so
    per-parent counts differ by at most one when the pool is balanced.
    """
    if ratio <= 0:
        raise ValueError(f"ratio must be positive, got {ratio}")
    if original_count <= 0:
        raise ValueError(f"original_count must be positive, got {original_count}")
    target = ratio_target(original_count, ratio)
    available = pool.size()
    if available < target:
        raise InsufficientPoolError(available=available, required=target)

    parents = sorted(pool.by_parent)
    cursors = {p: 0 for p in parents}
    selected: list[SentencePair] = []
    i = seed % len(parents) if parents else 0
    while len(selected) < target:
        parent = parents[i % len(parents)]
        queue = pool.by_parent[parent]
        cursor = cursors[parent]
        if cursor < len(queue):
            selected.append(queue[cursor])
            cursors[parent] = cursor + 1
        i += 1
    return selected
