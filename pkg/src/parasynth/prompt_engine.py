"""Render the augmentation prompt templates.

Each prompt is the embedded sentence, a single newline, then the
instruction. Templates are compiled-in constants so that renders stay
bit-exact; the CLI exposes ``dump-prompts`` for auditing them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus_io import SentencePair
from .errors import PromptError

PARAPHRASE_SRC = "paraphrase_src"
PARAPHRASE_TGT = "paraphrase_tgt"
MULTI_TARGET = "multi_target"
STORYTELLING = "storytelling"
STRATEGY_KINDS = (PARAPHRASE_SRC, PARAPHRASE_TGT, MULTI_TARGET, STORYTELLING)

# Default count per strategy kind, matching the published template wording.
DEFAULT_N = {
    PARAPHRASE_SRC: 1,
    PARAPHRASE_TGT: 1,
    MULTI_TARGET: 3,
    STORYTELLING: 3,
}

TEMPLATES = {
    PARAPHRASE_SRC: (
        "[original SRC sentence]\n"
        "Paraphrase the above sentence in [SRC language] in [N] unique [way/ways]."
    ),
    PARAPHRASE_TGT: (
        "[original TGT sentence]\n"
        "Paraphrase the above sentence in [TGT language] in [N] unique [way/ways]."
    ),
    MULTI_TARGET: (
        "[original SRC sentence]\n"
        "Translate the above sentence to [TGT language] in [N] unique [way/ways]."
    ),
    STORYTELLING: (
        "[original SRC sentence]\n"
        "Write a [K]-sentence [SRC language] story based on the above sentence, "
        "and translate each sentence into [TGT language]."
    ),
}

_NUMBER_WORDS = {
    1: "one", 2: "two", 3: "three", 4: "four", 5: "five",
    6: "six", 7: "seven", 8: "eight", 9: "nine", 10: "ten",
}


@dataclass(frozen=True)
class Strategy:
    """A strategy kind plus its count parameter.

    ``n`` means paraphrase variants per side, translation variants, or
    story sentences, depending on the kind. When omitted it takes the
    kind's template default (1 for paraphrase, 3 otherwise).
    """

    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.n is None:
            object.__setattr__(self, "n", DEFAULT_N[self.kind])
        if self.n < 1:
            raise ValueError(f"strategy count must be >= 1, got {self.n}")


@dataclass(frozen=True)
class PromptText:
    """A fully rendered prompt: sentence, one newline, instruction."""

    text: str
    strategy: Strategy
    pair_id: str


def _count_word(n: int) -> str:
    """Story sentence count: English number word up to ten, numeral above."""
    return _NUMBER_WORDS.get(n, str(n))


def render_prompt(strategy: Strategy, pair: SentencePair) -> PromptText:
    """Substitute ``pair`` into the template for ``strategy``.

    paraphrase_src embeds the source sentence and source language;
    paraphrase_tgt embeds the target sentence and target language;
    multi_target and storytelling embed the source sentence.
    """
    if strategy.kind not in TEMPLATES:
        raise PromptError(f"unknown strategy kind {strategy.kind!r}")
    if strategy.n < 1:
        raise PromptError(f"strategy count must be >= 1, got {strategy.n}")
    if not pair.source or not pair.target:
        raise PromptError(f"pair {pair.id}: both sentences must be non-empty")

    text = TEMPLATES[strategy.kind]
    text = text.replace("[original SRC sentence]", pair.source)
    text = text.replace("[original TGT sentence]", pair.target)
    text = text.replace("[SRC language]", pair.src_lang.code)
    text = text.replace("[TGT language]", pair.tgt_lang.code)
    text = text.replace("[N]", str(strategy.n))
    text = text.replace("[K]", _count_word(strategy.n))
    text = text.replace("[way/ways]", "way" if strategy.n == 1 else "ways")
    return PromptText(text=text, strategy=strategy, pair_id=pair.id)


def template_catalog() -> dict[str, str]:
    """Raw templates with placeholders intact, for auditing."""
    return dict(TEMPLATES)
