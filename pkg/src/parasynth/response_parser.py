"""Turn raw model replies into clean candidate sentences.

Reply formats are not standardized anywhere, so this module owns the
robustness contract: numbered or bulleted lines win over bare lines,
list markers and surrounding quotes are stripped, and story replies are
recognized in either interleaved (source, translation, source, ...) or
block (all sources, separator, all translations) layout. Parsing never
fabricates text; every output sentence is a substring of the reply after
marker and quote stripping.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import UnparseableReplyError
from .prompt_engine import Strategy

_LIST_MARKER_RE = re.compile(r"^\s*(?:\d+\s*[.)\]]|[-*•])\s+")
_QUOTE_PAIRS = {
    '"': '"',
    "'": "'",
    "“": "”",  # “ ”
    "‘": "’",  # ‘ ’
    "„": "“",  # „ “
    "«": "»",  # « »
    "「": "」",  # 「 」
}


@dataclass
class ParsedReply:
    """Cleaned sentences extracted from one reply.

    ``items`` holds strings for variant strategies and (story, translation)
    tuples for storytelling. ``warnings`` records count shortfalls or
    overruns in human-readable form.
    """

    strategy: Strategy
    items: list = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def _strip_quotes(text: str) -> str:
    while len(text) >= 2 and _QUOTE_PAIRS.get(text[0]) == text[-1]:
        text = text[1:-1].strip()
    return text


def _clean_line(line: str) -> str:
    return _strip_quotes(_LIST_MARKER_RE.sub("", line.strip(), count=1).strip())


def _candidate_lines(raw: str) -> list[str]:
    """List-marker lines if any exist, else all bare non-empty lines."""
    lines = [line for line in raw.split("\n") if line.strip()]
    marked = [line for line in lines if _LIST_MARKER_RE.match(line)]
    chosen = marked if marked else lines
    return [cleaned for cleaned in (_clean_line(line) for line in chosen) if cleaned]


def parse_variants(raw: str, expected_n: int, strategy: Strategy | None = None) -> ParsedReply:
    """Extract ``expected_n`` variant sentences from a reply.

    Over-long extractions are truncated to ``expected_n``; any deviation
    from the expected count is recorded as a warning. A reply with zero
    extractable sentences raises :class:`UnparseableReplyError`.
    """
    sentences = _candidate_lines(raw)
    if not sentences:
        raise UnparseableReplyError("no sentences could be extracted", raw)
    warnings = []
    if len(sentences) != expected_n:
        warnings.append(f"expected {expected_n} items, found {len(sentences)}")
        sentences = sentences[:expected_n]
    return ParsedReply(
        strategy=strategy or Strategy("multi_target", max(1, expected_n)),
        items=sentences,
        warnings=warnings,
    )


def _script_class(line: str) -> str | None:
    """Majority script class of a line: hangul, latin, or other/None."""
    counts = {"hangul": 0, "latin": 0, "other": 0}
    for ch in line:
        if not ch.isalpha():
            continue
        name = unicodedata.name(ch, "")
        if name.startswith("HANGUL"):
            counts["hangul"] += 1
        elif "LATIN" in name:
            counts["latin"] += 1
        else:
            counts["other"] += 1
    total = sum(counts.values())
    if total == 0:
        return None
    best = max(counts, key=counts.get)
    return best if counts[best] * 2 > total else None


def _alternates(classes: list[str | None]) -> bool:
    if len(classes) < 2 or classes[0] is None or classes[1] is None:
        return False
    if classes[0] == classes[1]:
        return False
    return all(cls == classes[i % 2] for i, cls in enumerate(classes))


def parse_story(raw: str, expected_k: int, strategy: Strategy | None = None) -> ParsedReply:
    """Extract aligned (story sentence, translation) pairs from a reply.

    Interleaved layout is chosen when the lines alternate between two
    script classes (e.g. Hangul and Latin); otherwise the reply is read
    as a block of sources followed by a block of translations, split at
    a blank line when present and in half when not. Mismatched counts
    pair up to the shorter side with a warning.
    """
    segments = [seg for seg in re.split(r"\n\s*\n", raw) if seg.strip()]
    lines = [cleaned for cleaned in (_clean_line(l) for l in raw.split("\n")) if cleaned]
    if not lines:
        raise UnparseableReplyError("no sentences could be extracted", raw)

    if _alternates([_script_class(line) for line in lines]):
        sources = lines[0::2]
        targets = lines[1::2]
    elif len(segments) == 2:
        sources = [c for c in (_clean_line(l) for l in segments[0].split("\n")) if c]
        targets = [c for c in (_clean_line(l) for l in segments[1].split("\n")) if c]
    else:
        half = (len(lines) + 1) // 2
        sources = lines[:half]
        targets = lines[half:]

    matched = min(len(sources), len(targets))
    pairs = list(zip(sources[:matched], targets[:matched]))
    if not pairs:
        raise UnparseableReplyError("no aligned sentence pairs found", raw)
    warnings = []
    if matched != expected_k:
        warnings.append(f"expected {expected_k} pairs, matched {matched}")
    return ParsedReply(
        strategy=strategy or Strategy("storytelling", max(1, expected_k)),
        items=pairs[:expected_k] if matched > expected_k else pairs,
        warnings=warnings,
    )


@dataclass
class RejectRecord:
    """One quarantined reply, persisted instead of aborting the run."""

    pair_id: str
    strategy: str
    raw_text: str
    reason: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "pair_id": self.pair_id,
                "strategy": self.strategy,
                "raw_text": self.raw_text,
                "reason": self.reason,
            },
            ensure_ascii=False,
        )


def write_rejects(path: str | Path, rejects: list[RejectRecord]) -> None:
    """Write the rejects sidecar (always, so reruns are byte-comparable)."""
    Path(path).write_text(
        "".join(r.to_json() + "\n" for r in rejects), encoding="utf-8"
    )
