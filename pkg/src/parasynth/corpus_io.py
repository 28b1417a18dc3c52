"""Load, validate, and persist parallel corpora.

Two on-disk formats are supported:

* JSONL, the canonical lossless format: one object per line with keys
  ``id, source, target, src_lang, tgt_lang, origin, parent_id, derivation``.
* TSV, a lossy convenience export: ``id<TAB>source<TAB>target``, UTF-8,
  ``\\n`` line endings, no header. A two-column line (source, target) is
  also accepted on load, in which case an id is synthesized from the line
  ordinal as ``L<7-digit ordinal>``.

Writing is byte-deterministic: the same corpus always serializes to the
same bytes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusError

ORIGIN_ORIGINAL = "original"
ORIGIN_PARAPHRASE = "paraphrase"
ORIGIN_MULTI_TARGET = "multi_target"
ORIGIN_STORYTELLING = "storytelling"
ORIGINS = (
    ORIGIN_ORIGINAL,
    ORIGIN_PARAPHRASE,
    ORIGIN_MULTI_TARGET,
    ORIGIN_STORYTELLING,
)

_ISO_RE = re.compile(r"^[a-z]{2,3}$")
_LINEBREAK_RE = re.compile(r"[ \t]*[\r\n  ]+[ \t]*")



def normalize_sentence(text: str) -> str:
    """Trim the ends and collapse internal line breaks to single spaces."""
    return _LINEBREAK_RE.sub(" ", text).strip()


@dataclass(frozen=True)
class LanguageTag:
    """A language named the way prompts spell it, plus a short file code."""

    code: str  # human-readable name used verbatim in prompts, e.g. "Korean"
    iso: str  # lowercase two- or three-letter code for file naming

    def __post_init__(self):
        if not self.code or "\n" in self.code or "\r" in self.code:
            raise ValueError(f"language code must be non-empty, single-line: {self.code!r}")
        if not _ISO_RE.match(self.iso):
            raise ValueError(f"iso tag must match [a-z]{{2,3}}: {self.iso!r}")


# Fallbacks when a format cannot carry language tags (TSV, empty files)
# and the caller does not supply them.
DEFAULT_SRC_LANG = LanguageTag("Korean", "ko")
DEFAULT_TGT_LANG = LanguageTag("German", "de")


@dataclass(frozen=True)
class SentencePair:
    """One source/target sentence pair with provenance.

    ``origin`` is one of :data:`ORIGINS`. Original pairs are their own
    parent and carry an empty derivation; synthetic pairs point at the
    original they derive from and record their construction indices in
    ``derivation`` (paraphrase ``{"i", "j"}``, multi-target / storytelling
    ``{"k"}``).
    """

    id: str
    source: str
    target: str
    src_lang: LanguageTag
    tgt_lang: LanguageTag
    origin: str = ORIGIN_ORIGINAL
    parent_id: str | None = None
    derivation: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "source", normalize_sentence(self.source))
        object.__setattr__(self, "target", normalize_sentence(self.target))
        if not self.id:
            raise ValueError("pair id must be non-empty")
        if not self.source:
            raise ValueError(f"pair {self.id}: source sentence is empty")
        if not self.target:
            raise ValueError(f"pair {self.id}: target sentence is empty")
        if self.origin not in ORIGINS:
            raise ValueError(f"pair {self.id}: unknown origin {self.origin!r}")
        if self.origin == ORIGIN_ORIGINAL:
            if self.parent_id is None:
                object.__setattr__(self, "parent_id", self.id)
            elif self.parent_id != self.id:
                raise ValueError(
                    f"pair {self.id}: original pairs must be their own parent"
                )
            if self.derivation:
                raise ValueError(f"pair {self.id}: original pairs carry no derivation")
        elif not self.parent_id:
            raise ValueError(f"pair {self.id}: synthetic pairs need a parent_id")

    @property
    def is_original(self) -> bool:
        return self.origin == ORIGIN_ORIGINAL


@dataclass
class Corpus:
    """An ordered list of sentence pairs sharing one language direction."""

    pairs: list[SentencePair]
    src_lang: LanguageTag
    tgt_lang: LanguageTag

    def __post_init__(self):
        seen: set[str] = set()
        originals: set[str] = set()
        for pair in self.pairs:
            if pair.id in seen:
                raise CorpusError(f"duplicate pair id {pair.id!r}")
            seen.add(pair.id)
            if pair.is_original:
                originals.add(pair.id)
            if pair.src_lang != self.src_lang or pair.tgt_lang != self.tgt_lang:
                raise CorpusError(
                    f"pair {pair.id!r} does not share the corpus language tags"
                )
        for pair in self.pairs:
            if not pair.is_original and pair.parent_id not in originals:
                raise CorpusError(
                    f"pair {pair.id!r} references missing original {pair.parent_id!r}"
                )

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def originals(self) -> list[SentencePair]:
        return [p for p in self.pairs if p.is_original]

    @property
    def synthetics(self) -> list[SentencePair]:
        return [p for p in self.pairs if not p.is_original]

    def by_id(self) -> dict[str, SentencePair]:
        return {p.id: p for p in self.pairs}


def synthesized_id(ordinal: int) -> str:
    """Stable id for records that arrive without one: L + 7-digit ordinal."""
    return f"L{ordinal:07d}"


def _lang_from_record(value, line: int) -> LanguageTag:
    if not isinstance(value, dict) or "code" not in value or "iso" not in value:
        raise CorpusError("language tag must be an object with code and iso", line)
    try:
        return LanguageTag(str(value["code"]), str(value["iso"]))
    except ValueError as exc:
        raise CorpusError(str(exc), line) from exc


def _load_tsv(
    text: str, src_lang: LanguageTag, tgt_lang: LanguageTag
) -> list[SentencePair]:
    pairs = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line == "":
            continue
        cols = line.split("\t")
        if len(cols) == 3:
            pair_id, source, target = cols
        elif len(cols) == 2:
            pair_id = synthesized_id(lineno)
            source, target = cols
        else:
            raise CorpusError(
                f"expected 2 or 3 tab-separated columns, found {len(cols)}", lineno
            )
        if not pair_id:
            pair_id = synthesized_id(lineno)
        try:
            pairs.append(
                SentencePair(
                    id=pair_id,
                    source=source,
                    target=target,
                    src_lang=src_lang,
                    tgt_lang=tgt_lang,
                )
            )
        except ValueError as exc:
            raise CorpusError(str(exc), lineno) from exc
    return pairs


def _load_jsonl(
    text: str, src_lang: LanguageTag | None, tgt_lang: LanguageTag | None
) -> tuple[list[SentencePair], LanguageTag | None, LanguageTag | None]:
    pairs = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"invalid JSON: {exc.msg}", lineno) from exc
        if not isinstance(record, dict):
            raise CorpusError("record must be a JSON object", lineno)
        for key in ("source", "target"):
            if key not in record:
                raise CorpusError(f"missing field {key!r}", lineno)
        rec_src = (
            _lang_from_record(record["src_lang"], lineno)
            if "src_lang" in record
            else src_lang
        )
        rec_tgt = (
            _lang_from_record(record["tgt_lang"], lineno)
            if "tgt_lang" in record
            else tgt_lang
        )
        if rec_src is None or rec_tgt is None:
            raise CorpusError("record carries no language tags", lineno)
        if src_lang is None:
            src_lang = rec_src
        if tgt_lang is None:
            tgt_lang = rec_tgt
        pair_id = str(record["id"]) if record.get("id") else synthesized_id(lineno)
        try:
            pairs.append(
                SentencePair(
                    id=pair_id,
                    source=str(record["source"]),
                    target=str(record["target"]),
                    src_lang=rec_src,
                    tgt_lang=rec_tgt,
                    origin=record.get("origin", ORIGIN_ORIGINAL),
                    parent_id=record.get("parent_id"),
                    derivation=record.get("derivation") or {},
                )
            )
        except ValueError as exc:
            raise CorpusError(str(exc), lineno) from exc
    return pairs, src_lang, tgt_lang


def load_corpus(
    path: str | Path,
    format: str = "jsonl",
    src_lang: LanguageTag | None = None,
    tgt_lang: LanguageTag | None = None,
) -> Corpus:
    """Load a corpus from ``path``.

    ``format`` is ``"tsv"`` or ``"jsonl"``. TSV carries no language tags,
    so ``src_lang``/``tgt_lang`` apply there (falling back to the module
    defaults); JSONL records carry their own tags and the parameters act
    only as a fallback for empty files. Malformed records raise
    :class:`CorpusError` naming the line.
    """
    text = Path(path).read_text(encoding="utf-8")
    if format == "tsv":
        src = src_lang or DEFAULT_SRC_LANG
        tgt = tgt_lang or DEFAULT_TGT_LANG
        pairs = _load_tsv(text, src, tgt)
    elif format == "jsonl":
        pairs, src, tgt = _load_jsonl(text, src_lang, tgt_lang)
        src = src or DEFAULT_SRC_LANG
        tgt = tgt or DEFAULT_TGT_LANG
    else:
        raise ValueError(f"unknown corpus format {format!r}")
    return Corpus(pairs=pairs, src_lang=src, tgt_lang=tgt)


def pair_to_record(pair: SentencePair) -> dict:
    """The JSONL object for one pair, keys in canonical order."""
    return {
        "id": pair.id,
        "source": pair.source,
        "target": pair.target,
        "src_lang": {"code": pair.src_lang.code, "iso": pair.src_lang.iso},
        "tgt_lang": {"code": pair.tgt_lang.code, "iso": pair.tgt_lang.iso},
        "origin": pair.origin,
        "parent_id": pair.parent_id,
        "derivation": pair.derivation,
    }


def dumps_pairs(pairs: list[SentencePair], format: str = "jsonl") -> str:
    """Serialize a bare pair list deterministically; same pairs, same bytes.

    Unlike :func:`dumps_corpus` this does not require parent links to
    resolve, so it also serves filtered exports (e.g. synthetics only).
    """
    if format == "tsv":
        lines = []
        for pair in pairs:
            for side, text in (("source", pair.source), ("target", pair.target)):
                if "\t" in text:
                    raise CorpusError(
                        f"pair {pair.id!r}: {side} contains a tab and cannot be "
                        "exported as TSV"
                    )
            lines.append(f"{pair.id}\t{pair.source}\t{pair.target}\n")
        return "".join(lines)
    if format == "jsonl":
        return "".join(
            json.dumps(pair_to_record(pair), ensure_ascii=False) + "\n"
            for pair in pairs
        )
    raise ValueError(f"unknown corpus format {format!r}")


def dumps_corpus(corpus: Corpus, format: str = "jsonl") -> str:
    """Serialize deterministically; same corpus, same bytes."""
    return dumps_pairs(corpus.pairs, format)


def write_corpus(corpus: Corpus, path: str | Path, format: str = "jsonl") -> None:
    """Write ``corpus`` to ``path`` in the given format."""
    Path(path).write_text(dumps_corpus(corpus, format), encoding="utf-8")


def write_pairs(pairs: list[SentencePair], path: str | Path, format: str = "jsonl") -> None:
    """Write a bare pair list to ``path`` in the given format."""
    Path(path).write_text(dumps_pairs(pairs, format), encoding="utf-8")


def infer_format(path: str | Path) -> str:
    """Guess tsv/jsonl from the file extension, defaulting to jsonl."""
    suffix = Path(path).suffix.lower()
    if suffix in (".tsv", ".tab", ".txt"):
        return "tsv"
    return "jsonl"
