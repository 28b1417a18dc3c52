"""Corpus loading, validation, and byte-deterministic round-trips."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parasynth.corpus_io import (
    Corpus,
    LanguageTag,
    SentencePair,
    dumps_corpus,
    dumps_pairs,
    infer_format,
    load_corpus,
    normalize_sentence,
    synthesized_id,
    write_corpus,
)
from parasynth.errors import CorpusError

from conftest import DE, KO, LOAN_DE, LOAN_KO, make_corpus, make_pair


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

def test_language_tag_validation():
    LanguageTag("Korean", "ko")
    LanguageTag("Undetermined", "und")
    with pytest.raises(ValueError):
        LanguageTag("", "ko")
    with pytest.raises(ValueError):
        LanguageTag("Ko\nrean", "ko")
    with pytest.raises(ValueError):
        LanguageTag("Korean", "KO")
    with pytest.raises(ValueError):
        LanguageTag("Korean", "k")


def test_normalize_sentence_collapses_linebreaks():
    assert normalize_sentence("  eins\nzwei \r\n drei  ") == "eins zwei drei"


def test_pair_trims_and_rejects_empty():
    pair = make_pair(source="  " + LOAN_KO + "\n", target=LOAN_DE)
    assert pair.source == LOAN_KO
    with pytest.raises(ValueError):
        make_pair(source="   ", target=LOAN_DE)


def test_original_pair_is_own_parent(loan_pair):
    assert loan_pair.parent_id == loan_pair.id
    assert loan_pair.derivation == {}
    with pytest.raises(ValueError):
        SentencePair(
            id="a", source="x", target="y", src_lang=KO, tgt_lang=DE,
            origin="original", parent_id="b",
        )
    with pytest.raises(ValueError):
        SentencePair(
            id="a", source="x", target="y", src_lang=KO, tgt_lang=DE,
            origin="paraphrase",
        )


def test_corpus_rejects_duplicate_ids(loan_pair):
    with pytest.raises(CorpusError):
        Corpus([loan_pair, make_pair(loan_pair.id)], KO, DE)


def test_corpus_rejects_foreign_language_pair(loan_pair):
    en = LanguageTag("English", "en")
    other = SentencePair(id="x1", source="hello", target="hallo", src_lang=en, tgt_lang=DE)
    with pytest.raises(CorpusError):
        Corpus([loan_pair, other], KO, DE)


def test_corpus_rejects_dangling_parent():
    orphan = SentencePair(
        id="x.m0", source="a", target="b", src_lang=KO, tgt_lang=DE,
        origin="multi_target", parent_id="missing", derivation={"k": 0},
    )
    with pytest.raises(CorpusError):
        Corpus([orphan], KO, DE)


# ---------------------------------------------------------------------------
# TSV loading
# ---------------------------------------------------------------------------

def test_load_tsv_sample_line(tmp_path):
    path = tmp_path / "corpus.tsv"
    path.write_text(f"p0001\t{LOAN_KO}\t{LOAN_DE}\n", encoding="utf-8")
    corpus = load_corpus(path, "tsv", KO, DE)
    assert len(corpus) == 1
    pair = corpus.pairs[0]
    assert (pair.id, pair.source, pair.target) == ("p0001", LOAN_KO, LOAN_DE)
    assert pair.origin == "original"


def test_load_tsv_synthesizes_ids(tmp_path):
    path = tmp_path / "corpus.tsv"
    path.write_text("하나\teins\n둘\tzwei\n", encoding="utf-8")
    corpus = load_corpus(path, "tsv", KO, DE)
    assert [p.id for p in corpus.pairs] == ["L0000001", "L0000002"]
    assert synthesized_id(17) == "L0000017"


def test_load_empty_file(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_text("", encoding="utf-8")
    assert len(load_corpus(path, "tsv", KO, DE)) == 0
    path_jsonl = tmp_path / "empty.jsonl"
    path_jsonl.write_text("", encoding="utf-8")
    assert len(load_corpus(path_jsonl, "jsonl")) == 0


def test_load_tsv_wrong_column_count(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("p1\ta\tb\nnur-eine-spalte\n", encoding="utf-8")
    with pytest.raises(CorpusError) as err:
        load_corpus(path, "tsv", KO, DE)
    assert "line 2" in str(err.value)


def test_load_tsv_empty_sentence_addressed(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("p1\ta\tb\np2\t\tb\n", encoding="utf-8")
    with pytest.raises(CorpusError) as err:
        load_corpus(path, "tsv", KO, DE)
    assert "line 2" in str(err.value)


def test_load_duplicate_id_rejected(tmp_path):
    path = tmp_path / "dup.tsv"
    path.write_text("p1\ta\tb\np1\tc\td\n", encoding="utf-8")
    with pytest.raises(CorpusError) as err:
        load_corpus(path, "tsv", KO, DE)
    assert "p1" in str(err.value)


# ---------------------------------------------------------------------------
# JSONL loading
# ---------------------------------------------------------------------------

def test_load_jsonl_carries_provenance(tmp_path):
    corpus = make_corpus(3)
    synthetic = SentencePair(
        id="p000.s0", source="이야기 문장", target="Ein Erzählsatz",
        src_lang=KO, tgt_lang=DE, origin="storytelling",
        parent_id="p000", derivation={"k": 0},
    )
    path = tmp_path / "c.jsonl"
    write_corpus(Corpus(corpus.pairs + [synthetic], KO, DE), path, "jsonl")
    loaded = load_corpus(path, "jsonl")
    assert loaded.pairs[-1] == synthetic
    assert loaded.src_lang == KO and loaded.tgt_lang == DE


def test_load_jsonl_invalid_json_addressed(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id": "a", "source": "x", "target": "y"}\n{broken\n', encoding="utf-8")
    with pytest.raises(CorpusError) as err:
        load_corpus(path, "jsonl", KO, DE)
    assert "line 2" in str(err.value)


def test_load_jsonl_missing_field_addressed(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id": "a", "source": "x"}\n', encoding="utf-8")
    with pytest.raises(CorpusError) as err:
        load_corpus(path, "jsonl", KO, DE)
    assert "line 1" in str(err.value) and "target" in str(err.value)


def test_unknown_format_rejected(tmp_path):
    path = tmp_path / "c.xml"
    path.write_text("", encoding="utf-8")
    with pytest.raises(ValueError):
        load_corpus(path, "xml")


# ---------------------------------------------------------------------------
# Round-trips and determinism
# ---------------------------------------------------------------------------

def test_jsonl_roundtrip_field_exact(tmp_path):
    corpus = make_corpus(25)
    path = tmp_path / "c.jsonl"
    write_corpus(corpus, path, "jsonl")
    loaded = load_corpus(path, "jsonl")
    assert loaded.pairs == corpus.pairs


def test_write_is_byte_deterministic(tmp_path):
    corpus = make_corpus(5)
    assert dumps_corpus(corpus, "jsonl") == dumps_corpus(corpus, "jsonl")
    assert dumps_corpus(corpus, "tsv") == dumps_corpus(corpus, "tsv")


def test_empty_corpus_writes_empty_file(tmp_path):
    empty = Corpus([], KO, DE)
    assert dumps_corpus(empty, "tsv") == ""
    assert dumps_corpus(empty, "jsonl") == ""


def test_tsv_is_lossy_but_ordered(tmp_path):
    corpus = make_corpus(4)
    path = tmp_path / "c.tsv"
    write_corpus(corpus, path, "tsv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 4
    assert lines[0].split("\t")[0] == "p000"


def test_tsv_refuses_embedded_tab():
    pair = SentencePair(
        id="t1", source="mit\ttab", target="ok", src_lang=KO, tgt_lang=DE
    )
    with pytest.raises(CorpusError):
        dumps_pairs([pair], "tsv")


def test_infer_format():
    assert infer_format("x.tsv") == "tsv"
    assert infer_format("x.jsonl") == "jsonl"
    assert infer_format("x") == "jsonl"


_sentences = st.text(
    alphabet=st.characters(
        whitelist_categories=("Lu", "Ll", "Lo", "Nd"), min_codepoint=0x20
    ),
    min_size=1,
    max_size=30,
).filter(lambda s: s.strip())


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(_sentences, _sentences), min_size=0, max_size=12))
def test_jsonl_roundtrip_property(tmp_path_factory, rows):
    pairs = [
        SentencePair(
            id=f"r{i:04d}", source=src, target=tgt, src_lang=KO, tgt_lang=DE
        )
        for i, (src, tgt) in enumerate(rows)
    ]
    corpus = Corpus(pairs, KO, DE)
    path = tmp_path_factory.mktemp("rt") / "c.jsonl"
    write_corpus(corpus, path, "jsonl")
    loaded = load_corpus(path, "jsonl", KO, DE)
    assert loaded.pairs == corpus.pairs
    assert [p.id for p in loaded.pairs] == [p.id for p in corpus.pairs]
