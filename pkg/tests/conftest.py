"""Shared fixtures: the loan-inquiry sample pair and corpus builders."""

from __future__ import annotations

import pytest

from parasynth.corpus_io import Corpus, LanguageTag, SentencePair

KO = LanguageTag("Korean", "ko")
DE = LanguageTag("German", "de")

# One Korean-German pair from the financial domain, reused all over the
# suite because the expected prompt/parse strings are pinned to it.
LOAN_KO = "얼마정도 대출을 원하세요?"
LOAN_DE = "Wie viel Kredit möchten Sie haben?"

LOAN_PARAPHRASE_KO = "대출을 얼마 정도 받고 싶으세요?"
LOAN_PARAPHRASE_DE = "Wie hoch soll der Kreditbetrag sein, den Sie beantragen möchten?"

LOAN_TRANSLATIONS = [
    "Wie viel Darlehen möchten Sie?",
    "Wie viel Geld möchten Sie ausleihen?",
    "Wie viel Kredit benötigen Sie?",
]

LOAN_STORY = [
    (
        "저는 대출을 1만 달러 정도 받고 싶습니다.",
        "Ich möchte gerne einen Kredit in Höhe von etwa 10.000 Dollar aufnehmen.",
    ),
    (
        "이 돈으로 비즈니스를 시작하려고 합니다.",
        "Ich möchte damit ein Geschäft starten.",
    ),
    (
        "대출 상환 기간은 3년 정도면 좋겠습니다.",
        "Die Rückzahlungsfrist für den Kredit sollte etwa 3 Jahre betragen.",
    ),
]


def make_pair(pair_id: str = "p0001", source: str = LOAN_KO, target: str = LOAN_DE) -> SentencePair:
    return SentencePair(id=pair_id, source=source, target=target, src_lang=KO, tgt_lang=DE)


def make_corpus(count: int) -> Corpus:
    pairs = [
        make_pair(
            f"p{i:03d}",
            source=f"문장 번호 {i} 내용이 조금씩 다릅니다",
            target=f"Der Satz Nummer {i} unterscheidet sich leicht",
        )
        for i in range(count)
    ]
    return Corpus(pairs=pairs, src_lang=KO, tgt_lang=DE)


@pytest.fixture
def loan_pair() -> SentencePair:
    return make_pair()


@pytest.fixture
def small_corpus() -> Corpus:
    return make_corpus(10)
