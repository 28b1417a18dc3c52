"""parasynth: grow a parallel corpus with prompt-generated synthetic pairs
and measure how diverse the synthetic data is."""

from .augmentation import (
    SyntheticPool,
    combine_multi_target,
    combine_paraphrase,
    combine_storytelling,
    sample_to_ratio,
)
from .corpus_io import (
    Corpus,
    LanguageTag,
    SentencePair,
    load_corpus,
    write_corpus,
)
from .diversity_metrics import (
    DiversityReport,
    Embedding,
    FileEmbeddingProvider,
    MockEmbeddingProvider,
    corpus_bleu,
    cosine,
    diversity_report,
    embed,
    sentence_bleu,
    tokenize,
)
from .llm_provider import (
    ChatCompletionClient,
    CompletionResult,
    ProviderConfig,
    cache_key,
    complete,
    mock_complete,
)
from .pipeline import RunConfig, run_analyze, run_augment, run_export
from .prompt_engine import PromptText, Strategy, render_prompt
from .response_parser import ParsedReply, parse_story, parse_variants

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "LanguageTag",
    "SentencePair",
    "load_corpus",
    "write_corpus",
    "Strategy",
    "PromptText",
    "render_prompt",
    "ProviderConfig",
    "CompletionResult",
    "ChatCompletionClient",
    "cache_key",
    "complete",
    "mock_complete",
    "ParsedReply",
    "parse_variants",
    "parse_story",
    "SyntheticPool",
    "combine_paraphrase",
    "combine_multi_target",
    "combine_storytelling",
    "sample_to_ratio",
    "Embedding",
    "MockEmbeddingProvider",
    "FileEmbeddingProvider",
    "tokenize",
    "sentence_bleu",
    "corpus_bleu",
    "cosine",
    "embed",
    "DiversityReport",
    "diversity_report",
    "RunConfig",
    "run_augment",
    "run_analyze",
    "run_export",
    "__version__",
]
