"""End-to-end orchestration: corpus in, augmented corpus and reports out.

The generation stage fans prompts out to the provider under its bounded
concurrency, then everything after the replies land (parsing, combining,
sampling, serialization) runs single-threaded in corpus order, so a run
with a warm cache or the mock provider is byte-for-byte reproducible.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import reporting
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
    dumps_pairs,
    infer_format,
    load_corpus,
)
from .diversity_metrics import (
    DiversityReport,
    FileEmbeddingProvider,
    MockEmbeddingProvider,
    diversity_report,
)
from .errors import ParasynthError, ProviderError, UnparseableReplyError
from .llm_provider import (
    DEFAULT_CACHE_DIR,
    ChatCompletionClient,
    ProviderConfig,
    mock_transport,
)
from .prompt_engine import (
    MULTI_TARGET,
    PARAPHRASE_SRC,
    PARAPHRASE_TGT,
    STORYTELLING,
    PromptText,
    Strategy,
    render_prompt,
)
from .response_parser import RejectRecord, parse_story, parse_variants, write_rejects

# CLI strategy names to the prompt kinds they expand into.
STRATEGY_PROMPTS = {
    "paraphrase": (PARAPHRASE_SRC, PARAPHRASE_TGT),
    "multi-target": (MULTI_TARGET,),
    "storytelling": (STORYTELLING,),
}
STRATEGY_ORIGIN = {
    "paraphrase": "paraphrase",
    "multi-target": "multi_target",
    "storytelling": "storytelling",
}


@dataclass
class RunConfig:
    """Everything one run needs; built by the CLI, usable directly in code."""

    input: str
    out_dir: str = "."
    format: str | None = None  # None = infer from extension
    strategy: str = "storytelling"
    n: int | None = None
    ratio: float = 1.0
    seed: int = 0
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    mock: bool = False
    cache_dir: str = DEFAULT_CACHE_DIR
    embeddings: str = "mock"  # "mock" or "file:PATH"
    src_lang: LanguageTag | None = None
    tgt_lang: LanguageTag | None = None
    max_fail_rate: float = 0.1
    figures: bool = True

    def __post_init__(self):
        if self.strategy not in STRATEGY_PROMPTS:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class GenerationStats:
    requests: int = 0
    cache_hits: int = 0
    provider_failures: int = 0
    parse_rejects: int = 0


@dataclass
class AugmentOutcome:
    corpus_path: Path
    manifest_path: Path
    rejects_path: Path
    counts: dict
    stats: GenerationStats
    warnings: list[str]


def _resolved_strategies(config: RunConfig) -> list[Strategy]:
    return [Strategy(kind, config.n) for kind in STRATEGY_PROMPTS[config.strategy]]


def make_client(config: RunConfig) -> ChatCompletionClient:
    return ChatCompletionClient(
        config.provider,
        cache_dir=config.cache_dir,
        transport=mock_transport if config.mock else None,
    )


def _collect_completions(
    client: ChatCompletionClient,
    prompts: list[tuple[SentencePair, Strategy, PromptText]],
    stats: GenerationStats,
    rejects: list[RejectRecord],
) -> dict:
    """Fan out, then return replies keyed by (pair id, strategy kind)."""
    with ThreadPoolExecutor(max_workers=client.config.max_concurrency) as pool:
        futures = [
            (pair, strategy, pool.submit(client.complete, prompt))
            for pair, strategy, prompt in prompts
        ]
        replies: dict[tuple[str, str], str] = {}
        for pair, strategy, future in futures:
            stats.requests += 1
            try:
                result = future.result()
            except ProviderError as exc:
                stats.provider_failures += 1
                rejects.append(
                    RejectRecord(
                        pair_id=pair.id,
                        strategy=strategy.kind,
                        raw_text="",
                        reason=f"provider: {exc}",
                    )
                )
                continue
            if result.cached:
                stats.cache_hits += 1
            replies[(pair.id, strategy.kind)] = result.raw_text
    return replies


def _parse_reply(
    pair: SentencePair,
    strategy: Strategy,
    raw: str | None,
    rejects: list[RejectRecord],
    warnings: list[str],
):
    """Parsed items for one reply, or None when missing/unusable."""
    if raw is None:
        return None
    try:
        if strategy.kind == STORYTELLING:
            parsed = parse_story(raw, strategy.n, strategy)
        else:
            parsed = parse_variants(raw, strategy.n, strategy)
    except UnparseableReplyError as exc:
        rejects.append(
            RejectRecord(
                pair_id=pair.id,
                strategy=strategy.kind,
                raw_text=exc.raw_text,
                reason=str(exc),
            )
        )
        return None
    warnings.extend(f"{pair.id}/{strategy.kind}: {w}" for w in parsed.warnings)
    return parsed.items


def _drop_verbatim(
    items: list[str], original: str, pair_id: str, side: str, warnings: list[str]
) -> list[str]:
    kept = []
    for item in items:
        if item == original:
            warnings.append(f"{pair_id}: dropped {side} variant identical to original")
        else:
            kept.append(item)
    return kept


def build_pool(
    corpus: Corpus, config: RunConfig, client: ChatCompletionClient
) -> tuple[SyntheticPool, GenerationStats, list[RejectRecord], list[str]]:
    """Generate, parse, and combine synthetics for every original pair."""
    originals = corpus.originals
    strategies = _resolved_strategies(config)
    prompts = [
        (pair, strategy, render_prompt(strategy, pair))
        for pair in originals
        for strategy in strategies
    ]
    stats = GenerationStats()
    rejects: list[RejectRecord] = []
    warnings: list[str] = []
    replies = _collect_completions(client, prompts, stats, rejects)

    if prompts and stats.provider_failures / len(prompts) > config.max_fail_rate:
        raise ParasynthError(
            f"provider failure rate {stats.provider_failures}/{len(prompts)} "
            f"exceeds the threshold {config.max_fail_rate}"
        )

    pool = SyntheticPool(strategy=strategies[0], seed=config.seed)
    for pair in originals:
        if config.strategy == "paraphrase":
            src_items = _parse_reply(
                pair, strategies[0], replies.get((pair.id, PARAPHRASE_SRC)), rejects, warnings
            )
            tgt_items = _parse_reply(
                pair, strategies[1], replies.get((pair.id, PARAPHRASE_TGT)), rejects, warnings
            )
            src_variants = _drop_verbatim(src_items or [], pair.source, pair.id, "source", warnings)
            tgt_variants = _drop_verbatim(tgt_items or [], pair.target, pair.id, "target", warnings)
            pool.add(combine_paraphrase(pair, src_variants, tgt_variants))
        elif config.strategy == "multi-target":
            items = _parse_reply(
                pair, strategies[0], replies.get((pair.id, MULTI_TARGET)), rejects, warnings
            )
            if items:
                pool.add(combine_multi_target(pair, items))
        else:
            items = _parse_reply(
                pair, strategies[0], replies.get((pair.id, STORYTELLING)), rejects, warnings
            )
            if items:
                story_pairs = []
                for k, (src, tgt) in enumerate(items):
                    if not src.strip() or not tgt.strip():
                        warnings.append(f"{pair.id}: dropped empty story sentence {k}")
                    else:
                        story_pairs.append((src, tgt))
                if story_pairs:
                    pool.add(combine_storytelling(pair, story_pairs))
    stats.parse_rejects = sum(1 for r in rejects if not r.reason.startswith("provider:"))
    return pool, stats, rejects, warnings


def _manifest(config: RunConfig, corpus: Corpus, selected, pool_size, warnings) -> dict:
    strategies = _resolved_strategies(config)
    counts = {"original": len(corpus.originals)}
    for pair in selected:
        counts[pair.origin] = counts.get(pair.origin, 0) + 1
    return {
        "strategy": config.strategy,
        "n": strategies[0].n,
        "ratio": config.ratio,
        "seed": config.seed,
        "model": config.provider.model,
        "temperature": config.provider.temperature,
        "max_output_tokens": config.provider.max_output_tokens,
        "mock": config.mock,
        "input": str(config.input),
        "pool_size": pool_size,
        "counts": counts,
        "warnings": warnings,
    }


def run_augment(config: RunConfig, client: ChatCompletionClient | None = None) -> AugmentOutcome:
    """Load, generate, sample, and write the three augment artifacts."""
    fmt = config.format or infer_format(config.input)
    corpus = load_corpus(config.input, fmt, config.src_lang, config.tgt_lang)
    if not corpus.originals:
        raise ParasynthError("input corpus has no original pairs to augment")

    client = client or make_client(config)
    pool, stats, rejects, warnings = build_pool(corpus, config, client)
    selected = sample_to_ratio(pool, len(corpus.originals), config.ratio, config.seed)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    corpus_path = out_dir / "augmented.jsonl"
    manifest_path = out_dir / "manifest.json"
    rejects_path = out_dir / "rejects.jsonl"

    corpus_path.write_text(
        dumps_pairs(corpus.originals + selected, "jsonl"), encoding="utf-8"
    )
    manifest = _manifest(config, corpus, selected, pool.size(), warnings)
    manifest_path.write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    write_rejects(rejects_path, rejects)
    return AugmentOutcome(
        corpus_path=corpus_path,
        manifest_path=manifest_path,
        rejects_path=rejects_path,
        counts=manifest["counts"],
        stats=stats,
        warnings=warnings,
    )


def make_embedding_provider(choice: str):
    """``mock`` or ``file:PATH``."""
    if choice == "mock":
        return MockEmbeddingProvider()
    if choice.startswith("file:"):
        return FileEmbeddingProvider.from_path(choice[len("file:") :])
    raise ValueError(f"unknown embeddings provider {choice!r} (use mock or file:PATH)")


def _config_echo(config: RunConfig, augmented: str | Path) -> dict:
    """Echo generation parameters, preferring the manifest next to the file."""
    manifest_path = Path(augmented).parent / "manifest.json"
    echo = {
        "model": config.provider.model,
        "temperature": config.provider.temperature,
        "seed": config.seed,
    }
    if manifest_path.exists():
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return echo
        for key in ("model", "temperature", "seed", "strategy", "n", "ratio"):
            if key in manifest:
                echo[key] = manifest[key]
    return echo


def run_analyze(
    config: RunConfig, augmented: str | Path
) -> tuple[DiversityReport, dict]:
    """Build the diversity report for an augmented corpus and write it out."""
    aug = load_corpus(augmented, "jsonl")
    if config.input:
        fmt = config.format or infer_format(config.input)
        originals = load_corpus(config.input, fmt, config.src_lang, config.tgt_lang)
    else:
        originals = Corpus(aug.originals, aug.src_lang, aug.tgt_lang)
    synthetics = aug.synthetics
    if not synthetics:
        raise ParasynthError("augmented corpus contains no synthetic pairs")

    provider = make_embedding_provider(config.embeddings)
    report = diversity_report(
        originals, synthetics, provider, _config_echo(config, augmented)
    )
    paths = reporting.write_report(report, config.out_dir, figures=config.figures)
    return report, paths


def run_export(
    augmented: str | Path,
    out_path: str | Path,
    format: str = "jsonl",
    split: str | None = None,
) -> int:
    """Write the selected slice of an augmented corpus; returns record count."""
    aug = load_corpus(augmented, "jsonl")
    if split is None or split == "all":
        pairs = aug.pairs
    elif split == "originals":
        pairs = aug.originals
    elif split == "synthetics":
        pairs = aug.synthetics
    else:
        raise ValueError(f"unknown split {split!r} (use originals or synthetics)")
    Path(out_path).write_text(dumps_pairs(pairs, format), encoding="utf-8")
    return len(pairs)
