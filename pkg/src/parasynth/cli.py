"""Command-line interface: augment, analyze, export, dump-prompts.

Option precedence is CLI flags, then a flat key-value config file given
with --config, then built-in defaults.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .corpus_io import LanguageTag
from .errors import ParasynthError
from .llm_provider import DEFAULT_CACHE_DIR, ProviderConfig
from .pipeline import RunConfig, run_analyze, run_augment, run_export
from .prompt_engine import template_catalog
from .reporting import format_report_table

DEFAULTS = {
    "format": None,
    "strategy": "storytelling",
    "n": None,
    "ratio": 1.0,
    "seed": 0,
    "model": "gpt-3.5-turbo",
    "temperature": 1.0,
    "base_url": "https://api.openai.com/v1",
    "max_output_tokens": 512,
    "timeout": 30.0,
    "max_retries": 3,
    "concurrency": 4,
    "rpm": None,
    "mock": False,
    "cache_dir": DEFAULT_CACHE_DIR,
    "embeddings": "mock",
    "src_lang": "ko:Korean",
    "tgt_lang": "de:German",
    "max_fail_rate": 0.1,
    "figures": True,
    "input": None,
    "out": ".",
}

_COERCERS = {
    "n": int,
    "seed": int,
    "max_output_tokens": int,
    "max_retries": int,
    "concurrency": int,
    "rpm": int,
    "ratio": float,
    "temperature": float,
    "timeout": float,
    "max_fail_rate": float,
    "mock": lambda v: v.lower() in ("1", "true", "yes", "on"),
    "figures": lambda v: v.lower() in ("1", "true", "yes", "on"),
}


def load_config_file(path: str | Path) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment, dashes and
    underscores in keys are interchangeable."""
    values: dict = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParasynthError(f"config file line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ParasynthError(f"config file line {lineno}: unknown key {key!r}")
        values[key] = _COERCERS.get(key, str)(value)
    return values


def _resolve(args: argparse.Namespace) -> dict:
    """CLI flags beat config-file values beat defaults."""
    file_values = load_config_file(args.config) if getattr(args, "config", None) else {}
    merged = {}
    for key, default in DEFAULTS.items():
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            merged[key] = cli_value
        elif key in file_values:
            merged[key] = file_values[key]
        else:
            merged[key] = default
    return merged


def _parse_lang(value: str) -> LanguageTag:
    """``iso:Name``, e.g. ``ko:Korean``."""
    if ":" not in value:
        raise ParasynthError(f"language must be iso:Name (e.g. ko:Korean), got {value!r}")
    iso, code = value.split(":", 1)
    return LanguageTag(code=code.strip(), iso=iso.strip())


def _run_config(values: dict) -> RunConfig:
    if not values["input"] and values.get("_needs_input", True):
        raise ParasynthError("--input is required")
    provider = ProviderConfig(
        base_url=values["base_url"],
        model=values["model"],
        temperature=values["temperature"],
        max_output_tokens=values["max_output_tokens"],
        request_timeout=values["timeout"],
        max_retries=values["max_retries"],
        max_concurrency=values["concurrency"],
        requests_per_minute=values["rpm"],
    )
    return RunConfig(
        input=values["input"],
        out_dir=values["out"],
        format=values["format"],
        strategy=values["strategy"],
        n=values["n"],
        ratio=values["ratio"],
        seed=values["seed"],
        provider=provider,
        mock=values["mock"],
        cache_dir=values["cache_dir"],
        embeddings=values["embeddings"],
        src_lang=_parse_lang(values["src_lang"]),
        tgt_lang=_parse_lang(values["tgt_lang"]),
        max_fail_rate=values["max_fail_rate"],
        figures=values["figures"],
    )


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--input", help="input corpus path")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", choices=["tsv", "jsonl"], help="corpus format")
    parser.add_argument("--seed", type=int, help="sampling seed (default 0)")
    parser.add_argument("--model", help="model identifier")
    parser.add_argument("--temperature", type=float, help="decoding temperature")
    parser.add_argument("--base-url", dest="base_url", help="chat-completions endpoint base")
    parser.add_argument("--src-lang", dest="src_lang", help="source language as iso:Name")
    parser.add_argument("--tgt-lang", dest="tgt_lang", help="target language as iso:Name")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parasynth",
        description="Grow a parallel corpus with prompt-generated synthetic pairs "
        "and measure how diverse the synthetic data is.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    augment = sub.add_parser("augment", help="generate and sample synthetic pairs")
    _add_common_flags(augment)
    augment.add_argument(
        "--strategy", choices=["paraphrase", "multi-target", "storytelling"]
    )
    augment.add_argument("--n", type=int, help="variants or story sentences per pair")
    augment.add_argument("--ratio", type=float, help="synthetic/original ratio")
    augment.add_argument(
        "--mock", action=argparse.BooleanOptionalAction, help="use the offline mock provider"
    )
    augment.add_argument("--cache-dir", dest="cache_dir", help="completion cache directory")
    augment.add_argument("--max-output-tokens", dest="max_output_tokens", type=int)
    augment.add_argument("--timeout", type=float, help="request timeout in seconds")
    augment.add_argument("--max-retries", dest="max_retries", type=int)
    augment.add_argument("--concurrency", type=int, help="max in-flight requests")
    augment.add_argument("--rpm", type=int, help="request rate limit per minute")
    augment.add_argument(
        "--max-fail-rate",
        dest="max_fail_rate",
        type=float,
        help="abort when the provider failure rate exceeds this fraction",
    )

    analyze = sub.add_parser("analyze", help="report synthetic-data diversity")
    analyze.add_argument("augmented", help="augmented corpus (jsonl)")
    _add_common_flags(analyze)
    analyze.add_argument(
        "--embeddings", help="embedding provider: mock or file:PATH"
    )
    analyze.add_argument(
        "--figures", action=argparse.BooleanOptionalAction, help="render PNG figures"
    )

    export = sub.add_parser("export", help="write a training-ready slice")
    export.add_argument("augmented", help="augmented corpus (jsonl)")
    export.add_argument("--out", required=True, help="output file path")
    export.add_argument("--format", choices=["tsv", "jsonl"], default="jsonl")
    export.add_argument(
        "--split", choices=["all", "originals", "synthetics"], default="all"
    )

    sub.add_parser("dump-prompts", help="print the compiled-in prompt templates")
    return parser


def _cmd_augment(args: argparse.Namespace) -> int:
    config = _run_config(_resolve(args))
    outcome = run_augment(config)
    for origin in sorted(outcome.counts):
        print(f"{origin}: {outcome.counts[origin]}")
    stats = outcome.stats
    print(f"requests: {stats.requests} (cache hits: {stats.cache_hits})")
    if stats.provider_failures or stats.parse_rejects:
        print(
            f"failures: provider={stats.provider_failures} "
            f"unparseable={stats.parse_rejects}"
        )
    if outcome.warnings:
        print(f"warnings: {len(outcome.warnings)} (see manifest)")
    print(f"wrote {outcome.corpus_path}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    values = _resolve(args)
    values["_needs_input"] = False
    config = _run_config({**values, "input": values["input"] or ""})
    report, paths = run_analyze(config, args.augmented)
    print(format_report_table(report))
    print(f"wrote {paths['json']}")
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    count = run_export(args.augmented, args.out, args.format, args.split)
    print(f"wrote {count} records to {args.out}")
    return 0


def _cmd_dump_prompts() -> int:
    for kind, template in template_catalog().items():
        print(f"# {kind}")
        print(template)
        print()
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "augment":
            return _cmd_augment(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "export":
            return _cmd_export(args)
        if args.command == "dump-prompts":
            return _cmd_dump_prompts()
    except (ParasynthError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
