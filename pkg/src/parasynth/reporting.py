"""Render diversity reports: console table, machine JSON, per-pair TSV,
and matplotlib figures saved next to the delimited output."""

from __future__ import annotations

import json
from pathlib import Path

from matplotlib.figure import Figure

from .diversity_metrics import DiversityReport

REPORT_JSON = "report.json"
REPORT_TSV = "report_pairs.tsv"
FIGURE_HIST = "diversity_histograms.png"
FIGURE_SCATTER = "diversity_scatter.png"


def format_report_table(report: DiversityReport) -> str:
    """Small fixed-width summary for terminals and logs."""
    lines = [
        f"Diversity report ({report.strategy}, {report.pair_count} pairs)",
        f"  mean cosine similarity : {report.mean_cosine:.4f}",
        f"  mean sentence BLEU     : {report.mean_sentence_bleu:.3f}",
        f"  corpus-level BLEU      : {report.corpus_level_bleu:.3f}",
    ]
    if report.config_echo:
        echo = ", ".join(f"{k}={v}" for k, v in sorted(report.config_echo.items()))
        lines.append(f"  config: {echo}")
    return "\n".join(lines)


def report_to_json(report: DiversityReport) -> str:
    payload = {
        "strategy": report.strategy,
        "pair_count": report.pair_count,
        "mean_cosine": report.mean_cosine,
        "mean_sentence_bleu": report.mean_sentence_bleu,
        "corpus_level_bleu": report.corpus_level_bleu,
        "config_echo": report.config_echo,
        "per_pair": [
            {"id": pair_id, "cosine": cos, "bleu": bleu}
            for pair_id, cos, bleu in report.per_pair
        ],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def report_to_tsv(report: DiversityReport) -> str:
    lines = ["id\tcosine\tbleu\n"]
    lines.extend(
        f"{pair_id}\t{cos!r}\t{bleu!r}\n" for pair_id, cos, bleu in report.per_pair
    )
    return "".join(lines)


def render_figures(report: DiversityReport, out_dir: str | Path) -> list[Path]:
    """Histogram panel and cosine-vs-BLEU scatter, written as PNG files."""
    out_dir = Path(out_dir)
    cosines = [row[1] for row in report.per_pair]
    bleus = [row[2] for row in report.per_pair]

    hist = Figure(figsize=(8, 3.2))
    ax_cos, ax_bleu = hist.subplots(1, 2)
    ax_cos.hist(cosines, bins=20, range=(-1.0, 1.0), color="#4878a8")
    ax_cos.set_xlabel("cosine similarity")
    ax_cos.set_ylabel("synthetic pairs")
    ax_bleu.hist(bleus, bins=20, range=(0.0, 100.0), color="#a85448")
    ax_bleu.set_xlabel("sentence BLEU")
    hist.suptitle(f"Similarity to originals ({report.strategy})")
    hist.tight_layout()
    hist_path = out_dir / FIGURE_HIST
    hist.savefig(hist_path, dpi=120)

    scatter = Figure(figsize=(4.8, 4.0))
    ax = scatter.subplots()
    ax.scatter(cosines, bleus, s=12, alpha=0.6, color="#486048")
    ax.set_xlabel("cosine similarity")
    ax.set_ylabel("sentence BLEU")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-5, 105)
    ax.set_title(f"Per-pair similarity ({report.pair_count} pairs)")
    scatter.tight_layout()
    scatter_path = out_dir / FIGURE_SCATTER
    scatter.savefig(scatter_path, dpi=120)
    return [hist_path, scatter_path]


def write_report(
    report: DiversityReport, out_dir: str | Path, figures: bool = True
) -> dict:
    """Write JSON + TSV (+ figures) into ``out_dir``; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / REPORT_JSON
    tsv_path = out_dir / REPORT_TSV
    json_path.write_text(report_to_json(report), encoding="utf-8")
    tsv_path.write_text(report_to_tsv(report), encoding="utf-8")
    paths = {"json": json_path, "tsv": tsv_path}
    if figures:
        paths["figures"] = render_figures(report, out_dir)
    return paths
