"""Report rendering: table, JSON, delimited pairs, and figure files."""

from __future__ import annotations

import json

from parasynth.diversity_metrics import DiversityReport
from parasynth.reporting import (
    format_report_table,
    render_figures,
    report_to_json,
    report_to_tsv,
    write_report,
)


def _report() -> DiversityReport:
    return DiversityReport(
        strategy="storytelling",
        pair_count=2,
        mean_cosine=0.55,
        mean_sentence_bleu=12.5,
        corpus_level_bleu=8.0,
        per_pair=[("a.s0", 0.5, 10.0), ("b.s0", 0.6, 15.0)],
        config_echo={"model": "mock", "temperature": 1.0, "seed": 0},
    )


def test_table_mentions_means():
    table = format_report_table(_report())
    assert "storytelling" in table
    assert "0.5500" in table
    assert "12.500" in table
    assert "model=mock" in table


def test_json_is_deterministic_and_complete():
    first = report_to_json(_report())
    second = report_to_json(_report())
    assert first == second
    payload = json.loads(first)
    assert payload["pair_count"] == 2
    assert payload["per_pair"][0] == {"id": "a.s0", "cosine": 0.5, "bleu": 10.0}
    assert payload["config_echo"]["seed"] == 0
    assert "corpus_level_bleu" in payload


def test_tsv_layout():
    lines = report_to_tsv(_report()).splitlines()
    assert lines[0] == "id\tcosine\tbleu"
    assert lines[1].split("\t")[0] == "a.s0"
    assert float(lines[2].split("\t")[1]) == 0.6


def test_figures_written(tmp_path):
    paths = render_figures(_report(), tmp_path)
    assert len(paths) == 2
    for path in paths:
        assert path.exists()
        assert path.stat().st_size > 0
        assert path.suffix == ".png"


def test_write_report_bundles_everything(tmp_path):
    paths = write_report(_report(), tmp_path, figures=True)
    assert paths["json"].exists()
    assert paths["tsv"].exists()
    assert len(paths["figures"]) == 2
    stripped = write_report(_report(), tmp_path / "min", figures=False)
    assert "figures" not in stripped
