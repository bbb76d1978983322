"""Command line front end: end-to-end subcommand runs over the committed
fixtures, config-file handling, and error exit codes."""

import json
import shutil
import subprocess
import sys

import numpy as np
import pytest
from PIL import Image

from tracelink.cli import main, parse_config_file
from tracelink.errors import ConfigError
from tracelink.panoptic import ImageCache, load_annotations
from tracelink.render import overlay_array
from tracelink.transfer import load_grounded


@pytest.fixture
def transfer_args(fixtures_dir, tmp_path):
    out = tmp_path / "out"
    return [
        "transfer",
        "--narratives", str(fixtures_dir / "transfer" / "narratives.jsonl"),
        "--panoptic", str(fixtures_dir / "transfer" / "panoptic.json"),
        "--rasters", str(fixtures_dir / "transfer" / "rasters"),
        "--categories", str(fixtures_dir / "categories.json"),
        "--wordnet", str(fixtures_dir / "wordnet"),
        "--out", str(out),
    ], out


class TestTransfer:
    def test_end_to_end_matches_golden(self, transfer_args, fixtures_dir, capsys):
        args, out = transfer_args
        assert main(args) == 0
        golden = (fixtures_dir / "transfer" / "golden_grounded.jsonl").read_bytes()
        assert (out / "grounded.jsonl").read_bytes() == golden
        golden_log = (fixtures_dir / "transfer" / "golden_diagnostics.log").read_bytes()
        assert (out / "diagnostics.log").read_bytes() == golden_log
        stdout = capsys.readouterr().out
        assert "grounded 15 phrases across 11 narratives" in stdout

    def test_workers_do_not_change_bytes(self, transfer_args, fixtures_dir):
        args, out = transfer_args
        assert main(args + ["--workers", "3"]) == 0
        golden = (fixtures_dir / "transfer" / "golden_grounded.jsonl").read_bytes()
        assert (out / "grounded.jsonl").read_bytes() == golden

    def test_missing_required_setting(self, fixtures_dir, tmp_path, capsys):
        rv = main(["transfer", "--out", str(tmp_path / "out")])
        assert rv == 3
        assert "error[config]" in capsys.readouterr().err

    def test_missing_file_reports_config_error(self, transfer_args, capsys):
        args, _ = transfer_args
        args[args.index("--narratives") + 1] = "/nonexistent/narratives.jsonl"
        assert main(args) == 3
        assert "error[config]" in capsys.readouterr().err

    def test_strict_aborts_on_malformed_line(self, transfer_args, tmp_path, fixtures_dir, capsys):
        args, _ = transfer_args
        lines = (fixtures_dir / "transfer" / "narratives.jsonl").read_text().splitlines()
        bad = tmp_path / "bad.jsonl"
        bad.write_text(lines[0] + "\n{broken\n")
        args[args.index("--narratives") + 1] = str(bad)
        assert main(args + ["--strict"]) == 4
        assert "error[parse]" in capsys.readouterr().err


@pytest.fixture
def oracle_args(fixtures_dir, tmp_path):
    out = tmp_path / "out"
    oracle = fixtures_dir / "oracle"
    return [
        "oracle",
        "--grounded", str(oracle / "grounded.jsonl"),
        "--panoptic", str(oracle / "gt_panoptic.json"),
        "--rasters", str(oracle / "gt_rasters"),
        "--categories", str(fixtures_dir / "categories.json"),
        "--proposals", str(oracle / "proposals.json"),
        "--proposal-rasters", str(oracle / "proposal_rasters"),
        "--out", str(out),
    ], out


class TestOracle:
    def test_fixture_scores_half(self, oracle_args, capsys):
        args, out = oracle_args
        assert main(args) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["average_recall"] == pytest.approx(0.5, abs=1e-12)
        assert report["count"] == 25
        selections = (out / "selections.tsv").read_text().splitlines()
        assert len(selections) == 26  # header + one row per phrase
        assert selections[0].startswith("narrative_id\t")
        assert (out / "recall.png").stat().st_size > 0
        assert "average recall\t0.5000\t(25 phrases)" in capsys.readouterr().out

    def test_custom_threshold_grid(self, oracle_args):
        args, out = oracle_args
        assert main(args + ["--thresholds", "0.25,0.5,0.75,1.0"]) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["thresholds"] == [0.25, 0.5, 0.75, 1.0]
        assert report["recall"] == [1.0, 1.0, 0.0, 0.0]
        assert report["average_recall"] == pytest.approx(0.5, abs=1e-12)

    def test_bad_threshold_spec(self, oracle_args, capsys):
        args, _ = oracle_args
        assert main(args + ["--thresholds", "0.9,0.1"]) == 4
        assert "error[parse]" in capsys.readouterr().err


class TestEvaluate:
    def test_partial_perfect_predictions(self, fixtures_dir, tmp_path, categories, capsys):
        oracle = fixtures_dir / "oracle"
        cache = ImageCache(
            load_annotations(oracle / "gt_panoptic.json"), oracle / "gt_rasters", categories
        )
        image = cache.get(201)
        spans = [(0, 0, [201001]), (1, 1, [201002]), (2, 2, [201003]),
                 (3, 3, [201004]), (4, 5, [201001, 201002])]
        record = {
            "narrative_id": "o201",
            "phrases": [
                {"first_token": a, "last_token": b, "mask": image.mask_of(ids).to_rle()}
                for a, b, ids in spans
            ],
        }
        predictions = tmp_path / "predictions.jsonl"
        predictions.write_text(json.dumps(record) + "\n")
        out = tmp_path / "out"
        rv = main([
            "evaluate",
            "--grounded", str(oracle / "grounded.jsonl"),
            "--panoptic", str(oracle / "gt_panoptic.json"),
            "--rasters", str(oracle / "gt_rasters"),
            "--categories", str(fixtures_dir / "categories.json"),
            "--predictions", str(predictions),
            "--out", str(out),
        ])
        assert rv == 0
        report = json.loads((out / "report.json").read_text())
        # 5 perfect phrases out of 25; the rest have no prediction
        assert report["average_recall"] == pytest.approx(0.2, abs=1e-12)
        assert "average recall\t0.2000\t(25 phrases)" in capsys.readouterr().out

    def test_dimension_mismatch_is_integrity_exit(self, fixtures_dir, tmp_path, capsys):
        oracle = fixtures_dir / "oracle"
        record = {
            "narrative_id": "o201",
            "phrases": [{"first_token": 0, "last_token": 0, "mask": "4 4 0 16"}],
        }
        predictions = tmp_path / "predictions.jsonl"
        predictions.write_text(json.dumps(record) + "\n")
        rv = main([
            "evaluate",
            "--grounded", str(oracle / "grounded.jsonl"),
            "--panoptic", str(oracle / "gt_panoptic.json"),
            "--rasters", str(oracle / "gt_rasters"),
            "--categories", str(fixtures_dir / "categories.json"),
            "--predictions", str(predictions),
            "--out", str(tmp_path / "out"),
        ])
        assert rv == 5
        assert "error[integrity]" in capsys.readouterr().err


class TestStats:
    def test_fixture_counts_via_cli(self, fixtures_dir, tmp_path, capsys):
        out = tmp_path / "out"
        rv = main([
            "stats",
            "--narratives", str(fixtures_dir / "transfer" / "narratives.jsonl"),
            "--grounded", str(fixtures_dir / "transfer" / "golden_grounded.jsonl"),
            "--panoptic", str(fixtures_dir / "transfer" / "panoptic.json"),
            "--rasters", str(fixtures_dir / "transfer" / "rasters"),
            "--categories", str(fixtures_dir / "categories.json"),
            "--out", str(out),
        ])
        assert rv == 0
        report = json.loads((out / "stats.json").read_text())
        assert report["narratives_total"] == 13
        assert report["narratives_grounded"] == 11
        assert report["phrases_chunked_total"] == 19
        assert report["phrases_grounded_total"] == 15
        assert (out / "stats.txt").exists()
        assert (out / "ranks.png").stat().st_size > 0
        stdout = capsys.readouterr().out
        assert "narratives_total\t13" in stdout


class TestRender:
    def test_single_narrative_pixel_exact(self, fixtures_dir, tmp_path, categories, transfer_annotations):
        out = tmp_path / "out"
        rv = main([
            "render",
            "--grounded", str(fixtures_dir / "transfer" / "golden_grounded.jsonl"),
            "--panoptic", str(fixtures_dir / "transfer" / "panoptic.json"),
            "--rasters", str(fixtures_dir / "transfer" / "rasters"),
            "--categories", str(fixtures_dir / "categories.json"),
            "--narrative", "n101",
            "--out", str(out),
        ])
        assert rv == 0
        assert (out / "n101_figure.png").stat().st_size > 0
        golden = load_grounded(fixtures_dir / "transfer" / "golden_grounded.jsonl")
        n101 = next(g for g in golden if g.narrative_id == "n101")
        cache = ImageCache(transfer_annotations, fixtures_dir / "transfer" / "rasters", categories)
        with Image.open(out / "n101.png") as im:
            arr = np.asarray(im.convert("RGB"))
        assert np.array_equal(arr, overlay_array(cache.get(n101.image_id), n101))

    def test_all_narratives_rendered(self, fixtures_dir, tmp_path):
        out = tmp_path / "out"
        rv = main([
            "render",
            "--grounded", str(fixtures_dir / "transfer" / "golden_grounded.jsonl"),
            "--panoptic", str(fixtures_dir / "transfer" / "panoptic.json"),
            "--rasters", str(fixtures_dir / "transfer" / "rasters"),
            "--categories", str(fixtures_dir / "categories.json"),
            "--out", str(out),
        ])
        assert rv == 0
        assert len(list(out.glob("*_figure.png"))) == 11
        assert len(list(out.glob("*.png"))) == 22

    def test_unknown_narrative_id(self, fixtures_dir, tmp_path, capsys):
        rv = main([
            "render",
            "--grounded", str(fixtures_dir / "transfer" / "golden_grounded.jsonl"),
            "--panoptic", str(fixtures_dir / "transfer" / "panoptic.json"),
            "--rasters", str(fixtures_dir / "transfer" / "rasters"),
            "--categories", str(fixtures_dir / "categories.json"),
            "--narrative", "n999999",
            "--out", str(tmp_path / "out"),
        ])
        assert rv == 3
        assert "error[config]" in capsys.readouterr().err


class TestChunk:
    def test_captions_mode(self, fixtures_dir, tmp_path):
        out = tmp_path / "out"
        rv = main([
            "chunk",
            "--captions", str(fixtures_dir / "captions.txt"),
            "--out", str(out),
        ])
        assert rv == 0
        records = [json.loads(l) for l in (out / "chunks.jsonl").read_text().splitlines()]
        assert len(records) == 40
        assert all("phrases" in r for r in records)

    def test_narratives_mode(self, fixtures_dir, tmp_path):
        out = tmp_path / "out"
        rv = main([
            "chunk",
            "--narratives", str(fixtures_dir / "transfer" / "narratives.jsonl"),
            "--out", str(out),
        ])
        assert rv == 0
        records = [json.loads(l) for l in (out / "chunks.jsonl").read_text().splitlines()]
        assert len(records) == 13
        assert records[0]["narrative_id"] == "n101"

    def test_requires_exactly_one_source(self, fixtures_dir, tmp_path, capsys):
        rv = main(["chunk", "--out", str(tmp_path / "out")])
        assert rv == 3
        rv = main([
            "chunk",
            "--captions", str(fixtures_dir / "captions.txt"),
            "--narratives", str(fixtures_dir / "transfer" / "narratives.jsonl"),
            "--out", str(tmp_path / "out"),
        ])
        assert rv == 3


class TestConfigFile:
    def test_parse_and_unknown_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# run settings\nworkers = 2\nstrict = true\n")
        assert parse_config_file(cfg) == {"workers": "2", "strict": "true"}
        cfg.write_text("wrklrs = 2\n")
        with pytest.raises(ConfigError):
            parse_config_file(cfg)

    def test_relative_paths_resolve_against_config(self, fixtures_dir, tmp_path):
        shutil.copy(
            fixtures_dir / "transfer" / "narratives.jsonl", tmp_path / "narratives.jsonl"
        )
        out = tmp_path / "out"
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "narratives = narratives.jsonl\n"
            f"panoptic = {fixtures_dir / 'transfer' / 'panoptic.json'}\n"
            f"rasters = {fixtures_dir / 'transfer' / 'rasters'}\n"
            f"categories = {fixtures_dir / 'categories.json'}\n"
            f"wordnet = {fixtures_dir / 'wordnet'}\n"
        )
        assert main(["transfer", "--config", str(cfg), "--out", str(out)]) == 0
        golden = (fixtures_dir / "transfer" / "golden_grounded.jsonl").read_bytes()
        assert (out / "grounded.jsonl").read_bytes() == golden

    def test_cli_flag_wins_over_config(self, fixtures_dir, tmp_path):
        # config points at a truncated copy; the command line supplies the
        # full corpus and must take precedence
        lines = (fixtures_dir / "transfer" / "narratives.jsonl").read_text().splitlines()
        (tmp_path / "one.jsonl").write_text(lines[0] + "\n")
        out = tmp_path / "out"
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "narratives = one.jsonl\n"
            f"panoptic = {fixtures_dir / 'transfer' / 'panoptic.json'}\n"
            f"rasters = {fixtures_dir / 'transfer' / 'rasters'}\n"
            f"categories = {fixtures_dir / 'categories.json'}\n"
            f"wordnet = {fixtures_dir / 'wordnet'}\n"
        )
        assert main([
            "transfer", "--config", str(cfg),
            "--narratives", str(fixtures_dir / "transfer" / "narratives.jsonl"),
            "--out", str(out),
        ]) == 0
        assert len((out / "grounded.jsonl").read_text().splitlines()) == 11

        out2 = tmp_path / "out2"
        assert main(["transfer", "--config", str(cfg), "--out", str(out2)]) == 0
        assert len((out2 / "grounded.jsonl").read_text().splitlines()) == 1

    def test_bad_boolean_in_config(self, fixtures_dir, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            f"narratives = {fixtures_dir / 'transfer' / 'narratives.jsonl'}\n"
            f"panoptic = {fixtures_dir / 'transfer' / 'panoptic.json'}\n"
            f"rasters = {fixtures_dir / 'transfer' / 'rasters'}\n"
            f"categories = {fixtures_dir / 'categories.json'}\n"
            f"wordnet = {fixtures_dir / 'wordnet'}\n"
            "strict = maybe\n"
        )
        rv = main(["transfer", "--config", str(cfg), "--out", str(tmp_path / "out")])
        assert rv == 3
        assert "error[config]" in capsys.readouterr().err


class TestEntryPoint:
    def test_module_invocation(self, transfer_args):
        args, out = transfer_args
        proc = subprocess.run(
            [sys.executable, "-m", "tracelink"] + args,
            capture_output=True, text=True, timeout=120,
        )
        assert proc.returncode == 0, proc.stderr
        assert "grounded 15 phrases across 11 narratives" in proc.stdout
        assert (out / "grounded.jsonl").exists()

    def test_help_lists_subcommands(self):
        proc = subprocess.run(
            [sys.executable, "-m", "tracelink", "--help"],
            capture_output=True, text=True, timeout=60,
        )
        assert proc.returncode == 0
        for name in ("transfer", "evaluate", "oracle", "stats", "render", "chunk"):
            assert name in proc.stdout
