import json

import pytest
from click.testing import CliRunner
from PIL import Image

from emopalette import cli as cli_mod
from emopalette.cli import cli, main, parse_thresholds
from emopalette.config import (
    DEFAULT_MAPPING,
    DEFAULT_PARTITIONS,
    config_fingerprint,
)
from emopalette.dataset import EMOTIONS
from emopalette.errors import InputError

HEADER = "\t".join(["ID", "Image URL"] + [f"Image: {e}" for e in EMOTIONS])


def write_corpus(tmp_path, colors):
    """Synthetic corpus: one solid-color image per id, tagged for all emotions."""
    rows = []
    for image_id, rgb in colors.items():
        path = tmp_path / f"{image_id}.png"
        Image.new("RGB", (64, 64), rgb).save(path, format="PNG")
        agreement = "\t".join(["0.9"] * len(EMOTIONS))
        rows.append(f"{image_id}\t{path}\t{agreement}")
    annotations = tmp_path / "annotations.tsv"
    annotations.write_text(HEADER + "\n" + "\n".join(rows) + "\n")
    return annotations


def write_trials(tmp_path):
    header = "participant\ttrial\temotion\tintensity1\tintensity2\tchoice\tpassed_color_test"
    rows = []
    layout = [("q1", "fear", 0.9, 0.1), ("q2", "love", 0.7, 0.3),
              ("q3", "trust", 0.6, 0.4)]
    for p in range(6):
        for trial_id, emotion, i1, i2 in layout:
            choice = 1 if p < 5 else 2
            rows.append(f"p{p}\t{trial_id}\t{emotion}\t{i1}\t{i2}\t{choice}\t1")
    path = tmp_path / "trials.tsv"
    path.write_text(header + "\n" + "\n".join(rows) + "\n")
    return path


@pytest.fixture
def runner():
    return CliRunner()


def run_main(argv, monkeypatch):
    monkeypatch.setattr("sys.argv", ["emopalette", *argv])
    try:
        main()
    except SystemExit as exc:
        return exc.code or 0
    return 0


class TestInitConfig:
    def test_writes_loadable_defaults(self, runner, tmp_path):
        result = runner.invoke(cli, ["init-config", "--out-dir", str(tmp_path)])
        assert result.exit_code == 0
        partitions = json.loads((tmp_path / "partitions.json").read_text())
        mapping = json.loads((tmp_path / "mapping.json").read_text())
        assert partitions == DEFAULT_PARTITIONS
        assert config_fingerprint(partitions, mapping) == config_fingerprint(
            DEFAULT_PARTITIONS, DEFAULT_MAPPING
        )


class TestThresholds:
    def test_parse(self):
        assert parse_thresholds(("shyness=0.3", "anger=0.5")) == {
            "shyness": 0.3, "anger": 0.5,
        }

    def test_bad_pairs(self):
        with pytest.raises(InputError):
            parse_thresholds(("joy=0.5",))
        with pytest.raises(InputError):
            parse_thresholds(("anger=high",))


class TestBuildTagReport:
    def test_full_pipeline(self, runner, tmp_path):
        annotations = write_corpus(tmp_path, {
            "r": (220, 30, 30), "g": (30, 220, 30), "b": (30, 30, 220),
        })
        kb_path = tmp_path / "kb.json"
        result = runner.invoke(cli, [
            "build-kb", "--annotations", str(annotations),
            "--kb", str(kb_path), "--workers", "1",
            "--report", str(tmp_path / "build.txt"),
        ])
        assert result.exit_code == 0, result.output
        assert kb_path.exists()
        # build report carries the per-emotion counts table
        assert "emotion\tselected" in result.output
        for emotion in EMOTIONS:
            assert f"{emotion}\t3\t3\t0" in result.output

        # tag one of the corpus images
        result = runner.invoke(cli, [
            "tag", str(tmp_path / "r.png"), "--kb", str(kb_path),
        ])
        assert result.exit_code == 0, result.output
        lines = [l for l in result.output.splitlines() if "\t" in l]
        assert len(lines) == len(EMOTIONS)
        scores = [float(l.split("\t")[2]) for l in lines]
        assert scores == sorted(scores, reverse=True)
        assert all(0.0 <= s <= 1.0 for s in scores)

        # report artifacts
        out_dir = tmp_path / "report"
        result = runner.invoke(cli, [
            "report", "--kb", str(kb_path), "--out-dir", str(out_dir),
        ])
        assert result.exit_code == 0, result.output
        matrix = (out_dir / "basic_colors.tsv").read_text().strip().splitlines()
        assert len(matrix) == 1 + len(EMOTIONS)
        for row in matrix[1:]:
            values = [float(v) for v in row.split("\t")[1:]]
            assert sum(values) == pytest.approx(100.0, abs=0.5)
        assert (out_dir / "heatmap.png").exists()
        assert (out_dir / "hsi_distributions.tsv").exists()
        for emotion in EMOTIONS:
            assert (out_dir / "strips" / f"{emotion}.png").exists()

    def test_empty_annotation_file_is_input_error(self, tmp_path, monkeypatch):
        empty = tmp_path / "empty.tsv"
        empty.write_text("")
        code = run_main([
            "build-kb", "--annotations", str(empty),
            "--kb", str(tmp_path / "kb.json"),
        ], monkeypatch)
        assert code == 2

    def test_all_images_missing_is_runtime_error(self, tmp_path, monkeypatch):
        rows = []
        for image_id in ("x", "y"):
            agreement = "\t".join(["0.9"] * len(EMOTIONS))
            rows.append(f"{image_id}\t{tmp_path}/missing-{image_id}.png\t{agreement}")
        annotations = tmp_path / "ann.tsv"
        annotations.write_text(HEADER + "\n" + "\n".join(rows) + "\n")
        code = run_main([
            "build-kb", "--annotations", str(annotations),
            "--kb", str(tmp_path / "kb.json"), "--workers", "1",
        ], monkeypatch)
        assert code == 4

    def test_fingerprint_mismatch_is_config_error(self, runner, tmp_path,
                                                  monkeypatch):
        annotations = write_corpus(tmp_path, {"r": (220, 30, 30)})
        kb_path = tmp_path / "kb.json"
        result = runner.invoke(cli, [
            "build-kb", "--annotations", str(annotations), "--kb", str(kb_path),
            "--workers", "1",
        ])
        assert result.exit_code == 0, result.output

        # edit a breakpoint -> different fingerprint
        edited = json.loads(json.dumps(DEFAULT_PARTITIONS))
        edited["variables"][1]["terms"][0]["points"] = [0, 0, 12, 30]
        partitions_path = tmp_path / "edited.json"
        partitions_path.write_text(json.dumps(edited))
        code = run_main([
            "tag", str(tmp_path / "r.png"), "--kb", str(kb_path),
            "--partitions", str(partitions_path),
        ], monkeypatch)
        assert code == 3


class TestAnalyze2afc:
    def test_writes_report_and_artifacts(self, runner, tmp_path):
        trials = write_trials(tmp_path)
        out = tmp_path / "analysis"
        result = runner.invoke(cli, [
            "analyze-2afc", str(trials), "--out-dir", str(out),
        ])
        assert result.exit_code == 0, result.output
        assert "spearman-karber mean" in result.output
        assert (out / "report.txt").exists()
        assert (out / "points.tsv").exists()
        assert (out / "psychometric.png").exists()

    def test_monotonize_flag(self, runner, tmp_path):
        trials = write_trials(tmp_path)
        result = runner.invoke(cli, [
            "analyze-2afc", str(trials), "--monotonize", "pav",
        ])
        assert result.exit_code == 0, result.output
        assert "monotonize=pav" in result.output


def test_backend_command(runner):
    result = runner.invoke(cli, ["backend"])
    assert result.exit_code == 0
    assert result.output.strip() in ("compiled", "python")
