import numpy as np
import pytest
from PIL import Image

from emopalette.colorspace import BASIC_COLORS, FuzzyColor
from emopalette.dataset import EMOTIONS
from emopalette.kb import EmotionPalette, KnowledgeBase, PaletteRecord
from emopalette.psycho import analyze_counts
from emopalette.render import (
    basic_matrix_rows,
    color_hex,
    format_tsv,
    heatmap_png,
    hsi_distribution_rows,
    hsi_to_display_rgb,
    palette_strip,
    psychometric_chart,
    psychometric_plot_data,
    representative_hsi,
)
from test_psycho import REF_DIFFS, REF_HITS, REF_N


def make_kb():
    palettes = {}
    basic = {}
    for emotion in EMOTIONS:
        entries = (
            PaletteRecord(FuzzyColor("Red", "High", "Deep"), 6, 0.6),
            PaletteRecord(FuzzyColor("Blue", "Medium", "Pale"), 4, 0.4),
        )
        palettes[emotion] = EmotionPalette(emotion, entries, 10)
        basic[emotion] = {"red": 60.0, "blue": 40.0}
    return KnowledgeBase("fp", palettes, basic)


class TestDisplayConversion:
    def test_achromatic_maps_to_gray_level(self):
        assert hsi_to_display_rgb(None, 0, 128) == (128, 128, 128)
        assert hsi_to_display_rgb(123, 0, 50) == (50, 50, 50)

    def test_pure_red_round_trip(self):
        assert hsi_to_display_rgb(0.0, 100.0, 85.0) == (255, 0, 0)

    def test_pure_green_and_blue(self):
        assert hsi_to_display_rgb(120.0, 100.0, 85.0) == (0, 255, 0)
        assert hsi_to_display_rgb(240.0, 100.0, 85.0) == (0, 0, 255)

    def test_channels_always_in_range(self):
        rng = np.random.default_rng(1)
        for _ in range(500):
            h = float(rng.uniform(0, 360))
            s = float(rng.uniform(0, 100))
            i = float(rng.uniform(0, 255))
            rgb = hsi_to_display_rgb(h, s, i)
            assert all(0 <= c <= 255 for c in rgb)

    def test_representative_point_of_wrapped_red(self, space):
        h, s, i = representative_hsi(FuzzyColor("Red", "Medium", "Pale"), space)
        assert h == 0.0
        assert s == pytest.approx(42.5)
        assert i == pytest.approx(202.5)

    def test_hex_format(self, space):
        value = color_hex(FuzzyColor("Green", "High", "Medium"), space)
        assert value.startswith("#") and len(value) == 7


class TestArtifacts:
    def test_palette_strip_dominant_swatch(self, space, tmp_path):
        path = palette_strip(
            [(FuzzyColor("Blue", "High", "Deep"), 3.0),
             (FuzzyColor("Red", "High", "Deep"), 1.0)],
            space, tmp_path / "strip.png",
        )
        img = Image.open(path)
        assert img.size == (600, 60)
        left = img.getpixel((10, 30))
        assert left[2] > left[0]  # blue-dominant swatch first

    def test_basic_matrix_rows_sum_to_100(self):
        rows = basic_matrix_rows(make_kb())
        assert rows[0] == ["emotion", *BASIC_COLORS]
        for row in rows[1:]:
            assert sum(float(v) for v in row[1:]) == pytest.approx(100.0, abs=0.5)

    def test_hsi_distribution_counts(self, space):
        rows = hsi_distribution_rows(make_kb(), space)
        hue_rows = {
            (r[0], r[2]): int(r[3]) for r in rows[1:] if r[1] == "hue"
        }
        assert hue_rows[("anger", "Red")] == 6
        assert hue_rows[("anger", "Blue")] == 4
        assert hue_rows[("anger", "Green")] == 0

    def test_heatmap_written(self, tmp_path):
        path = heatmap_png(make_kb(), tmp_path / "heat.png")
        assert path.exists()
        assert Image.open(path).size[0] > 100

    def test_psychometric_outputs(self, tmp_path):
        report = analyze_counts(REF_HITS, REF_DIFFS, REF_N)
        chart = psychometric_chart(report, tmp_path / "psy.png")
        assert chart.exists()
        data = psychometric_plot_data(report)
        lines = data.strip().splitlines()
        assert lines[0] == "x\tobserved\tfitted"
        assert len(lines) == 1 + len(report.points)

    def test_format_tsv(self):
        assert format_tsv([["a", "b"], ["1", "2"]]) == "a\tb\n1\t2\n"
