import io
import json
import random

import pytest
from PIL import Image

from emopalette.colorspace import FuzzyColor
from emopalette.dataset import EMOTIONS, ImageFetcher
from emopalette.errors import BuildError, ConfigError, FingerprintError
from emopalette.kb import (
    EmotionPalette,
    KnowledgeBase,
    PaletteRecord,
    aggregate_palettes,
    basic_distribution,
    build_emotion_palette,
    build_knowledge_base,
    load_kb,
    save_kb,
)


def save_png(path, rgb, size=(64, 64)):
    Image.new("RGB", size, rgb).save(path, format="PNG")
    return str(path)


@pytest.fixture
def fetcher(tmp_path):
    return ImageFetcher(cache_dir=tmp_path / "cache")


def fc(h, s, i):
    return FuzzyColor(h, s, i)


class TestAggregatePalettes:
    def test_hand_tally(self, space):
        a = fc("Red", "High", "Deep")
        b = fc("Blue", "High", "Deep")
        c = fc("Green", "Medium", "Pale")
        entries = aggregate_palettes([[a, b], [a, c], [a, b]], space)
        by_color = {e.color: e for e in entries}
        assert by_color[a].frequency == 3
        assert by_color[b].frequency == 2
        assert by_color[c].frequency == 1
        total = 6
        assert by_color[a].share == 3 / total
        assert entries[0].color == a  # ordered by frequency

    def test_frequency_ties_break_by_color_order(self, space):
        a = fc("Orange", "Low", "Dark")   # index 1
        b = fc("Red", "Low", "Dark")      # index 0
        entries = aggregate_palettes([[a], [b]], space)
        assert [e.color for e in entries] == [b, a]

    def test_top_15_cap(self, space):
        colors = list(space.colors())[:20]
        lists = [[c] for c in colors for _ in range(1)]
        entries = aggregate_palettes(lists, space, k_emotion=15, min_share=0.0)
        assert len(entries) == 15

    def test_min_share_filter(self, space):
        # one dominant color and one tiny color: 40 vs 1 -> share 1/41 < 3.5%
        a = fc("Red", "High", "Deep")
        b = fc("Blue", "High", "Deep")
        lists = [[a]] * 40 + [[b]]
        entries = aggregate_palettes(lists, space)
        assert [e.color for e in entries] == [a]
        assert all(e.share >= 0.035 for e in entries)

    def test_filter_never_reorders_survivors(self, space):
        rng = random.Random(2)
        colors = list(space.colors())
        lists = []
        for _ in range(300):
            lists.append(rng.sample(colors[:30], k=5))
        filtered = aggregate_palettes(lists, space, min_share=0.035)
        unfiltered = aggregate_palettes(lists, space, min_share=0.0)
        survivors = [e.color for e in filtered]
        reference = [e.color for e in unfiltered if e.share >= 0.035]
        assert survivors == reference


class TestBuildEmotionPalette:
    def test_identical_solid_images_single_entry(self, tmp_path, space, fetcher):
        paths = [
            save_png(tmp_path / f"red{i}.png", (200, 30, 30)) for i in range(10)
        ]
        palette, skipped = build_emotion_palette("anger", paths, fetcher, space)
        assert skipped == 0
        assert palette.image_count == 10
        assert len(palette.entries) == 1
        assert palette.entries[0].share == 1.0

    def test_undecodable_images_skipped(self, tmp_path, space, fetcher):
        good = save_png(tmp_path / "good.png", (10, 200, 10))
        bad = tmp_path / "bad.png"
        bad.write_bytes(b"not an image")
        palette, skipped = build_emotion_palette(
            "love", [good, str(bad)], fetcher, space
        )
        assert skipped == 1
        assert palette.image_count == 1

    def test_all_failing_is_an_error(self, tmp_path, space, fetcher):
        bad = tmp_path / "bad.png"
        bad.write_bytes(b"junk")
        with pytest.raises(BuildError):
            build_emotion_palette("fear", [str(bad)], fetcher, space)

    def test_empty_source_list_is_an_error(self, space, fetcher):
        with pytest.raises(BuildError):
            build_emotion_palette("fear", [], fetcher, space)

    def test_worker_count_does_not_change_result(self, tmp_path, space, fetcher):
        rng = random.Random(9)
        paths = []
        for i in range(12):
            rgb = (rng.randrange(256), rng.randrange(256), rng.randrange(256))
            paths.append(save_png(tmp_path / f"img{i}.png", rgb))
        seq, _ = build_emotion_palette("trust", paths, fetcher, space, workers=1)
        par, _ = build_emotion_palette("trust", paths, fetcher, space, workers=4)
        assert seq == par

    def test_image_order_does_not_change_result(self, tmp_path, space, fetcher):
        rng = random.Random(10)
        paths = []
        for i in range(10):
            rgb = (rng.randrange(256), rng.randrange(256), rng.randrange(256))
            paths.append(save_png(tmp_path / f"o{i}.png", rgb))
        a, _ = build_emotion_palette("trust", paths, fetcher, space)
        shuffled = paths[:]
        rng.shuffle(shuffled)
        b, _ = build_emotion_palette("trust", shuffled, fetcher, space)
        assert a == b


class TestBasicDistribution:
    def test_single_entry_is_100(self, mapping):
        palette = EmotionPalette(
            "anger", (PaletteRecord(fc("Orange", "Medium", "Deep"), 7, 1.0),), 7
        )
        dist = basic_distribution(palette, mapping)
        assert dist["brown"] == 100.0
        assert sum(dist.values()) == pytest.approx(100.0)

    def test_equal_split(self, mapping):
        palette = EmotionPalette(
            "fear",
            (
                PaletteRecord(fc("Blue", "High", "Dark"), 5, 0.5),
                PaletteRecord(fc("Yellow", "Low", "Pale"), 5, 0.5),
            ),
            10,
        )
        dist = basic_distribution(palette, mapping)
        assert dist["black"] == 50.0
        assert dist["gray"] == 50.0

    def test_row_sums_to_100(self, space, mapping):
        rng = random.Random(5)
        colors = rng.sample(list(space.colors()), 12)
        entries = tuple(
            PaletteRecord(c, rng.randrange(1, 50), 0.1) for c in colors
        )
        palette = EmotionPalette("love", entries, 40)
        dist = basic_distribution(palette, mapping)
        assert sum(dist.values()) == pytest.approx(100.0, abs=0.5)


def make_kb(fingerprint="f" * 16):
    palettes = {}
    basic = {}
    for i, emotion in enumerate(EMOTIONS):
        entries = (
            PaletteRecord(fc("Red", "High", "Deep"), 5 + i, 0.6),
            PaletteRecord(fc("Blue", "Medium", "Pale"), 3, 0.4),
        )
        palettes[emotion] = EmotionPalette(emotion, entries, 10)
        basic[emotion] = {"red": 60.0, "blue": 40.0}
    return KnowledgeBase(fingerprint, palettes, basic)


class TestPersistence:
    def test_round_trip(self, tmp_path):
        kb = make_kb()
        path = tmp_path / "kb.json"
        save_kb(kb, path)
        loaded = load_kb(path)
        assert loaded == kb

    def test_fingerprint_mismatch(self, tmp_path):
        kb = make_kb(fingerprint="aaaa")
        path = tmp_path / "kb.json"
        save_kb(kb, path)
        with pytest.raises(FingerprintError):
            load_kb(path, expected_fingerprint="bbbb")

    def test_edited_fingerprint_detected(self, tmp_path):
        kb = make_kb(fingerprint="aaaa")
        path = tmp_path / "kb.json"
        save_kb(kb, path)
        doc = json.loads(path.read_text())
        doc["fingerprint"] = "tampered"
        path.write_text(json.dumps(doc))
        with pytest.raises(FingerprintError):
            load_kb(path, expected_fingerprint="aaaa")

    def test_truncated_file(self, tmp_path):
        kb = make_kb()
        path = tmp_path / "kb.json"
        save_kb(kb, path)
        text = path.read_text()
        path.write_text(text[: len(text) // 2])
        with pytest.raises(ConfigError):
            load_kb(path)

    def test_wrong_schema_version(self, tmp_path):
        path = tmp_path / "kb.json"
        path.write_text(json.dumps({"schema": "emopalette-kb/99", "fingerprint": "x",
                                    "emotions": {}}))
        with pytest.raises(ConfigError):
            load_kb(path)

    def test_missing_emotion_rejected(self, tmp_path):
        kb = make_kb()
        path = tmp_path / "kb.json"
        save_kb(kb, path)
        doc = json.loads(path.read_text())
        del doc["emotions"]["shyness"]
        path.write_text(json.dumps(doc))
        with pytest.raises(ConfigError, match="shyness"):
            load_kb(path)
        # but a partial KB loads when the caller opts out
        partial = load_kb(path, require_all_emotions=False)
        assert "shyness" not in partial.palettes


class TestBuildKnowledgeBase:
    def test_three_image_synthetic_corpus(self, tmp_path, space, mapping, fetcher):
        # hand-built expectation: each emotion gets known solid-color images
        red = save_png(tmp_path / "red.png", (220, 20, 20))
        green = save_png(tmp_path / "green.png", (20, 220, 20))
        blue = save_png(tmp_path / "blue.png", (20, 20, 220))
        sources = {"red": red, "green": green, "blue": blue}
        selection = {e: sorted(sources) for e in EMOTIONS}

        kb, report = build_knowledge_base(
            selection, lambda image_id: sources[image_id], fetcher,
            space, mapping, fingerprint="abc123",
        )
        assert set(kb.palettes) == set(EMOTIONS)
        for emotion in EMOTIONS:
            palette = kb.palettes[emotion]
            assert palette.image_count == 3
            assert len(palette.entries) == 3
            # each solid image contributes exactly one color once
            assert all(rec.frequency == 1 for rec in palette.entries)
            assert report[emotion]["selected"] == 3
        assert kb.fingerprint == "abc123"
        for emotion in EMOTIONS:
            assert sum(kb.basic[emotion].values()) == pytest.approx(100.0, abs=0.5)
