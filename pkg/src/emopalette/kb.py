"""Emotion fuzzy palettes and the persisted knowledge base.

Per emotion: every selected image contributes its top-k dominant fuzzy
colors (one count per appearance); the top 15 colors by frequency form the
emotion palette, minus entries holding less than 3.5% of the retained
frequency mass. Basic-color rows are the defuzzified percentage
distribution over the retained entries.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from .colorspace import BASIC_COLORS, BasicColorMapping, FuzzyColor, FuzzyColorSpace
from .dataset import EMOTIONS, ImageFetcher
from .errors import BuildError, ConfigError, FingerprintError, InputError
from .palette import dominant_palette, preprocess

logger = logging.getLogger(__name__)

KB_SCHEMA = "emopalette-kb/1"

DEFAULT_K_IMAGE = 5
DEFAULT_K_EMOTION = 15
DEFAULT_MIN_SHARE = 0.035


@dataclass(frozen=True)
class PaletteRecord:
    color: FuzzyColor
    frequency: int
    share: float


@dataclass(frozen=True)
class EmotionPalette:
    emotion: str
    entries: tuple[PaletteRecord, ...]
    image_count: int

    def colors(self) -> set[FuzzyColor]:
        return {e.color for e in self.entries}


@dataclass
class KnowledgeBase:
    fingerprint: str
    palettes: dict[str, EmotionPalette]
    basic: dict[str, dict[str, float]]

    def emotions(self) -> tuple[str, ...]:
        return tuple(self.palettes)


def aggregate_palettes(per_image_colors: Iterable[Iterable[FuzzyColor]],
                       space: FuzzyColorSpace,
                       k_emotion: int = DEFAULT_K_EMOTION,
                       min_share: float = DEFAULT_MIN_SHARE,
                       ) -> tuple[PaletteRecord, ...]:
    """Frequency-aggregate image palettes into emotion palette entries.

    Shares are computed over the top-k frequency mass before filtering and
    are not renormalized afterwards, so they may sum to less than 1.
    """
    counts: Counter[FuzzyColor] = Counter()
    for colors in per_image_colors:
        for color in colors:
            counts[color] += 1
    if not counts:
        return ()
    top = sorted(counts.items(), key=lambda kv: (-kv[1], space.index_of(kv[0])))
    top = top[:k_emotion]
    total = sum(freq for _, freq in top)
    return tuple(
        PaletteRecord(color, freq, freq / total)
        for color, freq in top
        if freq / total >= min_share
    )


def image_palette_colors(data: bytes, space: FuzzyColorSpace,
                         k_img: int = DEFAULT_K_IMAGE) -> list[FuzzyColor]:
    """Top-k dominant fuzzy colors of one image."""
    return [e.color for e in dominant_palette(preprocess(data), space, k=k_img)]


def build_emotion_palette(emotion: str,
                          sources: list[str],
                          fetcher: ImageFetcher,
                          space: FuzzyColorSpace,
                          k_img: int = DEFAULT_K_IMAGE,
                          k_emotion: int = DEFAULT_K_EMOTION,
                          min_share: float = DEFAULT_MIN_SHARE,
                          workers: int = 1) -> tuple[EmotionPalette, int]:
    """Build one emotion's palette; returns (palette, skipped image count).

    Undecodable or unfetchable images are skipped and logged; if every
    image fails the build aborts.
    """
    if not sources:
        raise BuildError(f"no images selected for emotion {emotion!r}")

    def one(source: str):
        try:
            return image_palette_colors(fetcher.fetch(source), space, k_img)
        except InputError as exc:
            logger.warning("skipping %s: %s", source, exc)
            return None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, sources))
    else:
        results = [one(s) for s in sources]

    usable = [colors for colors in results if colors is not None]
    skipped = len(results) - len(usable)
    if not usable:
        raise BuildError(f"all {len(sources)} images failed for emotion {emotion!r}")
    entries = aggregate_palettes(usable, space, k_emotion, min_share)
    return EmotionPalette(emotion, entries, len(usable)), skipped


def basic_distribution(palette: EmotionPalette,
                       mapping: BasicColorMapping) -> dict[str, float]:
    """Percentage of retained frequency mass per basic color (sums to 100)."""
    accrued = {basic: 0 for basic in BASIC_COLORS}
    total = 0
    for entry in palette.entries:
        accrued[mapping.to_basic(entry.color)] += entry.frequency
        total += entry.frequency
    if total == 0:
        return {basic: 0.0 for basic in BASIC_COLORS}
    return {basic: 100.0 * freq / total for basic, freq in accrued.items()}


def build_knowledge_base(selection: dict[str, list[str]],
                         url_of: Callable[[str], str],
                         fetcher: ImageFetcher,
                         space: FuzzyColorSpace,
                         mapping: BasicColorMapping,
                         fingerprint: str,
                         k_img: int = DEFAULT_K_IMAGE,
                         k_emotion: int = DEFAULT_K_EMOTION,
                         min_share: float = DEFAULT_MIN_SHARE,
                         workers: int = 1,
                         ) -> tuple[KnowledgeBase, dict[str, dict]]:
    """Build palettes for every emotion in the selection.

    Aggregation is order-independent: per-image counts merge by addition,
    so worker count and processing order never change the result.
    """
    palettes = {}
    report = {}
    for emotion in EMOTIONS:
        if emotion not in selection:
            continue
        sources = [url_of(image_id) for image_id in selection[emotion]]
        palette, skipped = build_emotion_palette(
            emotion, sources, fetcher, space,
            k_img=k_img, k_emotion=k_emotion, min_share=min_share,
            workers=workers,
        )
        palettes[emotion] = palette
        report[emotion] = {
            "selected": len(sources),
            "used": palette.image_count,
            "skipped": skipped,
            "palette_size": len(palette.entries),
        }
    basic = {e: basic_distribution(p, mapping) for e, p in palettes.items()}
    return KnowledgeBase(fingerprint, palettes, basic), report


def save_kb(kb: KnowledgeBase, path: str | Path) -> None:
    doc = {
        "schema": KB_SCHEMA,
        "fingerprint": kb.fingerprint,
        "emotions": {
            emotion: {
                "image_count": palette.image_count,
                "entries": [
                    {
                        "hue": rec.color.hue,
                        "saturation": rec.color.saturation,
                        "intensity": rec.color.intensity,
                        "frequency": rec.frequency,
                        "share": rec.share,
                    }
                    for rec in palette.entries
                ],
                "basic_percent": kb.basic[emotion],
            }
            for emotion, palette in kb.palettes.items()
        },
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_kb(path: str | Path, expected_fingerprint: str | None = None,
            require_all_emotions: bool = True) -> KnowledgeBase:
    """Load a knowledge base, verifying schema and optionally the fingerprint.

    A fingerprint mismatch means the KB was built under different color
    semantics and must not be scored against the active configuration.
    """
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read knowledge base {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"knowledge base {path} is malformed: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != KB_SCHEMA:
        raise ConfigError(
            f"knowledge base {path}: expected schema {KB_SCHEMA!r}, "
            f"got {doc.get('schema')!r}"
        )
    fingerprint = doc.get("fingerprint")
    if not isinstance(fingerprint, str) or not fingerprint:
        raise ConfigError(f"knowledge base {path} has no fingerprint")
    if expected_fingerprint is not None and fingerprint != expected_fingerprint:
        raise FingerprintError(expected=expected_fingerprint, got=fingerprint)

    emotions_doc = doc.get("emotions")
    if not isinstance(emotions_doc, dict):
        raise ConfigError(f"knowledge base {path} has no emotions table")
    if require_all_emotions:
        missing = [e for e in EMOTIONS if e not in emotions_doc]
        if missing:
            raise ConfigError(
                f"knowledge base {path} is missing emotions: {', '.join(missing)}"
            )

    palettes = {}
    basic = {}
    try:
        for emotion, entry in emotions_doc.items():
            records = tuple(
                PaletteRecord(
                    FuzzyColor(e["hue"], e["saturation"], e["intensity"]),
                    int(e["frequency"]),
                    float(e["share"]),
                )
                for e in entry["entries"]
            )
            palettes[emotion] = EmotionPalette(emotion, records,
                                               int(entry["image_count"]))
            basic[emotion] = {k: float(v) for k, v in entry["basic_percent"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"knowledge base {path} is malformed: {exc}") from exc
    return KnowledgeBase(fingerprint, palettes, basic)
