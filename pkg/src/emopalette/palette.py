"""Image preprocessing and dominant fuzzy palette extraction.

Pipeline per image: decode -> composite alpha over white -> convert to RGB
-> resize to 200x200 -> per-pixel fuzzification -> 120-bin histogram ->
top-k palette with proportions.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from . import kernel
from .colorspace import FuzzyColor, FuzzyColorSpace
from .errors import InputError

NORMALIZED_SIZE = (200, 200)

RESAMPLE_FILTERS = {
    "nearest": Image.Resampling.NEAREST,
    "bilinear": Image.Resampling.BILINEAR,
    "bicubic": Image.Resampling.BICUBIC,
    "lanczos": Image.Resampling.LANCZOS,
}


@dataclass(frozen=True)
class PaletteEntry:
    color: FuzzyColor
    proportion: float


@dataclass(frozen=True)
class FuzzyPalette:
    """Ordered dominant colors of an image or emotion (proportion descending)."""

    entries: tuple[PaletteEntry, ...]

    def colors(self) -> set[FuzzyColor]:
        return {e.color for e in self.entries}

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def preprocess(data: bytes, size: tuple[int, int] = NORMALIZED_SIZE,
               resample: str = "bilinear") -> np.ndarray:
    """Decode image bytes into a normalized (h, w, 3) uint8 RGB array.

    Alpha is composited over white; grayscale is expanded to RGB; the resize
    does not preserve aspect ratio.
    """
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except UnidentifiedImageError as exc:
        raise InputError(
            f"cannot decode image ({len(data)} bytes, header {data[:8]!r}): {exc}"
        ) from exc
    except OSError as exc:
        raise InputError(f"cannot read image data: {exc}") from exc
    if img.width == 0 or img.height == 0:
        raise InputError("image has a zero dimension")

    if img.mode in ("RGBA", "LA", "PA") or (
        img.mode == "P" and "transparency" in img.info
    ):
        rgba = img.convert("RGBA")
        background = Image.new("RGB", rgba.size, (255, 255, 255))
        background.paste(rgba, mask=rgba.getchannel("A"))
        img = background
    else:
        img = img.convert("RGB")

    try:
        flt = RESAMPLE_FILTERS[resample]
    except KeyError:
        raise InputError(f"unknown resampling filter {resample!r}") from None
    img = img.resize(size, flt)
    return np.asarray(img, dtype=np.uint8)


def fuzzy_histogram(img: np.ndarray, space: FuzzyColorSpace) -> np.ndarray:
    """Per-pixel fuzzy color counts; sums to the pixel count."""
    return kernel.histogram_counts(img, space)


def dominant_palette(source, space: FuzzyColorSpace, k: int = 5) -> FuzzyPalette:
    """Top-k fuzzy colors of an image or precomputed histogram.

    Count ties break toward the lower color index (the space's total order);
    fewer than k entries come back when fewer bins are nonzero.
    """
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    if isinstance(source, np.ndarray) and source.ndim == 1:
        hist = source
    else:
        hist = fuzzy_histogram(source, space)
    total = int(hist.sum())
    if total == 0:
        return FuzzyPalette(())
    order = sorted(
        (i for i in range(len(hist)) if hist[i] > 0),
        key=lambda i: (-int(hist[i]), i),
    )
    entries = tuple(
        PaletteEntry(space.color_at(i), int(hist[i]) / total) for i in order[:k]
    )
    return FuzzyPalette(entries)


def format_palette(palette: FuzzyPalette) -> str:
    """Tab-separated palette records: hue, saturation, intensity, proportion."""
    lines = [
        f"{e.color.hue}\t{e.color.saturation}\t{e.color.intensity}\t{e.proportion:.6f}"
        for e in palette
    ]
    return "\n".join(lines)
