"""Report artifacts: palette strips, the emotion/basic-color matrix, HSI
term distributions, heatmap and psychometric chart rendering.

Fuzzy colors are displayed at the crisp HSI point in the middle of each
term's kernel, converted to RGB with the standard sector formulas. That
inverse is display-only plumbing; scoring never uses it.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Sequence

from PIL import Image, ImageDraw

from .colorspace import BASIC_COLORS, FuzzyColor, FuzzyColorSpace
from .fuzzy import TRIANGULAR, MembershipFunction
from .kb import KnowledgeBase


def hsi_to_display_rgb(h: float | None, s: float, i: float) -> tuple[int, int, int]:
    """Approximate RGB for an HSI point (S in 0-100, I in 0-255)."""
    sn = min(1.0, max(0.0, s / 100.0))
    if h is None or sn == 0.0:
        level = int(round(i))
        return (min(255, level),) * 3
    h = h % 360.0
    if h < 120.0:
        sector = h
        first = i * (1.0 + sn * math.cos(math.radians(sector))
                     / math.cos(math.radians(60.0 - sector)))
        third = i * (1.0 - sn)
        second = 3.0 * i - first - third
        r, g, b = first, second, third
    elif h < 240.0:
        sector = h - 120.0
        first = i * (1.0 + sn * math.cos(math.radians(sector))
                     / math.cos(math.radians(60.0 - sector)))
        third = i * (1.0 - sn)
        second = 3.0 * i - first - third
        r, g, b = third, first, second
    else:
        sector = h - 240.0
        first = i * (1.0 + sn * math.cos(math.radians(sector))
                     / math.cos(math.radians(60.0 - sector)))
        third = i * (1.0 - sn)
        second = 3.0 * i - first - third
        r, g, b = second, third, first
    clamp = lambda v: max(0, min(255, int(round(v))))
    return clamp(r), clamp(g), clamp(b)


def _kernel_midpoint(mf: MembershipFunction) -> float:
    pts = mf.points
    if mf.shape == TRIANGULAR:
        mid = pts[1]
    else:
        mid = (pts[1] + pts[2]) / 2.0
    if mf.cyclic:
        mid = mf.points[0] + ((mid - mf.points[0]) % mf.period)
        mid = mid % mf.period
    return mid


def representative_hsi(color: FuzzyColor, space: FuzzyColorSpace
                       ) -> tuple[float, float, float]:
    """Peak-membership crisp HSI point of a fuzzy color."""
    by_name = {
        "hue": dict(space.hue.terms)[color.hue],
        "saturation": dict(space.saturation.terms)[color.saturation],
        "intensity": dict(space.intensity.terms)[color.intensity],
    }
    return (
        _kernel_midpoint(by_name["hue"]),
        _kernel_midpoint(by_name["saturation"]),
        _kernel_midpoint(by_name["intensity"]),
    )


def color_hex(color: FuzzyColor, space: FuzzyColorSpace) -> str:
    h, s, i = representative_hsi(color, space)
    r, g, b = hsi_to_display_rgb(h, s, i)
    return f"#{r:02x}{g:02x}{b:02x}"


def palette_strip(weighted_colors: Sequence[tuple[FuzzyColor, float]],
                  space: FuzzyColorSpace, path: str | Path,
                  width: int = 600, height: int = 60) -> Path:
    """Horizontal strip of swatches sized by weight."""
    path = Path(path)
    img = Image.new("RGB", (width, height), (255, 255, 255))
    draw = ImageDraw.Draw(img)
    total = sum(w for _, w in weighted_colors)
    if total > 0:
        x = 0.0
        for color, weight in weighted_colors:
            h, s, i = representative_hsi(color, space)
            rgb = hsi_to_display_rgb(h, s, i)
            span = width * weight / total
            draw.rectangle([x, 0, x + span, height], fill=rgb)
            x += span
    img.save(path, format="PNG")
    return path


def basic_matrix_rows(kb: KnowledgeBase) -> list[list[str]]:
    """Emotion x basic-color percentage table (two decimals, header first)."""
    rows = [["emotion", *BASIC_COLORS]]
    for emotion in sorted(kb.basic):
        row = kb.basic[emotion]
        rows.append([emotion] + [f"{row.get(c, 0.0):.2f}" for c in BASIC_COLORS])
    return rows


def format_tsv(rows: Iterable[Sequence[str]]) -> str:
    return "\n".join("\t".join(row) for row in rows) + "\n"


def hsi_distribution_rows(kb: KnowledgeBase, space: FuzzyColorSpace
                          ) -> list[list[str]]:
    """Frequency of each H/S/I term across every emotion palette."""
    rows = [["emotion", "attribute", "term", "frequency"]]
    for emotion in sorted(kb.palettes):
        palette = kb.palettes[emotion]
        for attribute, terms in (
            ("hue", space.hue.term_names()),
            ("saturation", space.saturation.term_names()),
            ("intensity", space.intensity.term_names()),
        ):
            freq = {t: 0 for t in terms}
            for rec in palette.entries:
                term = getattr(rec.color, attribute)
                freq[term] += rec.frequency
            for term in terms:
                rows.append([emotion, attribute, term, str(freq[term])])
    return rows


def heatmap_png(kb: KnowledgeBase, path: str | Path) -> Path:
    """Render the emotion/basic-color matrix as a heatmap image."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    emotions = sorted(kb.basic)
    data = np.array([
        [kb.basic[e].get(c, 0.0) for c in BASIC_COLORS] for e in emotions
    ])
    fig, ax = plt.subplots(figsize=(10, 6))
    im = ax.imshow(data, cmap="YlOrBr", aspect="auto")
    ax.set_xticks(range(len(BASIC_COLORS)), BASIC_COLORS, rotation=45, ha="right")
    ax.set_yticks(range(len(emotions)), emotions)
    for y in range(data.shape[0]):
        for x in range(data.shape[1]):
            if data[y, x] > 0:
                ax.text(x, y, f"{data[y, x]:.1f}", ha="center", va="center",
                        fontsize=7)
    fig.colorbar(im, ax=ax, label="% of palette")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def psychometric_chart(report, path: str | Path) -> Path:
    """Observed proportion-correct points plus the fitted curve."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    fig, ax = plt.subplots(figsize=(7, 5))
    xs = [p.x for p in report.points]
    gs = [p.g for p in report.points]
    ax.plot(xs, gs, "o", label="observed")
    if report.fit is not None:
        grid = np.linspace(0.0, 1.0, 200)
        ax.plot(grid, report.fit.curve(grid), "-",
                label=f"logistic fit (t={report.fit.threshold:.3f})")
    ax.axhline(0.5, color="gray", linewidth=0.5)
    ax.set_xlabel("stimulus difference")
    ax.set_ylabel("proportion correct")
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def psychometric_plot_data(report) -> str:
    """TSV of (x, observed g, fitted g) for external plotting."""
    rows = [["x", "observed", "fitted"]]
    for p in report.points:
        fitted = (
            f"{float(report.fit.curve(p.x)):.6f}" if report.fit is not None else ""
        )
        rows.append([f"{p.x:g}", f"{p.g:.6f}", fitted])
    return format_tsv(rows)
