"""Crisp RGB -> HSI conversion, fuzzification into the 120-color space, and
the rule cascade that collapses fuzzy colors to 11 basic crisp colors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import config as cfg
from .errors import ConfigError
from .fuzzy import LinguisticVariable

BASIC_COLORS = (
    "red", "orange", "yellow", "green", "cyan", "blue",
    "black", "brown", "beige", "purple", "gray",
)

# Hues that fall through the cascade onto their own crisp color.
_NAMESAKE_HUES = {
    "Red": "red", "Orange": "orange", "Yellow": "yellow",
    "Green": "green", "Cyan": "cyan", "Blue": "blue",
}


class HsiPixel(NamedTuple):
    """HSI color point. h is None for achromatic pixels (s == 0)."""

    h: float | None
    s: float
    i: float


def rgb_to_hsi(r: int, g: int, b: int) -> HsiPixel:
    """Convert 8-bit RGB to HSI.

    I is the channel mean on the 0-255 scale, S = 100 * (1 - 3*min/sum)
    with black defined as S = 0, and H comes from the arccos formulation,
    reflected to 360 - theta when B > G. Equal channels are achromatic.
    """
    total = r + g + b
    i = total / 3.0
    if total == 0 or (r == g == b):
        return HsiPixel(None, 0.0, i)
    s = 100.0 * (1.0 - 3.0 * min(r, g, b) / total)
    num = 0.5 * ((r - g) + (r - b))
    den = math.sqrt((r - g) * (r - g) + (r - b) * (g - b))
    c = num / den
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    theta = math.degrees(math.acos(c))
    h = theta if b <= g else 360.0 - theta
    return HsiPixel(h, s, i)


@dataclass(frozen=True)
class FuzzyColor:
    """One linguistic color label: a (hue, saturation, intensity) term triple."""

    hue: str
    saturation: str
    intensity: str

    def label(self) -> str:
        return f"{self.hue}/{self.saturation}/{self.intensity}"


class FuzzyColorSpace:
    """The partition of HSI space into fuzzy colors (8 x 3 x 5 by default).

    Colors carry a total order (intensity-major, then saturation, then hue,
    all in declaration order) realized as a dense index; histograms and all
    tie-breaks use that index.
    """

    _DOMAINS = {"hue": (0.0, 360.0), "saturation": (0.0, 100.0), "intensity": (0.0, 255.0)}

    def __init__(self, hue: LinguisticVariable, saturation: LinguisticVariable,
                 intensity: LinguisticVariable):
        for var in (hue, saturation, intensity):
            expected = self._DOMAINS.get(var.name)
            if expected is not None and tuple(var.domain) != expected:
                raise ConfigError(
                    f"{var.name} domain must be {expected} for HSI semantics, "
                    f"got {var.domain}"
                )
        self.hue = hue
        self.saturation = saturation
        self.intensity = intensity
        self._hue_terms = hue.term_names()
        self._sat_terms = saturation.term_names()
        self._int_terms = intensity.term_names()
        self._hue_idx = {t: i for i, t in enumerate(self._hue_terms)}
        self._sat_idx = {t: i for i, t in enumerate(self._sat_terms)}
        self._int_idx = {t: i for i, t in enumerate(self._int_terms)}
        self._colors = tuple(
            FuzzyColor(h, s, i)
            for i in self._int_terms
            for s in self._sat_terms
            for h in self._hue_terms
        )

    @classmethod
    def from_spec(cls, partitions: dict | None = None) -> "FuzzyColorSpace":
        spec = partitions if partitions is not None else cfg.DEFAULT_PARTITIONS
        variables = cfg.variables_from_spec(spec)
        return cls(variables["hue"], variables["saturation"], variables["intensity"])

    def __len__(self) -> int:
        return len(self._colors)

    def colors(self) -> tuple[FuzzyColor, ...]:
        return self._colors

    def color_at(self, index: int) -> FuzzyColor:
        return self._colors[index]

    def index_of(self, color: FuzzyColor) -> int:
        try:
            hi = self._hue_idx[color.hue]
            si = self._sat_idx[color.saturation]
            ii = self._int_idx[color.intensity]
        except KeyError as exc:
            raise ConfigError(f"unknown term in {color!r}") from exc
        return (ii * len(self._sat_terms) + si) * len(self._hue_terms) + hi

    def fuzzify(self, pixel: HsiPixel) -> tuple[FuzzyColor, dict[str, tuple[str, float]]]:
        """Classify a pixel per attribute; achromatic pixels use hue 0.

        Returns the fuzzy color plus the winning (term, degree) per attribute.
        """
        h = 0.0 if pixel.h is None else pixel.h
        hue_t, hue_mu = self.hue.classify(h)
        sat_t, sat_mu = self.saturation.classify(pixel.s)
        int_t, int_mu = self.intensity.classify(pixel.i)
        color = FuzzyColor(hue_t, sat_t, int_t)
        degrees = {
            "hue": (hue_t, hue_mu),
            "saturation": (sat_t, sat_mu),
            "intensity": (int_t, int_mu),
        }
        return color, degrees

    def fuzzify_rgb(self, r: int, g: int, b: int) -> FuzzyColor:
        return self.fuzzify(rgb_to_hsi(r, g, b))[0]


class BasicColorMapping:
    """Defuzzification cascade from fuzzy colors to the 11 basic colors.

    Fixed rules run first: Dark intensity -> black, Low saturation -> gray,
    Violet/Magenta hue -> purple. Then the configured carve-out rules (first
    match wins), then the namesake fallback for the six remaining hues.
    Totality over the whole space is checked at construction.
    """

    def __init__(self, space: FuzzyColorSpace, mapping_doc: dict | None = None):
        doc = mapping_doc if mapping_doc is not None else cfg.DEFAULT_MAPPING
        known = {
            "hue": set(space.hue.term_names()),
            "saturation": set(space.saturation.term_names()),
            "intensity": set(space.intensity.term_names()),
        }
        rules = []
        for i, rule in enumerate(doc.get("rules", [])):
            basic = rule.get("basic")
            if basic not in BASIC_COLORS:
                raise ConfigError(f"mapping rule #{i}: unknown basic color {basic!r}")
            for attr, terms in known.items():
                unknown = set(rule.get(attr, [])) - terms
                if unknown:
                    raise ConfigError(
                        f"mapping rule #{i}: unknown {attr} terms {sorted(unknown)}"
                    )
            rules.append((
                frozenset(rule.get("hue", [])),
                frozenset(rule.get("saturation", [])),
                frozenset(rule.get("intensity", [])),
                basic,
            ))
        self._table: dict[FuzzyColor, str] = {}
        for color in space.colors():
            self._table[color] = self._resolve(color, rules)
        self._space = space

    @staticmethod
    def _resolve(color: FuzzyColor, rules) -> str:
        if color.intensity == "Dark":
            return "black"
        if color.saturation == "Low":
            return "gray"
        if color.hue in ("Violet", "Magenta"):
            return "purple"
        for hues, sats, ints, basic in rules:
            if color.hue in hues and color.saturation in sats and color.intensity in ints:
                return basic
        namesake = _NAMESAKE_HUES.get(color.hue)
        if namesake is None:
            raise ConfigError(
                f"no basic color for {color.label()}: hue {color.hue!r} has no "
                f"namesake and no rule matched"
            )
        return namesake

    def to_basic(self, color: FuzzyColor) -> str:
        try:
            return self._table[color]
        except KeyError:
            raise ConfigError(f"{color!r} is not a color of the active space") from None
