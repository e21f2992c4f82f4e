"""Jaccard scoring of images against emotion palettes and fuzzy-hedge
retrieval queries.

Scores compare label sets only; proportions are deliberately ignored (a
frequency-weighted variant exists behind a flag but carries no claims).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .colorspace import FuzzyColor
from .errors import QueryError
from .fuzzy import HEDGE_NAMES, LinguisticVariable, apply_hedges, normalize_hedge
from .kb import KnowledgeBase
from .palette import FuzzyPalette

INTENSITY_TERMS = ("low", "medium", "high")


@dataclass(frozen=True)
class EmotionScore:
    emotion: str
    jaccard: float


def jaccard(a: Iterable[FuzzyColor], b: Iterable[FuzzyColor]) -> float:
    """|A n B| / |A u B|, with 0/0 defined as 0."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)


def weighted_jaccard(a: Mapping[FuzzyColor, float],
                     b: Mapping[FuzzyColor, float]) -> float:
    """Proportion-weighted variant: sum of min weights over sum of max."""
    keys = set(a) | set(b)
    if not keys:
        return 0.0
    hi = sum(max(a.get(k, 0.0), b.get(k, 0.0)) for k in keys)
    if hi == 0.0:
        return 0.0
    lo = sum(min(a.get(k, 0.0), b.get(k, 0.0)) for k in keys)
    return lo / hi


def score_emotions(image_palette: FuzzyPalette | Iterable[FuzzyColor],
                   kb: KnowledgeBase,
                   weighted: bool = False) -> list[EmotionScore]:
    """One Jaccard score per KB emotion, descending; ties alphabetical."""
    if isinstance(image_palette, FuzzyPalette):
        colors = image_palette.colors()
        weights = {e.color: e.proportion for e in image_palette}
    else:
        colors = set(image_palette)
        weights = {c: 1.0 for c in colors}
    scores = []
    for emotion, palette in kb.palettes.items():
        if weighted:
            pw = {rec.color: rec.share for rec in palette.entries}
            j = weighted_jaccard(weights, pw)
        else:
            j = jaccard(colors, palette.colors())
        scores.append(EmotionScore(emotion, j))
    scores.sort(key=lambda s: (-s.jaccard, s.emotion))
    return scores


def top_emotion(scores: Sequence[EmotionScore]) -> str:
    return scores[0].emotion


@dataclass(frozen=True)
class Query:
    """Parsed retrieval query: `[not] [very|more-or-less]* {term} {emotion}`."""

    emotion: str
    intensity: str
    hedges: tuple[str, ...]


def parse_query(emotion: str, intensity: str, hedges: Sequence[str] | str,
                known_emotions: Iterable[str]) -> Query:
    known = set(known_emotions)
    emotion = emotion.strip().lower()
    if emotion not in known:
        raise QueryError(emotion, "unknown emotion")
    intensity = intensity.strip().lower()
    if intensity not in INTENSITY_TERMS:
        raise QueryError(intensity, f"intensity term must be one of {INTENSITY_TERMS}")
    if isinstance(hedges, str):
        hedges = [h for h in hedges.replace(",", " ").split() if h]
    normalized = []
    for token in hedges:
        try:
            normalized.append(normalize_hedge(token))
        except Exception:
            raise QueryError(token, f"hedge must be one of {HEDGE_NAMES}") from None
    for i, h in enumerate(normalized):
        if h == "not" and i != 0:
            raise QueryError(h, "'not' may only lead the hedge sequence")
    return Query(emotion=emotion, intensity=intensity, hedges=tuple(normalized))


def query_degree(query: Query, score: float,
                 match_variable: LinguisticVariable) -> float:
    """Hedged membership of one image's emotion score in the query term."""
    memberships = match_variable.memberships(score)
    try:
        mu = memberships[query.intensity]
    except KeyError:
        raise QueryError(query.intensity,
                         "term missing from the match variable") from None
    return apply_hedges(query.hedges, mu)


def rank_images(query: Query,
                image_scores: Mapping[str, Mapping[str, float]],
                match_variable: LinguisticVariable) -> list[tuple[str, float]]:
    """Rank image ids by hedged query degree, descending; ties by id."""
    ranked = []
    for image_id, scores in image_scores.items():
        score = scores.get(query.emotion, 0.0)
        ranked.append((image_id, query_degree(query, score, match_variable)))
    ranked.sort(key=lambda pair: (-pair[1], pair[0]))
    return ranked
