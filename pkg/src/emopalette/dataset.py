"""WikiArt Emotions annotation ingestion and image fetching.

The annotation file is the published tab-separated format: one row per art
piece with an ID column, an image URL column, and per-emotion agreement
fractions in columns named like "Image: happiness" (the image-only
annotation set). An image is selected for an emotion when its agreement
fraction meets that emotion's threshold.
"""

from __future__ import annotations

import hashlib
import logging
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InputError

logger = logging.getLogger(__name__)

EMOTIONS = (
    "gratitude", "happiness", "anger", "love", "trust",
    "fear", "surprise", "sadness", "shame", "shyness",
)

# Agreement thresholds: half the annotators, except shyness which would
# keep a single image at 0.5.
DEFAULT_THRESHOLDS = {e: 0.5 for e in EMOTIONS}
DEFAULT_THRESHOLDS["shyness"] = 0.3

CACHE_DIR_ENV = "EMOPALETTE_CACHE_DIR"

_IMAGE_COL = re.compile(r"^\s*image\s*(?:only)?\s*:\s*(.+?)\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class AnnotationRecord:
    image_id: str
    url: str
    agreement: dict[str, float]


@dataclass
class AnnotationSet:
    records: list[AnnotationRecord]
    selected: dict[str, list[str]]
    skipped_rows: int = 0

    def record(self, image_id: str) -> AnnotationRecord:
        return self._by_id[image_id]

    def __post_init__(self):
        self._by_id = {r.image_id: r for r in self.records}

    def counts(self) -> dict[str, int]:
        return {e: len(ids) for e, ids in self.selected.items()}


def _header_columns(header: list[str]) -> tuple[int, int, dict[str, int]]:
    id_col = url_col = None
    emotion_cols: dict[str, int] = {}
    for i, name in enumerate(header):
        low = name.strip().lower()
        if low == "id":
            id_col = i
        elif "image url" in low:
            url_col = i
        else:
            m = _IMAGE_COL.match(name)
            if m:
                emotion = m.group(1).strip().lower()
                if emotion in EMOTIONS:
                    emotion_cols[emotion] = i
    if id_col is None:
        raise InputError("annotation file is missing the 'ID' column")
    if url_col is None:
        raise InputError("annotation file is missing the 'Image URL' column")
    missing = [e for e in EMOTIONS if e not in emotion_cols]
    if missing:
        raise InputError(
            f"annotation file is missing image-only columns for: "
            + ", ".join(f"'Image: {e}'" for e in missing)
        )
    return id_col, url_col, emotion_cols


def load_annotations(path: str | Path,
                     thresholds: dict[str, float] | None = None) -> AnnotationSet:
    """Parse annotations and select image ids per emotion.

    Unreadable rows are skipped and counted; missing columns raise
    InputError naming the column.
    """
    thresholds = dict(DEFAULT_THRESHOLDS, **(thresholds or {}))
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read annotation file {path}: {exc}") from exc
    if not lines:
        raise InputError(f"annotation file {path} is empty")

    header = lines[0].split("\t")
    id_col, url_col, emotion_cols = _header_columns(header)
    needed = max(id_col, url_col, *emotion_cols.values()) + 1

    records = []
    skipped = 0
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) < needed:
            skipped += 1
            logger.warning("row %d: %d fields, expected >= %d; skipped",
                           lineno, len(fields), needed)
            continue
        try:
            agreement = {}
            for emotion, col in emotion_cols.items():
                value = float(fields[col])
                if not 0.0 <= value <= 1.0:
                    raise ValueError(f"agreement {value} outside [0, 1]")
                agreement[emotion] = value
        except ValueError as exc:
            skipped += 1
            logger.warning("row %d: %s; skipped", lineno, exc)
            continue
        records.append(AnnotationRecord(
            image_id=fields[id_col].strip(),
            url=fields[url_col].strip(),
            agreement=agreement,
        ))

    selected = {
        emotion: sorted(
            r.image_id for r in records
            if r.agreement[emotion] >= thresholds.get(emotion, 0.5)
        )
        for emotion in EMOTIONS
    }
    return AnnotationSet(records=records, selected=selected, skipped_rows=skipped)


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_DIR_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "emopalette"


class ImageFetcher:
    """Fetches image bytes by URL or local path with content-addressed caching.

    Remote downloads land in the cache directory keyed by the URL hash, so
    corpus builds are resumable. Local paths bypass the cache.
    """

    def __init__(self, cache_dir: str | Path | None = None, timeout: float = 30.0):
        self.cache_dir = Path(cache_dir) if cache_dir else default_cache_dir()
        self.timeout = timeout

    def fetch(self, source: str) -> bytes:
        if source.startswith(("http://", "https://")):
            return self._fetch_remote(source)
        if source.startswith("file://"):
            source = source[len("file://"):]
        try:
            return Path(source).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read image {source}: {exc}") from exc

    def _cache_path(self, url: str) -> Path:
        return self.cache_dir / hashlib.sha256(url.encode()).hexdigest()

    def _fetch_remote(self, url: str) -> bytes:
        cached = self._cache_path(url)
        if cached.exists():
            return cached.read_bytes()
        import httpx

        try:
            response = httpx.get(url, timeout=self.timeout, follow_redirects=True)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise InputError(f"cannot download {url}: {exc}") from exc
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        tmp = cached.with_suffix(".part")
        tmp.write_bytes(response.content)
        tmp.replace(cached)
        return response.content
