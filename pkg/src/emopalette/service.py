"""HTTP JSON API: knowledge-base inspection, image tagging, and fuzzy-hedge
emotion retrieval over an on-disk image index.

Concurrency model: reads are lock-free against an immutable snapshot
(knowledge base + per-image scores); index writes and KB reloads serialize
on one lock and swap the snapshot atomically, so in-flight requests finish
on whichever snapshot they started with.
"""

from __future__ import annotations

import hashlib
import io
import json
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse
from PIL import Image

from .colorspace import BASIC_COLORS, FuzzyColor
from .dataset import ImageFetcher
from .errors import (
    ConfigError,
    EmopaletteError,
    FingerprintError,
    InputError,
    QueryError,
)
from .kb import KnowledgeBase, load_kb
from .palette import FuzzyPalette, PaletteEntry, dominant_palette, preprocess
from .render import color_hex
from .runtime import ActiveConfig
from .scoring import parse_query, query_degree, score_emotions

THUMBNAIL_SIZE = (128, 128)


class Snapshot:
    """One immutable view of the knowledge base plus per-image scores."""

    def __init__(self, kb: KnowledgeBase, rescore: str = "eager"):
        self.kb = kb
        self.lazy = rescore == "lazy"
        self._scores: dict[str, list] = {}

    def prime(self, entries: dict[str, "IndexEntry"]) -> None:
        if not self.lazy:
            for entry in entries.values():
                self._scores[entry.image_id] = score_emotions(entry.palette, self.kb)

    def scores_for(self, entry: "IndexEntry") -> list:
        scores = self._scores.get(entry.image_id)
        if scores is None:
            # deterministic, so a concurrent duplicate compute is harmless
            scores = score_emotions(entry.palette, self.kb)
            self._scores.setdefault(entry.image_id, scores)
        return scores


class IndexEntry:
    def __init__(self, image_id: str, source: str, palette: FuzzyPalette):
        self.image_id = image_id
        self.source = source
        self.palette = palette


class ServiceState:
    def __init__(self, active: ActiveConfig, index_dir: Path,
                 kb_path: str | None, rescore: str):
        self.active = active
        self.index_dir = index_dir
        self.kb_path = kb_path
        self.rescore = rescore
        self.entries: dict[str, IndexEntry] = {}
        self.snapshot: Snapshot | None = None
        self.write_lock = threading.Lock()
        (index_dir / "entries").mkdir(parents=True, exist_ok=True)
        (index_dir / "thumbnails").mkdir(parents=True, exist_ok=True)
        self._load_entries()
        if kb_path is not None:
            self.load_kb(kb_path)

    def _load_entries(self) -> None:
        for path in sorted((self.index_dir / "entries").glob("*.json")):
            doc = json.loads(path.read_text())
            palette = FuzzyPalette(tuple(
                PaletteEntry(
                    FuzzyColor(e["hue"], e["saturation"], e["intensity"]),
                    e["proportion"],
                )
                for e in doc["palette"]
            ))
            entry = IndexEntry(doc["id"], doc.get("source", "upload"), palette)
            self.entries[entry.image_id] = entry

    def load_kb(self, path: str) -> None:
        kb = load_kb(path, expected_fingerprint=self.active.fingerprint)
        snapshot = Snapshot(kb, self.rescore)
        snapshot.prime(self.entries)
        self.snapshot = snapshot
        self.kb_path = path

    def thumbnail_path(self, image_id: str) -> Path:
        return self.index_dir / "thumbnails" / f"{image_id}.png"

    def entry_path(self, image_id: str) -> Path:
        return self.index_dir / "entries" / f"{image_id}.json"


def _palette_payload(palette: FuzzyPalette, active: ActiveConfig) -> list[dict]:
    return [
        {
            "hue": e.color.hue,
            "saturation": e.color.saturation,
            "intensity": e.color.intensity,
            "proportion": e.proportion,
            "hex": color_hex(e.color, active.space),
        }
        for e in palette
    ]


def _image_basic_percent(palette: FuzzyPalette, active: ActiveConfig) -> dict:
    mass: dict[str, float] = {}
    for e in palette:
        basic = active.mapping.to_basic(e.color)
        mass[basic] = mass.get(basic, 0.0) + e.proportion
    total = sum(mass.values())
    if total == 0:
        return {}
    return {basic: 100.0 * v / total for basic, v in sorted(mass.items())}


def _entry_payload(entry: IndexEntry, snapshot: Snapshot,
                   active: ActiveConfig) -> dict:
    scores = snapshot.scores_for(entry)
    return {
        "id": entry.image_id,
        "source": entry.source,
        "palette": _palette_payload(entry.palette, active),
        "basic_percent": _image_basic_percent(entry.palette, active),
        "scores": [{"emotion": s.emotion, "jaccard": s.jaccard} for s in scores],
        "top_emotion": scores[0].emotion if scores else None,
        "thumbnail": f"/thumbnails/{entry.image_id}.png",
    }


def create_app(kb_path: str | None, index_dir: str | Path,
               active: ActiveConfig | None = None,
               rescore: str = "eager") -> FastAPI:
    active = active or ActiveConfig.load()
    state = ServiceState(active, Path(index_dir), kb_path, rescore)
    app = FastAPI(title="emopalette", version="0.1.0")
    app.state.service = state
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(QueryError)
    async def handle_query_error(request, exc: QueryError):
        return JSONResponse(status_code=400,
                            content={"detail": str(exc), "token": exc.token})

    @app.exception_handler(InputError)
    async def handle_input_error(request, exc: InputError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(FingerprintError)
    async def handle_fingerprint_error(request, exc: FingerprintError):
        return JSONResponse(
            status_code=409,
            content={"detail": str(exc), "expected": exc.expected, "got": exc.got},
        )

    @app.exception_handler(ConfigError)
    async def handle_config_error(request, exc: ConfigError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(EmopaletteError)
    async def handle_other_errors(request, exc: EmopaletteError):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    def need_snapshot() -> Snapshot:
        snapshot = state.snapshot
        if snapshot is None:
            raise _NoKb()
        return snapshot

    class _NoKb(EmopaletteError):
        pass

    @app.exception_handler(_NoKb)
    async def handle_no_kb(request, exc):
        return JSONResponse(status_code=503,
                            content={"detail": "knowledge base not loaded"})

    @app.get("/health")
    def health():
        from . import kernel

        return {
            "status": "ok",
            "kb_loaded": state.snapshot is not None,
            "fingerprint": active.fingerprint,
            "indexed_images": len(state.entries),
            "kernel_backend": kernel.backend_name(),
        }

    @app.post("/images", status_code=201)
    async def add_image(request: Request):
        snapshot = need_snapshot()
        content_type = request.headers.get("content-type", "")
        source = "upload"
        if content_type.startswith("multipart/"):
            form = await request.form()
            upload = form.get("file")
            if upload is None:
                raise InputError("multipart body needs a 'file' field")
            data = await upload.read()
        else:
            try:
                body = json.loads(await request.body())
            except json.JSONDecodeError:
                raise InputError("body must be multipart or JSON {\"url\": ...}")
            url = body.get("url")
            if not url:
                raise InputError("JSON body needs a 'url' field")
            source = url
            data = ImageFetcher().fetch(url)

        image_id = hashlib.sha256(data).hexdigest()[:16]
        with state.write_lock:
            if image_id in state.entries:
                return JSONResponse(
                    status_code=409,
                    content={"detail": f"image {image_id} already indexed",
                             "id": image_id},
                )
            palette = dominant_palette(preprocess(data), active.space)
            entry = IndexEntry(image_id, source, palette)

            thumb = Image.open(io.BytesIO(data))
            thumb.thumbnail(THUMBNAIL_SIZE)
            thumb.convert("RGB").save(state.thumbnail_path(image_id), format="PNG")

            payload = _entry_payload(entry, snapshot, active)
            doc = dict(payload, fingerprint=active.fingerprint)
            state.entry_path(image_id).write_text(json.dumps(doc, indent=2))
            state.entries[image_id] = entry
        return payload

    @app.get("/images")
    def list_images():
        snapshot = need_snapshot()
        items = []
        for image_id in sorted(state.entries):
            entry = state.entries[image_id]
            scores = snapshot.scores_for(entry)
            items.append({
                "id": image_id,
                "top_emotion": scores[0].emotion if scores else None,
                "top_jaccard": scores[0].jaccard if scores else None,
                "thumbnail": f"/thumbnails/{image_id}.png",
            })
        return {"images": items, "total": len(items)}

    @app.get("/images/{image_id}")
    def get_image(image_id: str):
        snapshot = need_snapshot()
        entry = state.entries.get(image_id)
        if entry is None:
            return JSONResponse(status_code=404,
                                content={"detail": f"no image {image_id}"})
        return _entry_payload(entry, snapshot, active)

    @app.get("/emotions")
    def list_emotions():
        snapshot = need_snapshot()
        return {"emotions": sorted(snapshot.kb.palettes)}

    @app.get("/emotions/{name}/palette")
    def emotion_palette(name: str):
        snapshot = need_snapshot()
        palette = snapshot.kb.palettes.get(name.lower())
        if palette is None:
            return JSONResponse(status_code=404,
                                content={"detail": f"unknown emotion {name!r}"})
        basic = snapshot.kb.basic.get(name.lower(), {})
        return {
            "emotion": palette.emotion,
            "image_count": palette.image_count,
            "entries": [
                {
                    "hue": rec.color.hue,
                    "saturation": rec.color.saturation,
                    "intensity": rec.color.intensity,
                    "frequency": rec.frequency,
                    "share": rec.share,
                    "hex": color_hex(rec.color, active.space),
                }
                for rec in palette.entries
            ],
            "basic_percent": {c: basic.get(c, 0.0) for c in BASIC_COLORS},
        }

    @app.get("/search")
    def search(emotion: str = "", intensity: str = "", hedges: str = "",
               limit: int = 20, offset: int = 0):
        snapshot = need_snapshot()
        if not emotion:
            raise QueryError("", "missing emotion")
        if not intensity:
            raise QueryError("", "missing intensity term")
        query = parse_query(emotion, intensity, hedges,
                            snapshot.kb.palettes.keys())
        if limit < 1 or offset < 0:
            raise QueryError(str(limit if limit < 1 else offset),
                             "limit must be >= 1 and offset >= 0")
        ranked = []
        for image_id in sorted(state.entries):
            entry = state.entries[image_id]
            scores = {s.emotion: s.jaccard for s in snapshot.scores_for(entry)}
            jaccard = scores.get(query.emotion, 0.0)
            degree = query_degree(query, jaccard, active.match_variable)
            ranked.append((image_id, degree, jaccard))
        ranked.sort(key=lambda item: (-item[1], item[0]))
        page = ranked[offset:offset + limit]
        return {
            "query": {"emotion": query.emotion, "intensity": query.intensity,
                      "hedges": list(query.hedges)},
            "total": len(ranked),
            "results": [
                {
                    "id": image_id,
                    "degree": degree,
                    "jaccard": jaccard,
                    "thumbnail": f"/thumbnails/{image_id}.png",
                }
                for image_id, degree, jaccard in page
            ],
        }

    @app.post("/kb/reload")
    async def reload_kb(request: Request):
        body = {}
        raw = await request.body()
        if raw:
            try:
                body = json.loads(raw)
            except json.JSONDecodeError:
                raise InputError("reload body must be JSON")
        path = body.get("path") or state.kb_path
        if path is None:
            raise InputError("no knowledge base path to reload from")
        with state.write_lock:
            state.load_kb(path)
        return {"status": "reloaded", "path": str(path),
                "fingerprint": state.snapshot.kb.fingerprint}

    @app.get("/thumbnails/{image_id}.png")
    def thumbnail(image_id: str):
        path = state.thumbnail_path(image_id)
        if not path.exists():
            return JSONResponse(status_code=404,
                                content={"detail": f"no thumbnail {image_id}"})
        return FileResponse(path, media_type="image/png")

    return app
