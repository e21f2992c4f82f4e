"""Configuration artifacts: fuzzy partition file, basic-color mapping table,
and the fingerprint that ties knowledge bases to a color configuration.

Both files are JSON with an explicit schema tag. The shipped defaults are
embedded here and can be dumped via ``emopalette init-config`` for editing.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import ConfigError
from .fuzzy import TRAPEZOIDAL, TRIANGULAR, LinguisticVariable, MembershipFunction

PARTITIONS_SCHEMA = "emopalette-partitions/1"
MAPPING_SCHEMA = "emopalette-basic-mapping/1"

# Default partitions. Hue trapezoids wrap through 0/360 for Red and are
# given unwrapped; all three color variables form Ruspini partitions.
# "match" is the query-side variable over the Jaccard score domain [0, 1].
DEFAULT_PARTITIONS = {
    "schema": PARTITIONS_SCHEMA,
    "variables": [
        {
            "name": "hue",
            "domain": [0, 360],
            "terms": [
                {"name": "Red", "shape": "trapezoidal", "points": [315, 345, 375, 385], "cyclic": True},
                {"name": "Orange", "shape": "trapezoidal", "points": [15, 25, 35, 45]},
                {"name": "Yellow", "shape": "trapezoidal", "points": [35, 45, 75, 95]},
                {"name": "Green", "shape": "trapezoidal", "points": [75, 95, 145, 155]},
                {"name": "Cyan", "shape": "trapezoidal", "points": [145, 155, 205, 225]},
                {"name": "Blue", "shape": "trapezoidal", "points": [205, 225, 255, 265]},
                {"name": "Violet", "shape": "trapezoidal", "points": [255, 265, 275, 285]},
                {"name": "Magenta", "shape": "trapezoidal", "points": [275, 285, 315, 345]},
            ],
        },
        {
            "name": "saturation",
            "domain": [0, 100],
            "terms": [
                {"name": "Low", "shape": "trapezoidal", "points": [0, 0, 10, 30]},
                {"name": "Medium", "shape": "trapezoidal", "points": [10, 30, 55, 75]},
                {"name": "High", "shape": "trapezoidal", "points": [55, 75, 100, 100]},
            ],
        },
        {
            "name": "intensity",
            "domain": [0, 255],
            "terms": [
                {"name": "Dark", "shape": "trapezoidal", "points": [0, 0, 40, 80]},
                {"name": "Deep", "shape": "trapezoidal", "points": [40, 80, 110, 150]},
                {"name": "Medium", "shape": "trapezoidal", "points": [110, 150, 165, 185]},
                {"name": "Pale", "shape": "trapezoidal", "points": [165, 185, 220, 240]},
                {"name": "Light", "shape": "trapezoidal", "points": [220, 240, 255, 255]},
            ],
        },
        {
            "name": "match",
            "domain": [0, 1],
            "terms": [
                {"name": "low", "shape": "trapezoidal", "points": [0, 0, 0.15, 0.35]},
                {"name": "medium", "shape": "trapezoidal", "points": [0.15, 0.35, 0.5, 0.7]},
                {"name": "high", "shape": "trapezoidal", "points": [0.5, 0.7, 1, 1]},
            ],
        },
    ],
}

# Carve-out rules applied between the fixed cascade (dark -> black,
# low saturation -> gray, violet/magenta -> purple) and the namesake
# fallback. First match wins.
DEFAULT_MAPPING = {
    "schema": MAPPING_SCHEMA,
    "rules": [
        {
            "hue": ["Red", "Orange", "Yellow"],
            "saturation": ["Medium", "High"],
            "intensity": ["Deep", "Medium"],
            "basic": "brown",
        },
        {
            "hue": ["Orange", "Yellow"],
            "saturation": ["Medium"],
            "intensity": ["Pale", "Light"],
            "basic": "beige",
        },
    ],
}


def _build_mf(term: dict, domain: tuple[float, float]) -> MembershipFunction:
    shape = term.get("shape")
    if shape not in (TRIANGULAR, TRAPEZOIDAL):
        raise ConfigError(f"term {term.get('name')!r}: unknown shape {shape!r}")
    return MembershipFunction(
        shape=shape,
        points=tuple(float(p) for p in term["points"]),
        cyclic=bool(term.get("cyclic", False)),
        period=float(domain[1]) - float(domain[0]),
    )


def variables_from_spec(spec: dict) -> dict[str, LinguisticVariable]:
    """Construct all linguistic variables from a partitions document."""
    if spec.get("schema") != PARTITIONS_SCHEMA:
        raise ConfigError(
            f"unsupported partitions schema {spec.get('schema')!r}, "
            f"expected {PARTITIONS_SCHEMA!r}"
        )
    out = {}
    for var in spec.get("variables", []):
        try:
            name = var["name"]
            domain = (float(var["domain"][0]), float(var["domain"][1]))
            terms = tuple(
                (t["name"], _build_mf(t, domain)) for t in var["terms"]
            )
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed variable entry: {exc}") from exc
        out[name] = LinguisticVariable(name=name, domain=domain, terms=terms)
    for required in ("hue", "saturation", "intensity", "match"):
        if required not in out:
            raise ConfigError(f"partitions file is missing variable {required!r}")
    return out


def load_partitions(path: str | Path) -> dict:
    return _load_json(path, PARTITIONS_SCHEMA)


def load_mapping(path: str | Path) -> dict:
    doc = _load_json(path, MAPPING_SCHEMA)
    for i, rule in enumerate(doc.get("rules", [])):
        for key in ("hue", "saturation", "intensity", "basic"):
            if key not in rule:
                raise ConfigError(f"mapping rule #{i} is missing {key!r}")
    return doc


def _load_json(path: str | Path, schema: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != schema:
        raise ConfigError(f"{path}: expected schema {schema!r}")
    return doc


def write_defaults(directory: str | Path) -> tuple[Path, Path]:
    """Emit the embedded default config files for user editing."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    partitions = directory / "partitions.json"
    mapping = directory / "mapping.json"
    partitions.write_text(json.dumps(DEFAULT_PARTITIONS, indent=2) + "\n")
    mapping.write_text(json.dumps(DEFAULT_MAPPING, indent=2) + "\n")
    return partitions, mapping


def config_fingerprint(partitions: dict, mapping: dict) -> str:
    """Stable hash of the color semantics a knowledge base depends on.

    Only the three color variables and the mapping rules participate; the
    query-side "match" variable can be tuned without invalidating KBs.
    """
    color_vars = [
        v for v in partitions.get("variables", [])
        if v.get("name") in ("hue", "saturation", "intensity")
    ]
    color_vars.sort(key=lambda v: v["name"])
    payload = json.dumps(
        {"variables": color_vars, "rules": mapping.get("rules", []), "cascade": 1},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]
