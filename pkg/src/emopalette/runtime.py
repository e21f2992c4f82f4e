"""Bundles the loaded configuration artifacts every command needs."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import config as cfg
from .colorspace import BasicColorMapping, FuzzyColorSpace
from .fuzzy import LinguisticVariable


@dataclass
class ActiveConfig:
    partitions_doc: dict
    mapping_doc: dict
    space: FuzzyColorSpace
    mapping: BasicColorMapping
    match_variable: LinguisticVariable
    fingerprint: str

    @classmethod
    def load(cls, partitions_path: str | Path | None = None,
             mapping_path: str | Path | None = None) -> "ActiveConfig":
        partitions_doc = (
            cfg.load_partitions(partitions_path) if partitions_path
            else cfg.DEFAULT_PARTITIONS
        )
        mapping_doc = (
            cfg.load_mapping(mapping_path) if mapping_path else cfg.DEFAULT_MAPPING
        )
        variables = cfg.variables_from_spec(partitions_doc)
        space = FuzzyColorSpace(variables["hue"], variables["saturation"],
                                variables["intensity"])
        mapping = BasicColorMapping(space, mapping_doc)
        fingerprint = cfg.config_fingerprint(partitions_doc, mapping_doc)
        return cls(partitions_doc, mapping_doc, space, mapping,
                   variables["match"], fingerprint)
