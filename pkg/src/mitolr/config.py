"""Configuration file handling and the shared runtime context.

The config is a JSON file. Everything is optional; with no file at all the
bundled motif table and reference are used and no frequency sources are
loaded (classification and count estimators still work).

    {
      "motif_table": "path/to/motifs.tsv",
      "positions": "path/to/positions.txt",
      "rcrs": "path/to/reference.txt",
      "snv_sources": [
        {"name": "demo", "snv": "demo_snv.tsv", "sizes": "demo_sizes.tsv",
         "cache": "demo.cache"}
      ],
      "tlhg_distribution": {"from_source": "demo"},   # or {"weights_file": p}
      "format": "text",
      "confidence": 0.95,
      "classifier_mode": "positions227",
      "lambda": 0.5,
      "retain_poly_stretches": true
    }

Every referenced file is opened and validated when the runtime starts.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .classify import DEFAULT_LAMBDA, MODE_POSITIONS227, MODES
from .errors import ConfigError
from .freqdb import (IngestReport, SnvFrequencyDb, TlhgDistribution,
                     load_or_ingest, tlhg_distribution)
from .motifs import MotifTable, bundled_table
from .variants import RcrsReference, bundled_reference

ENV_CONFIG = "MITOLR_CONFIG"
FORMATS = ("text", "json", "tsv")

_KNOWN_KEYS = {"motif_table", "positions", "rcrs", "snv_sources",
               "tlhg_distribution", "format", "confidence",
               "classifier_mode", "lambda", "retain_poly_stretches"}


@dataclass(frozen=True)
class SourceSpec:
    name: str
    snv: str
    sizes: str
    cache: str | None = None


@dataclass(frozen=True)
class AppConfig:
    motif_table: str | None = None
    positions: str | None = None
    rcrs: str | None = None
    snv_sources: tuple[SourceSpec, ...] = ()
    tlhg_distribution: dict | None = None
    format: str = "text"
    confidence: float = 0.95
    classifier_mode: str = MODE_POSITIONS227
    lam: float = DEFAULT_LAMBDA
    retain_poly_stretches: bool = True

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, "
                              f"got {self.format!r}")
        if not 0.0 < self.confidence < 1.0:
            raise ConfigError(f"confidence must be in (0, 1), "
                              f"got {self.confidence}")
        if self.classifier_mode not in MODES:
            raise ConfigError(f"classifier_mode must be one of {MODES}, "
                              f"got {self.classifier_mode!r}")
        if (self.motif_table is None) != (self.positions is None):
            raise ConfigError(
                "motif_table and positions must be given together")
        names = [s.name for s in self.snv_sources]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate source names in config: {names}")

    @classmethod
    def from_file(cls, path: str | Path) -> "AppConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}")
        if not isinstance(raw, dict):
            raise ConfigError(f"config {path} must be a JSON object")
        unknown = set(raw) - _KNOWN_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        base = Path(path).parent

        def resolve(p):
            return str((base / p).resolve()) if p is not None else None

        sources = []
        for i, entry in enumerate(raw.get("snv_sources", [])):
            if not isinstance(entry, dict):
                raise ConfigError(f"snv_sources[{i}] must be an object")
            missing = {"name", "snv", "sizes"} - set(entry)
            if missing:
                raise ConfigError(
                    f"snv_sources[{i}] missing keys: {sorted(missing)}")
            sources.append(SourceSpec(
                name=entry["name"], snv=resolve(entry["snv"]),
                sizes=resolve(entry["sizes"]),
                cache=resolve(entry.get("cache"))))
        dist = raw.get("tlhg_distribution")
        if dist is not None:
            if not isinstance(dist, dict) or \
                    not ({"from_source", "weights_file"} & set(dist)):
                raise ConfigError(
                    "tlhg_distribution must be {\"from_source\": name} or "
                    "{\"weights_file\": path}")
            if "weights_file" in dist:
                dist = {"weights_file": resolve(dist["weights_file"])}
        return cls(
            motif_table=resolve(raw.get("motif_table")),
            positions=resolve(raw.get("positions")),
            rcrs=resolve(raw.get("rcrs")),
            snv_sources=tuple(sources),
            tlhg_distribution=dist,
            format=raw.get("format", "text"),
            confidence=raw.get("confidence", 0.95),
            classifier_mode=raw.get("classifier_mode", MODE_POSITIONS227),
            lam=raw.get("lambda", DEFAULT_LAMBDA),
            retain_poly_stretches=raw.get("retain_poly_stretches", True),
        )

    @classmethod
    def resolve(cls, explicit_path: str | None) -> "AppConfig":
        """Explicit path, else the environment variable, else defaults."""
        path = explicit_path or os.environ.get(ENV_CONFIG)
        if path:
            return cls.from_file(path)
        return cls()


class Runtime:
    """Loaded, validated state shared by CLI commands and the service."""

    def __init__(self, config: AppConfig):
        self.config = config
        if config.rcrs is not None:
            self.reference: RcrsReference = RcrsReference.from_file(
                config.rcrs)
        else:
            self.reference = bundled_reference()
        if config.motif_table is not None:
            self.table: MotifTable = MotifTable.from_files(
                config.motif_table, config.positions, self.reference)
        else:
            self.table = bundled_table()
        self.sources: dict[str, SnvFrequencyDb] = {}
        self.ingest_reports: dict[str, IngestReport] = {}
        for spec in config.snv_sources:
            db, report = load_or_ingest(
                spec.snv, spec.sizes, spec.name, cache_path=spec.cache,
                retain_poly=config.retain_poly_stretches)
            self.sources[spec.name] = db
            self.ingest_reports[spec.name] = report
        self.distribution: TlhgDistribution | None = self._resolve_dist()

    def _resolve_dist(self) -> TlhgDistribution | None:
        spec = self.config.tlhg_distribution
        if spec is None:
            if self.sources:
                first = next(iter(self.sources.values()))
                return tlhg_distribution(first)
            return None
        if "weights_file" in spec:
            return TlhgDistribution.from_weights_tsv(spec["weights_file"])
        name = spec["from_source"]
        if name not in self.sources:
            raise ConfigError(
                f"tlhg_distribution.from_source {name!r} is not a "
                f"configured source")
        return tlhg_distribution(self.sources[name])

    def source_list(self, names: tuple[str, ...] | None
                    ) -> list[SnvFrequencyDb]:
        if not names:
            return list(self.sources.values())
        out = []
        for name in names:
            if name not in self.sources:
                raise ConfigError(f"unknown source {name!r}; configured: "
                                  f"{sorted(self.sources)}")
            out.append(self.sources[name])
        return out
