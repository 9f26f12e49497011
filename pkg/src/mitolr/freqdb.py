"""Per-TLHG SNV frequency databases: ingestion, queries, pooling, comparison.

Input is a TSV with header ``position ref alt tlhg count homoplasmic`` plus
a sizes TSV ``tlhg n``. Ingestion keeps homoplasmic single-base
substitutions whose summed count across TLHGs is at least 2, and reports
how many rows each filter dropped. A variant absent from a TLHG yields "no
frequency" (None), never 0.0: the caller decides how to fall back.

Homopolymer-stretch positions are kept by default; pass retain_poly=False
to drop substitutions there at ingestion time.
"""
from __future__ import annotations

import hashlib
import math
import pickle
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError, UnknownTlhgError
from .variants import BASES, GENOME_LENGTH

SNV_HEADER = ["position", "ref", "alt", "tlhg", "count", "homoplasmic"]
SIZES_HEADER = ["tlhg", "n"]
WEIGHTS_HEADER = ["tlhg", "weight"]

POLY_STRETCHES = ((303, 315), (16180, 16194), (513, 525))
POLY_POSITIONS = frozenset(p for lo, hi in POLY_STRETCHES
                           for p in range(lo, hi + 1))

CACHE_SCHEMA_VERSION = 1

_INDEL_MARK = re.compile(r"ins|del|[.:+-]", re.IGNORECASE)
_TRUE = {"true", "1", "yes"}
_FALSE = {"false", "0", "no"}


@dataclass(frozen=True)
class SnvRecord:
    position: int
    ref_base: str
    alt_base: str
    tlhg: str
    count: int
    homoplasmic: bool = True

    def key(self) -> tuple[int, str, str]:
        return (self.position, self.alt_base, self.tlhg)


@dataclass
class IngestReport:
    source_name: str
    rows_total: int = 0
    retained: int = 0
    dropped: dict[str, int] = field(default_factory=lambda: {
        "indel": 0, "multi_base": 0, "heteroplasmic": 0,
        "global_count_lt2": 0, "zero_count": 0, "poly_stretch": 0})

    def to_dict(self) -> dict:
        return {"source_name": self.source_name,
                "rows_total": self.rows_total,
                "retained": self.retained,
                "dropped": dict(self.dropped)}


class SnvFrequencyDb:
    """Immutable post-ingestion view of one source database."""

    def __init__(self, source_name: str, records: list[SnvRecord],
                 tlhg_sizes: dict[str, int]):
        self.source_name = source_name
        self.tlhg_sizes = dict(tlhg_sizes)
        self.total_n = sum(self.tlhg_sizes.values())
        self._index: dict[tuple[int, str, str], SnvRecord] = {}
        for rec in records:
            if rec.tlhg not in self.tlhg_sizes:
                raise ConfigError(
                    f"record TLHG {rec.tlhg!r} has no sample size")
            if rec.count > self.tlhg_sizes[rec.tlhg]:
                raise ConfigError(
                    f"count {rec.count} exceeds TLHG size "
                    f"{self.tlhg_sizes[rec.tlhg]} for {rec.key()}")
            self._index[rec.key()] = rec
        self.records: tuple[SnvRecord, ...] = tuple(
            sorted(self._index.values(),
                   key=lambda r: (r.position, r.alt_base, r.tlhg)))

    def __len__(self) -> int:
        return len(self.records)

    def has_tlhg(self, tlhg: str) -> bool:
        return tlhg in self.tlhg_sizes

    def record(self, position: int, alt_base: str, tlhg: str
               ) -> SnvRecord | None:
        return self._index.get((position, alt_base, tlhg))


def _split_header(line: str, expected: list[str], path) -> None:
    cols = line.rstrip("\n").split("\t")
    if cols != expected:
        raise ConfigError(f"{path}: header must be {expected}, got {cols}")


def _parse_bool(text: str, path, ln: int) -> bool:
    low = text.strip().lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ConfigError(f"{path}:{ln}: column 'homoplasmic' must be a "
                      f"boolean, got {text!r}")


def _base_kind(token: str) -> str:
    """single | indel | multi_base; anything else is a schema error."""
    if len(token) == 1 and token in BASES:
        return "single"
    if _INDEL_MARK.search(token):
        return "indel"
    if len(token) >= 2 and set(token) <= BASES:
        return "multi_base"
    return "invalid"


def load_sizes(path: str | Path) -> dict[str, int]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read sizes file {path}: {exc}")
    if not lines:
        raise ConfigError(f"{path}: empty sizes file")
    _split_header(lines[0], SIZES_HEADER, path)
    sizes: dict[str, int] = {}
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ConfigError(f"{path}:{ln}: expected 2 columns")
        tlhg, n = parts[0].strip(), parts[1].strip()
        if not n.isdigit():
            raise ConfigError(f"{path}:{ln}: column 'n' must be a "
                              f"non-negative integer, got {n!r}")
        if tlhg in sizes:
            raise ConfigError(f"{path}:{ln}: duplicate TLHG {tlhg!r}")
        sizes[tlhg] = int(n)
    return sizes


def ingest(snv_path: str | Path, sizes_path: str | Path, source_name: str,
           retain_poly: bool = True) -> tuple[SnvFrequencyDb, IngestReport]:
    """Parse, filter, and index one source database."""
    sizes = load_sizes(sizes_path)
    try:
        lines = Path(snv_path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read SNV table {snv_path}: {exc}")
    if not lines:
        raise ConfigError(f"{snv_path}: empty SNV table")
    _split_header(lines[0], SNV_HEADER, snv_path)

    report = IngestReport(source_name=source_name)
    survivors: list[SnvRecord] = []
    seen_keys: set[tuple[int, str, str]] = set()
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != len(SNV_HEADER):
            raise ConfigError(
                f"{snv_path}:{ln}: expected {len(SNV_HEADER)} columns, "
                f"got {len(parts)}")
        report.rows_total += 1
        pos_s, ref_s, alt_s, tlhg, count_s, homo_s = (p.strip()
                                                      for p in parts)
        if not pos_s.isdigit() or not 1 <= int(pos_s) <= GENOME_LENGTH:
            raise ConfigError(f"{snv_path}:{ln}: column 'position' must be "
                              f"an integer in [1, {GENOME_LENGTH}], "
                              f"got {pos_s!r}")
        if not count_s.isdigit():
            raise ConfigError(f"{snv_path}:{ln}: column 'count' must be a "
                              f"non-negative integer, got {count_s!r}")
        homoplasmic = _parse_bool(homo_s, snv_path, ln)
        ref_kind = _base_kind(ref_s)
        alt_kind = _base_kind(alt_s)
        if "invalid" in (ref_kind, alt_kind):
            col = "ref" if ref_kind == "invalid" else "alt"
            raise ConfigError(f"{snv_path}:{ln}: column {col!r} is not a "
                              f"base, indel, or multi-base string")
        if "indel" in (ref_kind, alt_kind):
            report.dropped["indel"] += 1
            continue
        if "multi_base" in (ref_kind, alt_kind):
            report.dropped["multi_base"] += 1
            continue
        if ref_s == alt_s:
            raise ConfigError(f"{snv_path}:{ln}: ref and alt are equal")
        if not homoplasmic:
            report.dropped["heteroplasmic"] += 1
            continue
        position, count = int(pos_s), int(count_s)
        if count == 0:
            report.dropped["zero_count"] += 1
            continue
        if not retain_poly and position in POLY_POSITIONS:
            report.dropped["poly_stretch"] += 1
            continue
        if tlhg not in sizes:
            raise ConfigError(f"{snv_path}:{ln}: TLHG {tlhg!r} missing from "
                              f"the sizes table")
        rec = SnvRecord(position=position, ref_base=ref_s, alt_base=alt_s,
                        tlhg=tlhg, count=count, homoplasmic=True)
        if rec.key() in seen_keys:
            raise ConfigError(f"{snv_path}:{ln}: duplicate row for "
                              f"(position, alt, TLHG) {rec.key()}")
        seen_keys.add(rec.key())
        survivors.append(rec)

    global_counts: dict[tuple[int, str], int] = {}
    for rec in survivors:
        gk = (rec.position, rec.alt_base)
        global_counts[gk] = global_counts.get(gk, 0) + rec.count
    retained = []
    for rec in survivors:
        if global_counts[(rec.position, rec.alt_base)] < 2:
            report.dropped["global_count_lt2"] += 1
        else:
            retained.append(rec)
    report.retained = len(retained)
    db = SnvFrequencyDb(source_name, retained, sizes)
    return db, report


def snv_frequency(db: SnvFrequencyDb, position: int, alt_base: str,
                  tlhg: str) -> float | None:
    """count/size within the TLHG, or None when the SNV was not observed."""
    if not db.has_tlhg(tlhg):
        raise UnknownTlhgError(
            f"TLHG {tlhg!r} is not present in source {db.source_name!r}")
    if db.tlhg_sizes[tlhg] == 0:
        raise DomainError(f"TLHG {tlhg!r} has zero sample size in "
                          f"{db.source_name!r}")
    rec = db.record(position, alt_base, tlhg)
    if rec is None:
        return None
    return rec.count / db.tlhg_sizes[tlhg]


def pooled_frequency(dbs: list[SnvFrequencyDb], position: int,
                     alt_base: str, tlhg: str) -> float | None:
    """Size-weighted pooled frequency: sum(x) / sum(n) over the sources.

    A source that knows the TLHG but lacks the record contributes x=0 and
    its full TLHG size to the denominator. Returns None when no source has
    the record at all.
    """
    if not dbs:
        raise DomainError("pooling requires at least one source")
    with_tlhg = [db for db in dbs if db.has_tlhg(tlhg)]
    if not with_tlhg:
        raise UnknownTlhgError(
            f"TLHG {tlhg!r} is missing from every source")
    total_x = 0
    total_n = 0
    found = False
    for db in with_tlhg:
        rec = db.record(position, alt_base, tlhg)
        if rec is not None:
            total_x += rec.count
            found = True
        total_n += db.tlhg_sizes[tlhg]
    if not found:
        return None
    if total_n == 0:
        raise DomainError(f"TLHG {tlhg!r} has zero pooled sample size")
    return total_x / total_n


def tlhg_distribution(db: SnvFrequencyDb) -> "TlhgDistribution":
    if db.total_n <= 0:
        raise DomainError(f"source {db.source_name!r} has no samples")
    probs = {t: n / db.total_n for t, n in db.tlhg_sizes.items()}
    return TlhgDistribution(source_name=db.source_name, probs=probs)


@dataclass(frozen=True)
class TlhgDistribution:
    source_name: str
    probs: dict[str, float]

    def __post_init__(self):
        for tlhg, p in self.probs.items():
            if not 0.0 <= p <= 1.0 or math.isnan(p):
                raise DomainError(
                    f"probability for {tlhg!r} outside [0, 1]: {p}")
        total = sum(self.probs.values())
        if abs(total - 1.0) > 1e-9:
            raise DomainError(f"probabilities sum to {total}, not 1")

    def prob(self, tlhg: str) -> float:
        return self.probs.get(tlhg, 0.0)

    def to_dict(self) -> dict:
        return {"source_name": self.source_name,
                "probs": dict(sorted(self.probs.items()))}

    @classmethod
    def from_weights(cls, weights: dict[str, float], source_name: str
                     ) -> "TlhgDistribution":
        for tlhg, w in weights.items():
            if isinstance(w, bool) or not isinstance(w, (int, float)):
                raise DomainError(f"weight for {tlhg!r} is not a number")
            if math.isnan(w) or math.isinf(w) or w < 0:
                raise DomainError(f"negative or non-finite weight for "
                                  f"{tlhg!r}: {w}")
        total = sum(weights.values())
        if total <= 0:
            raise DomainError("weights sum to zero; cannot normalize")
        return cls(source_name=source_name,
                   probs={t: w / total for t, w in weights.items()})

    @classmethod
    def from_weights_tsv(cls, path: str | Path) -> "TlhgDistribution":
        try:
            lines = Path(path).read_text().splitlines()
        except OSError as exc:
            raise ConfigError(f"cannot read weights file {path}: {exc}")
        if not lines:
            raise ConfigError(f"{path}: empty weights file")
        _split_header(lines[0], WEIGHTS_HEADER, path)
        weights: dict[str, float] = {}
        for ln, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ConfigError(f"{path}:{ln}: expected 2 columns")
            try:
                weights[parts[0].strip()] = float(parts[1])
            except ValueError:
                raise ConfigError(f"{path}:{ln}: column 'weight' must be "
                                  f"a number, got {parts[1]!r}")
        return cls.from_weights(weights, source_name=str(path))


@dataclass(frozen=True)
class ComparisonReport:
    source1: str
    source2: str
    shared_snv_count: int
    pearson_log10: float
    pairs: tuple[tuple[int, str, str, float, float], ...]

    def to_dict(self) -> dict:
        return {
            "source1": self.source1,
            "source2": self.source2,
            "shared_snv_count": self.shared_snv_count,
            "pearson_log10": self.pearson_log10,
            "pairs": [{"position": p, "alt": a, "tlhg": t,
                       "freq1": f1, "freq2": f2}
                      for p, a, t, f1, f2 in self.pairs],
        }


def compare_databases(db1: SnvFrequencyDb, db2: SnvFrequencyDb
                      ) -> ComparisonReport:
    """Correlate log10 frequencies of the SNVs present in both sources."""
    shared = []
    for rec in db1.records:
        other = db2.record(*rec.key())
        if other is not None:
            f1 = rec.count / db1.tlhg_sizes[rec.tlhg]
            f2 = other.count / db2.tlhg_sizes[other.tlhg]
            shared.append((rec.position, rec.alt_base, rec.tlhg, f1, f2))
    if len(shared) < 2:
        raise DomainError(
            f"correlation undefined: only {len(shared)} shared SNV(s) "
            f"between {db1.source_name!r} and {db2.source_name!r}")
    x = np.log10(np.array([s[3] for s in shared], dtype=float))
    y = np.log10(np.array([s[4] for s in shared], dtype=float))
    if np.array_equal(x, y):
        r = 1.0
    else:
        sx = x - x.mean()
        sy = y - y.mean()
        denom = math.sqrt(float(sx @ sx)) * math.sqrt(float(sy @ sy))
        if denom == 0.0:
            raise DomainError("correlation undefined: constant frequencies")
        r = float(sx @ sy) / denom
    return ComparisonReport(source1=db1.source_name, source2=db2.source_name,
                            shared_snv_count=len(shared), pearson_log10=r,
                            pairs=tuple(shared))


# ------------------------------------------------------------------ cache

def source_checksum(snv_path: str | Path, sizes_path: str | Path) -> str:
    h = hashlib.sha256()
    try:
        h.update(Path(snv_path).read_bytes())
        h.update(b"\x00")
        h.update(Path(sizes_path).read_bytes())
    except OSError as exc:
        raise ConfigError(f"cannot read source file: {exc}")
    return h.hexdigest()


def save_cache(db: SnvFrequencyDb, report: IngestReport, checksum: str,
               path: str | Path) -> None:
    payload = {
        "schema_version": CACHE_SCHEMA_VERSION,
        "source_checksum": checksum,
        "source_name": db.source_name,
        "tlhg_sizes": db.tlhg_sizes,
        "records": [(r.position, r.ref_base, r.alt_base, r.tlhg, r.count)
                    for r in db.records],
        "report": report.to_dict(),
    }
    Path(path).write_bytes(pickle.dumps(payload, protocol=4))


def load_cache(path: str | Path) -> tuple[SnvFrequencyDb, IngestReport, str]:
    try:
        payload = pickle.loads(Path(path).read_bytes())
    except Exception as exc:
        raise ConfigError(f"cannot read cache {path}: {exc}")
    if payload.get("schema_version") != CACHE_SCHEMA_VERSION:
        raise ConfigError(
            f"cache {path} has schema version "
            f"{payload.get('schema_version')}, expected "
            f"{CACHE_SCHEMA_VERSION}")
    records = [SnvRecord(position=p, ref_base=r, alt_base=a, tlhg=t, count=c)
               for p, r, a, t, c in payload["records"]]
    db = SnvFrequencyDb(payload["source_name"], records,
                        payload["tlhg_sizes"])
    rep_d = payload["report"]
    report = IngestReport(source_name=rep_d["source_name"],
                          rows_total=rep_d["rows_total"],
                          retained=rep_d["retained"],
                          dropped=dict(rep_d["dropped"]))
    return db, report, payload["source_checksum"]


def load_or_ingest(snv_path: str | Path, sizes_path: str | Path,
                   source_name: str, cache_path: str | Path | None = None,
                   retain_poly: bool = True
                   ) -> tuple[SnvFrequencyDb, IngestReport]:
    """Use the cache when it matches the source files, else re-ingest."""
    checksum = source_checksum(snv_path, sizes_path)
    if cache_path is not None and Path(cache_path).exists():
        try:
            db, report, cached_sum = load_cache(cache_path)
        except ConfigError:
            db, report, cached_sum = None, None, None
        if db is not None and cached_sum == checksum \
                and db.source_name == source_name:
            return db, report
    db, report = ingest(snv_path, sizes_path, source_name,
                        retain_poly=retain_poly)
    if cache_path is not None:
        save_cache(db, report, checksum, cache_path)
    return db, report
