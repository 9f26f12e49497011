"""Canonical representation, parsing, and formatting of reference-relative
mitogenome profiles.

A profile is a whitespace-separated list of variant tokens expressed against
the bundled 16,569-base reference sequence:

    263G        substitution to G at position 263
    315.1C      insertion of C after position 315 (first inserted base)
    523del      deletion of position 523

Profiles carry a coverage list (closed position intervals, default the whole
molecule) describing which part of the genome was actually read.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import ConfigError, ParseError

GENOME_LENGTH = 16569
BASES = frozenset("ACGT")

SUBSTITUTION = "substitution"
INSERTION = "insertion"
DELETION = "deletion"

_KIND_ORDER = {SUBSTITUTION: 0, DELETION: 1, INSERTION: 2}

_SUB_RE = re.compile(r"^(\d+)([A-Za-z])$")
_INS_RE = re.compile(r"^(\d+)\.(\d+)([A-Za-z])$")
_DEL_RE = re.compile(r"^(\d+)del$")


@dataclass(frozen=True)
class Variant:
    """One difference from the reference sequence."""

    position: int
    kind: str
    base: str | None = None
    insertion_index: int | None = None

    def __post_init__(self):
        if not 1 <= self.position <= GENOME_LENGTH:
            raise ParseError(
                f"position {self.position} outside [1, {GENOME_LENGTH}]",
                token=self.token())
        if self.kind not in _KIND_ORDER:
            raise ParseError(f"unknown variant kind {self.kind!r}")
        if self.kind == DELETION:
            if self.base is not None:
                raise ParseError("deletion carries no base", token=self.token())
        elif self.base not in BASES:
            raise ParseError(f"base must be one of A,C,G,T, got {self.base!r}",
                             token=self.token())
        has_index = self.insertion_index is not None
        if (self.kind == INSERTION) != has_index:
            raise ParseError("insertion_index present iff kind is insertion",
                             token=self.token())
        if has_index and self.insertion_index < 1:
            raise ParseError("insertion_index must be >= 1", token=self.token())

    def sort_key(self) -> tuple:
        return (self.position, self.insertion_index or 0, _KIND_ORDER[self.kind])

    def token(self) -> str:
        """Canonical text form of this variant."""
        if self.kind == SUBSTITUTION:
            return f"{self.position}{self.base}"
        if self.kind == DELETION:
            return f"{self.position}del"
        return f"{self.position}.{self.insertion_index}{self.base}"

    def identity(self) -> tuple:
        return (self.position, self.kind, self.insertion_index)


class RcrsReference:
    """The bundled reference sequence; exactly 16,569 bases of A/C/G/T."""

    def __init__(self, bases: str):
        if len(bases) != GENOME_LENGTH:
            raise ConfigError(
                f"reference must be {GENOME_LENGTH} bases, got {len(bases)}")
        bad = set(bases) - BASES
        if bad:
            raise ConfigError(f"reference contains non-ACGT characters: {bad}")
        self._bases = bases

    def base(self, position: int) -> str:
        """1-indexed base at ``position``."""
        if not 1 <= position <= GENOME_LENGTH:
            raise ParseError(f"position {position} outside [1, {GENOME_LENGTH}]")
        return self._bases[position - 1]

    def checksum(self) -> str:
        return hashlib.sha256(self._bases.encode("ascii")).hexdigest()

    @classmethod
    def from_file(cls, path: str | Path) -> "RcrsReference":
        try:
            lines = Path(path).read_text().splitlines()
        except OSError as exc:
            raise ConfigError(f"cannot read reference file {path}: {exc}")
        if not lines:
            raise ConfigError(f"reference file {path} is empty")
        ref = cls(lines[0].strip())
        for line in lines[1:]:
            line = line.strip()
            if line.startswith("sha256:"):
                expected = line.split(":", 1)[1]
                if expected != ref.checksum():
                    raise ConfigError(
                        f"reference checksum mismatch in {path}: "
                        f"file says {expected}, content is {ref.checksum()}")
        return ref


@lru_cache(maxsize=1)
def bundled_reference() -> RcrsReference:
    with resources.as_file(resources.files("mitolr.data") / "rcrs.txt") as p:
        return RcrsReference.from_file(p)


def _merge_ranges(ranges: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Sort closed intervals and merge overlapping or adjacent ones."""
    items = sorted(ranges)
    merged: list[list[int]] = []
    for lo, hi in items:
        if not 1 <= lo <= hi <= GENOME_LENGTH:
            raise ParseError(f"coverage range {lo}-{hi} outside "
                             f"[1, {GENOME_LENGTH}] or reversed")
        if merged and lo <= merged[-1][1] + 1:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


FULL_COVERAGE = ((1, GENOME_LENGTH),)


@dataclass(frozen=True)
class MitoProfile:
    """An ordered, duplicate-free set of variants plus coverage intervals."""

    variants: tuple[Variant, ...]
    coverage: tuple[tuple[int, int], ...] = field(default=FULL_COVERAGE)

    def __post_init__(self):
        ordered = tuple(sorted(self.variants, key=Variant.sort_key))
        object.__setattr__(self, "variants", ordered)
        object.__setattr__(self, "coverage", _merge_ranges(self.coverage))
        seen = set()
        for v in ordered:
            ident = v.identity()
            if ident in seen:
                raise ParseError(f"duplicate variant {v.token()}",
                                 token=v.token())
            seen.add(ident)
            if not self.covers(v.position):
                raise ParseError(
                    f"variant {v.token()} lies outside the declared coverage",
                    token=v.token())

    def covers(self, position: int) -> bool:
        return any(lo <= position <= hi for lo, hi in self.coverage)

    def covered_positions(self, positions: Iterable[int]) -> set[int]:
        return {p for p in positions if self.covers(p)}

    def __iter__(self) -> Iterator[Variant]:
        return iter(self.variants)

    def __len__(self) -> int:
        return len(self.variants)


def parse_coverage(spec: str | None) -> tuple[tuple[int, int], ...]:
    """Parse a coverage spec like ``"16024-16569,1-600"``."""
    if spec is None or not spec.strip():
        return FULL_COVERAGE
    ranges = []
    for part in spec.split(","):
        part = part.strip()
        m = re.match(r"^(\d+)-(\d+)$", part)
        if not m:
            raise ParseError(f"malformed coverage range {part!r}", token=part)
        ranges.append((int(m.group(1)), int(m.group(2))))
    return _merge_ranges(ranges)


def parse_variant(token: str, reference: RcrsReference | None = None) -> Variant:
    """Parse one variant token, validating against the reference sequence."""
    reference = reference or bundled_reference()
    if token.endswith("?"):
        raise ParseError(f"uncertain call {token!r} is not accepted",
                         token=token)
    m = _DEL_RE.match(token)
    if m:
        return Variant(position=int(m.group(1)), kind=DELETION)
    m = _INS_RE.match(token)
    if m:
        pos, idx, base = int(m.group(1)), int(m.group(2)), m.group(3).upper()
        if base not in BASES:
            raise ParseError(
                f"ambiguous or invalid base {m.group(3)!r} in {token!r}",
                token=token)
        if idx < 1:
            raise ParseError(f"insertion index must be >= 1 in {token!r}",
                             token=token)
        return Variant(position=pos, kind=INSERTION, base=base,
                       insertion_index=idx)
    m = _SUB_RE.match(token)
    if m:
        pos, base = int(m.group(1)), m.group(2).upper()
        if base not in BASES:
            raise ParseError(
                f"ambiguous or invalid base {m.group(2)!r} in {token!r}",
                token=token)
        if not 1 <= pos <= GENOME_LENGTH:
            raise ParseError(f"position out of range in {token!r}", token=token)
        if reference.base(pos) == base:
            raise ParseError(
                f"substitution {token!r} equals the reference base at "
                f"position {pos}", token=token)
        return Variant(position=pos, kind=SUBSTITUTION, base=base)
    raise ParseError(f"malformed variant token {token!r}", token=token)


def parse_profile(text: str, coverage: str | None = None,
                  reference: RcrsReference | None = None) -> MitoProfile:
    """Parse a whitespace-separated variant list into a canonical profile."""
    reference = reference or bundled_reference()
    variants = tuple(parse_variant(tok, reference) for tok in text.split())
    return MitoProfile(variants=variants, coverage=parse_coverage(coverage))


def format_profile(profile: MitoProfile) -> str:
    """Canonical text form; inverse of parse_profile for canonical strings."""
    return " ".join(v.token() for v in profile.variants)


def restrict(profile: MitoProfile, positions: Iterable[int]) -> MitoProfile:
    """Keep only variants at the given positions; intersect coverage too."""
    keep = set(positions)
    variants = tuple(v for v in profile.variants if v.position in keep)
    ranges = tuple((p, p) for p in sorted(keep) if profile.covers(p))
    return MitoProfile(variants=variants, coverage=ranges)


def substitutions(profile: MitoProfile) -> list[tuple[int, str]]:
    """(position, base) pairs for substitution variants, in position order."""
    return [(v.position, v.base) for v in profile.variants
            if v.kind == SUBSTITUTION]


def profile_from_variants(variants: Sequence[Variant],
                          coverage: tuple[tuple[int, int], ...] = FULL_COVERAGE
                          ) -> MitoProfile:
    return MitoProfile(variants=tuple(variants), coverage=coverage)
