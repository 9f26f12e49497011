"""Haplogroup motif table, TLHG collapse map, and the refinement DAG.

The table ships as a line-oriented data file ("LABEL<TAB>TLHG<TAB>variant
tokens") together with the fixed position panel (one integer per line).
Every motif variant must sit on a panel position; violations are load-time
errors.

Ancestry between haplogroup labels follows standard nomenclature: letters
and digits alternate as a lineage is refined, so ``g`` is a named ancestor
of ``h`` when ``g`` is a proper prefix of ``h`` and the first character of
the remainder switches character class (letter to digit or digit to letter).
That rule makes H an ancestor of H2 and M7b an ancestor of M7b2, while
keeping HV outside H. The collapse map adds the edges from each refined
motif label up to its top-level haplogroup (TLHG).
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .errors import ConfigError, UnknownLabelError
from .variants import (GENOME_LENGTH, SUBSTITUTION, RcrsReference, Variant,
                       bundled_reference, parse_variant)

EXPECTED_MOTIF_COUNT = 39
EXPECTED_POSITION_COUNT = 227


def _char_class(c: str) -> str:
    if c.isdigit():
        return "digit"
    if c.isalpha():
        return "letter"
    return "other"


def nomenclature_ancestor(g: str, h: str) -> bool:
    """True iff ``g`` names an ancestor of ``h`` by prefix refinement."""
    if not g or not h.startswith(g) or g == h:
        return False
    tail = h[len(g)]
    head = g[-1]
    return (_char_class(head) in ("letter", "digit")
            and _char_class(tail) in ("letter", "digit")
            and _char_class(head) != _char_class(tail))


@dataclass(frozen=True)
class HaplogroupMotif:
    label: str
    tlhg: str
    variants: tuple[Variant, ...]

    def variant_tokens(self) -> frozenset[str]:
        return frozenset(v.token() for v in self.variants)


class RefinementDag:
    """Explicit ancestor relation over a set of labels.

    ``edges`` maps each label to its direct ancestors (coarser labels).
    Used both by the motif table (nomenclature + collapse edges) and by
    synthetic test hierarchies.
    """

    def __init__(self, edges: dict[str, set[str]]):
        nodes = set(edges)
        for parents in edges.values():
            nodes |= parents
        self._nodes = frozenset(nodes)
        memo: dict[str, frozenset[str]] = {}
        for n in nodes:
            self._close(n, edges, memo, set())
        self._ancestors = memo

    def _close(self, n: str, edges: dict[str, set[str]],
               memo: dict[str, frozenset[str]], visiting: set[str]
               ) -> frozenset[str]:
        if n in memo:
            return memo[n]
        if n in visiting:
            raise ConfigError(f"cycle in refinement DAG at {n!r}")
        visiting.add(n)
        out = {n}
        for parent in edges.get(n, ()):
            out |= self._close(parent, edges, memo, visiting)
        visiting.discard(n)
        memo[n] = frozenset(out)
        return memo[n]

    @property
    def labels(self) -> frozenset[str]:
        return self._nodes

    def knows(self, label: str) -> bool:
        return label in self._nodes

    def is_ancestor(self, g: str, h: str) -> bool:
        """True iff ``g`` is an ancestor of ``h`` (reflexive)."""
        if g == h:
            return True
        anc = self._ancestors.get(h)
        if anc is not None:
            if g in anc:
                return True
            # off-table g can still sit above h by nomenclature, either
            # directly or above one of h's known ancestors
            if nomenclature_ancestor(g, h):
                return True
            return any(nomenclature_ancestor(g, a) for a in anc)
        # off-table h: climb by nomenclature to the known labels
        if nomenclature_ancestor(g, h):
            return True
        return any(nomenclature_ancestor(node, h) and self.is_ancestor(g, node)
                   for node in self._nodes)


class MotifTable:
    """The motif set, the position panel, and the label collapse map."""

    def __init__(self, motifs: Iterable[HaplogroupMotif],
                 positions: Iterable[int]):
        self.motifs: tuple[HaplogroupMotif, ...] = tuple(motifs)
        self.positions: frozenset[int] = frozenset(positions)
        if len(self.motifs) != EXPECTED_MOTIF_COUNT:
            raise ConfigError(
                f"motif table must contain {EXPECTED_MOTIF_COUNT} motifs, "
                f"got {len(self.motifs)}")
        if len(self.positions) != EXPECTED_POSITION_COUNT:
            raise ConfigError(
                f"position panel must contain {EXPECTED_POSITION_COUNT} "
                f"positions, got {len(self.positions)}")
        labels = [m.label for m in self.motifs]
        if len(set(labels)) != len(labels):
            dupes = sorted({x for x in labels if labels.count(x) > 1})
            raise ConfigError(f"duplicate motif labels: {dupes}")
        for p in self.positions:
            if not 1 <= p <= GENOME_LENGTH:
                raise ConfigError(f"panel position {p} outside genome")
        for m in self.motifs:
            outside = sorted(v.position for v in m.variants
                             if v.position not in self.positions)
            if outside:
                raise ConfigError(
                    f"motif {m.label} uses positions outside the panel: "
                    f"{outside}")
        self.collapse_map: dict[str, str] = {m.label: m.tlhg
                                             for m in self.motifs}
        self.tlhgs: frozenset[str] = frozenset(self.collapse_map.values())
        self.motif_positions: frozenset[int] = frozenset(
            v.position for m in self.motifs for v in m.variants)
        edges: dict[str, set[str]] = {}
        for m in self.motifs:
            edges.setdefault(m.label, set())
            if m.tlhg != m.label:
                edges[m.label].add(m.tlhg)
            for other in self.collapse_map:
                if nomenclature_ancestor(other, m.label):
                    edges[m.label].add(other)
        for t in self.tlhgs:
            edges.setdefault(t, set())
        self.dag = RefinementDag(edges)

    def motif(self, label: str) -> HaplogroupMotif:
        for m in self.motifs:
            if m.label == label:
                return m
        raise UnknownLabelError(f"unknown motif label {label!r}")

    def labels(self) -> list[str]:
        return [m.label for m in self.motifs]

    @classmethod
    def from_files(cls, motif_path: str | Path, positions_path: str | Path,
                   reference: RcrsReference | None = None) -> "MotifTable":
        reference = reference or bundled_reference()
        positions = _load_positions(positions_path)
        motifs = []
        try:
            lines = Path(motif_path).read_text().splitlines()
        except OSError as exc:
            raise ConfigError(f"cannot read motif table {motif_path}: {exc}")
        for ln, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ConfigError(
                    f"{motif_path}:{ln}: expected LABEL<TAB>TLHG<TAB>tokens")
            label, tlhg, tokens = parts
            variants = tuple(parse_variant(tok, reference)
                             for tok in tokens.split())
            if any(v.kind != SUBSTITUTION for v in variants):
                raise ConfigError(
                    f"{motif_path}:{ln}: motif {label} contains non-"
                    f"substitution variants")
            motifs.append(HaplogroupMotif(label=label, tlhg=tlhg,
                                          variants=variants))
        return cls(motifs, positions)


def _load_positions(path: str | Path) -> list[int]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read position panel {path}: {exc}")
    positions = []
    for ln, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        if not line.isdigit():
            raise ConfigError(f"{path}:{ln}: not an integer: {line!r}")
        positions.append(int(line))
    if len(set(positions)) != len(positions):
        raise ConfigError(f"{path}: duplicate positions")
    return positions


_BUNDLED_TABLE: MotifTable | None = None


def bundled_table() -> MotifTable:
    global _BUNDLED_TABLE
    if _BUNDLED_TABLE is None:
        data = resources.files("mitolr.data")
        with resources.as_file(data / "motifs.tsv") as mp, \
                resources.as_file(data / "positions227.txt") as pp:
            _BUNDLED_TABLE = MotifTable.from_files(mp, pp)
    return _BUNDLED_TABLE


def collapse_tlhg(refined_label: str, table: MotifTable) -> str:
    """Map a refined haplogroup label to its TLHG.

    Labels missing from the table resolve through nomenclature: the longest
    motif label that is a named ancestor of the input decides the TLHG.
    """
    if refined_label in table.collapse_map:
        return table.collapse_map[refined_label]
    if refined_label in table.tlhgs:
        return refined_label
    candidates = [lbl for lbl in table.collapse_map
                  if nomenclature_ancestor(lbl, refined_label)]
    if not candidates:
        raise UnknownLabelError(
            f"label {refined_label!r} matches no motif and no ancestor "
            f"motif by nomenclature")
    best = max(candidates, key=len)
    return table.collapse_map[best]


def is_refinement(h: str, g: str, table: MotifTable | RefinementDag) -> bool:
    """True iff ``g`` is an ancestor of ``h`` (reflexively) in the DAG."""
    dag = table.dag if isinstance(table, MotifTable) else table
    known = _label_known(h, dag) and _label_known(g, dag)
    if not known:
        missing = [x for x in (h, g) if not _label_known(x, dag)]
        raise UnknownLabelError(f"unknown label(s): {missing}")
    return dag.is_ancestor(g, h)


def _label_known(label: str, dag: RefinementDag) -> bool:
    if dag.knows(label):
        return True
    return any(nomenclature_ancestor(node, label) for node in dag.labels)
