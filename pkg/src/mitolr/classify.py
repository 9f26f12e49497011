"""TLHG inference: score a profile against every haplogroup motif.

For motif m the score is

    |m.variants matched by the profile at covered positions|
        - lam * |m.variants at covered positions that the profile lacks|

with lam = 1/2 by default: a match is worth twice what a gap costs, which
keeps partial profiles classifiable. Motif variants at uncovered positions
contribute nothing. Ties break on fewer absent variants, then label order.

rank1 is the collapsed TLHG of the best motif; rank2 is the collapsed TLHG
of the best motif belonging to a different TLHG (two motifs may share one).
"""
from __future__ import annotations

from dataclasses import dataclass

from sklearn.base import BaseEstimator

from .errors import DomainError, UnclassifiableError
from .motifs import MotifTable, bundled_table
from .variants import MitoProfile, parse_profile, restrict, substitutions

MODE_FULL = "full"
MODE_POSITIONS227 = "positions227"
MODES = (MODE_FULL, MODE_POSITIONS227)
DEFAULT_LAMBDA = 0.5


@dataclass(frozen=True)
class TlhgPrediction:
    rank1: str
    rank2: str | None
    rank1_motif: str
    rank2_motif: str | None
    scores: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "rank1": self.rank1,
            "rank2": self.rank2,
            "rank1_motif": self.rank1_motif,
            "rank2_motif": self.rank2_motif,
            "scores": dict(sorted(self.scores.items())),
        }


def classify(profile: MitoProfile, table: MotifTable | None = None,
             mode: str = MODE_POSITIONS227,
             lam: float = DEFAULT_LAMBDA) -> TlhgPrediction:
    """Rank TLHGs for a profile. Pure function of its inputs."""
    table = table or bundled_table()
    if mode not in MODES:
        raise DomainError(f"unknown classifier mode {mode!r}")
    if mode == MODE_POSITIONS227:
        profile = restrict(profile, table.positions)
    covered = profile.covered_positions(table.motif_positions)
    if not covered:
        raise UnclassifiableError(
            "profile coverage is disjoint from every motif position")
    profile_subs = {(p, b) for p, b in substitutions(profile)}

    ranking = []
    scores: dict[str, float] = {}
    for m in table.motifs:
        matched = 0
        absent = 0
        for v in m.variants:
            if v.position not in covered:
                continue
            if (v.position, v.base) in profile_subs:
                matched += 1
            else:
                absent += 1
        score = matched - lam * absent
        scores[m.label] = score
        ranking.append((-score, absent, m.label))
    ranking.sort()

    best_label = ranking[0][2]
    rank1 = table.collapse_map[best_label]
    rank2 = None
    rank2_motif = None
    for _, _, label in ranking[1:]:
        if table.collapse_map[label] != rank1:
            rank2 = table.collapse_map[label]
            rank2_motif = label
            break
    return TlhgPrediction(rank1=rank1, rank2=rank2, rank1_motif=best_label,
                          rank2_motif=rank2_motif, scores=scores)


class TlhgClassifier(BaseEstimator):
    """Estimator-style wrapper around the motif scorer.

    fit() loads and validates the motif table (bundled files by default);
    predict() maps profile strings or MitoProfile objects to rank-1 TLHGs.
    """

    def __init__(self, mode: str = MODE_POSITIONS227,
                 lam: float = DEFAULT_LAMBDA,
                 motif_path: str | None = None,
                 positions_path: str | None = None):
        self.mode = mode
        self.lam = lam
        self.motif_path = motif_path
        self.positions_path = positions_path

    def fit(self, X=None, y=None) -> "TlhgClassifier":
        if (self.motif_path is None) != (self.positions_path is None):
            raise DomainError(
                "motif_path and positions_path must be given together")
        if self.motif_path is None:
            self.table_ = bundled_table()
        else:
            self.table_ = MotifTable.from_files(self.motif_path,
                                                self.positions_path)
        return self

    def _require_fitted(self) -> MotifTable:
        if not hasattr(self, "table_"):
            raise DomainError("classifier is not fitted; call fit() first")
        return self.table_

    def _as_profile(self, x) -> MitoProfile:
        return x if isinstance(x, MitoProfile) else parse_profile(x)

    def predict(self, X) -> list[str]:
        table = self._require_fitted()
        return [classify(self._as_profile(x), table, self.mode, self.lam).rank1
                for x in X]

    def predict_ranks(self, X) -> list[tuple[str, str | None]]:
        table = self._require_fitted()
        out = []
        for x in X:
            pred = classify(self._as_profile(x), table, self.mode, self.lam)
            out.append((pred.rank1, pred.rank2))
        return out

    def predict_full(self, x) -> TlhgPrediction:
        table = self._require_fitted()
        return classify(self._as_profile(x), table, self.mode, self.lam)
