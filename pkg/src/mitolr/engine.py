"""Likelihood ratios for mitogenome profiles.

The match probability of a profile is bounded by P(TLHG) * P(X_k | TLHG)
where X_k is the profile SNV with the smallest frequency inside the TLHG;
the reported LR is the reciprocal. Both the rank-1 and rank-2 TLHG calls
are evaluated and, under the default policy, the smaller LR of the two is
reported (the conservative choice when the classifier may be wrong).

When none of the profile's substitutions appears in the frequency source
within the chosen TLHG, the engine falls back to snv_prob = 1, i.e.
LR = 1/P(TLHG), and flags the report. The fallback can be disabled.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from sklearn.base import BaseEstimator

from ._version import __version__
from .classify import DEFAULT_LAMBDA, MODE_POSITIONS227, MODES, classify
from .errors import DomainError, UnknownTlhgError
from .freqdb import (SnvFrequencyDb, TlhgDistribution, pooled_frequency,
                     snv_frequency, tlhg_distribution)
from .motifs import MotifTable, RefinementDag, bundled_table, is_refinement
from .variants import MitoProfile, parse_profile, substitutions

RANK1_ONLY = "rank1_only"
MIN_OF_RANK1_RANK2 = "min_of_rank1_rank2"
RANK_POLICIES = (RANK1_ONLY, MIN_OF_RANK1_RANK2)


@dataclass(frozen=True)
class LrRequest:
    profile: MitoProfile
    snv_sources: tuple[SnvFrequencyDb, ...]
    tlhg_dist: TlhgDistribution
    pool: bool = False
    classifier_mode: str = MODE_POSITIONS227
    rank_policy: str = MIN_OF_RANK1_RANK2
    tlhg_override: str | None = None
    allow_fallback: bool = True
    lam: float = DEFAULT_LAMBDA
    table: MotifTable | None = None

    def __post_init__(self):
        if not self.snv_sources:
            raise DomainError("at least one SNV source is required")
        if self.rank_policy not in RANK_POLICIES:
            raise DomainError(f"unknown rank policy {self.rank_policy!r}")
        if self.classifier_mode not in MODES:
            raise DomainError(
                f"unknown classifier mode {self.classifier_mode!r}")
        if not self.pool and len(self.snv_sources) > 1:
            raise DomainError(
                "multiple sources without pooling: evaluate per source or "
                "set pool=True")


@dataclass(frozen=True)
class LrReport:
    tlhg_used: str
    tlhg_prob: float
    chosen_snv: tuple[int, str] | None
    snv_prob: float
    match_probability: float
    lr: float
    fallback_used: bool
    rank_used: str
    per_rank: dict[str, dict] = field(default_factory=dict)
    source_names: tuple[str, ...] = ()
    pooled: bool = False
    rank_policy: str = MIN_OF_RANK1_RANK2
    classifier_mode: str = MODE_POSITIONS227
    tlhg_override: str | None = None

    def to_dict(self) -> dict:
        return {
            "software_version": __version__,
            "source_names": list(self.source_names),
            "pooled": self.pooled,
            "rank_policy": self.rank_policy,
            "classifier_mode": self.classifier_mode,
            "tlhg_override": self.tlhg_override,
            "rank_used": self.rank_used,
            "tlhg_used": self.tlhg_used,
            "tlhg_prob": self.tlhg_prob,
            "chosen_snv": _snv_dict(self.chosen_snv),
            "snv_prob": self.snv_prob,
            "match_probability": self.match_probability,
            "lr": self.lr,
            "fallback_used": self.fallback_used,
            "per_rank": self.per_rank,
        }


def _snv_dict(snv: tuple[int, str] | None) -> dict | None:
    if snv is None:
        return None
    return {"position": snv[0], "alt": snv[1]}


def _min_snv(profile: MitoProfile, sources: tuple[SnvFrequencyDb, ...],
             tlhg: str, pool: bool) -> tuple[tuple[int, str] | None, float | None]:
    """The profile SNV with the smallest frequency within the TLHG.

    Ties break on lowest position, then alphabetical alt base. Returns
    (None, None) when no profile SNV is present in the source(s), or when
    the TLHG is unknown to every source.
    """
    best: tuple[float, int, str] | None = None
    for pos, alt in substitutions(profile):
        try:
            if pool:
                freq = pooled_frequency(list(sources), pos, alt, tlhg)
            else:
                freq = snv_frequency(sources[0], pos, alt, tlhg)
        except UnknownTlhgError:
            return None, None
        if freq is None:
            continue
        key = (freq, pos, alt)
        if best is None or key < best:
            best = key
    if best is None:
        return None, None
    return (best[1], best[2]), best[0]


def evaluate(request: LrRequest) -> LrReport:
    """Full evidential breakdown for one profile against one source view."""
    table = request.table or bundled_table()
    if request.tlhg_override is not None:
        considered = [("override", request.tlhg_override)]
    else:
        prediction = classify(request.profile, table,
                              request.classifier_mode, request.lam)
        considered = [("rank1", prediction.rank1)]
        if request.rank_policy == MIN_OF_RANK1_RANK2 \
                and prediction.rank2 is not None:
            considered.append(("rank2", prediction.rank2))

    per_rank: dict[str, dict] = {}
    usable: list[tuple[float, int, str, dict]] = []
    any_zero_prob = False
    any_fallback_blocked = False
    for order, (rank_name, tlhg) in enumerate(considered):
        prob = request.tlhg_dist.prob(tlhg)
        if prob <= 0.0:
            per_rank[rank_name] = {"tlhg": tlhg, "tlhg_prob": 0.0,
                                   "skipped": "zero_tlhg_probability"}
            any_zero_prob = True
            continue
        chosen, freq = _min_snv(request.profile, request.snv_sources, tlhg,
                                request.pool)
        if freq is None:
            if not request.allow_fallback:
                per_rank[rank_name] = {
                    "tlhg": tlhg, "tlhg_prob": prob,
                    "skipped": "no_snv_and_fallback_disabled"}
                any_fallback_blocked = True
                continue
            snv_prob, fallback = 1.0, True
        else:
            snv_prob, fallback = freq, False
        mp = prob * snv_prob
        entry = {
            "tlhg": tlhg,
            "tlhg_prob": prob,
            "chosen_snv": _snv_dict(chosen),
            "snv_prob": snv_prob,
            "match_probability": mp,
            "lr": 1.0 / mp,
            "fallback_used": fallback,
        }
        per_rank[rank_name] = entry
        usable.append((1.0 / mp, order, rank_name, entry))

    if not usable:
        if any_fallback_blocked:
            raise DomainError(
                "no profile SNV found in the source(s) and fallback is "
                "disabled")
        if any_zero_prob:
            raise DomainError(
                "every considered TLHG has zero probability in the "
                "distribution; supply a covering distribution")
        raise DomainError("no usable TLHG rank")

    # the smaller LR wins; ties keep rank order (rank1 before rank2)
    usable.sort(key=lambda item: (item[0], item[1]))
    _, _, rank_name, entry = usable[0]
    return LrReport(
        tlhg_used=entry["tlhg"],
        tlhg_prob=entry["tlhg_prob"],
        chosen_snv=(None if entry["chosen_snv"] is None else
                    (entry["chosen_snv"]["position"],
                     entry["chosen_snv"]["alt"])),
        snv_prob=entry["snv_prob"],
        match_probability=entry["match_probability"],
        lr=entry["lr"],
        fallback_used=entry["fallback_used"],
        rank_used=rank_name,
        per_rank=per_rank,
        source_names=tuple(db.source_name for db in request.snv_sources),
        pooled=request.pool,
        rank_policy=request.rank_policy,
        classifier_mode=request.classifier_mode,
        tlhg_override=request.tlhg_override,
    )


def single_sample_lr(n: int, n_g: int, m_g: int) -> dict:
    """LR from one database: subdivision size n_g of n, SNV seen m_g times.

    P(G) * P(X | G) = (n_g/n) * (m_g/n_g) = m_g/n, so the subdivision size
    cancels and LR = n/m_g.
    """
    if m_g == 0:
        raise DomainError("SNV unobserved in the subdivision (m = 0)")
    if not 1 <= m_g <= n_g <= n:
        raise DomainError(
            f"require 1 <= m <= n_subdivision <= n, got m={m_g} "
            f"n_subdivision={n_g} n={n}")
    return {"match_probability": m_g / n, "lr": n / m_g}


def refinement_check(sample: list[tuple[str, bool]], g: str, h: str,
                     table: MotifTable | RefinementDag | None = None) -> dict:
    """Compare the LRs of an ancestor/descendant haplogroup pair.

    ``sample`` lists (refined_label, has_snv) individuals. Both LRs come
    from single_sample_lr over the same sample; a finer subdivision can
    only shrink the SNV carrier count, so lr_h >= lr_g must always hold.
    """
    table = table if table is not None else bundled_table()
    if not is_refinement(h, g, table):
        raise DomainError(f"{h!r} is not a refinement of {g!r}")
    n = len(sample)
    n_g = m_g = n_h = m_h = 0
    for label, has_snv in sample:
        if is_refinement(label, g, table):
            n_g += 1
            if has_snv:
                m_g += 1
        if is_refinement(label, h, table):
            n_h += 1
            if has_snv:
                m_h += 1
    if m_h == 0:
        raise DomainError(
            f"SNV unobserved within {h!r} (m = 0); check requires at "
            f"least one carrier")
    lr_g = single_sample_lr(n, n_g, m_g)["lr"]
    lr_h = single_sample_lr(n, n_h, m_h)["lr"]
    return {"lr_g": lr_g, "lr_h": lr_h, "monotone": lr_h >= lr_g,
            "n": n, "n_g": n_g, "m_g": m_g, "n_h": n_h, "m_h": m_h}


class LrCalculator(BaseEstimator):
    """Estimator-style front door for LR evaluation.

    fit() resolves the frequency sources and the TLHG distribution (derived
    from the first source's sizes when none is given); predict() maps
    profiles to LR values; report() gives the full breakdown.
    """

    def __init__(self, sources: list[SnvFrequencyDb] | None = None,
                 distribution: TlhgDistribution | None = None,
                 pool: bool = False,
                 rank_policy: str = MIN_OF_RANK1_RANK2,
                 mode: str = MODE_POSITIONS227,
                 allow_fallback: bool = True,
                 lam: float = DEFAULT_LAMBDA,
                 table: MotifTable | None = None):
        self.sources = sources
        self.distribution = distribution
        self.pool = pool
        self.rank_policy = rank_policy
        self.mode = mode
        self.allow_fallback = allow_fallback
        self.lam = lam
        self.table = table

    def fit(self, X=None, y=None) -> "LrCalculator":
        if not self.sources:
            raise DomainError("LrCalculator needs at least one SNV source")
        self.sources_ = tuple(self.sources)
        self.distribution_ = (self.distribution
                              or tlhg_distribution(self.sources_[0]))
        self.table_ = self.table or bundled_table()
        return self

    def _require_fitted(self):
        if not hasattr(self, "sources_"):
            raise DomainError("calculator is not fitted; call fit() first")

    def report(self, x, tlhg_override: str | None = None) -> LrReport:
        self._require_fitted()
        profile = x if isinstance(x, MitoProfile) else parse_profile(x)
        request = LrRequest(
            profile=profile, snv_sources=self.sources_,
            tlhg_dist=self.distribution_, pool=self.pool,
            classifier_mode=self.mode, rank_policy=self.rank_policy,
            tlhg_override=tlhg_override, allow_fallback=self.allow_fallback,
            lam=self.lam, table=self.table_)
        return evaluate(request)

    def predict(self, X) -> list[float]:
        return [self.report(x).lr for x in X]
