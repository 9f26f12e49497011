"""Reference count estimators for rare-profile match probabilities.

Each estimator returns a match probability in (0, 1] and its likelihood
ratio LR = 1/match_probability. The singleton estimator uses
(n - s)/(n + 1)^2 and the generalized Good-Turing estimator uses 2d/(n*s);
both closed forms are pinned by the acceptance suite against published
reference values, so a formula change here is a contract change.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from scipy.special import betainc

from .errors import DomainError
from .variants import MitoProfile, format_profile

CP_BISECTION_TOL = 1e-10


@dataclass(frozen=True)
class ProfileCountSummary:
    n: int
    s: int
    d: int
    k_q: int | None = None

    def __post_init__(self):
        if min(self.n, self.s, self.d) < 0:
            raise DomainError("counts must be non-negative")
        if self.s + 2 * self.d > self.n:
            raise DomainError(
                f"impossible summary: s + 2d = {self.s + 2 * self.d} "
                f"exceeds n = {self.n}")
        if self.k_q is not None and self.k_q < 0:
            raise DomainError("k_q must be non-negative")

    def to_dict(self) -> dict:
        out = {"n": self.n, "s": self.s, "d": self.d,
               "singleton_fraction": self.s / self.n if self.n else 0.0,
               "doubleton_fraction": self.d / self.n if self.n else 0.0}
        if self.k_q is not None:
            out["k_q"] = self.k_q
        return out


@dataclass(frozen=True)
class EstimateResult:
    method: str
    match_probability: float
    lr: float

    def __post_init__(self):
        if not 0.0 < self.match_probability <= 1.0:
            raise DomainError(
                f"match probability {self.match_probability} outside (0, 1]")
        if abs(self.lr * self.match_probability - 1.0) > 1e-12:
            raise DomainError("lr must equal 1/match_probability")

    def to_dict(self) -> dict:
        return {"method": self.method,
                "match_probability": self.match_probability,
                "lr": self.lr}


def _result(method: str, match_probability: float) -> EstimateResult:
    mp = min(match_probability, 1.0)
    return EstimateResult(method=method, match_probability=mp, lr=1.0 / mp)


def summarize_profiles(profiles: list[MitoProfile]) -> ProfileCountSummary:
    """n plus singleton and doubleton counts over canonical profile strings."""
    counts = Counter(format_profile(p) for p in profiles)
    s = sum(1 for c in counts.values() if c == 1)
    d = sum(1 for c in counts.values() if c == 2)
    return ProfileCountSummary(n=len(profiles), s=s, d=d)


def binomial_estimate(k_q: int, n: int) -> EstimateResult:
    """Plain relative frequency k_q/n of an observed profile."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if k_q == 0:
        raise DomainError(
            "binomial estimator undefined for an unobserved profile "
            "(k_q = 0); use a no-match method")
    if not 1 <= k_q <= n:
        raise DomainError(f"k_q must lie in [1, n], got k_q={k_q} n={n}")
    return _result("binomial", k_q / n)


def augmented_estimate(k_q: int, n: int, copies: int = 1) -> EstimateResult:
    """Add one or two copies of the query profile to the database."""
    if copies not in (1, 2):
        raise DomainError(f"copies must be 1 or 2, got {copies}")
    if k_q < 0 or n < 0:
        raise DomainError("k_q and n must be non-negative")
    return _result(f"augmented{copies}", (k_q + copies) / (n + copies))


def clopper_pearson_upper(k_q: int, n: int,
                          confidence: float = 0.95) -> EstimateResult:
    """Exact upper confidence limit for a binomial proportion.

    The limit is the Beta(k_q+1, n-k_q) quantile at the confidence level,
    found by bisection on the regularized incomplete beta function to an
    absolute tolerance of 1e-10.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0 <= k_q <= n:
        raise DomainError(f"k_q must lie in [0, n], got k_q={k_q} n={n}")
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must be in (0, 1), got {confidence}")
    if k_q == n:
        return _result("clopper_pearson", 1.0)
    a, b = k_q + 1, n - k_q
    lo, hi = 0.0, 1.0
    while hi - lo > CP_BISECTION_TOL:
        mid = (lo + hi) / 2.0
        if betainc(a, b, mid) < confidence:
            lo = mid
        else:
            hi = mid
    return _result("clopper_pearson", (lo + hi) / 2.0)


def brenner_estimate(n: int, s: int) -> EstimateResult:
    """Singleton-fraction estimator for a profile not in the database.

    The query joins the database as one more singleton: with kappa = s/n
    the no-match probability estimate is (n - s)/(n + 1)^2.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0 <= s <= n:
        raise DomainError(f"s must lie in [0, n], got s={s} n={n}")
    if s == n:
        raise DomainError(
            "estimator undefined when every profile is a singleton (s = n)")
    return _result("brenner", (n - s) / (n + 1) ** 2)


def cggt_estimate(n: int, s: int, d: int) -> EstimateResult:
    """Generalized Good-Turing estimator from singleton/doubleton counts:
    match probability 2d/(n*s)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if s < 1:
        raise DomainError("estimator undefined without singletons (s = 0)")
    if d < 1:
        raise DomainError("estimator undefined without doubletons (d = 0)")
    if s + 2 * d > n:
        raise DomainError(f"impossible counts: s + 2d > n ({s} + 2*{d} > {n})")
    return _result("cggt", (2 * d) / (n * s))
