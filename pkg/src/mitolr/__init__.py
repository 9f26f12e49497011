"""Mitogenome weight-of-evidence toolkit.

Classifies control-region or full-genome variant profiles into top-level
haplogroups, estimates haplotype match probabilities from population
counts, and combines the two into likelihood ratios for identity
evidence. Ships a CLI (``mitolr``) and an HTTP service exposing the same
canonical JSON results.
"""
from ._version import __version__
from .classify import TlhgClassifier, TlhgPrediction, classify
from .engine import (LrCalculator, LrReport, LrRequest, evaluate,
                     refinement_check, single_sample_lr)
from .errors import (ConfigError, DomainError, MitolrError, NotFoundError,
                     ParseError, UnclassifiableError, UnknownLabelError,
                     UnknownTlhgError)
from .estimators import (EstimateResult, ProfileCountSummary,
                         augmented_estimate, binomial_estimate,
                         brenner_estimate, cggt_estimate,
                         clopper_pearson_upper, summarize_profiles)
from .freqdb import (IngestReport, SnvFrequencyDb, SnvRecord,
                     TlhgDistribution, compare_databases, ingest,
                     load_or_ingest, pooled_frequency, tlhg_distribution)
from .motifs import (MotifTable, RefinementDag, bundled_table, collapse_tlhg,
                     is_refinement, nomenclature_ancestor)
from .variants import (GENOME_LENGTH, MitoProfile, RcrsReference, Variant,
                       bundled_reference, format_profile, parse_coverage,
                       parse_profile, parse_variant, restrict,
                       substitutions)

__all__ = [
    "__version__",
    "GENOME_LENGTH",
    "ConfigError",
    "DomainError",
    "EstimateResult",
    "IngestReport",
    "LrCalculator",
    "LrReport",
    "LrRequest",
    "MitoProfile",
    "MitolrError",
    "MotifTable",
    "NotFoundError",
    "ParseError",
    "ProfileCountSummary",
    "RcrsReference",
    "RefinementDag",
    "SnvFrequencyDb",
    "SnvRecord",
    "TlhgClassifier",
    "TlhgDistribution",
    "TlhgPrediction",
    "UnclassifiableError",
    "UnknownLabelError",
    "UnknownTlhgError",
    "Variant",
    "augmented_estimate",
    "binomial_estimate",
    "brenner_estimate",
    "bundled_reference",
    "bundled_table",
    "cggt_estimate",
    "classify",
    "clopper_pearson_upper",
    "collapse_tlhg",
    "compare_databases",
    "evaluate",
    "format_profile",
    "ingest",
    "is_refinement",
    "load_or_ingest",
    "nomenclature_ancestor",
    "parse_coverage",
    "parse_profile",
    "parse_variant",
    "pooled_frequency",
    "refinement_check",
    "restrict",
    "single_sample_lr",
    "substitutions",
    "summarize_profiles",
    "tlhg_distribution",
]
