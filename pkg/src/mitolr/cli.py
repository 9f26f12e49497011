"""Command-line interface.

Exit codes: 0 success, 2 domain error (bad input values, undefined
computations), 3 configuration error (missing or invalid files). JSON
output is canonical: the same result always yields the same bytes, and the
HTTP service emits the identical encoding.
"""
from __future__ import annotations

import functools
import sys

import click

from ._version import __version__
from .classify import MODE_POSITIONS227, MODES, classify
from .config import ENV_CONFIG, FORMATS, AppConfig, Runtime
from .engine import (MIN_OF_RANK1_RANK2, RANK_POLICIES, LrRequest, evaluate)
from .errors import ConfigError, MitolrError
from .estimators import (augmented_estimate, binomial_estimate,
                         brenner_estimate, cggt_estimate,
                         clopper_pearson_upper, summarize_profiles)
from .freqdb import (TlhgDistribution, compare_databases, ingest,
                     save_cache, source_checksum, tlhg_distribution)
from .jsonio import canonical_json
from .variants import parse_profile

METHODS = ("binomial", "augmented", "clopper-pearson", "brenner", "cggt")


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except MitolrError as exc:
            click.echo(f"error[{exc.code}]: {exc.message}", err=True)
            sys.exit(exc.exit_code)
    return wrapper


@click.group()
@click.version_option(version=__version__, prog_name="mitolr")
@click.option("--config", "config_path", envvar=ENV_CONFIG, default=None,
              type=click.Path(), help=f"Config JSON (or ${ENV_CONFIG}).")
@click.pass_context
@handle_errors
def main(ctx, config_path):
    """Mitogenome weight-of-evidence toolkit."""
    cfg = AppConfig.from_file(config_path) if config_path else AppConfig()
    ctx.obj = Runtime(cfg)


def _profiles_from_options(profile, profile_file, coverage, runtime):
    if (profile is None) == (profile_file is None):
        raise click.UsageError("give exactly one of --profile/--profile-file")
    if profile is not None:
        texts = [profile]
    else:
        try:
            texts = open(profile_file).read().splitlines()
        except OSError as exc:
            raise ConfigError(f"cannot read {profile_file}: {exc}")
    return [parse_profile(t, coverage, runtime.reference) for t in texts]


def _emit(fmt, text_lines, json_obj, tsv_lines):
    if fmt == "json":
        click.echo(canonical_json(json_obj))
    elif fmt == "tsv":
        for line in tsv_lines:
            click.echo(line)
    else:
        for line in text_lines:
            click.echo(line)


def _format_option(fn):
    return click.option("--format", "fmt", type=click.Choice(FORMATS),
                        default=None,
                        help="Output format (default from config).")(fn)


@main.command("classify")
@click.option("--profile", default=None, help="Inline profile text.")
@click.option("--profile-file", default=None, type=click.Path(),
              help="File with one profile per line.")
@click.option("--coverage", default=None,
              help="Covered ranges, e.g. '16024-16569,1-600'.")
@click.option("--mode", type=click.Choice(MODES), default=None)
@_format_option
@click.pass_obj
@handle_errors
def cmd_classify(runtime, profile, profile_file, coverage, mode, fmt):
    """Predict rank-1/rank-2 TLHG for profiles."""
    fmt = fmt or runtime.config.format
    mode = mode or runtime.config.classifier_mode
    profiles = _profiles_from_options(profile, profile_file, coverage,
                                      runtime)
    preds = [classify(p, runtime.table, mode, runtime.config.lam)
             for p in profiles]
    text = [f"rank1={p.rank1} rank2={p.rank2}" for p in preds]
    json_obj = preds[0].to_dict() if len(preds) == 1 \
        else [p.to_dict() for p in preds]
    tsv = ["rank1\trank2\trank1_motif\trank2_motif"]
    tsv += [f"{p.rank1}\t{p.rank2}\t{p.rank1_motif}\t{p.rank2_motif}"
            for p in preds]
    _emit(fmt, text, json_obj, tsv)


def _resolve_distribution(runtime, tlhg_weights, tlhg_from_source):
    if tlhg_weights and tlhg_from_source:
        raise click.UsageError(
            "give at most one of --tlhg-weights/--tlhg-from-source")
    if tlhg_weights:
        return TlhgDistribution.from_weights_tsv(tlhg_weights)
    if tlhg_from_source:
        return tlhg_distribution(
            runtime.source_list((tlhg_from_source,))[0])
    if runtime.distribution is None:
        raise ConfigError(
            "no TLHG distribution available: configure snv_sources, "
            "tlhg_distribution, or pass --tlhg-weights")
    return runtime.distribution


def _report_text(report) -> list[str]:
    snv = report.chosen_snv
    snv_text = f"{snv[0]}{snv[1]}" if snv else "-"
    return [
        f"sources={','.join(report.source_names)} pooled="
        f"{str(report.pooled).lower()} policy={report.rank_policy}",
        f"rank_used={report.rank_used} tlhg={report.tlhg_used} "
        f"tlhg_prob={report.tlhg_prob:.10g}",
        f"chosen_snv={snv_text} snv_prob={report.snv_prob:.10g}",
        f"match_probability={report.match_probability:.10g} "
        f"lr={report.lr:.10g}",
        f"fallback_used={str(report.fallback_used).lower()}",
    ]


_LR_TSV_HEADER = ("sources\tpooled\trank_used\ttlhg_used\ttlhg_prob\t"
                  "chosen_snv\tsnv_prob\tmatch_probability\tlr\t"
                  "fallback_used")


def _report_tsv_row(report) -> str:
    snv = report.chosen_snv
    snv_text = f"{snv[0]}{snv[1]}" if snv else "-"
    return (f"{','.join(report.source_names)}\t"
            f"{str(report.pooled).lower()}\t{report.rank_used}\t"
            f"{report.tlhg_used}\t{report.tlhg_prob!r}\t{snv_text}\t"
            f"{report.snv_prob!r}\t{report.match_probability!r}\t"
            f"{report.lr!r}\t{str(report.fallback_used).lower()}")


@main.command("lr")
@click.option("--profile", default=None)
@click.option("--profile-file", default=None, type=click.Path())
@click.option("--coverage", default=None)
@click.option("--source", "source_names", multiple=True,
              help="Source name(s) from config; default all.")
@click.option("--pool/--no-pool", default=False,
              help="Pool the selected sources into one estimate.")
@click.option("--rank-policy", type=click.Choice(RANK_POLICIES),
              default=MIN_OF_RANK1_RANK2)
@click.option("--tlhg-override", default=None,
              help="Skip classification; use this TLHG.")
@click.option("--allow-fallback/--no-fallback", default=True)
@click.option("--mode", type=click.Choice(MODES), default=None)
@click.option("--tlhg-weights", default=None, type=click.Path(),
              help="Custom TLHG distribution TSV.")
@click.option("--tlhg-from-source", default=None,
              help="Derive the TLHG distribution from this source.")
@_format_option
@click.pass_obj
@handle_errors
def cmd_lr(runtime, profile, profile_file, coverage, source_names, pool,
           rank_policy, tlhg_override, allow_fallback, mode, tlhg_weights,
           tlhg_from_source, fmt):
    """Evaluate likelihood ratios for profiles."""
    fmt = fmt or runtime.config.format
    mode = mode or runtime.config.classifier_mode
    if not runtime.sources:
        raise ConfigError("no snv_sources configured; 'lr' needs at least "
                          "one frequency source")
    sources = runtime.source_list(source_names or None)
    dist = _resolve_distribution(runtime, tlhg_weights, tlhg_from_source)
    profiles = _profiles_from_options(profile, profile_file, coverage,
                                      runtime)
    source_groups = [tuple(sources)] if pool \
        else [(db,) for db in sources]
    reports = []
    for prof in profiles:
        for group in source_groups:
            request = LrRequest(
                profile=prof, snv_sources=group, tlhg_dist=dist, pool=pool,
                classifier_mode=mode, rank_policy=rank_policy,
                tlhg_override=tlhg_override, allow_fallback=allow_fallback,
                lam=runtime.config.lam, table=runtime.table)
            reports.append(evaluate(request))
    text: list[str] = []
    for i, rep in enumerate(reports):
        if i:
            text.append("")
        text.extend(_report_text(rep))
    json_obj = reports[0].to_dict() if len(reports) == 1 \
        else [r.to_dict() for r in reports]
    tsv = [_LR_TSV_HEADER] + [_report_tsv_row(r) for r in reports]
    _emit(fmt, text, json_obj, tsv)


@main.command("estimate")
@click.option("--method", type=click.Choice(METHODS), required=True)
@click.option("--n", type=int, required=True)
@click.option("--s", type=int, default=None)
@click.option("--d", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--copies", type=click.IntRange(1, 2), default=1)
@click.option("--confidence", type=float, default=None)
@_format_option
@click.pass_obj
@handle_errors
def cmd_estimate(runtime, method, n, s, d, k, copies, confidence, fmt):
    """Run one count estimator on database summary counts."""
    fmt = fmt or runtime.config.format
    confidence = confidence if confidence is not None \
        else runtime.config.confidence

    def need(value, flag):
        if value is None:
            raise click.UsageError(f"--method {method} requires {flag}")
        return value

    if method == "binomial":
        result = binomial_estimate(need(k, "--k"), n)
    elif method == "augmented":
        result = augmented_estimate(need(k, "--k"), n, copies)
    elif method == "clopper-pearson":
        result = clopper_pearson_upper(need(k, "--k"), n, confidence)
    elif method == "brenner":
        result = brenner_estimate(n, need(s, "--s"))
    else:
        result = cggt_estimate(n, need(s, "--s"), need(d, "--d"))
    text = [f"method={result.method} "
            f"match_probability={result.match_probability:.10g} "
            f"lr={result.lr:.10g} lr_rounded={round(result.lr):,}"]
    tsv = ["method\tmatch_probability\tlr",
           f"{result.method}\t{result.match_probability!r}\t{result.lr!r}"]
    _emit(fmt, text, result.to_dict(), tsv)


@main.command("compare")
@click.option("--db1", required=True, help="First source name.")
@click.option("--db2", required=True, help="Second source name.")
@click.option("--scatter-out", default=None, type=click.Path(),
              help="Write log10 frequency pairs as TSV for plotting.")
@_format_option
@click.pass_obj
@handle_errors
def cmd_compare(runtime, db1, db2, scatter_out, fmt):
    """Correlate SNV frequencies between two configured sources."""
    import math

    fmt = fmt or runtime.config.format
    a, b = runtime.source_list((db1, db2))
    report = compare_databases(a, b)
    if scatter_out:
        lines = ["position\talt\ttlhg\tlog10_freq1\tlog10_freq2"]
        for pos, alt, tlhg, f1, f2 in report.pairs:
            lines.append(f"{pos}\t{alt}\t{tlhg}\t{math.log10(f1)!r}\t"
                         f"{math.log10(f2)!r}")
        with open(scatter_out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    text = [f"source1={report.source1} source2={report.source2} "
            f"shared_snv_count={report.shared_snv_count} "
            f"pearson_log10={report.pearson_log10:.10g}"]
    tsv = ["source1\tsource2\tshared_snv_count\tpearson_log10",
           f"{report.source1}\t{report.source2}\t"
           f"{report.shared_snv_count}\t{report.pearson_log10!r}"]
    _emit(fmt, text, report.to_dict(), tsv)


@main.command("summarize")
@click.option("--profiles-file", required=True, type=click.Path())
@click.option("--coverage", default=None)
@_format_option
@click.pass_obj
@handle_errors
def cmd_summarize(runtime, profiles_file, coverage, fmt):
    """Singleton/doubleton summary of a profile database file."""
    fmt = fmt or runtime.config.format
    try:
        texts = open(profiles_file).read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read {profiles_file}: {exc}")
    profiles = [parse_profile(t, coverage, runtime.reference)
                for t in texts]
    summary = summarize_profiles(profiles)
    sd = summary.to_dict()
    text = [f"n={summary.n} s={summary.s} d={summary.d} "
            f"s/n={sd['singleton_fraction']:.10g} "
            f"d/n={sd['doubleton_fraction']:.10g}"]
    tsv = ["n\ts\td\tsingleton_fraction\tdoubleton_fraction",
           f"{summary.n}\t{summary.s}\t{summary.d}\t"
           f"{sd['singleton_fraction']!r}\t{sd['doubleton_fraction']!r}"]
    _emit(fmt, text, sd, tsv)


@main.command("ingest")
@click.option("--snv", required=True, type=click.Path())
@click.option("--sizes", required=True, type=click.Path())
@click.option("--name", required=True)
@click.option("--cache-out", default=None, type=click.Path())
@click.option("--retain-poly/--drop-poly-stretches", default=True,
              help="Keep or drop substitutions at homopolymer stretches.")
@_format_option
@click.pass_obj
@handle_errors
def cmd_ingest(runtime, snv, sizes, name, cache_out, retain_poly, fmt):
    """Ingest and filter an SNV TSV; optionally write a binary cache."""
    fmt = fmt or runtime.config.format
    db, report = ingest(snv, sizes, name, retain_poly=retain_poly)
    if cache_out:
        save_cache(db, report, source_checksum(snv, sizes), cache_out)
    d = report.to_dict()
    dropped = " ".join(f"dropped_{k}={v}" for k, v in
                       sorted(d["dropped"].items()))
    text = [f"source={d['source_name']} rows_total={d['rows_total']} "
            f"retained={d['retained']} {dropped}"]
    tsv_cols = ["source_name", "rows_total", "retained"] + \
        [f"dropped_{k}" for k in sorted(d["dropped"])]
    tsv_vals = [d["source_name"], d["rows_total"], d["retained"]] + \
        [d["dropped"][k] for k in sorted(d["dropped"])]
    tsv = ["\t".join(tsv_cols), "\t".join(str(v) for v in tsv_vals)]
    _emit(fmt, text, d, tsv)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8321, show_default=True, type=int)
@click.option("--session-ttl", default=3600.0, show_default=True,
              type=float, help="Idle seconds before a session expires.")
@click.pass_obj
@handle_errors
def cmd_serve(runtime, host, port, session_ttl):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(runtime, session_ttl=session_ttl)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
