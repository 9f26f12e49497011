"""Optional integration tests against real population frequency exports.

These are skipped by default. To run them, set MITOLR_REAL_DATA_DIR to a
directory containing:

  helix_snv.tsv, helix_sizes.tsv    full-mitogenome export (n = 195,983)
  gnomad_snv.tsv, gnomad_sizes.tsv  second export for cross-correlation
  profile_h1e1a.txt                 one whitespace-separated H1e1a profile

The expected values below are reference points from a known-good run on
those exports: lineage H1e1a resolves to TLHG H, its rarest substitution
is 14902T, and the LR against the large export rounds to 224.
"""

import os
from pathlib import Path

import pytest

pytestmark = pytest.mark.skipif(
    "MITOLR_REAL_DATA_DIR" not in os.environ,
    reason="set MITOLR_REAL_DATA_DIR to a directory with real exports")


@pytest.fixture(scope="module")
def data_dir():
    d = Path(os.environ["MITOLR_REAL_DATA_DIR"])
    if not d.is_dir():
        pytest.skip(f"{d} is not a directory")
    return d


@pytest.fixture(scope="module")
def helix_db(data_dir):
    from mitolr import ingest
    db, _ = ingest(data_dir / "helix_snv.tsv", data_dir / "helix_sizes.tsv",
                   source_name="helix")
    return db


@pytest.fixture(scope="module")
def gnomad_db(data_dir):
    from mitolr import ingest
    db, _ = ingest(data_dir / "gnomad_snv.tsv",
                   data_dir / "gnomad_sizes.tsv", source_name="gnomad")
    return db


def test_h1e1a_profile_lr(data_dir, helix_db):
    from mitolr import LrCalculator
    profile_text = (data_dir / "profile_h1e1a.txt").read_text().strip()
    calc = LrCalculator(sources=[helix_db]).fit()
    report = calc.report(profile_text)
    assert report.tlhg_used == "H"
    assert report.chosen_snv == (14902, "T")
    assert round(report.lr) == 224


def test_cross_export_correlation_is_strong(helix_db, gnomad_db):
    from mitolr import compare_databases
    report = compare_databases(helix_db, gnomad_db)
    assert report.shared_snv_count > 1000
    assert report.pearson_log10 > 0.9
