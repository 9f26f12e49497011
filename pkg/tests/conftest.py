import json
from pathlib import Path

import pytest

from mitolr import (SnvFrequencyDb, SnvRecord, TlhgDistribution,
                    bundled_reference, bundled_table, ingest, parse_profile)

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def reference():
    return bundled_reference()


@pytest.fixture(scope="session")
def table():
    return bundled_table()


@pytest.fixture(scope="session")
def example_rows():
    """Rows of the bundled haplotype fixture table."""
    lines = (DATA / "example_profiles.tsv").read_text().splitlines()
    header = lines[0].split("\t")
    assert header == ["name", "haplogroup", "tlhg", "profile"]
    rows = []
    for line in lines[1:]:
        name, haplogroup, tlhg, profile = line.split("\t")
        rows.append({"name": name, "haplogroup": haplogroup,
                     "tlhg": tlhg, "profile": profile})
    assert len(rows) == 12
    return rows


@pytest.fixture(scope="session")
def demo_profile_text():
    return (DATA / "demo_profile.txt").read_text().strip()


@pytest.fixture(scope="session")
def demo_profile(demo_profile_text, reference):
    return parse_profile(demo_profile_text, None, reference)


@pytest.fixture(scope="session")
def demo_db():
    db, _ = ingest(DATA / "demo_snv.tsv", DATA / "demo_sizes.tsv", "demo")
    return db


@pytest.fixture(scope="session")
def demo_dist():
    return TlhgDistribution.from_weights_tsv(DATA / "demo_weights.tsv")


@pytest.fixture()
def demo_config(tmp_path):
    """Config file wired to the demo fixture source and weights."""
    cfg = {
        "snv_sources": [{"name": "demo",
                         "snv": str(DATA / "demo_snv.tsv"),
                         "sizes": str(DATA / "demo_sizes.tsv")}],
        "tlhg_distribution": {
            "weights_file": str(DATA / "demo_weights.tsv")},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def make_db(name, sizes, rows):
    """Build a db directly from (position, ref, alt, tlhg, count) tuples."""
    records = [SnvRecord(position=p, ref_base=r, alt_base=a, tlhg=t, count=c)
               for p, r, a, t, c in rows]
    return SnvFrequencyDb(name, records, sizes)


def write_db_files(directory, stem, sizes, rows):
    """Write matching snv and sizes TSVs; returns (snv_path, sizes_path)."""
    snv = directory / f"{stem}_snv.tsv"
    sz = directory / f"{stem}_sizes.tsv"
    lines = ["position\tref\talt\ttlhg\tcount\thomoplasmic"]
    for p, r, a, t, c in rows:
        lines.append(f"{p}\t{r}\t{a}\t{t}\t{c}\ttrue")
    snv.write_text("\n".join(lines) + "\n")
    sz.write_text("tlhg\tn\n" +
                  "".join(f"{t}\t{n}\n" for t, n in sizes.items()))
    return snv, sz
