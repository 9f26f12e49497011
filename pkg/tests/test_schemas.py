"""Every published JSON shape validates against its schema in docs/schemas."""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient
from jsonschema import Draft202012Validator

from mitolr import (LrCalculator, ProfileCountSummary, brenner_estimate,
                    cggt_estimate, classify, clopper_pearson_upper,
                    augmented_estimate, binomial_estimate, compare_databases,
                    ingest, summarize_profiles, parse_profile)
from mitolr.config import AppConfig, Runtime
from mitolr.service import create_app

SCHEMA_DIR = Path(__file__).parent.parent / "docs" / "schemas"


def _validator(name):
    schema = json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text())
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema)


@pytest.fixture(scope="module")
def calc(demo_db, demo_dist):
    return LrCalculator(sources=[demo_db], distribution=demo_dist).fit()


class TestPredictionSchema:
    def test_classify_output(self, demo_profile):
        v = _validator("tlhg_prediction")
        v.validate(classify(demo_profile).to_dict())

    def test_rejects_missing_rank2(self, demo_profile):
        v = _validator("tlhg_prediction")
        payload = classify(demo_profile).to_dict()
        del payload["rank2"]
        assert list(v.iter_errors(payload))


class TestLrReportSchema:
    def test_rank1_path(self, calc, demo_profile):
        _validator("lr_report").validate(calc.report(demo_profile).to_dict())

    def test_override_path(self, calc, demo_profile):
        report = calc.report(demo_profile, tlhg_override="A1")
        _validator("lr_report").validate(report.to_dict())

    def test_fallback_path(self, calc, demo_profile_text):
        bare = demo_profile_text.rsplit(" ", 1)[0]
        report = calc.report(bare)
        payload = report.to_dict()
        assert payload["chosen_snv"] is None
        _validator("lr_report").validate(payload)

    def test_rejects_nonpositive_lr(self, calc, demo_profile):
        payload = calc.report(demo_profile).to_dict()
        payload["lr"] = 0.5
        assert list(_validator("lr_report").iter_errors(payload))


class TestEstimateSchema:
    def test_all_methods(self):
        v = _validator("estimate_result")
        for result in (binomial_estimate(3, 1000),
                       augmented_estimate(0, 100),
                       augmented_estimate(0, 100, copies=2),
                       clopper_pearson_upper(0, 195983),
                       brenner_estimate(61295, 42614),
                       cggt_estimate(61295, 42614, 3466)):
            v.validate(result.to_dict())

    def test_rejects_unknown_method(self):
        payload = binomial_estimate(3, 1000).to_dict()
        payload["method"] = "guesswork"
        assert list(_validator("estimate_result").iter_errors(payload))


class TestFreqdbSchemas:
    def test_comparison_report(self, demo_db):
        report = compare_databases(demo_db, demo_db)
        _validator("comparison_report").validate(report.to_dict())

    def test_ingest_report(self, tmp_path):
        from conftest import write_db_files
        snv, sizes = write_db_files(tmp_path, "s", {"A": 10},
                                    [(263, "A", "G", "A", 5),
                                     (750, "A", "G", "A", 3)])
        _, report = ingest(snv, sizes, "s")
        _validator("ingest_report").validate(report.to_dict())

    def test_profile_count_summary(self):
        profiles = [parse_profile("263G"), parse_profile("263G"),
                    parse_profile("750G")]
        v = _validator("profile_count_summary")
        v.validate(summarize_profiles(profiles).to_dict())
        v.validate(ProfileCountSummary(n=3, s=1, d=1, k_q=2).to_dict())


class TestServiceBodiesMatchSchemas:
    @pytest.fixture()
    def client(self, demo_config):
        return TestClient(create_app(Runtime(AppConfig.resolve(
            str(demo_config)))))

    def test_classify_endpoint(self, client, demo_profile_text):
        resp = client.post("/classify", json={"profile": demo_profile_text})
        _validator("tlhg_prediction").validate(resp.json())

    def test_lr_endpoint(self, client, demo_profile_text):
        resp = client.post("/lr", json={"profile": demo_profile_text})
        _validator("lr_report").validate(resp.json())

    def test_estimator_endpoint(self, client):
        resp = client.get("/estimators",
                          params={"method": "cggt", "n": 61295,
                                  "s": 42614, "d": 3466})
        _validator("estimate_result").validate(resp.json())
