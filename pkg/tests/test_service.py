import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from mitolr.cli import main
from mitolr.config import AppConfig, Runtime
from mitolr.service import create_app

DATA = Path(__file__).parent / "data"


class FakeClock:
    def __init__(self):
        self.now = 1000.0

    def __call__(self):
        return self.now


@pytest.fixture()
def runtime(demo_config):
    return Runtime(AppConfig.resolve(str(demo_config)))


@pytest.fixture()
def clock():
    return FakeClock()


@pytest.fixture()
def client(runtime, clock):
    app = create_app(runtime, session_ttl=3600.0, clock=clock)
    return TestClient(app)


class TestClassifyEndpoint:
    def test_basic(self, client, demo_profile_text):
        resp = client.post("/classify", json={"profile": demo_profile_text})
        assert resp.status_code == 200
        body = resp.json()
        assert (body["rank1"], body["rank2"]) == ("A", "N")

    def test_coverage_and_mode(self, client):
        resp = client.post("/classify", json={"profile": "263G",
                                              "coverage": "1-600",
                                              "mode": "full"})
        assert resp.status_code == 200

    def test_parse_error_400(self, client):
        resp = client.post("/classify", json={"profile": "263X"})
        assert resp.status_code == 400
        err = resp.json()["error"]
        assert err["code"] == "parse_error"
        assert err["exit_code"] == 2

    def test_unclassifiable_422(self, client):
        resp = client.post("/classify", json={"profile": "16400G",
                                              "coverage": "16393-16410"})
        assert resp.status_code == 422
        assert resp.json()["error"]["code"] == "unclassifiable"

    def test_missing_profile_400(self, client):
        resp = client.post("/classify", json={})
        assert resp.status_code == 400

    def test_malformed_json_400(self, client):
        resp = client.post("/classify", content=b"{oops",
                           headers={"content-type": "application/json"})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "parse_error"

    def test_non_object_body_400(self, client):
        resp = client.post("/classify", json=["263G"])
        assert resp.status_code == 400


class TestLrEndpoint:
    def test_default_distribution(self, client, demo_profile_text):
        resp = client.post("/lr", json={"profile": demo_profile_text})
        assert resp.status_code == 200
        body = resp.json()
        assert body["lr"] == 20.0
        assert body["tlhg_used"] == "A"

    def test_override(self, client, demo_profile_text):
        resp = client.post("/lr", json={"profile": demo_profile_text,
                                        "tlhg_override": "A1"})
        assert resp.json()["lr"] == 25.0

    def test_source_subset(self, client, demo_profile_text):
        resp = client.post("/lr", json={"profile": demo_profile_text,
                                        "sources": ["demo"]})
        assert resp.status_code == 200
        assert resp.json()["source_names"] == ["demo"]

    def test_unknown_source_422(self, client, demo_profile_text):
        resp = client.post("/lr", json={"profile": demo_profile_text,
                                        "sources": ["nope"]})
        assert resp.status_code == 422
        assert resp.json()["error"]["code"] == "config_error"

    def test_bad_rank_policy_400(self, client, demo_profile_text):
        resp = client.post("/lr", json={"profile": demo_profile_text,
                                        "rank_policy": "warp"})
        assert resp.status_code == 400

    def test_bad_sources_type_400(self, client, demo_profile_text):
        resp = client.post("/lr", json={"profile": demo_profile_text,
                                        "sources": "demo"})
        assert resp.status_code == 400

    def test_session_distribution(self, client, demo_profile_text):
        post = client.post("/tlhg-distribution",
                           json={"weights": {"A": 1, "A1": 1}})
        sid = post.json()["session"]
        resp = client.post("/lr", json={"profile": demo_profile_text,
                                        "session": sid})
        assert resp.json()["lr"] == 20.0

    def test_fallback_toggle(self, client, demo_profile_text):
        # drop 16400G: still classifies as A but carries no db SNV
        bare = demo_profile_text.rsplit(" ", 1)[0]
        resp = client.post("/lr", json={"profile": bare})
        assert resp.status_code == 200
        body = resp.json()
        assert body["fallback_used"] is True
        assert body["lr"] == 2.0
        resp = client.post("/lr", json={"profile": bare,
                                        "allow_fallback": False})
        assert resp.status_code == 422

    def test_bool_field_type_checked(self, client, demo_profile_text):
        resp = client.post("/lr", json={"profile": demo_profile_text,
                                        "pool": "yes"})
        assert resp.status_code == 400


class TestDistributionSessions:
    def test_upload_normalizes(self, client):
        resp = client.post("/tlhg-distribution",
                           json={"weights": {"A": 4, "B": 1}})
        assert resp.status_code == 200
        body = resp.json()
        assert body["distribution"]["probs"] == {"A": 0.8, "B": 0.2}
        assert body["session"]

    def test_get_round_trip(self, client):
        sid = client.post("/tlhg-distribution",
                          json={"weights": {"A": 4, "B": 1}}
                          ).json()["session"]
        resp = client.get(f"/tlhg-distribution/{sid}")
        assert resp.status_code == 200
        assert resp.json()["probs"] == {"A": 0.8, "B": 0.2}

    def test_unknown_session_404(self, client):
        resp = client.get("/tlhg-distribution/deadbeef")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "not_found"

    def test_bad_weights_types(self, client):
        resp = client.post("/tlhg-distribution",
                           json={"weights": {"A": "four"}})
        assert resp.status_code == 422
        resp = client.post("/tlhg-distribution", json={"weights": {}})
        assert resp.status_code == 400
        resp = client.post("/tlhg-distribution",
                           json={"weights": {"A": -1}})
        assert resp.status_code == 422

    def test_session_expires_after_idle_ttl(self, runtime, clock):
        app = create_app(runtime, session_ttl=100.0, clock=clock)
        client = TestClient(app)
        sid = client.post("/tlhg-distribution",
                          json={"weights": {"A": 1}}).json()["session"]
        clock.now += 50
        assert client.get(f"/tlhg-distribution/{sid}").status_code == 200
        # access refreshed the idle timer
        clock.now += 90
        assert client.get(f"/tlhg-distribution/{sid}").status_code == 200
        clock.now += 101
        assert client.get(f"/tlhg-distribution/{sid}").status_code == 404


class TestInfoEndpoints:
    def test_sources(self, client):
        resp = client.get("/sources")
        assert resp.status_code == 200
        body = resp.json()
        assert body["sources"][0]["name"] == "demo"
        assert body["sources"][0]["total_n"] == 105

    def test_estimators_each_method(self, client):
        cases = [
            ({"method": "binomial", "k": 3, "n": 1000}, 0.003),
            ({"method": "augmented", "k": 0, "n": 100}, 1 / 101),
            ({"method": "augmented", "k": 0, "n": 100, "copies": 2},
             2 / 102),
            ({"method": "brenner", "n": 100, "s": 60}, 40 / 101 ** 2),
        ]
        for params, expected in cases:
            resp = client.get("/estimators", params=params)
            assert resp.status_code == 200, params
            assert resp.json()["match_probability"] == pytest.approx(
                expected)
        resp = client.get("/estimators",
                          params={"method": "cggt", "n": 1000, "s": 400,
                                  "d": 50})
        assert resp.json()["match_probability"] == pytest.approx(100 /
                                                                 400000)
        resp = client.get("/estimators",
                          params={"method": "clopper-pearson", "k": 0,
                                  "n": 100, "confidence": 0.99})
        assert abs(resp.json()["match_probability"]
                   - (1 - 0.01 ** 0.01)) < 1e-8

    def test_estimators_errors(self, client):
        assert client.get("/estimators").status_code == 400
        assert client.get("/estimators",
                          params={"method": "nope"}).status_code == 400
        assert client.get("/estimators",
                          params={"method": "brenner",
                                  "n": 100}).status_code == 400
        assert client.get("/estimators",
                          params={"method": "brenner", "n": "ten",
                                  "s": 5}).status_code == 400
        # valid ints, impossible values: a domain error, not a parse error
        assert client.get("/estimators",
                          params={"method": "brenner", "n": 50,
                                  "s": 50}).status_code == 422


class TestByteCompatibility:
    def test_lr_json_matches_cli(self, client, demo_config,
                                 demo_profile_text):
        resp = client.post("/lr", json={"profile": demo_profile_text})
        cli = CliRunner().invoke(main, ["--config", str(demo_config), "lr",
                                        "--profile", demo_profile_text,
                                        "--format", "json"])
        assert cli.stdout.encode() == resp.content + b"\n"

    def test_classify_json_matches_cli(self, client, demo_config,
                                       demo_profile_text):
        resp = client.post("/classify", json={"profile": demo_profile_text})
        cli = CliRunner().invoke(main, ["--config", str(demo_config),
                                        "classify", "--profile",
                                        demo_profile_text,
                                        "--format", "json"])
        assert cli.stdout.encode() == resp.content + b"\n"

    def test_estimate_json_matches_cli(self, client):
        resp = client.get("/estimators",
                          params={"method": "cggt", "n": 61295,
                                  "s": 42614, "d": 3466})
        cli = CliRunner().invoke(main, ["estimate", "--method", "cggt",
                                        "--n", "61295", "--s", "42614",
                                        "--d", "3466", "--format", "json"])
        assert cli.stdout.encode() == resp.content + b"\n"

    def test_repeated_requests_identical_bytes(self, client,
                                               demo_profile_text):
        first = client.post("/lr", json={"profile": demo_profile_text})
        second = client.post("/lr", json={"profile": demo_profile_text})
        assert first.content == second.content


class TestErrorShape:
    def test_error_body_fields(self, client):
        resp = client.post("/classify", json={"profile": "263X"})
        err = resp.json()["error"]
        assert set(err) >= {"code", "message", "exit_code"}
        assert err["exit_code"] == 2

    def test_service_without_sources_config_error(self, demo_profile_text):
        app = create_app(Runtime(AppConfig()))
        client = TestClient(app)
        resp = client.post("/lr", json={"profile": demo_profile_text})
        assert resp.status_code == 422
        assert resp.json()["error"]["code"] == "config_error"
