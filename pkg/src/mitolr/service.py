"""HTTP facade over classification, LR evaluation, and the estimators.

Responses use the same canonical JSON encoding as the CLI, so a result
fetched over HTTP is byte-identical to the CLI's --format json output.
Errors carry machine-readable bodies:

    {"error": {"code": "...", "message": "...", "exit_code": 2}}

mapping the CLI's exit-code classes onto HTTP statuses (syntax 400,
domain 422, missing resource 404).
"""
from __future__ import annotations

import json
import threading
import time
import uuid

from fastapi import FastAPI, Request, Response

from ._version import __version__
from .classify import classify
from .config import Runtime
from .engine import (MIN_OF_RANK1_RANK2, RANK_POLICIES, LrRequest, evaluate)
from .errors import (ConfigError, DomainError, MitolrError, NotFoundError,
                     ParseError)
from .estimators import (augmented_estimate, binomial_estimate,
                         brenner_estimate, cggt_estimate,
                         clopper_pearson_upper)
from .freqdb import TlhgDistribution
from .jsonio import canonical_json
from .variants import parse_profile

DEFAULT_SESSION_TTL = 3600.0


class SessionStore:
    """In-memory session table with best-effort idle expiry."""

    def __init__(self, ttl: float = DEFAULT_SESSION_TTL, clock=time.monotonic):
        self._ttl = ttl
        self._clock = clock
        self._lock = threading.Lock()
        self._items: dict[str, dict] = {}

    def _evict(self) -> None:
        now = self._clock()
        stale = [sid for sid, item in self._items.items()
                 if now - item["last_used"] > self._ttl]
        for sid in stale:
            del self._items[sid]

    def put(self, distribution: TlhgDistribution) -> str:
        sid = uuid.uuid4().hex
        with self._lock:
            self._evict()
            now = self._clock()
            self._items[sid] = {"distribution": distribution,
                                "created": now, "last_used": now}
        return sid

    def get(self, sid: str) -> TlhgDistribution:
        with self._lock:
            self._evict()
            item = self._items.get(sid)
            if item is None:
                raise NotFoundError(f"unknown or expired session {sid!r}")
            item["last_used"] = self._clock()
            return item["distribution"]


def _json_response(obj, status_code: int = 200) -> Response:
    return Response(content=canonical_json(obj), status_code=status_code,
                    media_type="application/json")


async def _body(request: Request) -> dict:
    try:
        payload = json.loads(await request.body() or b"{}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"request body is not valid JSON: {exc}")
    if not isinstance(payload, dict):
        raise ParseError("request body must be a JSON object")
    return payload


def _str_field(payload: dict, key: str, default=None, required=False):
    if key not in payload:
        if required:
            raise ParseError(f"missing required field {key!r}")
        return default
    value = payload[key]
    if value is None and not required:
        return default
    if not isinstance(value, str):
        raise ParseError(f"field {key!r} must be a string")
    return value


def _bool_field(payload: dict, key: str, default: bool) -> bool:
    value = payload.get(key, default)
    if not isinstance(value, bool):
        raise ParseError(f"field {key!r} must be a boolean")
    return value


def create_app(runtime: Runtime, session_ttl: float = DEFAULT_SESSION_TTL,
               clock=time.monotonic) -> FastAPI:
    app = FastAPI(title="mitolr service", version=__version__)
    sessions = SessionStore(ttl=session_ttl, clock=clock)

    @app.exception_handler(MitolrError)
    async def mitolr_error_handler(request: Request, exc: MitolrError):
        status = 422 if isinstance(exc, ConfigError) else exc.http_status
        return _json_response({"error": exc.to_dict()}, status_code=status)

    @app.post("/classify")
    async def post_classify(request: Request) -> Response:
        payload = await _body(request)
        profile = parse_profile(
            _str_field(payload, "profile", required=True),
            _str_field(payload, "coverage"), runtime.reference)
        mode = _str_field(payload, "mode",
                          default=runtime.config.classifier_mode)
        pred = classify(profile, runtime.table, mode, runtime.config.lam)
        return _json_response(pred.to_dict())

    @app.post("/lr")
    async def post_lr(request: Request) -> Response:
        payload = await _body(request)
        profile = parse_profile(
            _str_field(payload, "profile", required=True),
            _str_field(payload, "coverage"), runtime.reference)
        mode = _str_field(payload, "mode",
                          default=runtime.config.classifier_mode)
        rank_policy = _str_field(payload, "rank_policy",
                                 default=MIN_OF_RANK1_RANK2)
        if rank_policy not in RANK_POLICIES:
            raise ParseError(f"unknown rank_policy {rank_policy!r}")
        pool = _bool_field(payload, "pool", False)
        allow_fallback = _bool_field(payload, "allow_fallback", True)
        tlhg_override = _str_field(payload, "tlhg_override")
        names = payload.get("sources")
        if names is not None and (not isinstance(names, list) or
                                  any(not isinstance(x, str) for x in names)):
            raise ParseError("field 'sources' must be a list of strings")
        if not runtime.sources:
            raise ConfigError("service has no snv_sources configured")
        sources = runtime.source_list(tuple(names) if names else None)
        sid = _str_field(payload, "session")
        if sid is not None:
            dist = sessions.get(sid)
        elif runtime.distribution is not None:
            dist = runtime.distribution
        else:
            raise ConfigError("no TLHG distribution configured")
        groups = [tuple(sources)] if pool else [(db,) for db in sources]
        reports = []
        for group in groups:
            req = LrRequest(
                profile=profile, snv_sources=group, tlhg_dist=dist,
                pool=pool, classifier_mode=mode, rank_policy=rank_policy,
                tlhg_override=tlhg_override, allow_fallback=allow_fallback,
                lam=runtime.config.lam, table=runtime.table)
            reports.append(evaluate(req))
        body = reports[0].to_dict() if len(reports) == 1 \
            else [r.to_dict() for r in reports]
        return _json_response(body)

    @app.post("/tlhg-distribution")
    async def post_distribution(request: Request) -> Response:
        payload = await _body(request)
        weights = payload.get("weights")
        if not isinstance(weights, dict) or not weights:
            raise ParseError("field 'weights' must be a non-empty object")
        for key, value in weights.items():
            if isinstance(value, bool) or \
                    not isinstance(value, (int, float)):
                raise DomainError(f"weight for {key!r} is not a number")
        name = _str_field(payload, "name", default="custom")
        dist = TlhgDistribution.from_weights(weights, source_name=name)
        sid = sessions.put(dist)
        return _json_response({"session": sid,
                               "distribution": dist.to_dict()})

    @app.get("/tlhg-distribution/{sid}")
    async def get_distribution(sid: str) -> Response:
        return _json_response(sessions.get(sid).to_dict())

    @app.get("/sources")
    async def get_sources() -> Response:
        items = []
        for name, db in sorted(runtime.sources.items()):
            items.append({
                "name": name,
                "total_n": db.total_n,
                "tlhg_count": len(db.tlhg_sizes),
                "record_count": len(db),
            })
        return _json_response({"software_version": __version__,
                               "sources": items})

    @app.get("/estimators")
    async def get_estimators(request: Request) -> Response:
        params = request.query_params
        method = params.get("method")
        if method is None:
            raise ParseError("missing query parameter 'method'")

        def intp(key):
            raw = params.get(key)
            if raw is None:
                raise ParseError(f"--method {method} requires "
                                 f"query parameter {key!r}")
            try:
                return int(raw)
            except ValueError:
                raise ParseError(f"query parameter {key!r} must be an "
                                 f"integer, got {raw!r}")

        if method == "binomial":
            result = binomial_estimate(intp("k"), intp("n"))
        elif method == "augmented":
            copies = int(params.get("copies", "1"))
            result = augmented_estimate(intp("k"), intp("n"), copies)
        elif method == "clopper-pearson":
            conf_raw = params.get("confidence")
            try:
                confidence = (runtime.config.confidence if conf_raw is None
                              else float(conf_raw))
            except ValueError:
                raise ParseError(f"query parameter 'confidence' must be a "
                                 f"number, got {conf_raw!r}")
            result = clopper_pearson_upper(intp("k"), intp("n"), confidence)
        elif method == "brenner":
            result = brenner_estimate(intp("n"), intp("s"))
        elif method == "cggt":
            result = cggt_estimate(intp("n"), intp("s"), intp("d"))
        else:
            raise ParseError(f"unknown estimator method {method!r}")
        return _json_response(result.to_dict())

    return app
