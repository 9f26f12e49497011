"""Exception hierarchy with machine-readable codes.

Every error carries a short stable ``code`` string plus the CLI exit code
class it belongs to (2 = domain error, 3 = configuration error). The HTTP
layer maps the same objects onto status codes, so the CLI and the service
report identical error identities.
"""
from __future__ import annotations


class MitolrError(Exception):
    """Base class for all package errors."""

    code = "error"
    exit_code = 2
    http_status = 422

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        body = {"code": self.code, "message": self.message,
                "exit_code": self.exit_code}
        if self.details:
            body.update(self.details)
        return body


class ParseError(MitolrError):
    """Malformed input text. Names the offending token when there is one."""

    code = "parse_error"
    exit_code = 2
    http_status = 400

    def __init__(self, message: str, token: str | None = None, **details):
        if token is not None:
            details["token"] = token
        super().__init__(message, **details)
        self.token = token


class DomainError(MitolrError):
    """Input is well-formed but the requested computation is undefined."""

    code = "domain_error"
    exit_code = 2
    http_status = 422


class UnclassifiableError(DomainError):
    code = "unclassifiable"


class UnknownLabelError(DomainError):
    code = "unknown_label"


class UnknownTlhgError(DomainError):
    code = "unknown_tlhg"


class NotFoundError(DomainError):
    code = "not_found"
    http_status = 404


class ConfigError(MitolrError):
    """Bad or missing configuration, data files, or schemas."""

    code = "config_error"
    exit_code = 3
    http_status = 500
