"""One JSON encoding shared by the CLI and the HTTP service.

Key order and separators are fixed so that the same result object always
serializes to the same bytes, no matter which interface produced it.
"""
from __future__ import annotations

import json


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True, allow_nan=False)
