import hashlib
import json
from typing import Any

def compute_payload_hash(payload: Any) -> str:
    """SHA256 of the canonical JSON form (sorted keys, no whitespace)"""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
