"""
Hashing utilities: payload digests for run manifests and seed splitting.
"""

import hashlib
import json
from typing import Any, Dict

import numpy as np


def hash_payload(payload: Dict[str, Any]) -> str:
    """
    Generate SHA-256 hash of a payload.

    Args:
        payload: Dictionary to hash

    Returns:
        Hexadecimal SHA-256 hash string
    """
    # Sort keys for consistent hashing
    payload_str = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(payload_str.encode()).hexdigest()


def derive_seed(seed: int, label: str, index: int = 0) -> int:
    """Derive a 64-bit stream seed from the run seed, a stream label and an index."""
    digest = hash_payload({"seed": int(seed), "label": label, "index": int(index)})
    return int(digest[:16], 16)


def stream_rng(seed: int, label: str, index: int = 0) -> np.random.Generator:
    """Independent generator for one labelled stream (e.g. one trial)."""
    return np.random.default_rng(derive_seed(seed, label, index))
