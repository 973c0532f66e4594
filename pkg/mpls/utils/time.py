"""
Time utility functions.
"""

from datetime import datetime, timezone


def utc_now() -> datetime:
    """Get current UTC datetime."""
    return datetime.now(timezone.utc)


def utc_stamp() -> str:
    """ISO-8601 UTC timestamp for manifests."""
    return utc_now().isoformat(timespec="seconds")
