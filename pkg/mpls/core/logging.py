"""
Logging setup for the CLI and the HTTP app.
"""

import logging

_FORMAT = "%(asctime)s level=%(levelname)s logger=%(name)s %(message)s"


def configure_logging(level: str = "INFO") -> None:
    """Install a single stream handler on the package logger.

    Calling it again replaces the handler, so it always writes to the
    current sys.stderr.
    """
    logger = logging.getLogger("mpls")
    logger.setLevel(level.upper())
    for stale in [h for h in logger.handlers if getattr(h, "_mpls", False)]:
        logger.removeHandler(stale)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(_FORMAT))
    handler._mpls = True  # type: ignore[attr-defined]
    logger.addHandler(handler)
