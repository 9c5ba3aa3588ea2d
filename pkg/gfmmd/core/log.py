import logging
from typing import Optional

from gfmmd.core.config import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """
    Install a single stream handler on the package logger

    Args:
        level: Logging level name, defaults to ``settings.log_level``
               (``DEBUG`` when ``settings.debug`` is set)

    Returns:
        The configured ``gfmmd`` logger
    """
    if level is None:
        level = "DEBUG" if settings.debug else settings.log_level

    logger = logging.getLogger("gfmmd")
    logger.setLevel(level.upper())

    if not any(getattr(h, "_gfmmd_handler", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._gfmmd_handler = True  # type: ignore[attr-defined]
        logger.addHandler(handler)

    return logger
