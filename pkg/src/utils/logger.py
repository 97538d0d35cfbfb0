# Logging configuration
# src/utils/logger.py
import logging
import logging.config

from config.settings import LOGGING_CONFIG

logger = logging.getLogger(__name__)

_configured = False


def setup_logging(level=None):
    """
    Apply the toolkit logging configuration once per process.

    Args:
        level (str, optional): Overrides the root level from LOGGING_CONFIG.
    """
    global _configured
    if not _configured:
        logging.config.dictConfig(LOGGING_CONFIG)
        _configured = True
    if level is not None:
        logging.getLogger().setLevel(level.upper())
    logger.debug("Logging configured")
