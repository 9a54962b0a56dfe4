import logging
import os
import sys

LEVEL_ENV = "CHARGING_LOG_LEVEL"


def setup_logger(name="ChargingLogger"):
    logger = logging.getLogger(name)
    if not logger.handlers:
        level = os.getenv(LEVEL_ENV, "WARNING").upper()
        logger.setLevel(getattr(logging, level, logging.WARNING))
        # stdout is reserved for command summaries
        handler = logging.StreamHandler(sys.stderr)
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    return logger


def set_verbosity(verbose: int, name="ChargingLogger") -> None:
    """Raise the shared logger level from the CLI -v count."""
    logger = setup_logger(name)
    if verbose >= 2:
        logger.setLevel(logging.DEBUG)
    elif verbose == 1:
        logger.setLevel(logging.INFO)
