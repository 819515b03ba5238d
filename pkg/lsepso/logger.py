import logging
import sys
from typing import Optional

from lsepso.config import settings


def setup_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """
    Configure and return a logger instance.
    """
    logger = logging.getLogger(name)
    level = (level or settings.LOG_LEVEL).upper()
    logger.setLevel(level)

    # Prevent adding multiple handlers if setup is called multiple times
    if logger.handlers:
        return logger

    # Console Handler
    handler = logging.StreamHandler(sys.stdout)
    handler.setLevel(level)

    # Formatter
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    handler.setFormatter(formatter)

    logger.addHandler(handler)

    return logger
