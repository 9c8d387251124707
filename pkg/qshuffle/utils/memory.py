import logging
import os

import psutil

logger = logging.getLogger(__name__)


def rss_mb() -> float:
    """Resident set size of this process in MB."""
    process = psutil.Process(os.getpid())
    return process.memory_info().rss / (1024 * 1024)


def log_memory_usage(label: str = ""):
    logger.info("memory used%s: %.1f MB", f" after {label}" if label else "", rss_mb())
