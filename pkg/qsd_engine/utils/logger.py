"""
Process-wide logging setup: timestamped lines on stderr, optionally mirrored
to a log file. stdout is left free for reports.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from .settings import get_settings

LOG_FORMAT = "[%(asctime)s] %(levelname)s %(name)s: %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_console: Optional[logging.StreamHandler] = None


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> logging.Logger:
    """Configure the qsd_engine logger once; later calls only adjust the level"""
    global _console
    config = get_settings()
    level = (level or config.log_level).upper()
    log_file = log_file or config.log_file

    logger = logging.getLogger("qsd_engine")
    logger.setLevel(level)

    if _console is None:
        formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

        _console = logging.StreamHandler(sys.stderr)
        _console.setFormatter(formatter)
        logger.addHandler(_console)

        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_file, mode="a")
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

    else:
        # rebind to the current sys.stderr
        _console.stream = sys.stderr

    return logger
