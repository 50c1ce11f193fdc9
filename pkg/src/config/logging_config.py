"""
Logging configuration for the synthesis CLI and bench workers
"""

import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path

_CONFIGURED_MARKER = "_ddsynth_handler"


def setup_logging(level: str = "INFO", log_dir: str = "logs") -> None:
    """
    Configure application-wide logging with timestamps.
    Call this once per process, before running a command.

    Args:
        level: Console log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_dir: Directory receiving app.log and errors.log
    """
    root_logger = logging.getLogger()
    if any(getattr(h, _CONFIGURED_MARKER, False) for h in root_logger.handlers):
        return

    Path(log_dir).mkdir(parents=True, exist_ok=True)

    console_formatter = logging.Formatter(
        fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    file_formatter = logging.Formatter(
        fmt="%(asctime)s - %(name)s - %(levelname)s - %(module)s:%(funcName)s:%(lineno)d - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    console_handler = logging.StreamHandler()
    console_handler.setLevel(level.upper())
    console_handler.setFormatter(console_formatter)

    # All records - rotates at 10MB
    file_handler = RotatingFileHandler(
        str(Path(log_dir) / "app.log"), maxBytes=10485760, backupCount=10
    )
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(file_formatter)

    # Errors only - rotates at 10MB
    error_handler = RotatingFileHandler(
        str(Path(log_dir) / "errors.log"),
        maxBytes=10485760,  # 10MB
        backupCount=5,
    )
    error_handler.setLevel(logging.ERROR)
    error_handler.setFormatter(file_formatter)

    for handler in (console_handler, file_handler, error_handler):
        setattr(handler, _CONFIGURED_MARKER, True)
        root_logger.addHandler(handler)
    root_logger.setLevel(logging.DEBUG)

    # Worker plumbing is chatty at INFO
    logging.getLogger("celery").setLevel(logging.WARNING)
    logging.getLogger("kombu").setLevel(logging.WARNING)
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
