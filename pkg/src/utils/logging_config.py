"""
Logging configuration for RMRPA system.

Colored console output plus an optional rotating log file. Simulation worker
processes get a console-only setup so that several processes never write to
the same rotating file.
"""

import os
import logging
import logging.handlers
from typing import Dict, Any, Optional

import colorlog

CONSOLE_FORMAT = '%(log_color)s%(asctime)s - %(name)s - %(levelname)s - %(message)s'
FILE_FORMAT = '%(asctime)s - %(processName)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

LOG_COLORS = {
    'DEBUG': 'cyan',
    'INFO': 'green',
    'WARNING': 'yellow',
    'ERROR': 'red',
    'CRITICAL': 'red,bg_white',
}


def _console_handler() -> logging.Handler:
    handler = colorlog.StreamHandler()
    handler.setFormatter(colorlog.ColoredFormatter(CONSOLE_FORMAT, datefmt=DATE_FORMAT, log_colors=LOG_COLORS))
    return handler


def _file_handler(log_file: str, max_bytes: int, backup_count: int) -> logging.Handler:
    log_dir = os.path.dirname(log_file)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        log_file, maxBytes=max_bytes, backupCount=backup_count, encoding='utf-8'
    )
    handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt=DATE_FORMAT))
    return handler


def setup_logging(config: Dict[str, Any]) -> None:
    """
    Set up logging from the ``logging`` section of the configuration.

    Args:
        config: Configuration dictionary; ``logging.file`` may be empty to
            disable the log file
    """
    log_config = config.get('logging', {}) or {}
    log_level = str(log_config.get('level', 'INFO')).upper()
    log_file: Optional[str] = log_config.get('file', 'logs/rmrpa.log')
    max_bytes = int(log_config.get('max_file_size', 10)) * 1024 * 1024
    backup_count = int(log_config.get('backup_count', 5))

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, log_level))
    root_logger.handlers.clear()
    root_logger.addHandler(_console_handler())
    if log_file:
        root_logger.addHandler(_file_handler(log_file, max_bytes, backup_count))

    # Projection thread pools are chatty at DEBUG
    logging.getLogger('concurrent.futures').setLevel(logging.WARNING)

    logging.info(f"Logging configured - Level: {log_level}, File: {log_file or 'disabled'}")


def configure_worker_logging(level: int) -> None:
    """Pool initializer: console logging at the parent's level."""
    root_logger = logging.getLogger()
    root_logger.handlers.clear()
    root_logger.setLevel(level)
    root_logger.addHandler(_console_handler())


def get_logger(name: str) -> logging.Logger:
    """Logger for a module (typically ``__name__``)."""
    return logging.getLogger(name)


class LoggerMixin:
    """Gives a class a ``logger`` named after the class."""

    @property
    def logger(self) -> logging.Logger:
        return logging.getLogger(self.__class__.__name__)
