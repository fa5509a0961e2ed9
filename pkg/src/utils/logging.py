"""Structured logging for the sftalgebra library, command line and server.

Everything logs to stderr so that stdout stays clean for reports (``--json``
output in particular). Configuration comes from the environment:

- ``LOG_LEVEL``: DEBUG, INFO, WARNING, ERROR, CRITICAL (default INFO)
- ``LOG_TO_FILE`` / ``LOG_FILE_PATH``: also write to a file
- ``LOG_TO_SYSLOG`` / ``LOG_SYSLOG_FACILITY``: also send to syslog
- ``LOG_FORMAT``: ``human`` (default) or ``json``
- ``LOG_CORRELATION_IDS``: attach request correlation ids (default true)

Library modules use ``logger = get_logger(__name__)``; tools receive a logger
named ``<module>.<Class>`` from ``BaseTool``.
"""

from __future__ import annotations

import json
import logging
import logging.handlers
import os
import sys
from dataclasses import dataclass
from datetime import datetime
from typing import Optional

HUMAN_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"
DATE_FORMAT = "%Y-%m-%dT%H:%M:%S"

_RECORD_FIELDS = frozenset(
    {
        "name",
        "msg",
        "args",
        "levelname",
        "levelno",
        "pathname",
        "filename",
        "module",
        "lineno",
        "funcName",
        "created",
        "msecs",
        "relativeCreated",
        "thread",
        "threadName",
        "processName",
        "process",
        "taskName",
        "exc_info",
        "exc_text",
        "stack_info",
        "correlation_id",
    }
)


@dataclass
class LogConfig:
    """Logging settings, normally read from the environment."""

    level: str = "INFO"
    console: bool = True
    file_path: Optional[str] = None
    syslog: bool = False
    syslog_facility: str = "local0"
    format_type: str = "human"  # "human" or "json"
    correlation_ids: bool = True

    @classmethod
    def from_env(cls) -> "LogConfig":
        level = os.getenv("LOG_LEVEL", "INFO").upper()
        if level == "WARN":
            level = "WARNING"
        return cls(
            level=level,
            console=True,
            file_path=(
                os.getenv("LOG_FILE_PATH", "./sftalgebra.log")
                if _env_bool("LOG_TO_FILE")
                else None
            ),
            syslog=_env_bool("LOG_TO_SYSLOG", False),
            syslog_facility=os.getenv("LOG_SYSLOG_FACILITY", "local0"),
            format_type=os.getenv("LOG_FORMAT", "human").lower(),
            correlation_ids=_env_bool("LOG_CORRELATION_IDS", True),
        )


def _env_bool(key: str, default: bool = False) -> bool:
    """true/false, 1/0, yes/no (case insensitive); anything else is ``default``."""
    value = os.getenv(key, "").lower()
    if value in ("true", "1", "yes"):
        return True
    elif value in ("false", "0", "no"):
        return False
    return default


class StructuredFormatter(logging.Formatter):
    """One JSON object per record, extra fields included."""

    def format(self, record: logging.LogRecord) -> str:
        log_entry = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat() + "Z",
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        if hasattr(record, "correlation_id"):
            log_entry["correlation_id"] = record.correlation_id
        for key, value in record.__dict__.items():
            if key not in _RECORD_FIELDS and key not in log_entry:
                log_entry[key] = value
        if record.exc_info:
            log_entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(log_entry, default=str)


def _get_syslog_facility(facility_name: str) -> int:
    name = facility_name.lower()
    facility = logging.handlers.SysLogHandler.facility_names.get(name)
    if facility is None:
        raise ValueError(f"Unknown syslog facility: {facility_name}")
    return int(facility)


def _formatter(config: LogConfig) -> logging.Formatter:
    if config.format_type == "json":
        return StructuredFormatter()
    return logging.Formatter(fmt=HUMAN_FORMAT, datefmt=DATE_FORMAT)


def configure_logging(config: Optional[LogConfig] = None) -> None:
    """Install handlers on the root logger; called once at startup."""
    if config is None:
        config = LogConfig.from_env()

    root_logger = logging.getLogger()
    root_logger.handlers.clear()
    root_logger.setLevel(getattr(logging, config.level, logging.INFO))
    formatter = _formatter(config)

    if config.console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        root_logger.addHandler(console_handler)

    if config.file_path:
        try:
            directory = os.path.dirname(config.file_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            file_handler = logging.FileHandler(config.file_path)
            file_handler.setFormatter(formatter)
            root_logger.addHandler(file_handler)
        except OSError as e:
            print(
                f"Warning: Could not setup file logging to {config.file_path}: {e}",
                file=sys.stderr,
            )

    if config.syslog:
        try:
            syslog_handler = logging.handlers.SysLogHandler(
                address="/dev/log" if sys.platform != "darwin" else "/var/run/syslog",
                facility=_get_syslog_facility(config.syslog_facility),
            )
            syslog_handler.setFormatter(formatter)
            root_logger.addHandler(syslog_handler)
        except (OSError, ValueError) as e:
            print(f"Warning: Could not setup syslog logging: {e}", file=sys.stderr)


def get_logger(name: str, config: Optional[LogConfig] = None) -> logging.Logger:
    """A logger that follows the global configuration once it exists.

    Before ``configure_logging`` has run, the logger gets its own stderr
    handler built from ``config`` (or the environment).
    """
    logger = logging.getLogger(name)
    if logging.getLogger().handlers or logger.handlers:
        return logger

    if config is None:
        config = LogConfig.from_env()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_formatter(config))
    logger.addHandler(handler)
    logger.setLevel(getattr(logging, config.level, logging.INFO))
    return logger


__all__ = ["get_logger", "configure_logging", "LogConfig", "StructuredFormatter"]
