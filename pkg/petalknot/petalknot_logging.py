"""Structured logging for petalknot."""

import json
import logging
import logging.handlers
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .container import get_container, singleton
from .interfaces import Logger

DEFAULT_LEVEL = "WARNING"


def _level(name: str) -> int:
    value = getattr(logging, name.upper(), None)
    if not isinstance(value, int):
        raise ValueError(f"Unknown log level: {name}")
    return value


class StructuredLogger:
    """Structured logger with context support."""

    def __init__(
        self,
        name: str,
        level: str = DEFAULT_LEVEL,
        log_file: Optional[Path] = None,
        structured: bool = True,
    ) -> None:
        self.name = name
        self.structured = structured
        self.context: Dict[str, Any] = {}

        self.logger = logging.getLogger(name)
        self.logger.setLevel(_level(level))
        self.logger.propagate = False
        self.logger.handlers.clear()

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(_level(level))
        if structured:
            console_handler.setFormatter(JsonFormatter())
        else:
            console_handler.setFormatter(
                logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
            )
        self.logger.addHandler(console_handler)

        if log_file:
            log_file.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.handlers.RotatingFileHandler(
                log_file, maxBytes=10 * 1024 * 1024, backupCount=5
            )
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(JsonFormatter())
            self.logger.addHandler(file_handler)

    def with_context(self, **kwargs: Any) -> "StructuredLogger":
        """Create logger with additional context."""
        child = StructuredLogger.__new__(StructuredLogger)
        child.name = self.name
        child.structured = self.structured
        child.logger = self.logger
        child.context = {**self.context, **kwargs}
        return child

    def debug(self, message: str, **kwargs: Any) -> None:
        self._log(logging.DEBUG, message, **kwargs)

    def info(self, message: str, **kwargs: Any) -> None:
        self._log(logging.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        self._log(logging.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs: Any) -> None:
        self._log(logging.ERROR, message, **kwargs)

    def _log(self, level: int, message: str, **kwargs: Any) -> None:
        if not self.logger.isEnabledFor(level):
            return
        extra = {
            "structured_data": {
                **self.context,
                **kwargs,
                "logger_name": self.name,
            }
        }
        self.logger.log(level, message, extra=extra, stacklevel=3)


class JsonFormatter(logging.Formatter):
    """One JSON object per record."""

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }
        if hasattr(record, "structured_data"):
            log_data.update(record.structured_data)
        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)
        return json.dumps(log_data, default=str)


def _log_file_from_env() -> Optional[Path]:
    if os.environ.get("PETALKNOT_LOG_FILE"):
        return Path(os.environ["PETALKNOT_LOG_FILE"])
    if os.environ.get("PETALKNOT_LOG_DIR"):
        return Path(os.environ["PETALKNOT_LOG_DIR"]) / "petalknot.log"
    return None


@singleton(Logger)
class DefaultLogger(StructuredLogger):
    """Package logger configured from PETALKNOT_LOG_* variables."""

    def __init__(self) -> None:
        super().__init__(
            name="petalknot",
            level=os.environ.get("PETALKNOT_LOG_LEVEL", DEFAULT_LEVEL),
            log_file=_log_file_from_env(),
            structured=os.environ.get("PETALKNOT_LOG_FORMAT", "structured") == "structured",
        )


class OperationLogger:
    """Times an operation and logs its start, completion or failure."""

    def __init__(self, logger: Logger, operation: str) -> None:
        self.logger = logger
        self.operation = operation
        self.start_time = datetime.now(timezone.utc)
        self.context: Dict[str, Any] = {"operation": operation}

    def __enter__(self) -> "OperationLogger":
        self.logger.debug(f"Starting {self.operation}", **self.context)
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        duration = self.elapsed
        if exc_type:
            self.logger.error(
                f"Operation {self.operation} failed after {duration:.2f}s",
                duration=duration,
                error=str(exc_val),
                **self.context,
            )
        else:
            self.logger.info(
                f"Operation {self.operation} completed in {duration:.2f}s",
                duration=duration,
                **self.context,
            )

    @property
    def elapsed(self) -> float:
        return (datetime.now(timezone.utc) - self.start_time).total_seconds()

    def add_context(self, **kwargs: Any) -> None:
        self.context.update(kwargs)

    def log_progress(self, message: str, **kwargs: Any) -> None:
        self.logger.debug(
            f"{self.operation}: {message}", elapsed=self.elapsed, **self.context, **kwargs
        )


def get_logger(name: Optional[str] = None) -> Logger:
    """Named module logger, or the container's package logger when no name is given."""
    if name:
        return StructuredLogger(
            name,
            os.environ.get("PETALKNOT_LOG_LEVEL", DEFAULT_LEVEL),
            structured=os.environ.get("PETALKNOT_LOG_FORMAT", "structured") == "structured",
        )
    from .container import inject

    return inject(Logger)


def operation(name: str, logger: Optional[Logger] = None) -> OperationLogger:
    if logger is None:
        logger = get_logger()
    return OperationLogger(logger, name)


def configure_logging(
    level: str = DEFAULT_LEVEL, log_file: Optional[Union[str, Path]] = None, structured: bool = True
) -> None:
    """Set the PETALKNOT_LOG_* environment and re-level loggers that already exist."""
    _level(level)
    os.environ["PETALKNOT_LOG_LEVEL"] = level.upper()
    if log_file:
        os.environ["PETALKNOT_LOG_FILE"] = str(log_file)
    os.environ["PETALKNOT_LOG_FORMAT"] = "structured" if structured else "simple"

    for name in list(logging.root.manager.loggerDict):
        if name == "petalknot" or name.startswith("petalknot."):
            existing = logging.getLogger(name)
            existing.setLevel(_level(level))
            for handler in existing.handlers:
                if not isinstance(handler, logging.handlers.RotatingFileHandler):
                    handler.setLevel(_level(level))

    container = get_container()
    if log_file and container.is_registered(Logger):
        container.register_lazy_singleton(Logger, DefaultLogger)
