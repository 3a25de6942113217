"""Logging for eqra runs.

Log lines carry the run's correlation id and the command or verification
section that emitted them, so interleaved output from threaded
``verify-all`` sections can be told apart. Records go to stderr; stdout is
reserved for command output (text, JSON or certificates).
"""

import contextlib
import contextvars
import logging
import os
import sys
from typing import Iterator, Optional, Tuple

_correlation_id: contextvars.ContextVar[Optional[str]] = contextvars.ContextVar("correlation_id", default=None)
_task_name: contextvars.ContextVar[Optional[str]] = contextvars.ContextVar("task_name", default=None)


def _stacktraces_enabled() -> bool:
    return os.getenv("EQRA_LOG_STACKTRACE", "false").lower() == "true"


class EqraFormatter(logging.Formatter):
    """``time LEVEL module.function:line [run:task] message``."""

    def format(self, record: logging.LogRecord) -> str:
        run_id, task = get_correlation_id()
        context = f"[{run_id}:{task}]" if run_id and task else "[:]"
        where = f"{record.name.rsplit('.', 1)[-1]}.{record.funcName or 'unknown'}:{record.lineno or 0}"
        line = f"{self.formatTime(record, self.datefmt)} {record.levelname} {where} {context} {record.getMessage()}"
        if record.exc_info and _stacktraces_enabled():
            line = f"{line}\n{self.formatException(record.exc_info)}"
        return line


def set_correlation_id(correlation_id: Optional[str], task_name: Optional[str]) -> None:
    """Tag subsequent records in this context with a run id and task."""
    _correlation_id.set(correlation_id)
    _task_name.set(task_name)


def get_correlation_id() -> Tuple[Optional[str], Optional[str]]:
    return _correlation_id.get(), _task_name.get()


@contextlib.contextmanager
def log_section(name: str) -> Iterator[None]:
    """Tag records with ``name`` as task while a verification section runs, keeping the run id."""
    token = _task_name.set(name)
    try:
        yield
    finally:
        _task_name.reset(token)


def _file_handler(path: str, formatter: logging.Formatter) -> logging.Handler:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    handler = logging.FileHandler(path)
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(formatter)
    return handler


def setup_logging(name: str = "eqra", level: Optional[str] = None) -> logging.Logger:
    """Configure the package logger: stderr always, a log file when ``EQRA_LOG_TO_FILE`` is set.

    Args:
        name: Logger name, normally the package root.
        level: Level name overriding ``EQRA_LOG_LEVEL`` (the CLI's ``--log-level``).
            Unknown names fall back to WARNING.

    Returns:
        The configured logger. Calling again replaces its handlers.
    """
    from eqra.settings import config

    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, (level or config.LOG_LEVEL).upper(), logging.WARNING))
    logger.handlers.clear()

    formatter = EqraFormatter()
    console = logging.StreamHandler(sys.stderr)
    console.setLevel(logging.DEBUG)
    console.setFormatter(formatter)
    logger.addHandler(console)

    if config.LOG_TO_FILE:
        try:
            logger.addHandler(_file_handler(config.LOG_FILE_PATH, formatter))
        except OSError as e:
            logger.warning(f"File logging to '{config.LOG_FILE_PATH}' unavailable, using stderr only: {e}")

    return logger
