"""Unit tests for eqra.utils.logging_config module."""

import logging
import os
import sys
from unittest.mock import patch

import pytest

from eqra.utils.logging_config import EqraFormatter, get_correlation_id, log_section, set_correlation_id, setup_logging


def _record(name="eqra.relations.closure", level=logging.INFO, exc_info=None):
    record = logging.LogRecord(
        name=name, level=level, pathname="closure.py", lineno=42, msg="3 atoms", args=(), exc_info=exc_info
    )
    record.funcName = "ra_closure"
    return record


@pytest.fixture(autouse=True)
def clear_context():
    set_correlation_id(None, None)
    yield
    set_correlation_id(None, None)


class TestEqraFormatter:
    """Test the log line layout."""

    def test_basic_line(self):
        """Level, module.function:line and message."""
        formatted = EqraFormatter().format(_record())
        assert "INFO closure.ra_closure:42 [:] 3 atoms" in formatted

    def test_correlation_id(self):
        """The run id and command are bracketed."""
        set_correlation_id("abc12345", "verify-all")
        assert "[abc12345:verify-all]" in EqraFormatter().format(_record())

    def _exc_info(self):
        try:
            raise ValueError("bad table")
        except ValueError:
            return sys.exc_info()

    def test_stacktrace_hidden_by_default(self):
        """Tracebacks need EQRA_LOG_STACKTRACE."""
        with patch.dict(os.environ, {"EQRA_LOG_STACKTRACE": "false"}):
            formatted = EqraFormatter().format(_record(level=logging.ERROR, exc_info=self._exc_info()))
        assert "Traceback" not in formatted

    def test_stacktrace_shown(self):
        """Tracebacks are appended on request."""
        with patch.dict(os.environ, {"EQRA_LOG_STACKTRACE": "true"}):
            formatted = EqraFormatter().format(_record(level=logging.ERROR, exc_info=self._exc_info()))
        assert "Traceback" in formatted
        assert "ValueError: bad table" in formatted


class TestCorrelationContext:
    """Test the context variables."""

    def test_round_trip(self):
        """What is set is read back."""
        set_correlation_id("1234abcd", "closure")
        assert get_correlation_id() == ("1234abcd", "closure")

    def test_unset(self):
        """Nothing set reads as None."""
        assert get_correlation_id() == (None, None)

    def test_log_section_restores_task(self):
        """A section renames the task only while it runs."""
        set_correlation_id("1234abcd", "verify-all")
        with log_section("lemma.p5"):
            assert get_correlation_id() == ("1234abcd", "lemma.p5")
        assert get_correlation_id() == ("1234abcd", "verify-all")

    def test_log_section_on_error(self):
        """The task is restored when the section raises."""
        set_correlation_id("1234abcd", "verify-all")
        with pytest.raises(RuntimeError):
            with log_section("con.p3"):
                raise RuntimeError("boom")
        assert get_correlation_id()[1] == "verify-all"


class TestSetupLogging:
    """Test logger configuration."""

    def test_console_handler_on_stderr(self):
        """One stderr handler with the custom formatter."""
        logger = setup_logging("eqra.test_console", "INFO")
        assert logger.level == logging.INFO
        assert len(logger.handlers) == 1
        handler = logger.handlers[0]
        assert handler.stream is sys.stderr
        assert isinstance(handler.formatter, EqraFormatter)

    def test_repeated_setup_does_not_stack(self):
        """Handlers are replaced, not added."""
        setup_logging("eqra.test_repeat")
        logger = setup_logging("eqra.test_repeat")
        assert len(logger.handlers) == 1

    def test_level_from_settings(self):
        """Without an explicit level the configured one applies."""
        with patch("eqra.settings.config.LOG_LEVEL", "DEBUG"):
            logger = setup_logging("eqra.test_level")
        assert logger.level == logging.DEBUG

    def test_unknown_level_falls_back(self):
        """Unknown names mean WARNING."""
        assert setup_logging("eqra.test_unknown", "chatty").level == logging.WARNING

    def test_file_handler(self, temp_directory):
        """File logging writes under the configured path."""
        path = os.path.join(temp_directory, "logs", "eqra.log")
        with patch("eqra.settings.config.LOG_TO_FILE", True), patch("eqra.settings.config.LOG_FILE_PATH", path):
            logger = setup_logging("eqra.test_file", "INFO")
        try:
            assert len(logger.handlers) == 2
            assert isinstance(logger.handlers[1], logging.FileHandler)
            assert os.path.isdir(os.path.dirname(path))
        finally:
            for handler in logger.handlers:
                handler.close()
            logger.handlers.clear()
