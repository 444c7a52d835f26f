"""
Unit tests for the shared logger configuration.
"""

import logging
import sys

import pytest

from stqft.config.logger_config import get_logger, set_log_level

pytestmark = pytest.mark.unit


class TestGetLogger:
    def test_loggers_are_cached(self):
        assert get_logger("stqft.tests.cached") is get_logger("stqft.tests.cached")

    def test_single_stderr_handler(self):
        logger = get_logger("stqft.tests.handler")
        assert len(logger.handlers) == 1
        assert logger.handlers[0].stream is sys.stderr
        assert logger.propagate is False


class TestSetLogLevel:
    def test_applies_to_existing_and_new_loggers(self):
        existing = get_logger("stqft.tests.existing")
        set_log_level("error")
        try:
            assert existing.level == logging.ERROR
            assert get_logger("stqft.tests.created_later").level == logging.ERROR
        finally:
            set_log_level("WARNING")

    def test_numeric_level(self):
        logger = get_logger("stqft.tests.numeric")
        set_log_level(logging.INFO)
        try:
            assert logger.level == logging.INFO
        finally:
            set_log_level(logging.WARNING)

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            set_log_level("LOUD")
