"""
Unit tests for the error handler and the exit-code mapping.
"""

import pytest

from stqft.core.error_handler import (
    AllZeroFrameException,
    ConfigurationException,
    ErrorCategory,
    ErrorHandler,
    ErrorSeverity,
    GateListFormatException,
    InvalidQubitIndexException,
    MalformedFileException,
    OverlapTooLargeException,
    StqftException,
    ZeroProbabilityOutcomeException,
)

pytestmark = pytest.mark.unit


class TestExceptions:
    def test_frame_index_prefixes_message(self):
        error = ZeroProbabilityOutcomeException(
            "filter annihilated the frame", {"frame_index": 4}
        )
        assert str(error) == "frame 4: filter annihilated the frame"
        assert error.context["frame_index"] == 4

    def test_plain_message(self):
        assert str(StqftException("boom")) == "boom"

    def test_categories_follow_hierarchy(self):
        assert MalformedFileException("x").category == ErrorCategory.FILE_IO
        assert InvalidQubitIndexException("x").category == ErrorCategory.SIMULATION
        assert OverlapTooLargeException("x").category == ErrorCategory.RECONSTRUCTION
        assert GateListFormatException("x").category == ErrorCategory.FILE_IO

    def test_zero_frames_are_low_severity(self):
        assert AllZeroFrameException("x").severity == ErrorSeverity.LOW


class TestExitCodes:
    @pytest.mark.parametrize(
        ("error", "code"),
        [
            (ConfigurationException("bad hop"), 1),
            (MalformedFileException("bad csv"), 2),
            (FileNotFoundError("absent.csv"), 2),
            (PermissionError("locked"), 2),
            (GateListFormatException("bad gate"), 2),
            (InvalidQubitIndexException("qubit 9"), 3),
            (RuntimeError("unexpected"), 3),
        ],
    )
    def test_mapping(self, quiet_handler, error, code):
        assert quiet_handler.exit_code_for(error) == code

    def test_unknown_errors_are_uncategorized(self, quiet_handler):
        assert quiet_handler.categorize(KeyError("x")) == ErrorCategory.UNKNOWN


class TestHandling:
    def test_unrecovered_high_severity_is_fatal(self, quiet_handler):
        assert not quiet_handler.handle_error(ConfigurationException("bad"))
        assert quiet_handler.error_stats["total_errors"] == 1
        assert quiet_handler.error_stats["fatal_errors"] == 1
        assert quiet_handler.error_counts == {"configuration.ConfigurationException": 1}

    def test_recovery_handler(self, quiet_handler):
        seen = []

        def annihilated_frame(error):
            seen.append(error.context["frame_index"])
            return True

        quiet_handler.register_recovery_handler(
            ZeroProbabilityOutcomeException, annihilated_frame
        )
        error = ZeroProbabilityOutcomeException("empty branch", {"frame_index": 2})
        assert quiet_handler.handle_error(error, {"block": True})

        record = quiet_handler.error_history[-1]
        assert record.recovered
        assert record.recovery_action == "Handled by annihilated_frame"
        assert record.context == {"frame_index": 2, "block": True}
        assert seen == [2]
        assert quiet_handler.error_stats["recovered_errors"] == 1

    def test_failing_recovery_handler_is_not_recovery(self, quiet_handler):
        def broken(_error):
            raise RuntimeError("handler bug")

        quiet_handler.register_recovery_handler(StqftException, broken)
        assert not quiet_handler.handle_error(AllZeroFrameException("zero"))
        assert quiet_handler.error_stats["fatal_errors"] == 0

    def test_records_are_classified(self, quiet_handler):
        quiet_handler.handle_error(OSError("disk"))
        record = quiet_handler.error_history[-1]
        assert record.category == ErrorCategory.FILE_IO
        assert record.severity == ErrorSeverity.MEDIUM

    def test_scoped_recovery_handler_is_removed(self, quiet_handler):
        error = ZeroProbabilityOutcomeException("empty branch")
        with quiet_handler.recovering(ZeroProbabilityOutcomeException, lambda _: True):
            assert quiet_handler.handle_error(error)
        assert ZeroProbabilityOutcomeException not in quiet_handler.recovery_handlers
        assert not quiet_handler.handle_error(error)

    def test_scoped_recovery_handler_restores_previous(self, quiet_handler):
        def keep(_error):
            return True

        quiet_handler.register_recovery_handler(StqftException, keep)
        with pytest.raises(RuntimeError):
            with quiet_handler.recovering(StqftException, lambda _: False):
                raise RuntimeError("run failed")
        assert quiet_handler.recovery_handlers[StqftException] is keep

    def test_logging_handler_still_returns(self):
        handler = ErrorHandler(enable_logging=True)
        assert not handler.handle_error(MalformedFileException("bad"))
