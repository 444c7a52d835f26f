"""
Error handling for the stqft simulator and pipeline.

This module provides:
- Custom exception types for every failure the simulator, the DSP layer and
  the CLI can raise
- A handler that records, logs and classifies errors
- The mapping from error categories to CLI exit codes
"""

import traceback
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from stqft.config.logger_config import get_logger

# Create logger for this module
logger = get_logger(__name__)


class ErrorSeverity(Enum):
    """Error severity levels."""

    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class ErrorCategory(Enum):
    """Error categories for classification."""

    CONFIGURATION = "configuration"
    FILE_IO = "file_io"
    SIMULATION = "simulation"
    SIGNAL_PROCESSING = "signal_processing"
    BLOCK_ENCODING = "block_encoding"
    RECONSTRUCTION = "reconstruction"
    UNKNOWN = "unknown"


# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_IO_ERROR = 2
EXIT_PIPELINE_ERROR = 3


class StqftException(Exception):
    """Base exception for all stqft errors."""

    category = ErrorCategory.UNKNOWN
    severity = ErrorSeverity.MEDIUM

    def __init__(
        self,
        message: str,
        context: dict[str, Any] | None = None,
    ) -> None:
        """
        Initialize stqft exception.

        Args:
            message: Error message
            context: Additional context information (frame index, qubits, ...)
        """
        self.context = context or {}
        frame_index = self.context.get("frame_index")
        if frame_index is not None:
            message = f"frame {frame_index}: {message}"
        super().__init__(message)
        self.message = message


# --- configuration -------------------------------------------------------


class ConfigurationException(StqftException):
    """Raised when pipeline parameters are inconsistent."""

    category = ErrorCategory.CONFIGURATION
    severity = ErrorSeverity.HIGH


# --- file I/O ------------------------------------------------------------


class SignalFileException(StqftException):
    """Base class for signal and filter file problems."""

    category = ErrorCategory.FILE_IO
    severity = ErrorSeverity.HIGH


class UnsupportedFormatException(SignalFileException):
    """Raised for file extensions or WAV encodings the CLI cannot handle."""


class MalformedFileException(SignalFileException):
    """Raised when a signal or filter file cannot be parsed."""


class MultichannelUnsupportedException(SignalFileException):
    """Raised when a WAV file carries more than one channel."""


# --- simulator -----------------------------------------------------------


class SimulationException(StqftException):
    """Base class for state-vector simulator errors."""

    category = ErrorCategory.SIMULATION
    severity = ErrorSeverity.HIGH


class InvalidQubitIndexException(SimulationException):
    """Raised when a qubit index is out of range or repeated."""


class IndexOverlapException(SimulationException):
    """Raised when control and target qubit sets intersect."""


class NotUnitaryException(SimulationException):
    """Raised when a gate matrix fails the unitarity check."""


class DimensionMismatchException(SimulationException):
    """Raised when a matrix does not fit the qubits it is applied to."""


class InvalidStateException(SimulationException):
    """Raised when amplitudes do not form a valid normalized state."""


class InvalidShotsException(SimulationException):
    """Raised when a sampled readout asks for fewer than one shot."""


class ZeroProbabilityOutcomeException(SimulationException):
    """Raised when a postselection branch is empty."""

    severity = ErrorSeverity.MEDIUM


# --- framing, filters and oracles ---------------------------------------


class SignalProcessingException(StqftException):
    """Base class for framing, filter and classical oracle errors."""

    category = ErrorCategory.SIGNAL_PROCESSING
    severity = ErrorSeverity.HIGH


class EmptySignalException(SignalProcessingException):
    """Raised when a signal has no samples."""


class EmptyInputException(SignalProcessingException):
    """Raised when an oracle receives an empty vector."""


class AllZeroFrameException(SignalProcessingException):
    """Raised when an all-zero frame is handed to amplitude encoding."""

    severity = ErrorSeverity.LOW


class AllZeroFilterException(SignalProcessingException):
    """Raised when every filter tap is zero."""


class InsufficientOffsetException(SignalProcessingException):
    """Raised when a DC offset does not make the signal non-negative."""


class BlockTooSmallException(SignalProcessingException):
    """Raised when a circular convolution block is shorter than its inputs."""


class FilterLongerThanBlockException(SignalProcessingException):
    """Raised when overlap-save blocks cannot hold the filter."""


class InvalidFramingException(SignalProcessingException):
    """Raised for window lengths or hops outside their valid range."""


# --- block encodings -----------------------------------------------------


class BlockEncodingException(StqftException):
    """Base class for block-encoding construction errors."""

    category = ErrorCategory.BLOCK_ENCODING
    severity = ErrorSeverity.HIGH


class EntryMagnitudeExceedsOneException(BlockEncodingException):
    """Raised when a diagonal entry cannot sit inside a unitary."""


class GateListFormatException(BlockEncodingException):
    """Raised when a serialized gate list or encoding cannot be parsed."""

    category = ErrorCategory.FILE_IO


# --- reconstruction ------------------------------------------------------


class ReconstructionException(StqftException):
    """Base class for overlap-add and overlap-save errors."""

    category = ErrorCategory.RECONSTRUCTION
    severity = ErrorSeverity.HIGH


class InvalidOverlapException(ReconstructionException):
    """Raised when the overlap length is outside 0 <= l < r."""


class OverlapTooLargeException(ReconstructionException):
    """Raised when a frame tail would spill past the next frame."""


class AllZeroPairException(ReconstructionException):
    """Raised when both frames of a QOLA pair are all-zero."""

    severity = ErrorSeverity.LOW


@dataclass
class ErrorRecord:
    """Record of an error occurrence."""

    exception: BaseException
    category: ErrorCategory
    severity: ErrorSeverity
    message: str
    traceback_str: str
    context: dict[str, Any] = field(default_factory=dict)
    recovered: bool = False
    recovery_action: str | None = None


class ErrorHandler:
    """Records, logs and classifies errors raised while running the pipeline."""

    def __init__(self, enable_logging: bool = True) -> None:
        """
        Initialize error handler.

        Args:
            enable_logging: Whether to log handled errors
        """
        self.enable_logging = enable_logging

        # Error tracking
        self.error_history: list[ErrorRecord] = []
        self.error_counts: dict[str, int] = {}
        self.error_stats: dict[str, int] = {
            "total_errors": 0,
            "recovered_errors": 0,
            "fatal_errors": 0,
        }

        # Recovery handlers
        self.recovery_handlers: dict[
            type[BaseException], Callable[[BaseException], bool]
        ] = {}

    def register_recovery_handler(
        self,
        exception_type: type[BaseException],
        handler: Callable[[BaseException], bool],
    ) -> None:
        """
        Register a recovery handler for an exception type.

        Args:
            exception_type: Type of exception to handle
            handler: Recovery function that returns True if recovery successful
        """
        self.recovery_handlers[exception_type] = handler

    @contextmanager
    def recovering(
        self,
        exception_type: type[BaseException],
        handler: Callable[[BaseException], bool],
    ) -> Iterator[None]:
        """
        Register a recovery handler for the duration of a block only.

        Whatever handler was registered for the type before is restored on
        exit, also when the block raises.
        """
        previous = self.recovery_handlers.get(exception_type)
        self.register_recovery_handler(exception_type, handler)
        try:
            yield
        finally:
            if previous is None:
                self.recovery_handlers.pop(exception_type, None)
            else:
                self.recovery_handlers[exception_type] = previous

    def handle_error(
        self,
        exception: BaseException,
        context: dict[str, Any] | None = None,
    ) -> bool:
        """
        Handle an error with recovery attempt.

        Args:
            exception: The exception that occurred
            context: Additional context information

        Returns:
            True if error was recovered, False otherwise
        """
        category = self.categorize(exception)
        severity = self._determine_severity(exception)

        merged_context = dict(getattr(exception, "context", {}) or {})
        merged_context.update(context or {})

        error_record = ErrorRecord(
            exception=exception,
            category=category,
            severity=severity,
            message=str(exception),
            traceback_str="".join(
                traceback.format_exception(
                    type(exception), exception, exception.__traceback__
                )
            ),
            context=merged_context,
        )

        self._log_error(error_record)

        recovered = self._attempt_recovery(error_record)
        error_record.recovered = recovered

        if recovered:
            self.error_stats["recovered_errors"] += 1
        elif severity in (ErrorSeverity.HIGH, ErrorSeverity.CRITICAL):
            self.error_stats["fatal_errors"] += 1

        self.error_stats["total_errors"] += 1
        error_key = f"{category.value}.{type(exception).__name__}"
        self.error_counts[error_key] = self.error_counts.get(error_key, 0) + 1

        self.error_history.append(error_record)

        # Limit history size
        if len(self.error_history) > 1000:
            self.error_history = self.error_history[-500:]

        return recovered

    def categorize(self, exception: BaseException) -> ErrorCategory:
        """Categorize an exception."""
        if isinstance(exception, StqftException):
            return exception.category
        if isinstance(exception, (FileNotFoundError, PermissionError)):
            return ErrorCategory.FILE_IO
        if isinstance(exception, OSError):
            return ErrorCategory.FILE_IO
        return ErrorCategory.UNKNOWN

    def exit_code_for(self, exception: BaseException) -> int:
        """
        Map an exception to the CLI exit code.

        Returns:
            1 for configuration errors, 2 for I/O errors, 3 otherwise
        """
        category = self.categorize(exception)
        if category == ErrorCategory.CONFIGURATION:
            return EXIT_CONFIG_ERROR
        if category == ErrorCategory.FILE_IO:
            return EXIT_IO_ERROR
        return EXIT_PIPELINE_ERROR

    def _determine_severity(self, exception: BaseException) -> ErrorSeverity:
        """Determine severity of an exception."""
        if isinstance(exception, StqftException):
            return exception.severity
        if isinstance(exception, (KeyboardInterrupt, SystemExit)):
            return ErrorSeverity.CRITICAL
        if isinstance(exception, (MemoryError, RecursionError)):
            return ErrorSeverity.CRITICAL
        return ErrorSeverity.MEDIUM

    def _attempt_recovery(self, error_record: ErrorRecord) -> bool:
        """
        Attempt to recover from an error.

        Args:
            error_record: Error record

        Returns:
            True if recovery successful, False otherwise
        """
        exception = error_record.exception

        for exc_type, handler in self.recovery_handlers.items():
            if isinstance(exception, exc_type):
                try:
                    if handler(exception):
                        error_record.recovery_action = (
                            f"Handled by {getattr(handler, '__name__', 'handler')}"
                        )
                        return True
                except Exception as e:
                    logger.error(f"Recovery handler failed: {e}")

        return False

    def _log_error(self, error_record: ErrorRecord) -> None:
        """Log an error."""
        if not self.enable_logging:
            return

        log_message = (
            f"[{error_record.category.value}] "
            f"[{error_record.severity.value}] "
            f"{error_record.message}"
        )

        if error_record.context:
            log_message += f" | context: {error_record.context}"

        if error_record.severity in (ErrorSeverity.HIGH, ErrorSeverity.CRITICAL):
            logger.error(log_message)
            logger.debug(f"Traceback:\n{error_record.traceback_str}")
        else:
            logger.warning(log_message)


# Global error handler instance
_global_error_handler: ErrorHandler | None = None


def get_error_handler() -> ErrorHandler:
    """Get the global error handler instance."""
    global _global_error_handler
    if _global_error_handler is None:
        _global_error_handler = ErrorHandler()
    return _global_error_handler

