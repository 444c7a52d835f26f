"""
Signal file I/O.

Formats are picked by extension:
- ``.csv``: one float per line
- ``.wav``: 16-bit PCM mono; samples map to [-1, 1) by dividing by 32768
"""

from pathlib import Path

import numpy as np
import numpy.typing as npt
from scipy.io import wavfile

from stqft.config.logger_config import get_logger
from stqft.core.error_handler import (
    MalformedFileException,
    MultichannelUnsupportedException,
    SignalFileException,
    UnsupportedFormatException,
)
from stqft.models.signal import Signal

logger = get_logger(__name__)

PCM_SCALE = 32768.0
DEFAULT_SAMPLE_RATE = 8000
SUPPORTED_SUFFIXES = (".csv", ".wav")


def _suffix(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix not in SUPPORTED_SUFFIXES:
        raise UnsupportedFormatException(
            f"Unsupported signal format '{suffix or path}' "
            f"(expected one of {', '.join(SUPPORTED_SUFFIXES)})"
        )
    return suffix


def _read_csv(path: Path) -> Signal:
    try:
        samples = np.loadtxt(path, dtype=np.float64, ndmin=1)
    except ValueError as e:
        raise MalformedFileException(f"{path}: {e}") from e
    if samples.ndim != 1:
        raise MalformedFileException(f"{path}: expected one value per line")
    return Signal(samples=samples)


def _read_wav(path: Path) -> Signal:
    try:
        rate, data = wavfile.read(path)
    except ValueError as e:
        raise MalformedFileException(f"{path}: {e}") from e
    if data.ndim != 1:
        raise MultichannelUnsupportedException(
            f"{path}: {data.shape[1]} channels, only mono is supported"
        )
    if data.dtype != np.int16:
        raise UnsupportedFormatException(
            f"{path}: {data.dtype} samples, only 16-bit PCM is supported"
        )
    return Signal(samples=data.astype(np.float64) / PCM_SCALE, sample_rate=rate)


def read_signal(path: str | Path) -> Signal:
    """
    Read a CSV or WAV signal.

    Raises:
        UnsupportedFormatException: For other extensions or non-16-bit WAV
        MalformedFileException: For unparsable content
        MultichannelUnsupportedException: For stereo WAV files
        SignalFileException: If the file cannot be opened
    """
    suffix = _suffix(path)
    path = Path(path)
    try:
        signal = _read_csv(path) if suffix == ".csv" else _read_wav(path)
    except OSError as e:
        raise SignalFileException(f"Cannot read {path}: {e}") from e
    logger.info(f"Read {len(signal)} samples from {path}")
    return signal


def read_filter(path: str | Path) -> npt.NDArray[np.float64]:
    """Read filter taps from a CSV file."""
    if Path(path).suffix.lower() != ".csv":
        raise UnsupportedFormatException(f"Filter files must be CSV, got {path}")
    return read_signal(path).samples


def write_signal(
    path: str | Path, samples: npt.ArrayLike, sample_rate: int | None = None
) -> None:
    """
    Write samples as CSV (repr precision) or 16-bit PCM WAV.

    WAV samples are clamped to [-1, 32767/32768] before scaling.
    """
    suffix = _suffix(path)
    path = Path(path)
    values = np.asarray(samples, dtype=np.float64).reshape(-1)
    try:
        if suffix == ".csv":
            with path.open("w", encoding="utf-8") as handle:
                handle.writelines(f"{value!r}\n" for value in values.tolist())
        else:
            clamped = np.clip(values, -1.0, (PCM_SCALE - 1.0) / PCM_SCALE)
            pcm = np.round(clamped * PCM_SCALE).astype(np.int16)
            wavfile.write(path, sample_rate or DEFAULT_SAMPLE_RATE, pcm)
    except OSError as e:
        raise SignalFileException(f"Cannot write {path}: {e}") from e
    logger.info(f"Wrote {values.size} samples to {path}")
