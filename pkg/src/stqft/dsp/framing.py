"""
Framing and amplitude encoding of long signals.

Signals are cut into rectangular windows, each window is zero-padded so the
linear convolution with the filter fits (2^n >= w_l + f_l - 1), normalized and
loaded into an n-qubit register. All-zero windows cannot be amplitude-encoded;
they are tagged and bypass the quantum path.
"""

from dataclasses import replace

import numpy as np
import numpy.typing as npt

from stqft.config.logger_config import get_logger
from stqft.core.error_handler import (
    AllZeroFrameException,
    EmptySignalException,
    InsufficientOffsetException,
    InvalidFramingException,
)
from stqft.dsp.oracle import direct_convolution
from stqft.models.frame import EncodedFrame, Frame, FrameStream
from stqft.models.quantum_state import QuantumState
from stqft.models.scale_ledger import ScaleLedger

logger = get_logger(__name__)

FloatArray = npt.NDArray[np.float64]


def next_power_of_two(value: int) -> int:
    """Smallest power of two >= value (and >= 2, the smallest register)."""
    if value < 1:
        raise InvalidFramingException(f"Length must be positive, got {value}")
    return max(2, 1 << (value - 1).bit_length())


def padded_length(window_length: int, filter_length: int) -> int:
    """2^n for a window of w_l samples convolved with f_l taps."""
    return next_power_of_two(window_length + filter_length - 1)


def frame_signal(signal: npt.ArrayLike, window_length: int, hop: int) -> FrameStream:
    """
    Cut a signal into rectangular windows at offsets k * hop.

    Args:
        signal: Real samples
        window_length: w_l, samples per window
        hop: Distance between window starts, 1 <= hop <= w_l

    Returns:
        FrameStream; the final partial window is zero-padded to w_l

    Raises:
        EmptySignalException: If the signal has no samples
        InvalidFramingException: If w_l or hop are out of range
    """
    samples = np.asarray(signal, dtype=np.float64).reshape(-1)
    if samples.size == 0:
        raise EmptySignalException("Cannot frame an empty signal")
    if window_length < 1:
        raise InvalidFramingException(
            f"Window length must be >= 1, got {window_length}"
        )
    if not 1 <= hop <= window_length:
        raise InvalidFramingException(
            f"Hop must be between 1 and the window length {window_length}, got {hop}"
        )

    frames = []
    start = 0
    index = 0
    while True:
        chunk = samples[start : start + window_length]
        window = np.zeros(window_length)
        window[: chunk.size] = chunk
        frames.append(
            Frame(
                samples=window,
                index=index,
                window_length=window_length,
                valid_length=int(chunk.size),
            )
        )
        if start + window_length >= samples.size:
            break
        start += hop
        index += 1

    stream = FrameStream(
        frames=tuple(frames),
        hop=hop,
        window_length=window_length,
        signal_length=int(samples.size),
    )
    logger.info(
        f"Framed {samples.size} samples into {len(stream)} windows "
        f"(w_l={window_length}, hop={hop}, zero frames={stream.zero_count})"
    )
    return stream


def exclusive_frames(stream: FrameStream) -> FrameStream:
    """
    Zero the leading w_l - hop samples of every frame after the first.

    Each input sample then sits in exactly one frame, so adding the filtered
    frames at their hop offsets gives the linear convolution of the whole
    signal. With hop == w_l the stream is returned unchanged.
    """
    overlap = stream.window_length - stream.hop
    if overlap == 0:
        return stream

    frames = [stream.frames[0]]
    for frame in stream.frames[1:]:
        window = frame.samples.copy()
        window[:overlap] = 0.0
        frames.append(
            Frame(
                samples=window,
                index=frame.index,
                window_length=frame.window_length,
                valid_length=frame.valid_length,
            )
        )
    return replace(stream, frames=tuple(frames))


def pad_and_encode(frame: Frame, filter_length: int) -> EncodedFrame:
    """
    Zero-pad a frame to 2^n >= w_l + f_l - 1 and amplitude-encode it.

    Args:
        frame: A non-zero frame
        filter_length: f_l of the filter the frame will be convolved with

    Returns:
        EncodedFrame whose ledger records the frame norm

    Raises:
        AllZeroFrameException: If the frame is all-zero (classical bypass)
    """
    if frame.is_zero:
        raise AllZeroFrameException(
            "All-zero frame cannot be amplitude-encoded",
            context={"frame_index": frame.index},
        )
    if filter_length < 1:
        raise InvalidFramingException(
            f"Filter length must be >= 1, got {filter_length}"
        )

    size = padded_length(frame.window_length, filter_length)
    padded = np.zeros(size)
    padded[: frame.window_length] = frame.samples
    norm = float(np.linalg.norm(padded))

    state = QuantumState.from_amplitudes(padded / norm)
    logger.debug(
        f"Encoded frame {frame.index} into {state.num_qubits} qubits "
        f"(norm {norm:.6g})"
    )
    return EncodedFrame(
        state=state, ledger=ScaleLedger(frame_norm=norm), index=frame.index
    )


def apply_dc_offset(signal: npt.ArrayLike, offset: float) -> FloatArray:
    """
    Shift a signal up by a constant so every sample is non-negative.

    Raises:
        InsufficientOffsetException: If offset < max(0, -min(signal))
    """
    samples = np.asarray(signal, dtype=np.float64).reshape(-1)
    if samples.size == 0:
        raise EmptySignalException("Cannot offset an empty signal")
    required = max(0.0, -float(np.min(samples)))
    if offset < required:
        raise InsufficientOffsetException(
            f"DC offset {offset} is below the required {required}"
        )
    return samples + offset


def dc_correction(offset: float, window_length: int, taps: npt.ArrayLike) -> FloatArray:
    """
    Contribution of a constant offset to a filtered window.

    conv(x + c, h) = conv(x, h) + conv(c * 1_{w_l}, h), so subtracting this
    vector from a filtered offset window recovers the filtered original.

    Returns:
        Vector of length w_l + f_l - 1
    """
    return direct_convolution(np.full(window_length, float(offset)), taps)


def overlap_add_frames(stream: FrameStream) -> FloatArray:
    """
    Lay unprocessed frames back at their hop offsets (first writer wins).

    With hop == w_l this is plain concatenation; with overlapping windows each
    output sample is taken from the earliest frame that covers it. The result
    has the original signal length.
    """
    output = np.zeros(stream.signal_length)
    covered = np.zeros(stream.signal_length, dtype=bool)
    for frame in stream:
        start = frame.index * stream.hop
        stop = start + frame.valid_length
        fresh = ~covered[start:stop]
        output[start:stop][fresh] = frame.samples[: frame.valid_length][fresh]
        covered[start:stop] = True
    return output
