"""
Frame models for short-time processing.

A Frame is one rectangular window of the input signal, an EncodedFrame is the
same window amplitude-encoded into a register, and a FrameStream is the
ordered collection of windows together with the metadata reconstruction needs.
"""

from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from stqft.models.quantum_state import QuantumState
from stqft.models.scale_ledger import ScaleLedger

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class Frame:
    """One rectangular window of a signal."""

    samples: FloatArray
    index: int
    window_length: int
    valid_length: int = -1
    is_zero: bool = field(init=False)

    def __post_init__(self) -> None:
        """Freeze samples, default valid_length and derive the zero tag."""
        samples = np.array(self.samples, dtype=np.float64, copy=True)
        if samples.shape != (self.window_length,):
            raise ValueError(
                f"Frame {self.index} holds {samples.shape[0]} samples, "
                f"expected {self.window_length}"
            )
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if self.valid_length < 0:
            object.__setattr__(self, "valid_length", self.window_length)
        object.__setattr__(self, "is_zero", not bool(np.any(samples)))

    def __repr__(self) -> str:
        """String representation of Frame."""
        return (
            f"Frame(index={self.index}, window_length={self.window_length}, "
            f"is_zero={self.is_zero})"
        )


@dataclass(frozen=True, eq=False)
class EncodedFrame:
    """A frame amplitude-encoded into n qubits, with its scale ledger."""

    state: QuantumState
    ledger: ScaleLedger
    index: int = 0

    @property
    def num_qubits(self) -> int:
        """Register width n."""
        return self.state.num_qubits

    @property
    def padded_length(self) -> int:
        """2^n, the padded frame length."""
        return self.state.dimension

    def decode(self) -> FloatArray:
        """Undo the normalization: amplitudes times the frame norm."""
        return np.real(self.state.amplitudes) * self.ledger.frame_norm


@dataclass(frozen=True)
class FrameStream:
    """Ordered windows of a signal plus reconstruction metadata."""

    frames: tuple[Frame, ...]
    hop: int
    window_length: int
    signal_length: int

    def __iter__(self) -> Iterator[Frame]:
        """Iterate frames in ordinal order."""
        return iter(self.frames)

    def __len__(self) -> int:
        """Number of frames."""
        return len(self.frames)

    def __getitem__(self, index: int) -> Frame:
        """Frame by ordinal."""
        return self.frames[index]

    @property
    def zero_count(self) -> int:
        """Number of all-zero frames that bypass the quantum path."""
        return sum(1 for frame in self.frames if frame.is_zero)

    def nonzero_frames(self) -> list[Frame]:
        """Frames that need quantum processing."""
        return [frame for frame in self.frames if not frame.is_zero]

    def output_length(self, filter_length: int) -> int:
        """Length of the full linear convolution of the signal with a filter."""
        return self.signal_length + filter_length - 1
