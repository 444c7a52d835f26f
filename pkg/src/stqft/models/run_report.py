"""
Run report model.

One FrameRecord per processed frame plus an aggregate; serialized as JSON
lines by the report manager.
"""

from dataclasses import dataclass, field
from typing import Any


@dataclass
class FrameRecord:
    """What happened to a single frame (or overlap-save block)."""

    frame_index: int
    is_zero: bool
    num_qubits: int | None = None
    conv_probability: float | None = None
    qola_probabilities: list[float] = field(default_factory=list)
    ledger: dict[str, Any] = field(default_factory=dict)
    recovered: str | None = None

    def to_dict(self) -> dict[str, Any]:
        """Convert to a report record."""
        return {
            "type": "frame",
            "frame_index": self.frame_index,
            "is_zero": self.is_zero,
            "num_qubits": self.num_qubits,
            "conv_probability": self.conv_probability,
            "qola_probabilities": list(self.qola_probabilities),
            "ledger": dict(self.ledger),
            "recovered": self.recovered,
        }


@dataclass
class RunReport:
    """Per-frame entries and run-level aggregates."""

    config: dict[str, Any] = field(default_factory=dict)
    frames: list[FrameRecord] = field(default_factory=list)
    max_abs_error: float | None = None
    fable_reconstruction_error: float | None = None
    output_length: int = 0

    @property
    def total_frames(self) -> int:
        """Number of frame entries."""
        return len(self.frames)

    @property
    def skipped_zero_frames(self) -> int:
        """Frames that bypassed the quantum path."""
        return sum(1 for record in self.frames if record.is_zero)

    def record_for(self, frame_index: int) -> FrameRecord:
        """Look up the entry for a frame ordinal."""
        for record in self.frames:
            if record.frame_index == frame_index:
                return record
        raise KeyError(f"No report entry for frame {frame_index}")

    def aggregate(self) -> dict[str, Any]:
        """The final aggregate record."""
        return {
            "type": "aggregate",
            "total_frames": self.total_frames,
            "skipped_zero_frames": self.skipped_zero_frames,
            "max_abs_error": self.max_abs_error,
            "fable_reconstruction_error": self.fable_reconstruction_error,
            "output_length": self.output_length,
        }

    def records(self) -> list[dict[str, Any]]:
        """Config record, frame records in ordinal order, then the aggregate."""
        ordered = sorted(self.frames, key=lambda record: record.frame_index)
        return [
            {"type": "config", **self.config},
            *(record.to_dict() for record in ordered),
            self.aggregate(),
        ]
