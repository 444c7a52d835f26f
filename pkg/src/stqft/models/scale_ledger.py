"""
Scale ledger model.

Amplitude encoding, the QFT and postselection each rescale the data; the
ledger keeps every factor so a quantum readout can be mapped back to
classical sample values.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Any


@dataclass(frozen=True)
class ScaleLedger:
    """Multiplicative bookkeeping for one processed frame."""

    frame_norm: float = 1.0
    filter_norm: float = 1.0
    qft_factor: float = 1.0
    success_probs: tuple[float, ...] = field(default_factory=tuple)
    subnormalization: float = 1.0
    dc_offset: float = 0.0

    def __post_init__(self) -> None:
        """Validate ranges."""
        if self.frame_norm < 0 or self.filter_norm < 0:
            raise ValueError("Norms must be non-negative")
        if self.subnormalization < 1.0:
            raise ValueError(
                f"Subnormalization must be >= 1, got {self.subnormalization}"
            )
        for probability in self.success_probs:
            if not 0.0 < probability <= 1.0 + 1e-12:
                raise ValueError(
                    f"Success probabilities must be in (0, 1], got {probability}"
                )

    def with_filter(self, filter_norm: float, num_qubits: int) -> "ScaleLedger":
        """Record the filter norm and the 2^(n/2) QFT factor."""
        return replace(
            self, filter_norm=filter_norm, qft_factor=math.sqrt(2.0**num_qubits)
        )

    def with_probability(self, probability: float) -> "ScaleLedger":
        """Append a postselection success probability."""
        return replace(self, success_probs=(*self.success_probs, probability))

    def with_subnormalization(self, alpha: float) -> "ScaleLedger":
        """Record a block-encoding subnormalization."""
        return replace(self, subnormalization=alpha)

    def with_dc_offset(self, offset: float) -> "ScaleLedger":
        """Record the constant added to the signal before encoding."""
        return replace(self, dc_offset=offset)

    def rescale_factor(self) -> float:
        """
        Product that turns readout amplitudes into classical samples.

        The DC offset is not part of the product; it is removed by a separate
        correction term.
        """
        factor = (
            self.frame_norm * self.filter_norm * self.qft_factor * self.subnormalization
        )
        for probability in self.success_probs:
            factor *= math.sqrt(probability)
        return factor

    def to_dict(self) -> dict[str, Any]:
        """Convert ledger to dictionary."""
        return {
            "frame_norm": self.frame_norm,
            "filter_norm": self.filter_norm,
            "qft_factor": self.qft_factor,
            "success_probs": list(self.success_probs),
            "subnormalization": self.subnormalization,
            "dc_offset": self.dc_offset,
            "rescale_factor": self.rescale_factor(),
        }
