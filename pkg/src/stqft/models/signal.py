"""
Signal model for samples read from, and written to, disk.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from stqft.core.error_handler import EmptySignalException, MalformedFileException


@dataclass(frozen=True, eq=False)
class Signal:
    """Real samples with an optional sample rate (metadata only)."""

    samples: npt.NDArray[np.float64]
    sample_rate: int | None = None

    def __post_init__(self) -> None:
        """Reject non-finite values and freeze the buffer."""
        samples = np.array(self.samples, dtype=np.float64, copy=True).reshape(-1)
        if samples.size == 0:
            raise EmptySignalException("Signal has no samples")
        if not np.all(np.isfinite(samples)):
            raise MalformedFileException("Signal contains NaN or infinite values")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        """Number of samples."""
        return int(self.samples.shape[0])
