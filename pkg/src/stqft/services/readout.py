"""
Readout strategies.

A readout turns the final simulated state of a circuit into a real vector of
amplitudes that the scale ledger then maps back to sample values:
- Exact: read the amplitudes directly (simulator privilege, the default)
- Sampled: measure the register a finite number of times and estimate each
  amplitude as sqrt(count / shots); only valid for non-negative outputs
"""

from abc import ABC, abstractmethod
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from stqft.config.logger_config import get_logger
from stqft.core.error_handler import InvalidShotsException
from stqft.models.quantum_state import QuantumState
from stqft.simulator.statevector import exact_readout, sample_readout

logger = get_logger(__name__)

FloatArray = npt.NDArray[np.float64]


class ReadoutStrategy(ABC):
    """Abstract base class for readout strategies."""

    @property
    @abstractmethod
    def name(self) -> str:
        """
        Get readout mode name.

        Returns:
            One of: "exact", "sampled"
        """

    @property
    def signed(self) -> bool:
        """Whether negative amplitudes survive the readout."""
        return True

    @abstractmethod
    def read(self, state: QuantumState, key: Sequence[int] = ()) -> FloatArray:
        """
        Read a state out as real amplitudes.

        Args:
            state: Final circuit state
            key: Stable identifier of the circuit run (frame index, stage),
                used to derive per-run random streams

        Returns:
            Real amplitude estimates, one per basis index
        """


class ExactReadout(ReadoutStrategy):
    """Direct amplitude access."""

    @property
    def name(self) -> str:
        return "exact"

    def read(self, state: QuantumState, key: Sequence[int] = ()) -> FloatArray:
        return np.real(exact_readout(state)).astype(np.float64)


class SampledReadout(ReadoutStrategy):
    """
    Finite-shot measurement of the whole register.

    The random stream of each run is seeded with [seed, *key], so results do
    not depend on the order in which a worker pool executes frames.
    """

    def __init__(self, shots: int, seed: int = 0):
        """
        Initialize a sampled readout.

        Args:
            shots: Measurements per circuit run (>= 1)
            seed: Base seed of the run
        """
        if shots < 1:
            raise InvalidShotsException(f"Shots must be >= 1, got {shots}")
        self.shots = shots
        self.seed = seed

    @property
    def name(self) -> str:
        return "sampled"

    @property
    def signed(self) -> bool:
        return False

    def read(self, state: QuantumState, key: Sequence[int] = ()) -> FloatArray:
        counts = sample_readout(state, self.shots, [self.seed, *key])
        logger.debug(f"Sampled run {tuple(key)} with {self.shots} shots")
        return np.sqrt(counts / self.shots)

    def __repr__(self) -> str:
        """String representation of SampledReadout."""
        return f"SampledReadout(shots={self.shots}, seed={self.seed})"


def create_readout(mode: str, shots: int = 1_000_000, seed: int = 0) -> ReadoutStrategy:
    """
    Factory for readout strategies.

    Args:
        mode: "exact" or "sampled"
        shots: Shots for sampled mode
        seed: Base seed for sampled mode

    Raises:
        ValueError: For an unknown mode
    """
    if mode == "exact":
        return ExactReadout()
    if mode == "sampled":
        return SampledReadout(shots=shots, seed=seed)
    raise ValueError(f"Unknown readout mode: {mode}")
